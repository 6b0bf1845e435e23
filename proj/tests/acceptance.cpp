// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the library end to end at the pinned desk-scale parameters.

#include "qi/entropic.hpp"
#include "qi/fock_oracle.hpp"
#include "qi/probe_optimality.hpp"
#include "qi/random_probe.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace qi;

namespace {

int failures = 0;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int index, const std::string& name, bool passed, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", passed ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!passed) ++failures;
}

void run(int index, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(index, name, ok, detail);
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace

int main() {
  // 1. Gaussian formulas agree with the Fock oracle at (0.3, 0.2, 0.5).
  run(1, "oracle equivalence for both exponents", [] {
    Timer t;
    const IlluminationParams p{0.3, 0.2, 0.5, 1};
    const auto no_mem = fock::gaussian_crosscheck("exponent_no_memory", p);
    const auto with_mem = fock::gaussian_crosscheck("exponent_with_memory", p);
    const double elapsed = t.seconds();
    const bool ok =
        no_mem.gap < 1e-4 && with_mem.gap < 1e-4 && elapsed < 60.0;
    std::ostringstream d;
    d << "gap_no_mem=" << fmt(no_mem.gap) << ", gap_with_mem=" << fmt(with_mem.gap)
      << ", " << fmt(elapsed) << " s";
    return std::make_pair(ok, d.str());
  });

  // 2. Theorem 1: random Gaussian probes never beat the two-mode squeezed
  //    probe at (0.1, 0.3, 1).
  run(2, "theorem 1 sweep over random probes", [] {
    Timer t;
    const IlluminationParams p{0.1, 0.3, 1.0, 1};
    const auto pure = verify_theorem1(p, 1000, 101, 1e-9, ProbeMix::PureOnly);
    const auto mixed = verify_theorem1(p, 200, 202, 1e-9, ProbeMix::MixedOnly);
    const IlluminationParams p2{0.1, 0.3, 1.0, 2};
    const auto two = verify_theorem1(p2, 200, 303, 1e-9, ProbeMix::PureOnly);
    const double elapsed = t.seconds();
    const double worst =
        std::max({pure.max_violation, mixed.max_violation, two.max_violation});
    const bool ok = pure.passed && mixed.passed && two.passed && elapsed < 300.0;
    std::ostringstream d;
    d << "max_violation=" << fmt(worst) << ", " << fmt(elapsed) << " s";
    return std::make_pair(ok, d.str());
  });

  // 3. Theorem 2: memoryless probes never beat coherent ones; the coherent
  //    probe itself is the equality case.
  run(3, "theorem 2 sweep over memoryless probes", [] {
    const IlluminationParams p{0.1, 0.3, 1.0, 1};
    const auto r = verify_theorem2(p, 1000, 404, 1e-9);
    const double equality_gap = std::abs(
        exponent_no_memory(make_coherent({std::sqrt(p.signal_photons)}), p.eta,
                           p.env_photons) -
        coherent_exponent(p));
    const bool ok = r.passed && equality_gap <= 1e-12;
    std::ostringstream d;
    d << "max_violation=" << fmt(r.max_violation)
      << ", coherent_equality_gap=" << fmt(equality_gap);
    return std::make_pair(ok, d.str());
  });

  // 4. Theorem 3: conditional-entropy bound with energy at and below the cap.
  run(4, "theorem 3 conditional-entropy bound", [] {
    const IlluminationParams p{0.1, 0.3, 1.0, 1};
    const auto r = verify_theorem3(p, 1000, 505, 1e-9);
    // extremal probe: equality within 1e-10, with S(B|A') recomputed through
    // the complementary channel (pure global probe: S(B|A') = S(comp(A)) - S(A))
    const GaussianState sigma_out = apply_on_subsystem(
        attenuator(1, p.eta, p.env_photons), make_tmsv(p.signal_photons), {0});
    const double bound = conditional_entropy(sigma_out, {0});
    const GaussianState leaked =
        apply(complementary_attenuator(1, p.eta, p.env_photons),
              make_thermal(1, p.signal_photons));
    const double via_complement = entropy(leaked) - thermal_entropy(p.signal_photons);
    const double equality_gap = std::abs(via_complement - bound);
    const bool ok = r.passed && equality_gap <= 1e-10;
    std::ostringstream d;
    d << "max_violation=" << fmt(r.max_violation)
      << ", tmsv_equality_gap=" << fmt(equality_gap);
    return std::make_pair(ok, d.str());
  });

  // 5. Complementary-channel entropy identity on random Fock states.
  run(5, "complementary-channel identity", [] {
    Timer t;
    const auto r = fock::verify_lemma1(606, 50, 0.6, 0.3, 12, 1e-5);
    const double elapsed = t.seconds();
    const bool ok = r.passed && elapsed < 180.0;
    std::ostringstream d;
    d << "max_deviation=" << fmt(r.max_violation) << ", " << fmt(elapsed) << " s";
    return std::make_pair(ok, d.str());
  });

  // 6. The 6 dB advantage at (0.01, 0.01, 625), with the exact value pinned
  //    as a regression constant (cross-checked against the oracle at the
  //    reduced parameters of criterion 1 before freezing).
  run(6, "6 dB advantage reproduction", [] {
    // the exponent here is a ~1e-7 difference of O(1) entropies, so ~1e-7 dB
    // is the attainable regression precision
    const double adv = advantage_db({0.01, 0.01, 625.0, 1});
    const bool ok = adv >= 6.0 && std::abs(adv - 6.6829935109290375) <= 1e-6;
    std::ostringstream d;
    d << "advantage_db=" << fmt(adv);
    return std::make_pair(ok, d.str());
  });

  // 7. Coherent closed form over a 5x5x5 grid.
  run(7, "coherent closed-form regression", [] {
    double worst = 0.0;
    for (double eta : {0.05, 0.2, 0.45, 0.7, 0.95}) {
      for (double e : {0.01, 0.1, 0.4, 1.0, 2.5}) {
        for (double nb : {0.1, 0.5, 1.0, 5.0, 25.0}) {
          const double direct =
              exponent_no_memory(make_coherent({std::sqrt(e)}), eta, nb);
          const double closed = eta * e * std::log1p(1.0 / ((1.0 - eta) * nb));
          worst = std::max(worst, std::abs(direct - closed));
        }
      }
    }
    std::ostringstream d;
    d << "max_grid_gap=" << fmt(worst);
    return std::make_pair(worst < 1e-12, d.str());
  });

  // 8. Non-Gaussian probes on a small Fock space stay below the bound.
  run(8, "non-Gaussian probe spot check", [] {
    Timer t;
    const double eta = 0.2, nb = 0.4, energy = 0.3;
    const double bound = tmsv_exponent({eta, energy, nb, 1});
    const int out_cutoff = 16;
    const int env_cutoff = fock::suggest_cutoff_tmsv(nb, 1e-8);
    const fock::FockOperator reference = fock::fock_thermal((1.0 - eta) * nb, out_cutoff);
    double worst = -1e9;
    for (int i = 0; i < 100; ++i) {
      const std::uint64_t sub = derive_seed(707, static_cast<std::uint64_t>(i));
      const fock::FockOperator probe =
          fock::random_low_rank_state({4, 4}, 1 + i % 3, 0, energy, sub);
      const fock::FockOperator embedded = fock::embed_mode(probe, 0, out_cutoff);
      const fock::FockOperator joint =
          fock::apply_attenuator_fock_mode0(embedded, eta, nb, env_cutoff);
      const fock::FockOperator memory = fock::partial_trace_fock(joint, {1});
      const double value = fock::relative_entropy_fock(
          joint, fock::tensor_fock(reference, memory));
      worst = std::max(worst, value - bound);
    }
    const double elapsed = t.seconds();
    std::ostringstream d;
    d << "max_excess=" << fmt(worst) << ", " << fmt(elapsed) << " s";
    return std::make_pair(worst <= 1e-6, d.str());
  });

  // 9. Zero signal energy kills the exponent exactly, for every constructor.
  run(9, "zero-signal sanity", [] {
    const double eta = 0.3, nb = 1.0;
    bool ok = true;
    ok = ok && coherent_exponent({eta, 0.0, nb, 1}) == 0.0;
    ok = ok && tmsv_exponent({eta, 0.0, nb, 1}) == 0.0;
    ok = ok && exponent_no_memory(make_coherent({0.0}), eta, nb) == 0.0;
    ok = ok && exponent_no_memory(make_thermal(2, 0.0), eta, nb) == 0.0;
    ok = ok && exponent_with_memory(make_tmsv(0.0), {0}, eta, nb) == 0.0;
    ok = ok && exponent_with_memory(random_pure_probe(1, 0.0, 9), {0}, eta, nb) == 0.0;
    return std::make_pair(ok, std::string(ok ? "all exactly zero" : "nonzero exponent"));
  });

  // 10. The docs state the finite-n limitation explicitly.
  run(10, "finite-n limitation documented", [] {
    std::ifstream readme(std::string(QI_SOURCE_DIR) + "/README.md");
    std::stringstream buffer;
    buffer << readme.rdbuf();
    const std::string text = buffer.str();
    const bool ok =
        text.find("asymptotic error exponents only") != std::string::npos &&
        text.find("finite-") != std::string::npos;
    return std::make_pair(ok, std::string(ok ? "statement found in README.md"
                                             : "statement missing from README.md"));
  });

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
