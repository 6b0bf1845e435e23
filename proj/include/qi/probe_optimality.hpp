#pragma once

#include "qi/entropic.hpp"
#include "qi/gaussian_state.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>

namespace qi {

/// Scenario parameters: target reflectivity eta, signal photons per mode E,
/// environment photons per mode N_B, and the number of signal modes.
struct IlluminationParams {
  double eta = 0.1;
  double signal_photons = 0.3;
  double env_photons = 1.0;
  int n_signal = 1;

  // regime flags, informational only
  bool low_reflectivity() const { return eta <= 0.1; }
  bool bright_noise() const { return env_photons >= 10.0; }
  bool faint_probe() const { return signal_photons <= 0.1; }
};

/// Throws std::invalid_argument unless eta in (0,1), E >= 0, N_B > 0, n >= 1.
void validate(const IlluminationParams& p);

/// Memoryless coherent-probe exponent, total nats:
/// n * eta * E * ln(1 + 1/((1-eta) N_B)).
double coherent_exponent(const IlluminationParams& p);
double coherent_exponent_per_mode(const IlluminationParams& p);

/// Exponent of the n-fold two-mode-squeezed-vacuum probe with the signal
/// modes attenuated, total nats. The per-mode value is independent of n.
double tmsv_exponent(const IlluminationParams& p);
double tmsv_exponent_per_mode(const IlluminationParams& p);

/// 10 log10(tmsv/coherent); NaN when the coherent exponent vanishes.
double advantage_db(const IlluminationParams& p);

/// ceil(margin * N_B / (eta E)); +infinity when eta*E underflows to zero.
double modes_required(const IlluminationParams& p, double margin = 100.0);

/// Outcome of one randomized theorem (or lemma) check.
struct VerificationReport {
  std::string theorem_id;
  int samples = 0;
  double max_violation = 0.0;
  std::uint64_t worst_case_seed = 0;
  IlluminationParams params;
  double slack = 0.0;
  bool passed = false;  // max_violation <= slack
};

/// Probe families drawn by verify_theorem1/verify_theorem3.
enum class ProbeMix {
  PureAndMixed,  // mostly pure n+n probes with mixed n+3 probes interleaved
  PureOnly,
  MixedOnly,
};

/// Checks exponent_with_memory(probe) <= tmsv_exponent + slack over random
/// pure probes (signal energy exactly n*E) and random mixed probes with a
/// Gaussian purifying memory. Reproducible from (seed, params, samples).
VerificationReport verify_theorem1(const IlluminationParams& p, int samples,
                                   std::uint64_t seed, double slack = 1e-9,
                                   ProbeMix mix = ProbeMix::PureAndMixed);

/// Checks exponent_no_memory(probe) <= coherent_exponent + slack over random
/// memoryless squeezed displaced thermal probes at energy n*E; sample 0 is
/// the coherent probe itself and sample 1 the thermal probe.
VerificationReport verify_theorem2(const IlluminationParams& p, int samples,
                                   std::uint64_t seed, double slack = 1e-9);

/// Checks S(B|M)_rho >= S(B|A')_sigma - slack over random bipartite probes
/// with signal energy <= n*E, sampled both at and below the cap; sample 0 is
/// the extremal two-mode-squeezed probe.
VerificationReport verify_theorem3(const IlluminationParams& p, int samples,
                                   std::uint64_t seed, double slack = 1e-9,
                                   ProbeMix mix = ProbeMix::PureAndMixed);

/// Stable JSON shape used by the CLI and report files.
nlohmann::ordered_json to_json(const VerificationReport& report);

}  // namespace qi
