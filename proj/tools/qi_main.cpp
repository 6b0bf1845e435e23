// qi: Stein-exponent calculator and theorem verifier for Gaussian-probe
// quantum illumination. Subcommands: exponent, sweep, verify, oracle-check.

#include "qi/entropic.hpp"
#include "qi/fock_oracle.hpp"
#include "qi/gaussian_state.hpp"
#include "qi/parallel.hpp"
#include "qi/probe_optimality.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

// 12 significant digits, scientific; byte-stable across runs.
std::string sci(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", value);
  return buf;
}

struct ExponentFlags {
  double eta = 0.1;
  double energy = 0.3;
  double noise = 1.0;
  int modes = 1;
  std::string probe = "tmsv";
  bool total = false;
  std::string format = "json";
};

int run_exponent(const ExponentFlags& f) {
  qi::IlluminationParams p{f.eta, f.energy, f.noise, f.modes};
  qi::validate(p);
  double exponent = 0.0;
  double advantage = std::numeric_limits<double>::quiet_NaN();
  if (f.probe == "coherent") {
    exponent = f.total ? qi::coherent_exponent(p) : qi::coherent_exponent_per_mode(p);
  } else if (f.probe == "tmsv") {
    exponent = f.total ? qi::tmsv_exponent(p) : qi::tmsv_exponent_per_mode(p);
    advantage = qi::advantage_db(p);
  } else if (f.probe == "vacuum") {
    exponent = qi::exponent_no_memory(qi::make_thermal(f.modes, 0.0), f.eta, f.noise);
  } else {
    throw std::invalid_argument("exponent: unknown probe '" + f.probe + "'");
  }
  const double modes_needed = qi::modes_required(p);
  const std::string normalization = f.total ? "total" : "per_mode";
  if (f.format == "json") {
    nlohmann::ordered_json j;
    j["probe"] = f.probe;
    j["eta"] = f.eta;
    j["E"] = f.energy;
    j["N_B"] = f.noise;
    j["n_signal"] = f.modes;
    j["normalization"] = normalization;
    j["exponent_nats"] = exponent;
    if (f.probe == "tmsv") j["advantage_db"] = advantage;
    j["modes_required"] = modes_needed;
    std::cout << j.dump(2) << "\n";
  } else if (f.format == "csv") {
    std::cout << "# schema=1\n";
    std::cout << "probe,eta,E,N_B,n_signal,normalization,exponent_nats,advantage_db,"
                 "modes_required\n";
    std::cout << f.probe << ',' << sci(f.eta) << ',' << sci(f.energy) << ','
              << sci(f.noise) << ',' << f.modes << ',' << normalization << ','
              << sci(exponent) << ',' << sci(advantage) << ',' << sci(modes_needed)
              << "\n";
  } else {
    throw std::invalid_argument("exponent: unknown format '" + f.format + "'");
  }
  return kExitOk;
}

struct SweepFlags {
  std::string axis;
  std::vector<double> values;
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  std::string scale = "linear";
  double eta = 0.1;
  double energy = 0.3;
  double noise = 1.0;
  int modes = 1;
  bool total = false;
};

std::vector<double> build_axis_values(const SweepFlags& f) {
  if (!f.values.empty()) {
    if (f.count != 0) {
      throw std::invalid_argument("sweep: give either --values or --start/--stop/--count");
    }
    return f.values;
  }
  if (f.count < 1) throw std::invalid_argument("sweep: --count must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(f.count));
  if (f.count == 1) {
    out.push_back(f.start);
    return out;
  }
  if (f.scale == "linear") {
    for (int i = 0; i < f.count; ++i) {
      out.push_back(f.start + (f.stop - f.start) * i / (f.count - 1));
    }
  } else if (f.scale == "log") {
    if (!(f.start > 0.0 && f.stop > 0.0)) {
      throw std::invalid_argument("sweep: log scale needs positive endpoints");
    }
    const double ls = std::log(f.start);
    const double le = std::log(f.stop);
    for (int i = 0; i < f.count; ++i) {
      out.push_back(std::exp(ls + (le - ls) * i / (f.count - 1)));
    }
  } else {
    throw std::invalid_argument("sweep: unknown scale '" + f.scale + "'");
  }
  return out;
}

void check_strictly_monotone(const std::vector<double>& v) {
  if (v.size() < 2) return;
  const bool increasing = v[1] > v[0];
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (increasing ? (v[i] <= v[i - 1]) : (v[i] >= v[i - 1])) {
      throw std::invalid_argument("sweep: axis values must be strictly monotone");
    }
  }
}

int run_sweep(const SweepFlags& f) {
  const std::vector<double> axis_values = build_axis_values(f);
  if (axis_values.empty()) throw std::invalid_argument("sweep: empty value list");
  check_strictly_monotone(axis_values);
  struct Row {
    double eta, energy, noise, coherent, tmsv, advantage, modes_needed;
  };
  std::vector<Row> rows(axis_values.size());
  qi::parallel_for_index(static_cast<int>(axis_values.size()), [&](int i) {
    qi::IlluminationParams p{f.eta, f.energy, f.noise, f.modes};
    const double v = axis_values[static_cast<std::size_t>(i)];
    if (f.axis == "eta") {
      p.eta = v;
    } else if (f.axis == "E") {
      p.signal_photons = v;
    } else if (f.axis == "N_B") {
      p.env_photons = v;
    } else {
      throw std::invalid_argument("sweep: unknown axis '" + f.axis + "'");
    }
    qi::validate(p);
    Row r;
    r.eta = p.eta;
    r.energy = p.signal_photons;
    r.noise = p.env_photons;
    r.coherent = f.total ? qi::coherent_exponent(p) : qi::coherent_exponent_per_mode(p);
    r.tmsv = f.total ? qi::tmsv_exponent(p) : qi::tmsv_exponent_per_mode(p);
    r.advantage = qi::advantage_db(p);
    r.modes_needed = qi::modes_required(p);
    rows[static_cast<std::size_t>(i)] = r;
  });
  std::cout << "# schema=1\n";
  std::cout << "eta,E,N_B,exponent_coherent,exponent_tmsv,advantage_db,modes_required\n";
  for (const Row& r : rows) {
    std::cout << sci(r.eta) << ',' << sci(r.energy) << ',' << sci(r.noise) << ','
              << sci(r.coherent) << ',' << sci(r.tmsv) << ',' << sci(r.advantage)
              << ',' << sci(r.modes_needed) << "\n";
  }
  return kExitOk;
}

struct VerifyFlags {
  std::string theorem = "all";
  int samples = 1000;
  std::uint64_t seed = 20260808;
  double eta = 0.1;
  double energy = 0.3;
  double noise = 1.0;
  int modes = 1;
  double slack = 1e-9;
  bool slack_given = false;
  // lemma 1 runs at its own desk-scale parameters unless overridden
  bool eta_given = false;
  bool noise_given = false;
  int cutoff = 12;
  double lemma_tolerance = 1e-5;
};

int run_verify(const VerifyFlags& f) {
  double slack = f.slack;
  if (!f.slack_given) {
    if (const char* env = std::getenv("QI_DEFAULT_SLACK")) {
      char* end = nullptr;
      const double parsed = std::strtod(env, &end);
      if (end != env && parsed > 0.0) slack = parsed;
    }
  }
  qi::IlluminationParams p{f.eta, f.energy, f.noise, f.modes};
  std::vector<qi::VerificationReport> reports;
  const bool all = (f.theorem == "all");
  if (all || f.theorem == "1") {
    reports.push_back(qi::verify_theorem1(p, f.samples, f.seed, slack));
  }
  if (all || f.theorem == "2") {
    reports.push_back(qi::verify_theorem2(p, f.samples, f.seed, slack));
  }
  if (all || f.theorem == "3") {
    reports.push_back(qi::verify_theorem3(p, f.samples, f.seed, slack));
  }
  if (all || f.theorem == "lemma1") {
    const double lemma_eta = (!all && f.eta_given) ? f.eta : 0.6;
    const double lemma_noise = (!all && f.noise_given) ? f.noise : 0.3;
    reports.push_back(qi::fock::verify_lemma1(f.seed, f.samples, lemma_eta,
                                              lemma_noise, f.cutoff,
                                              f.lemma_tolerance));
  }
  if (reports.empty()) {
    throw std::invalid_argument("verify: unknown theorem '" + f.theorem + "'");
  }
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  bool all_passed = true;
  for (const qi::VerificationReport& r : reports) {
    out.push_back(qi::to_json(r));
    all_passed = all_passed && r.passed;
  }
  std::cout << out.dump(2) << "\n";
  return all_passed ? kExitOk : kExitVerificationFailed;
}

struct OracleFlags {
  std::string quantity = "exponent_with_memory";
  double eta = 0.3;
  double energy = 0.2;
  double noise = 0.5;
  double tolerance = 1e-4;
};

int run_oracle_check(const OracleFlags& f) {
  qi::IlluminationParams p{f.eta, f.energy, f.noise, 1};
  const qi::fock::CrosscheckRecord rec = qi::fock::gaussian_crosscheck(f.quantity, p);
  std::cout << "quantity: " << rec.quantity << "\n";
  std::cout << "gaussian: " << sci(rec.gaussian_value) << "\n";
  std::cout << "fock: " << sci(rec.fock_value) << "\n";
  std::cout << "gap: " << sci(rec.gap) << "\n";
  std::cout << "cutoffs:";
  for (std::size_t i = 0; i < rec.cutoffs.size(); ++i) {
    std::cout << (i == 0 ? " " : ",") << rec.cutoffs[i];
  }
  std::cout << "\n";
  std::cout << "output_trace_deficit: " << sci(rec.output_trace_deficit) << "\n";
  std::cout << "tolerance: " << sci(f.tolerance) << "\n";
  const bool ok = rec.gap <= f.tolerance;
  std::cout << "status: " << (ok ? "OK" : "FAIL") << "\n";
  return ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein exponents and optimal-probe checks for Gaussian quantum illumination"};
  app.require_subcommand(1);

  ExponentFlags ef;
  CLI::App* exponent = app.add_subcommand("exponent", "Exponent for one parameter point");
  exponent->add_option("--eta", ef.eta, "Target reflectivity, in (0,1)");
  exponent->add_option("--energy", ef.energy, "Signal photons per mode E");
  exponent->add_option("--noise", ef.noise, "Environment photons per mode N_B");
  exponent->add_option("--modes", ef.modes, "Signal mode count")->check(CLI::Range(1, 64));
  exponent->add_option("--probe", ef.probe, "coherent | tmsv | vacuum");
  exponent->add_flag("--total", ef.total, "Report total nats instead of nats per mode");
  auto* per_mode_flag =
      exponent->add_flag("--per-mode", "Report nats per signal mode (default)");
  (void)per_mode_flag;
  exponent->add_option("--format", ef.format, "json | csv");

  SweepFlags sf;
  CLI::App* sweep = app.add_subcommand("sweep", "CSV sweep along one parameter axis");
  sweep->add_option("--axis", sf.axis, "eta | E | N_B")->required();
  sweep->add_option("--values", sf.values, "Explicit axis values")->delimiter(',');
  sweep->add_option("--start", sf.start, "Axis start");
  sweep->add_option("--stop", sf.stop, "Axis stop");
  sweep->add_option("--count", sf.count, "Number of axis points");
  sweep->add_option("--scale", sf.scale, "linear | log");
  sweep->add_option("--eta", sf.eta, "Fixed eta");
  sweep->add_option("--energy", sf.energy, "Fixed E");
  sweep->add_option("--noise", sf.noise, "Fixed N_B");
  sweep->add_option("--modes", sf.modes, "Signal mode count")->check(CLI::Range(1, 64));
  sweep->add_flag("--total", sf.total, "Total nats instead of nats per mode");

  VerifyFlags vf;
  CLI::App* verify = app.add_subcommand("verify", "Randomized theorem/lemma checks");
  verify->add_option("--theorem", vf.theorem, "1 | 2 | 3 | lemma1 | all");
  verify->add_option("--samples", vf.samples, "Random probes per check");
  verify->add_option("--seed", vf.seed, "Base RNG seed");
  auto* veta = verify->add_option("--eta", vf.eta, "Target reflectivity");
  auto* vnoise = verify->add_option("--noise", vf.noise, "Environment photons per mode");
  verify->add_option("--energy", vf.energy, "Signal photons per mode");
  verify->add_option("--modes", vf.modes, "Signal mode count")->check(CLI::Range(1, 8));
  auto* vslack = verify->add_option(
      "--slack", vf.slack, "Theorem slack in nats (QI_DEFAULT_SLACK overrides default)");
  verify->add_option("--cutoff", vf.cutoff, "Fock cutoff for the lemma1 check");
  verify->add_option("--lemma-tolerance", vf.lemma_tolerance,
                     "Identity tolerance for the lemma1 check");

  OracleFlags of;
  CLI::App* oracle = app.add_subcommand("oracle-check",
                                        "Gaussian formula vs Fock brute force");
  oracle->add_option("--quantity", of.quantity,
                     "entropy | conditional_entropy | exponent_with_memory | "
                     "exponent_no_memory");
  oracle->add_option("--eta", of.eta, "Target reflectivity");
  oracle->add_option("--energy", of.energy, "Signal photons per mode");
  oracle->add_option("--noise", of.noise, "Environment photons per mode");
  oracle->add_option("--tolerance", of.tolerance, "Acceptable |gaussian - fock| gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(exponent)) return run_exponent(ef);
    if (app.got_subcommand(sweep)) return run_sweep(sf);
    if (app.got_subcommand(verify)) {
      vf.slack_given = vslack->count() > 0;
      vf.eta_given = veta->count() > 0;
      vf.noise_given = vnoise->count() > 0;
      return run_verify(vf);
    }
    if (app.got_subcommand(oracle)) return run_oracle_check(of);
  } catch (const qi::fock::CutoffError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    if (e.suggested_cutoff > 0) {
      std::cerr << "suggested cutoff: " << e.suggested_cutoff << "\n";
    } else {
      std::cerr << "try smaller --energy or --noise\n";
    }
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
