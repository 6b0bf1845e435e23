#include "qi/entropic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qi {

namespace {

std::vector<int> complement_modes(int n_modes, const std::vector<int>& subset) {
  std::vector<bool> in(static_cast<std::size_t>(n_modes), false);
  for (int m : subset) in[static_cast<std::size_t>(m)] = true;
  std::vector<int> rest;
  for (int m = 0; m < n_modes; ++m) {
    if (!in[static_cast<std::size_t>(m)]) rest.push_back(m);
  }
  return rest;
}

void check_subset(const std::vector<int>& modes, int n_modes, const char* who) {
  if (modes.empty()) throw std::invalid_argument(std::string(who) + ": empty mode list");
  std::vector<bool> seen(static_cast<std::size_t>(n_modes), false);
  for (int m : modes) {
    if (m < 0 || m >= n_modes) {
      throw std::invalid_argument(std::string(who) + ": mode index out of range");
    }
    if (seen[static_cast<std::size_t>(m)]) {
      throw std::invalid_argument(std::string(who) + ": duplicate mode index");
    }
    seen[static_cast<std::size_t>(m)] = true;
  }
}

void check_channel_params(double eta, double env_photons, const char* who) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument(std::string(who) + ": eta must lie in (0,1)");
  }
  if (!(env_photons > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": environment photon number must be positive");
  }
}

}  // namespace

double thermal_entropy(double mean_photons) {
  if (!(mean_photons >= 0.0)) {
    throw std::invalid_argument("thermal_entropy: negative mean photon number");
  }
  if (mean_photons == 0.0) return 0.0;
  return (mean_photons + 1.0) * std::log1p(mean_photons) -
         mean_photons * std::log(mean_photons);
}

double entropy(const GaussianState& s) {
  const SymplecticSpectrum spec = symplectic_eigenvalues(s);
  double total = 0.0;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    const double nu = spec.values(i);
    if (nu <= 1.0 + 1e-10) continue;  // near-pure mode
    total += thermal_entropy((nu - 1.0) / 2.0);
  }
  return total;
}

double conditional_entropy(const GaussianState& s, const std::vector<int>& subsystem_b) {
  check_subset(subsystem_b, s.n_modes(), "conditional_entropy");
  const std::vector<int> rest = complement_modes(s.n_modes(), subsystem_b);
  if (rest.empty()) {
    throw std::invalid_argument("conditional_entropy: subsystem must be a proper subset");
  }
  return entropy(s) - entropy(partial_trace(s, rest));
}

ThermalReference thermal_reference(int n_modes, double photons_per_mode) {
  if (n_modes < 1) throw std::invalid_argument("thermal_reference: n_modes < 1");
  if (!(photons_per_mode >= 0.0)) {
    throw std::invalid_argument("thermal_reference: negative mean photon number");
  }
  ThermalReference ref;
  ref.n_modes = n_modes;
  ref.photons_per_mode = photons_per_mode;
  if (photons_per_mode == 0.0) {
    ref.a = std::numeric_limits<double>::infinity();
    ref.b = 0.0;
  } else {
    ref.a = std::log1p(1.0 / photons_per_mode);
    ref.b = std::log1p(photons_per_mode);
  }
  return ref;
}

double relative_entropy_vs_thermal(const GaussianState& s, const ThermalReference& ref) {
  if (s.n_modes() != ref.n_modes) {
    throw std::invalid_argument("relative_entropy_vs_thermal: mode count mismatch");
  }
  const double photons = mean_photons(s);
  if (ref.photons_per_mode == 0.0) {
    return (photons <= 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return -entropy(s) + ref.a * photons + ref.n_modes * ref.b;
}

double exponent_with_memory(const GaussianState& probe,
                            const std::vector<int>& signal_modes, double eta,
                            double env_photons) {
  check_channel_params(eta, env_photons, "exponent_with_memory");
  check_subset(signal_modes, probe.n_modes(), "exponent_with_memory");
  if (static_cast<int>(signal_modes.size()) == probe.n_modes()) {
    return exponent_no_memory(probe, eta, env_photons);
  }
  // No signal photons, no information about the target.
  if (mean_photons_of_modes(probe, signal_modes) <= 0.0) return 0.0;
  const int n_sig = static_cast<int>(signal_modes.size());
  const GaussianState joint =
      apply_on_subsystem(attenuator(n_sig, eta, env_photons), probe, signal_modes);
  const double cond = conditional_entropy(joint, signal_modes);
  const double out_photons = mean_photons_of_modes(joint, signal_modes);
  const ThermalReference ref = thermal_reference(n_sig, (1.0 - eta) * env_photons);
  return -cond + ref.a * out_photons + n_sig * ref.b;
}

double exponent_no_memory(const GaussianState& probe, double eta, double env_photons) {
  check_channel_params(eta, env_photons, "exponent_no_memory");
  if (mean_photons(probe) <= 0.0) return 0.0;
  const int n = probe.n_modes();
  const GaussianState out = apply(attenuator(n, eta, env_photons), probe);
  return relative_entropy_vs_thermal(out, thermal_reference(n, (1.0 - eta) * env_photons));
}

}  // namespace qi
