#pragma once

#include "qi/gaussian_channel.hpp"
#include "qi/gaussian_state.hpp"

namespace qi {

/// Entropy of a thermal state with the given mean photon number, in nats:
/// (N+1) ln(N+1) - N ln N, continuous at 0.
double thermal_entropy(double mean_photons);

/// Von Neumann entropy in nats, from the symplectic spectrum. Eigenvalues in
/// [1, 1+1e-10] contribute exactly zero.
double entropy(const GaussianState& s);

/// S(B|M) = S(BM) - S(M), where B is the listed proper subset of modes and M
/// is its complement. May be negative.
double conditional_entropy(const GaussianState& s, const std::vector<int>& subsystem_b);

/// Thermal reference omega with -ln(omega) = a H + b I per mode,
/// a = ln(1 + 1/N), b = ln(1 + N) in nats.
struct ThermalReference {
  int n_modes;
  double photons_per_mode;
  double a;
  double b;
};

ThermalReference thermal_reference(int n_modes, double photons_per_mode);

/// S(s || omega) = -S(s) + a * mean_photons(s) + n b for a thermal reference.
/// A vacuum reference (N = 0) gives 0 for the vacuum and +infinity otherwise.
double relative_entropy_vs_thermal(const GaussianState& s, const ThermalReference& ref);

/// Stein exponent with a quantum memory, total nats:
/// S(rho_BM || omega_B ⊗ rho_M) = -S(B|M) + a * mean_photons(rho_B) + n_sig * b
/// with the signal modes sent through attenuator(eta, env_photons) and the
/// reference at N = (1-eta) * env_photons. Zero signal energy gives exactly 0.
double exponent_with_memory(const GaussianState& probe,
                            const std::vector<int>& signal_modes, double eta,
                            double env_photons);

/// Memoryless Stein exponent, total nats: the probe is all signal.
double exponent_no_memory(const GaussianState& probe, double eta, double env_photons);

}  // namespace qi
