#pragma once

#include "qi/gaussian_state.hpp"
#include "qi/probe_optimality.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace qi::fock {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Thrown when a truncated-space computation cannot meet its trace-deficit
/// budget; carries the smallest cutoff expected to work (0 when the request
/// is infeasible at desk scale).
class CutoffError : public std::runtime_error {
 public:
  CutoffError(const std::string& what, int suggested)
      : std::runtime_error(what), suggested_cutoff(suggested) {}
  int suggested_cutoff;
};

enum class OperatorKind { State, Unitary, Generic };

/// Dense operator on a truncated multi-mode Fock space. Basis index ordering
/// is mode-major: |n_0, n_1, ...> maps to n_0 * d_1 * d_2 * ... + n_1 * ...
class FockOperator {
 public:
  FockOperator(std::vector<int> mode_dims, CMat data, OperatorKind kind);

  const std::vector<int>& mode_dims() const { return mode_dims_; }
  const CMat& data() const { return data_; }
  OperatorKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(data_.rows()); }
  int n_modes() const { return static_cast<int>(mode_dims_.size()); }

  /// 1 - Re tr, meaningful for states (truncation mass lost above cutoffs).
  double trace_deficit() const;

 private:
  std::vector<int> mode_dims_;
  CMat data_;
  OperatorKind kind_;
};

// ---- cutoff selection ----

/// Smallest cutoff putting the trace deficit of the named state below tol.
int suggest_cutoff_thermal(double mean_photons, double deficit_tol);
int suggest_cutoff_tmsv(double photons_per_mode, double deficit_tol);
int suggest_cutoff_coherent(std::complex<double> alpha, double deficit_tol);

// ---- elementary operators and state constructors ----

/// Annihilation operator: a|n> = sqrt(n) |n-1>.
CMat lowering_operator(int cutoff);
CMat number_operator(int cutoff);
CMat kron(const CMat& a, const CMat& b);

/// Truncated coherent state |alpha><alpha| without renormalization; throws
/// CutoffError when the trace deficit exceeds deficit_tol.
FockOperator fock_coherent(std::complex<double> alpha, int cutoff,
                           double deficit_tol = 1e-8);

/// Truncated thermal state, diagonal N^k/(N+1)^(k+1).
FockOperator fock_thermal(double mean_photons, int cutoff, double deficit_tol = 1e-8);

/// Truncated two-mode squeezed vacuum (1-z^2) sum z^(j+k) |jj><kk| with
/// z = sqrt(E/(E+1)).
FockOperator fock_tmsv(double photons_per_mode, int cutoff, double deficit_tol = 1e-8);

/// Two-mode beam splitter exp(theta (a† b - a b†)) with cos(theta) = sqrt(eta),
/// exponentiated on the truncated space (exactly unitary there).
FockOperator beam_splitter(double eta, int cutoff);
FockOperator beam_splitter(double eta, int cutoff_a, int cutoff_b);

// ---- generic operator algebra ----

FockOperator tensor_fock(const FockOperator& a, const FockOperator& b);
FockOperator partial_trace_fock(const FockOperator& rho, const std::vector<int>& keep);

/// Total mean photon number sum_m <n_m>.
double mean_photons_fock(const FockOperator& rho);
double mode_photons_fock(const FockOperator& rho, int mode);

/// Quadrature mean vector and covariance matrix of a Fock-space state in the
/// Gaussian module's convention (vacuum covariance = identity).
void gaussian_moments_fock(const FockOperator& rho, Vec& mean, Mat& cov);

/// Pads one mode's cutoff with zero amplitude on the new levels.
FockOperator embed_mode(const FockOperator& rho, int mode, int new_cutoff);

// ---- the attenuator dilation ----

/// Thermal attenuator on a single-mode state, realized by the Stinespring
/// dilation: embed rho ⊗ tmsv(env_photons), rotate (A,E) by the beam
/// splitter, trace out the environment pair. The output trace deficit is
/// reported by the returned state, not re-converged.
FockOperator apply_attenuator_fock(const FockOperator& rho, double eta,
                                   double env_photons, int env_cutoff);

/// Same dilation, keeping the environment pair (E, E') and tracing out the
/// signal output.
FockOperator apply_complementary_fock(const FockOperator& rho, double eta,
                                      double env_photons, int env_cutoff);

/// Kraus operators of the attenuator contracted out of the same dilation
/// unitary (indexed by the traced environment pair).
std::vector<CMat> attenuator_kraus(double eta, double env_photons, int signal_cutoff,
                                   int env_cutoff);

/// Kraus operators of the complementary channel (signal cutoff -> environment
/// pair), indexed by the traced signal output level.
std::vector<CMat> complementary_kraus(double eta, double env_photons,
                                      int signal_cutoff, int env_cutoff);

/// Attenuator acting on mode 0 of a multi-mode state via the dilation-derived
/// Kraus set; remaining modes pass through.
FockOperator apply_attenuator_fock_mode0(const FockOperator& rho, double eta,
                                         double env_photons, int env_cutoff);

// ---- spectral functionals ----

/// Spectral entropy; eigenvalues below 1e-14 count as exact zeros.
double entropy_fock(const FockOperator& rho);

/// S(rho||sigma) = tr[rho(ln rho - ln sigma)]; +infinity if rho has mass
/// outside sigma's support.
double relative_entropy_fock(const FockOperator& rho, const FockOperator& sigma);

// ---- random states ----

/// Random normalized PSD matrix (Ginibre G G†) with the Fock amplitudes
/// geometrically damped so the state's mean photon number equals target.
FockOperator random_state_with_energy(const std::vector<int>& mode_dims,
                                      double target_photons, std::uint64_t seed);

/// Mixture of `rank` Haar-random pure vectors with the energy carried by
/// `mode` rescaled to target_photons (amplitude damping plus bisection).
FockOperator random_low_rank_state(const std::vector<int>& mode_dims, int rank,
                                   int mode, double target_photons,
                                   std::uint64_t seed);

// ---- verification and cross-checks ----

/// Randomized check of the complementary-channel identity
/// S(comp(rho) || comp(sigma)) = S(comp(sigma)) - S(comp(rho)) with sigma the
/// thermal state matching rho's mean photon number. Deviation measures
/// truncation only.
VerificationReport verify_lemma1(std::uint64_t seed, int samples, double eta,
                                 double env_photons, int cutoff,
                                 double tolerance = 1e-5);

struct CrosscheckRecord {
  std::string quantity;
  double gaussian_value = 0.0;
  double fock_value = 0.0;
  double gap = 0.0;
  std::vector<int> cutoffs;
  double output_trace_deficit = 0.0;
};

/// Computes one quantity both through the Gaussian formulas and through the
/// Fock-space brute force. Quantities: "entropy" (thermal state at E),
/// "conditional_entropy", "exponent_with_memory" (two-mode-squeezed probe),
/// "exponent_no_memory" (coherent probe).
CrosscheckRecord gaussian_crosscheck(const std::string& quantity,
                                     const IlluminationParams& p);

}  // namespace qi::fock
