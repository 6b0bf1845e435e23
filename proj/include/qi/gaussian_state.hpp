#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qi {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Thrown when an operation needs a physical covariance matrix and the input
/// fails the uncertainty check min_eig(cov + i*Omega) >= -tol.
class PhysicalityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symplectic form for n modes in (x1,p1,...,xn,pn) ordering:
/// Omega = blkdiag([[0,1],[-1,0]], ...).
Mat symplectic_form(int n_modes);

/// Gaussian state of n bosonic modes, stored as the quadrature mean vector
/// (length 2n) and covariance matrix (2n x 2n, vacuum = identity).
/// Immutable after construction; the constructor rejects non-finite entries
/// and asymmetric covariances, then symmetrizes exactly.
class GaussianState {
 public:
  GaussianState(Vec mean, Mat cov);

  int n_modes() const { return n_modes_; }
  const Vec& mean() const { return mean_; }
  const Mat& cov() const { return cov_; }

 private:
  int n_modes_;
  Vec mean_;
  Mat cov_;
};

/// Symplectic eigenvalues of a covariance matrix, one per mode, sorted
/// descending and clipped below at 1.
struct SymplecticSpectrum {
  Vec values;
};

/// n-mode thermal state with the given mean photon number per mode.
GaussianState make_thermal(int n_modes, double photons_per_mode);

/// Product of single-mode coherent states |alpha_i>; mean quadratures
/// (sqrt(2) Re a_i, sqrt(2) Im a_i), covariance = identity.
GaussianState make_coherent(const std::vector<std::complex<double>>& amplitudes);

/// Two-mode squeezed vacuum with the given mean photon number per mode.
/// cov = [[c I, s sz],[s sz, c I]], c = 2E+1, s = 2 sqrt(E(E+1)), sz = diag(1,-1).
GaussianState make_tmsv(double photons_per_mode);

/// Tensor product; modes of a come first.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Marginal on the listed modes (distinct, in-range); kept in list order.
GaussianState partial_trace(const GaussianState& s, const std::vector<int>& keep);

/// Moduli of the eigenvalues of i*Omega*cov, one per mode, clipped to >= 1.
/// Throws PhysicalityError if the state fails is_physical at 1e-9.
SymplecticSpectrum symplectic_eigenvalues(const GaussianState& s);

/// Total mean photon number: (tr cov - 2n)/4 + |mean|^2/2.
double mean_photons(const GaussianState& s);

/// mean_photons(s) / n_modes.
double mean_photons_per_mode(const GaussianState& s);

/// Mean photon number carried by a subset of modes.
double mean_photons_of_modes(const GaussianState& s, const std::vector<int>& modes);

/// min_eig(cov + i*Omega) >= -tol.
bool is_physical(const GaussianState& s, double tol = 1e-9);

/// Random pure Gaussian state on 2*n_signal modes (signal modes first, idler
/// modes second) whose signal marginal has exactly `photons_per_mode` mean
/// photons per mode. Deterministic for a fixed seed.
GaussianState random_pure_probe(int n_signal, double photons_per_mode,
                                std::uint64_t seed);

/// Random pure Gaussian state on n_total modes with the marginal on
/// signal_modes carrying exactly photons_per_mode * |signal_modes| photons.
/// Built as K1 * Z(s*r) * K2 acting on the vacuum plus a displacement s*d,
/// with the global scale s bisected to hit the signal energy.
GaussianState random_pure_state(int n_total, const std::vector<int>& signal_modes,
                                double photons_per_mode, std::uint64_t seed);

}  // namespace qi
