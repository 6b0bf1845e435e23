#include "qi/gaussian_state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace qi {

namespace {

void check_mode_subset(const std::vector<int>& modes, int n_modes,
                       const char* who) {
  if (modes.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty mode list");
  }
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

}  // namespace

Mat symplectic_form(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("symplectic_form: n_modes < 1");
  Mat omega = Mat::Zero(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < n_modes; ++i) {
    omega(2 * i, 2 * i + 1) = 1.0;
    omega(2 * i + 1, 2 * i) = -1.0;
  }
  return omega;
}

GaussianState::GaussianState(Vec mean, Mat cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (cov_.rows() != cov_.cols() || cov_.rows() < 2 || cov_.rows() % 2 != 0) {
    throw std::invalid_argument("GaussianState: covariance must be 2n x 2n");
  }
  if (mean_.size() != cov_.rows()) {
    throw std::invalid_argument("GaussianState: mean length must match covariance");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw std::invalid_argument("GaussianState: non-finite entry");
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw std::invalid_argument("GaussianState: covariance not symmetric");
  }
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
  n_modes_ = static_cast<int>(cov_.rows() / 2);
}

GaussianState make_thermal(int n_modes, double photons_per_mode) {
  if (n_modes < 1) throw std::invalid_argument("make_thermal: n_modes < 1");
  if (!(photons_per_mode >= 0.0)) {
    throw std::invalid_argument("make_thermal: negative mean photon number");
  }
  return GaussianState(Vec::Zero(2 * n_modes),
                       (2.0 * photons_per_mode + 1.0) *
                           Mat::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState make_coherent(const std::vector<std::complex<double>>& amplitudes) {
  const int n = static_cast<int>(amplitudes.size());
  if (n < 1) throw std::invalid_argument("make_coherent: no amplitudes");
  Vec mean(2 * n);
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(amplitudes[static_cast<std::size_t>(i)].real()) ||
        !std::isfinite(amplitudes[static_cast<std::size_t>(i)].imag())) {
      throw std::invalid_argument("make_coherent: non-finite amplitude");
    }
    mean(2 * i) = std::sqrt(2.0) * amplitudes[static_cast<std::size_t>(i)].real();
    mean(2 * i + 1) = std::sqrt(2.0) * amplitudes[static_cast<std::size_t>(i)].imag();
  }
  return GaussianState(std::move(mean), Mat::Identity(2 * n, 2 * n));
}

GaussianState make_tmsv(double photons_per_mode) {
  if (!(photons_per_mode >= 0.0)) {
    throw std::invalid_argument("make_tmsv: negative mean photon number");
  }
  const double c = 2.0 * photons_per_mode + 1.0;
  const double s = 2.0 * std::sqrt(photons_per_mode * (photons_per_mode + 1.0));
  Mat cov = Mat::Identity(4, 4) * c;
  cov(0, 2) = s;
  cov(2, 0) = s;
  cov(1, 3) = -s;
  cov(3, 1) = -s;
  return GaussianState(Vec::Zero(4), std::move(cov));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int da = 2 * a.n_modes();
  const int db = 2 * b.n_modes();
  Mat cov = Mat::Zero(da + db, da + db);
  cov.topLeftCorner(da, da) = a.cov();
  cov.bottomRightCorner(db, db) = b.cov();
  Vec mean(da + db);
  mean.head(da) = a.mean();
  mean.tail(db) = b.mean();
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState partial_trace(const GaussianState& s, const std::vector<int>& keep) {
  check_mode_subset(keep, s.n_modes(), "partial_trace");
  const int k = static_cast<int>(keep.size());
  Mat cov(2 * k, 2 * k);
  Vec mean(2 * k);
  for (int i = 0; i < k; ++i) {
    const int mi = keep[static_cast<std::size_t>(i)];
    mean(2 * i) = s.mean()(2 * mi);
    mean(2 * i + 1) = s.mean()(2 * mi + 1);
    for (int j = 0; j < k; ++j) {
      const int mj = keep[static_cast<std::size_t>(j)];
      cov.block<2, 2>(2 * i, 2 * j) = s.cov().block<2, 2>(2 * mi, 2 * mj);
    }
  }
  return GaussianState(std::move(mean), std::move(cov));
}

SymplecticSpectrum symplectic_eigenvalues(const GaussianState& s) {
  if (!is_physical(s, 1e-9)) {
    throw PhysicalityError("symplectic_eigenvalues: covariance violates the uncertainty relation");
  }
  const int n = s.n_modes();
  // Eigenvalues of Omega*cov come in +-(i nu) pairs; take moduli and average
  // each adjacent pair after sorting.
  Eigen::EigenSolver<Mat> es(symplectic_form(n) * s.cov(), false);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");
  }
  std::vector<double> mods(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < 2 * n; ++i) {
    mods[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
  }
  std::sort(mods.begin(), mods.end(), std::greater<double>());
  SymplecticSpectrum spec;
  spec.values.resize(n);
  for (int i = 0; i < n; ++i) {
    spec.values(i) = std::max(1.0, (mods[static_cast<std::size_t>(2 * i)] +
                                    mods[static_cast<std::size_t>(2 * i + 1)]) / 2.0);
  }
  return spec;
}

double mean_photons(const GaussianState& s) {
  return (s.cov().trace() - 2.0 * s.n_modes()) / 4.0 + s.mean().squaredNorm() / 2.0;
}

double mean_photons_per_mode(const GaussianState& s) {
  return mean_photons(s) / s.n_modes();
}

double mean_photons_of_modes(const GaussianState& s, const std::vector<int>& modes) {
  check_mode_subset(modes, s.n_modes(), "mean_photons_of_modes");
  double total = 0.0;
  for (int m : modes) {
    total += (s.cov()(2 * m, 2 * m) + s.cov()(2 * m + 1, 2 * m + 1) - 2.0) / 4.0;
    total += (s.mean()(2 * m) * s.mean()(2 * m) +
              s.mean()(2 * m + 1) * s.mean()(2 * m + 1)) / 2.0;
  }
  return total;
}

bool is_physical(const GaussianState& s, double tol) {
  const int n = s.n_modes();
  Eigen::MatrixXcd c =
      s.cov().cast<std::complex<double>>() +
      std::complex<double>(0.0, 1.0) * symplectic_form(n).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return false;
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace qi
