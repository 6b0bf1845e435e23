#include "qi/gaussian_channel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>

namespace qi {

namespace {

double cp_min_eigenvalue(const Mat& x, const Mat& y, int n_in, int n_out) {
  const std::complex<double> im(0.0, 1.0);
  Eigen::MatrixXcd m =
      y.cast<std::complex<double>>() +
      im * symplectic_form(n_out).cast<std::complex<double>>() -
      im * (x * symplectic_form(n_in) * x.transpose()).cast<std::complex<double>>();
  m = ((m + m.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("GaussianChannel: CP eigensolve failed");
  }
  return es.eigenvalues().minCoeff();
}

}  // namespace

GaussianChannel::GaussianChannel(Mat x, Mat y, Vec d0)
    : x_(std::move(x)), y_(std::move(y)), d0_(std::move(d0)) {
  if (x_.rows() < 2 || x_.rows() % 2 != 0 || x_.cols() < 2 || x_.cols() % 2 != 0) {
    throw std::invalid_argument("GaussianChannel: X must be 2n_out x 2n_in");
  }
  if (y_.rows() != x_.rows() || y_.cols() != x_.rows()) {
    throw std::invalid_argument("GaussianChannel: Y dimension mismatch");
  }
  if (d0_.size() != x_.rows()) {
    throw std::invalid_argument("GaussianChannel: d0 dimension mismatch");
  }
  if (!x_.allFinite() || !y_.allFinite() || !d0_.allFinite()) {
    throw std::invalid_argument("GaussianChannel: non-finite entry");
  }
  const double scale = std::max(1.0, y_.cwiseAbs().maxCoeff());
  if ((y_ - y_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("GaussianChannel: Y not symmetric");
  }
  y_ = ((y_ + y_.transpose()) / 2.0).eval();
  n_in_ = static_cast<int>(x_.cols() / 2);
  n_out_ = static_cast<int>(x_.rows() / 2);
  if (cp_min_eigenvalue(x_, y_, n_in_, n_out_) < -1e-9) {
    throw std::invalid_argument("GaussianChannel: not completely positive");
  }
}

GaussianChannel attenuator(int n_modes, double eta, double env_photons) {
  if (n_modes < 1) throw std::invalid_argument("attenuator: n_modes < 1");
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("attenuator: eta must lie in (0,1]");
  }
  if (!(env_photons >= 0.0)) {
    throw std::invalid_argument("attenuator: negative environment photon number");
  }
  const int d = 2 * n_modes;
  return GaussianChannel(std::sqrt(eta) * Mat::Identity(d, d),
                         (1.0 - eta) * (2.0 * env_photons + 1.0) * Mat::Identity(d, d),
                         Vec::Zero(d));
}

GaussianChannel constant_thermal_channel(int n_modes, double env_photons) {
  if (n_modes < 1) throw std::invalid_argument("constant_thermal_channel: n_modes < 1");
  if (!(env_photons >= 0.0)) {
    throw std::invalid_argument("constant_thermal_channel: negative environment photon number");
  }
  const int d = 2 * n_modes;
  return GaussianChannel(Mat::Zero(d, d),
                         (2.0 * env_photons + 1.0) * Mat::Identity(d, d),
                         Vec::Zero(d));
}

GaussianChannel complementary_attenuator(int n_modes, double eta, double env_photons) {
  if (n_modes < 1) throw std::invalid_argument("complementary_attenuator: n_modes < 1");
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("complementary_attenuator: eta must lie in (0,1]");
  }
  if (!(env_photons >= 0.0)) {
    throw std::invalid_argument("complementary_attenuator: negative environment photon number");
  }
  // Beam-splitter convention e_out = sqrt(eta) e - sqrt(1-eta) a; the
  // environment pair (E,E') starts in a two-mode squeezed state purifying
  // thermal(env_photons). Output ordering per input mode: (E_i, E'_i).
  const double cb = 2.0 * env_photons + 1.0;
  const double sb = 2.0 * std::sqrt(env_photons * (env_photons + 1.0));
  Mat x = Mat::Zero(4 * n_modes, 2 * n_modes);
  Mat y = Mat::Zero(4 * n_modes, 4 * n_modes);
  const Mat sz = (Mat(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();
  for (int i = 0; i < n_modes; ++i) {
    x.block<2, 2>(4 * i, 2 * i) = -std::sqrt(1.0 - eta) * Mat::Identity(2, 2);
    y.block<2, 2>(4 * i, 4 * i) = eta * cb * Mat::Identity(2, 2);
    y.block<2, 2>(4 * i, 4 * i + 2) = std::sqrt(eta) * sb * sz;
    y.block<2, 2>(4 * i + 2, 4 * i) = std::sqrt(eta) * sb * sz;
    y.block<2, 2>(4 * i + 2, 4 * i + 2) = cb * Mat::Identity(2, 2);
  }
  return GaussianChannel(std::move(x), std::move(y), Vec::Zero(4 * n_modes));
}

GaussianChannel additive_noise(int n_modes, double added_photons_per_mode) {
  if (n_modes < 1) throw std::invalid_argument("additive_noise: n_modes < 1");
  if (!(added_photons_per_mode >= 0.0)) {
    throw std::invalid_argument("additive_noise: negative added photon number");
  }
  const int d = 2 * n_modes;
  return GaussianChannel(Mat::Identity(d, d),
                         2.0 * added_photons_per_mode * Mat::Identity(d, d),
                         Vec::Zero(d));
}

GaussianState apply(const GaussianChannel& c, const GaussianState& s) {
  if (s.n_modes() != c.n_in()) {
    throw std::invalid_argument("apply: state mode count does not match channel input");
  }
  Mat cov = c.x() * s.cov() * c.x().transpose() + c.y();
  cov = ((cov + cov.transpose()) / 2.0).eval();
  Vec mean = c.x() * s.mean() + c.d0();
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState apply_on_subsystem(const GaussianChannel& c, const GaussianState& s,
                                 const std::vector<int>& target_modes) {
  if (c.n_in() != c.n_out()) {
    throw std::invalid_argument(
        "apply_on_subsystem: channel must preserve its mode count");
  }
  if (static_cast<int>(target_modes.size()) != c.n_in()) {
    throw std::invalid_argument("apply_on_subsystem: target list must match channel input");
  }
  const int n = s.n_modes();
  std::vector<bool> targeted(static_cast<std::size_t>(n), false);
  for (int m : target_modes) {
    if (m < 0 || m >= n) {
      throw std::invalid_argument("apply_on_subsystem: target mode out of range");
    }
    if (targeted[static_cast<std::size_t>(m)]) {
      throw std::invalid_argument("apply_on_subsystem: duplicate target mode");
    }
    targeted[static_cast<std::size_t>(m)] = true;
  }
  Mat x = Mat::Zero(2 * n, 2 * n);
  Mat y = Mat::Zero(2 * n, 2 * n);
  Vec d0 = Vec::Zero(2 * n);
  for (int u = 0; u < n; ++u) {
    if (!targeted[static_cast<std::size_t>(u)]) {
      x.block<2, 2>(2 * u, 2 * u) = Mat::Identity(2, 2);
    }
  }
  const int k = c.n_in();
  for (int i = 0; i < k; ++i) {
    const int ti = target_modes[static_cast<std::size_t>(i)];
    d0.segment<2>(2 * ti) = c.d0().segment<2>(2 * i);
    for (int j = 0; j < k; ++j) {
      const int tj = target_modes[static_cast<std::size_t>(j)];
      x.block<2, 2>(2 * ti, 2 * tj) = c.x().block<2, 2>(2 * i, 2 * j);
      y.block<2, 2>(2 * ti, 2 * tj) = c.y().block<2, 2>(2 * i, 2 * j);
    }
  }
  return apply(GaussianChannel(std::move(x), std::move(y), std::move(d0)), s);
}

GaussianChannel compose(const GaussianChannel& outer, const GaussianChannel& inner) {
  if (inner.n_out() != outer.n_in()) {
    throw std::invalid_argument("compose: inner output does not match outer input");
  }
  Mat x = outer.x() * inner.x();
  Mat y = outer.x() * inner.y() * outer.x().transpose() + outer.y();
  y = ((y + y.transpose()) / 2.0).eval();
  Vec d0 = outer.x() * inner.d0() + outer.d0();
  return GaussianChannel(std::move(x), std::move(y), std::move(d0));
}

bool is_completely_positive(const GaussianChannel& c, double tol) {
  return cp_min_eigenvalue(c.x(), c.y(), c.n_in(), c.n_out()) >= -tol;
}

}  // namespace qi
