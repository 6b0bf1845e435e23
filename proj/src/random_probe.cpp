#include "qi/random_probe.hpp"

#include <Eigen/QR>

#include <cmath>
#include <functional>
#include <utility>

namespace qi {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct StateRecipe {
  Mat k1;          // left orthogonal-symplectic rotation
  Mat k2;          // right rotation (drops out for vacuum input)
  Vec squeeze;     // per-mode squeeze exponents, scaled by s
  Vec displace;    // displacement direction, scaled by s
  Mat base_cov;    // input covariance (identity or thermal diagonal)
};

std::pair<Mat, Vec> realize(const StateRecipe& r, double s) {
  const Mat sq = squeezer(s * r.squeeze);
  const Mat symp = r.k1 * sq * r.k2;
  Mat cov = symp * r.base_cov * symp.transpose();
  return {std::move(cov), s * r.displace};
}

double signal_energy(const Mat& cov, const Vec& mean, const std::vector<int>& sig) {
  double e = 0.0;
  for (int m : sig) {
    e += (cov(2 * m, 2 * m) + cov(2 * m + 1, 2 * m + 1) - 2.0) / 4.0;
    e += (mean(2 * m) * mean(2 * m) + mean(2 * m + 1) * mean(2 * m + 1)) / 2.0;
  }
  return e;
}

// Bisect the global scale s until the marginal on sig carries `target`
// photons; the energy sits below target at s = 0 and grows without bound,
// so a bracket always exists.
GaussianState solve_for_energy(const StateRecipe& recipe, const std::vector<int>& sig,
                               double target) {
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    auto [cov, mean] = realize(recipe, hi);
    if (signal_energy(cov, mean, sig) >= target) break;
    hi *= 2.0;
    if (i == 199) throw std::runtime_error("random probe: energy bracket not found");
  }
  double lo = 0.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    auto [cov, mean] = realize(recipe, mid);
    (signal_energy(cov, mean, sig) < target ? lo : hi) = mid;
  }
  auto [cov, mean] = realize(recipe, 0.5 * (lo + hi));
  return GaussianState(std::move(mean), std::move(cov));
}

StateRecipe draw_recipe(int n_total, std::mt19937_64& rng, const Mat& base_cov) {
  StateRecipe r;
  r.k1 = random_orthogonal_symplectic(n_total, rng);
  r.k2 = random_orthogonal_symplectic(n_total, rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  r.squeeze.resize(n_total);
  for (int i = 0; i < n_total; ++i) r.squeeze(i) = gauss(rng);
  r.displace.resize(2 * n_total);
  for (int i = 0; i < 2 * n_total; ++i) r.displace(i) = gauss(rng);
  r.base_cov = base_cov;
  return r;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed270b0f4a92c5ULL));
}

Mat random_orthogonal_symplectic(int n_modes, std::mt19937_64& rng) {
  if (n_modes < 1) {
    throw std::invalid_argument("random_orthogonal_symplectic: n_modes < 1");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd ginibre(n_modes, n_modes);
  for (int i = 0; i < n_modes; ++i) {
    for (int j = 0; j < n_modes; ++j) {
      ginibre(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n_modes; ++j) {
    const std::complex<double> rjj = rmat(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : 1.0;
  }
  Mat k(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < n_modes; ++i) {
    for (int j = 0; j < n_modes; ++j) {
      const double x = q(i, j).real();
      const double y = q(i, j).imag();
      k(2 * i, 2 * j) = x;
      k(2 * i, 2 * j + 1) = -y;
      k(2 * i + 1, 2 * j) = y;
      k(2 * i + 1, 2 * j + 1) = x;
    }
  }
  return k;
}

Mat squeezer(const Vec& exponents) {
  const int n = static_cast<int>(exponents.size());
  Mat z = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    z(2 * i, 2 * i) = std::exp(exponents(i));
    z(2 * i + 1, 2 * i + 1) = std::exp(-exponents(i));
  }
  return z;
}

GaussianState random_pure_state(int n_total, const std::vector<int>& signal_modes,
                                double photons_per_mode, std::uint64_t seed) {
  if (n_total < 1) throw std::invalid_argument("random_pure_state: n_total < 1");
  if (!(photons_per_mode >= 0.0)) {
    throw std::invalid_argument("random_pure_state: negative energy target");
  }
  if (signal_modes.empty()) {
    throw std::invalid_argument("random_pure_state: empty signal mode list");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n_total), false);
  for (int m : signal_modes) {
    if (m < 0 || m >= n_total) {
      throw std::invalid_argument("random_pure_state: signal mode out of range");
    }
    if (seen[static_cast<std::size_t>(m)]) {
      throw std::invalid_argument("random_pure_state: duplicate signal mode");
    }
    seen[static_cast<std::size_t>(m)] = true;
  }
  if (photons_per_mode == 0.0) {
    // Zero signal energy forces a vacuum signal; idler-local freedom dropped.
    return GaussianState(Vec::Zero(2 * n_total), Mat::Identity(2 * n_total, 2 * n_total));
  }
  std::mt19937_64 rng(seed);
  const StateRecipe recipe =
      draw_recipe(n_total, rng, Mat::Identity(2 * n_total, 2 * n_total));
  const double target = photons_per_mode * static_cast<double>(signal_modes.size());
  return solve_for_energy(recipe, signal_modes, target);
}

GaussianState random_pure_probe(int n_signal, double photons_per_mode,
                                std::uint64_t seed) {
  if (n_signal < 1) throw std::invalid_argument("random_pure_probe: n_signal < 1");
  std::vector<int> sig(static_cast<std::size_t>(n_signal));
  for (int i = 0; i < n_signal; ++i) sig[static_cast<std::size_t>(i)] = i;
  return random_pure_state(2 * n_signal, sig, photons_per_mode, seed);
}

GaussianState random_squeezed_thermal(int n_modes, double photons_per_mode,
                                      std::uint64_t seed) {
  if (n_modes < 1) throw std::invalid_argument("random_squeezed_thermal: n_modes < 1");
  if (!(photons_per_mode >= 0.0)) {
    throw std::invalid_argument("random_squeezed_thermal: negative energy target");
  }
  if (photons_per_mode == 0.0) {
    return make_thermal(n_modes, 0.0);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Mat base = Mat::Identity(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < n_modes; ++i) {
    // baseline thermal occupation below the cap so the bisection can reach it
    const double nth = 0.8 * photons_per_mode * unif(rng);
    base.block<2, 2>(2 * i, 2 * i) *= (2.0 * nth + 1.0);
  }
  const StateRecipe recipe = draw_recipe(n_modes, rng, base);
  std::vector<int> all(static_cast<std::size_t>(n_modes));
  for (int i = 0; i < n_modes; ++i) all[static_cast<std::size_t>(i)] = i;
  return solve_for_energy(recipe, all, photons_per_mode * n_modes);
}

}  // namespace qi
