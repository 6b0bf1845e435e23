#include "qi/fock_oracle.hpp"

#include "qi/parallel.hpp"
#include "qi/random_probe.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace qi::fock {

namespace {

constexpr double kSpectralFloor = 1e-14;
constexpr double kInputDeficitTol = 1e-8;
// rho-mass allowed on reference eigenvalues at or below the spectral floor
// before the relative entropy is declared infinite; deep thermal tails in
// product references sit below the floor while carrying only ~1e-12 of mass
constexpr double kSupportMassTol = 1e-6;

int checked_dim_product(const std::vector<int>& dims) {
  if (dims.empty()) throw std::invalid_argument("FockOperator: no modes");
  long long prod = 1;
  for (int d : dims) {
    if (d < 2) throw std::invalid_argument("FockOperator: cutoff must be >= 2");
    prod *= d;
    if (prod > (1 << 24)) throw std::invalid_argument("FockOperator: dimension too large");
  }
  return static_cast<int>(prod);
}

// (A ⊗ I_rest) M (A ⊗ I_rest)† for a square A acting on the leading tensor
// slot; uses column-major reshapes so both passes run as GEMMs.
CMat conjugate_leading(const CMat& m, const CMat& a, int rest_dim) {
  const int front = static_cast<int>(a.rows());
  const int n = front * rest_dim;
  CMat t(n, n);
  {
    Eigen::Map<const CMat> mv(m.data(), rest_dim, static_cast<long>(front) * n);
    Eigen::Map<CMat> tv(t.data(), rest_dim, static_cast<long>(front) * n);
    const CMat at = a.transpose();
    for (int c = 0; c < n; ++c) {
      tv.middleCols(static_cast<long>(c) * front, front).noalias() =
          mv.middleCols(static_cast<long>(c) * front, front) * at;
    }
  }
  CMat w(n, n);
  {
    Eigen::Map<const CMat> tw(t.data(), static_cast<long>(rest_dim) * n, front);
    Eigen::Map<CMat> ww(w.data(), static_cast<long>(rest_dim) * n, front);
    ww.noalias() = tw * a.adjoint();
  }
  return w;
}

std::vector<double> env_schmidt_weights(double env_photons, int env_cutoff) {
  std::vector<double> c(static_cast<std::size_t>(env_cutoff), 0.0);
  if (env_photons <= 0.0) {
    c[0] = 1.0;
    return c;
  }
  const double z = std::sqrt(env_photons / (env_photons + 1.0));
  const double head = std::sqrt(1.0 - z * z);
  double zk = 1.0;
  for (int k = 0; k < env_cutoff; ++k) {
    c[static_cast<std::size_t>(k)] = head * zk;
    zk *= z;
  }
  return c;
}

void check_env_cutoff(double env_photons, int env_cutoff) {
  const int needed = suggest_cutoff_tmsv(env_photons, kInputDeficitTol);
  if (env_cutoff < needed) {
    throw CutoffError("environment cutoff too small for the requested noise", needed);
  }
}

Eigen::VectorXd state_eigenvalues(const FockOperator& rho) {
  CMat h = (rho.data() + rho.data().adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("fock: eigensolver failed");
  }
  return es.eigenvalues();
}

double basis_photons(int index, const std::vector<int>& dims, int mode) {
  int rem = index;
  for (int m = static_cast<int>(dims.size()) - 1; m >= 0; --m) {
    const int level = rem % dims[static_cast<std::size_t>(m)];
    rem /= dims[static_cast<std::size_t>(m)];
    if (m == mode) return static_cast<double>(level);
  }
  return 0.0;
}

double basis_total_photons(int index, const std::vector<int>& dims) {
  int rem = index;
  double total = 0.0;
  for (int m = static_cast<int>(dims.size()) - 1; m >= 0; --m) {
    total += static_cast<double>(rem % dims[static_cast<std::size_t>(m)]);
    rem /= dims[static_cast<std::size_t>(m)];
  }
  return total;
}

// Damps the Fock amplitudes of `raw` (kind Generic, unnormalized PSD) with
// diag(t^level) on the chosen energy functional and bisects t so the
// normalized state carries `target` photons there. The mean photon number is
// monotone increasing in t.
CMat damp_to_energy(const CMat& raw, const std::vector<int>& dims, int mode,
                    double target) {
  const int dim = static_cast<int>(raw.rows());
  Eigen::VectorXd level(dim);
  for (int i = 0; i < dim; ++i) {
    level(i) = (mode < 0) ? basis_total_photons(i, dims) : basis_photons(i, dims, mode);
  }
  const double max_level = level.maxCoeff();
  if (!(target >= 0.0) || target >= max_level) {
    throw std::invalid_argument("damp_to_energy: target outside reachable range");
  }
  auto energy_at = [&](double t) {
    Eigen::VectorXd w(dim);
    for (int i = 0; i < dim; ++i) w(i) = std::pow(t, level(i));
    const CMat damped = w.asDiagonal() * raw * w.asDiagonal();
    const double tr = damped.real().diagonal().sum();
    double e = 0.0;
    for (int i = 0; i < dim; ++i) e += damped(i, i).real() * level(i);
    return e / tr;
  };
  double lo = 1.0, hi = 1.0;
  if (energy_at(1.0) < target) {
    while (energy_at(hi) < target) {
      hi *= 2.0;
      if (hi > 1e9) throw std::runtime_error("damp_to_energy: no upper bracket");
    }
  } else {
    while (energy_at(lo) > target) {
      lo /= 2.0;
      if (lo < 1e-9) throw std::runtime_error("damp_to_energy: no lower bracket");
    }
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (energy_at(mid) < target ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  Eigen::VectorXd w(dim);
  for (int i = 0; i < dim; ++i) w(i) = std::pow(t, level(i));
  CMat out = w.asDiagonal() * raw * w.asDiagonal();
  out /= out.real().diagonal().sum();
  return out;
}

}  // namespace

FockOperator::FockOperator(std::vector<int> mode_dims, CMat data, OperatorKind kind)
    : mode_dims_(std::move(mode_dims)), data_(std::move(data)), kind_(kind) {
  const int dim = checked_dim_product(mode_dims_);
  if (data_.rows() != dim || data_.cols() != dim) {
    throw std::invalid_argument("FockOperator: data does not match mode cutoffs");
  }
  if (!data_.allFinite()) throw std::invalid_argument("FockOperator: non-finite entry");
  if (kind_ == OperatorKind::State) {
    if ((data_ - data_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
      throw std::invalid_argument("FockOperator: state not Hermitian");
    }
    const std::complex<double> tr = data_.trace();
    if (std::abs(tr.imag()) > 1e-10 || tr.real() < -1e-6 || tr.real() > 1.0 + 1e-6) {
      throw std::invalid_argument("FockOperator: state trace outside [0, 1]");
    }
  } else if (kind_ == OperatorKind::Unitary) {
    // cheap necessary condition; constructors verify full unitarity blockwise
    for (int i = 0; i < dim; ++i) {
      if (std::abs(data_.row(i).squaredNorm() - 1.0) > 1e-8 ||
          std::abs(data_.col(i).squaredNorm() - 1.0) > 1e-8) {
        throw std::invalid_argument("FockOperator: not unitary");
      }
    }
  }
}

double FockOperator::trace_deficit() const {
  return 1.0 - data_.trace().real();
}

int suggest_cutoff_thermal(double mean_photons, double deficit_tol) {
  if (!(mean_photons >= 0.0)) {
    throw std::invalid_argument("suggest_cutoff_thermal: negative mean photon number");
  }
  if (!(deficit_tol > 0.0 && deficit_tol < 1.0)) {
    throw std::invalid_argument("suggest_cutoff_thermal: tolerance must lie in (0,1)");
  }
  if (mean_photons == 0.0) return 2;
  // deficit(D) = (N/(N+1))^D
  const double ratio = mean_photons / (mean_photons + 1.0);
  const int d = static_cast<int>(std::ceil(std::log(deficit_tol) / std::log(ratio)));
  return std::max(2, d);
}

int suggest_cutoff_tmsv(double photons_per_mode, double deficit_tol) {
  // the two-mode squeezed vacuum's Schmidt tail matches the thermal tail
  return suggest_cutoff_thermal(photons_per_mode, deficit_tol);
}

int suggest_cutoff_coherent(std::complex<double> alpha, double deficit_tol) {
  if (!(deficit_tol > 0.0 && deficit_tol < 1.0)) {
    throw std::invalid_argument("suggest_cutoff_coherent: tolerance must lie in (0,1)");
  }
  const double mu = std::norm(alpha);
  if (mu == 0.0) return 2;
  double term = std::exp(-mu);
  double cdf = term;
  for (int k = 1; k < 4096; ++k) {
    if (1.0 - cdf <= deficit_tol) return std::max(2, k);
    term *= mu / k;
    cdf += term;
  }
  throw CutoffError("suggest_cutoff_coherent: amplitude too large for desk scale", 0);
}

CMat lowering_operator(int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("lowering_operator: cutoff < 2");
  CMat a = CMat::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));  // a|n> = sqrt(n)|n-1>
  }
  return a;
}

CMat number_operator(int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("number_operator: cutoff < 2");
  CMat n = CMat::Zero(cutoff, cutoff);
  for (int k = 0; k < cutoff; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

FockOperator fock_coherent(std::complex<double> alpha, int cutoff, double deficit_tol) {
  if (cutoff < 2) throw std::invalid_argument("fock_coherent: cutoff < 2");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("fock_coherent: non-finite amplitude");
  }
  CVec v(cutoff);
  double log_factorial = 0.0;
  const double mu = std::norm(alpha);
  for (int k = 0; k < cutoff; ++k) {
    if (k > 0) log_factorial += std::log(static_cast<double>(k));
    // e^{-|a|^2/2} a^k / sqrt(k!)
    v(k) = std::pow(alpha, k) * std::exp(-mu / 2.0 - log_factorial / 2.0);
  }
  const double deficit = 1.0 - v.squaredNorm();
  if (deficit > deficit_tol) {
    throw CutoffError("fock_coherent: trace deficit above tolerance",
                      suggest_cutoff_coherent(alpha, deficit_tol));
  }
  return FockOperator({cutoff}, v * v.adjoint(), OperatorKind::State);
}

FockOperator fock_thermal(double mean_photons, int cutoff, double deficit_tol) {
  if (cutoff < 2) throw std::invalid_argument("fock_thermal: cutoff < 2");
  if (!(mean_photons >= 0.0)) {
    throw std::invalid_argument("fock_thermal: negative mean photon number");
  }
  CMat rho = CMat::Zero(cutoff, cutoff);
  if (mean_photons == 0.0) {
    rho(0, 0) = 1.0;
  } else {
    const double ratio = mean_photons / (mean_photons + 1.0);
    double p = 1.0 / (mean_photons + 1.0);  // N^k / (N+1)^(k+1)
    for (int k = 0; k < cutoff; ++k) {
      rho(k, k) = p;
      p *= ratio;
    }
  }
  const double deficit = 1.0 - rho.trace().real();
  if (deficit > deficit_tol) {
    throw CutoffError("fock_thermal: trace deficit above tolerance",
                      suggest_cutoff_thermal(mean_photons, deficit_tol));
  }
  return FockOperator({cutoff}, std::move(rho), OperatorKind::State);
}

namespace {

// Rectangular two-mode squeezed vacuum with independent cutoffs per slot.
FockOperator fock_tmsv_rect(double photons_per_mode, int cutoff_a, int cutoff_b,
                            double deficit_tol) {
  if (cutoff_a < 2 || cutoff_b < 2) throw std::invalid_argument("fock_tmsv: cutoff < 2");
  if (!(photons_per_mode >= 0.0)) {
    throw std::invalid_argument("fock_tmsv: negative mean photon number");
  }
  CVec v = CVec::Zero(static_cast<long>(cutoff_a) * cutoff_b);
  const int levels = std::min(cutoff_a, cutoff_b);
  if (photons_per_mode == 0.0) {
    v(0) = 1.0;
  } else {
    const double z = std::sqrt(photons_per_mode / (photons_per_mode + 1.0));
    const double head = std::sqrt(1.0 - z * z);
    double zk = 1.0;
    for (int k = 0; k < levels; ++k) {
      v(static_cast<long>(k) * cutoff_b + k) = head * zk;  // sum z^k |k,k>
      zk *= z;
    }
  }
  const double deficit = 1.0 - v.squaredNorm();
  if (deficit > deficit_tol) {
    throw CutoffError("fock_tmsv: trace deficit above tolerance",
                      suggest_cutoff_tmsv(photons_per_mode, deficit_tol));
  }
  return FockOperator({cutoff_a, cutoff_b}, v * v.adjoint(), OperatorKind::State);
}

}  // namespace

FockOperator fock_tmsv(double photons_per_mode, int cutoff, double deficit_tol) {
  return fock_tmsv_rect(photons_per_mode, cutoff, cutoff, deficit_tol);
}

FockOperator beam_splitter(double eta, int cutoff) {
  return beam_splitter(eta, cutoff, cutoff);
}

FockOperator beam_splitter(double eta, int cutoff_a, int cutoff_b) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("beam_splitter: eta must lie in [0,1]");
  }
  if (cutoff_a < 2 || cutoff_b < 2) {
    throw std::invalid_argument("beam_splitter: cutoff < 2");
  }
  const double theta = std::acos(std::clamp(std::sqrt(eta), 0.0, 1.0));
  const std::complex<double> im(0.0, 1.0);
  // The generator theta (a† b - a b†) conserves the total photon number, so
  // the truncated exponential splits into one tridiagonal block per total
  // count n, spanned by |k, n-k>. Entries outside the blocks stay exactly 0.
  CMat u = CMat::Zero(static_cast<long>(cutoff_a) * cutoff_b,
                      static_cast<long>(cutoff_a) * cutoff_b);
  for (int n = 0; n <= cutoff_a + cutoff_b - 2; ++n) {
    const int k_lo = std::max(0, n - (cutoff_b - 1));
    const int k_hi = std::min(n, cutoff_a - 1);
    const int m = k_hi - k_lo + 1;
    std::vector<long> idx(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) {
      const int k = k_lo + r;
      idx[static_cast<std::size_t>(r)] = static_cast<long>(k) * cutoff_b + (n - k);
    }
    if (m == 1) {
      u(idx[0], idx[0]) = 1.0;
      continue;
    }
    // H = i G restricted to the block: Hermitian, imaginary tridiagonal with
    // <k+1, n-k-1| a†b |k, n-k> = sqrt((k+1)(n-k))
    CMat h = CMat::Zero(m, m);
    for (int r = 0; r + 1 < m; ++r) {
      const int k = k_lo + r;
      const double amp = theta * std::sqrt(static_cast<double>(k + 1) *
                                           static_cast<double>(n - k));
      h(r + 1, r) = im * amp;
      h(r, r + 1) = -im * amp;
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("beam_splitter: eigensolver failed");
    }
    CVec phases(m);
    for (int r = 0; r < m; ++r) phases(r) = std::exp(-im * es.eigenvalues()(r));
    const CMat block = es.eigenvectors() * phases.asDiagonal() *
                       es.eigenvectors().adjoint();
    if ((block * block.adjoint() - CMat::Identity(m, m)).cwiseAbs().maxCoeff() >
        1e-10) {
      throw std::runtime_error("beam_splitter: block lost unitarity");
    }
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        u(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]) =
            block(r, c);
      }
    }
  }
  return FockOperator({cutoff_a, cutoff_b}, std::move(u), OperatorKind::Unitary);
}

FockOperator tensor_fock(const FockOperator& a, const FockOperator& b) {
  std::vector<int> dims = a.mode_dims();
  dims.insert(dims.end(), b.mode_dims().begin(), b.mode_dims().end());
  OperatorKind kind = OperatorKind::Generic;
  if (a.kind() == b.kind()) kind = a.kind();
  return FockOperator(std::move(dims), kron(a.data(), b.data()), kind);
}

FockOperator partial_trace_fock(const FockOperator& rho, const std::vector<int>& keep) {
  const int n_modes = rho.n_modes();
  if (keep.empty()) throw std::invalid_argument("partial_trace_fock: empty keep list");
  std::vector<bool> kept(static_cast<std::size_t>(n_modes), false);
  for (int m : keep) {
    if (m < 0 || m >= n_modes) {
      throw std::invalid_argument("partial_trace_fock: mode index out of range");
    }
    if (kept[static_cast<std::size_t>(m)]) {
      throw std::invalid_argument("partial_trace_fock: duplicate mode index");
    }
    kept[static_cast<std::size_t>(m)] = true;
  }
  const std::vector<int>& dims = rho.mode_dims();
  std::vector<long> stride(static_cast<std::size_t>(n_modes), 1);
  for (int m = n_modes - 2; m >= 0; --m) {
    stride[static_cast<std::size_t>(m)] =
        stride[static_cast<std::size_t>(m + 1)] * dims[static_cast<std::size_t>(m + 1)];
  }
  std::vector<int> traced;
  for (int m = 0; m < n_modes; ++m) {
    if (!kept[static_cast<std::size_t>(m)]) traced.push_back(m);
  }
  // offsets of every kept-space and traced-space basis state
  auto enumerate_offsets = [&](const std::vector<int>& modes) {
    std::vector<long> offsets{0};
    for (int m : modes) {
      std::vector<long> next;
      next.reserve(offsets.size() * static_cast<std::size_t>(dims[static_cast<std::size_t>(m)]));
      for (long base : offsets) {
        for (int level = 0; level < dims[static_cast<std::size_t>(m)]; ++level) {
          next.push_back(base + level * stride[static_cast<std::size_t>(m)]);
        }
      }
      offsets = std::move(next);
    }
    return offsets;
  };
  const std::vector<long> kept_offsets = enumerate_offsets(keep);
  const std::vector<long> traced_offsets = enumerate_offsets(traced);
  const int out_dim = static_cast<int>(kept_offsets.size());
  CMat out = CMat::Zero(out_dim, out_dim);
  for (int i = 0; i < out_dim; ++i) {
    for (int j = 0; j < out_dim; ++j) {
      std::complex<double> sum(0.0, 0.0);
      for (long t : traced_offsets) {
        sum += rho.data()(kept_offsets[static_cast<std::size_t>(i)] + t,
                          kept_offsets[static_cast<std::size_t>(j)] + t);
      }
      out(i, j) = sum;
    }
  }
  std::vector<int> out_dims;
  out_dims.reserve(keep.size());
  for (int m : keep) out_dims.push_back(dims[static_cast<std::size_t>(m)]);
  return FockOperator(std::move(out_dims), std::move(out), rho.kind());
}

double mean_photons_fock(const FockOperator& rho) {
  double total = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    total += rho.data()(i, i).real() * basis_total_photons(i, rho.mode_dims());
  }
  return total;
}

double mode_photons_fock(const FockOperator& rho, int mode) {
  if (mode < 0 || mode >= rho.n_modes()) {
    throw std::invalid_argument("mode_photons_fock: mode index out of range");
  }
  double total = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    total += rho.data()(i, i).real() * basis_photons(i, rho.mode_dims(), mode);
  }
  return total;
}

void gaussian_moments_fock(const FockOperator& rho, Vec& mean, Mat& cov) {
  const int n = rho.n_modes();
  const std::vector<int>& dims = rho.mode_dims();
  std::vector<CMat> quad;
  quad.reserve(static_cast<std::size_t>(2 * n));
  const std::complex<double> im(0.0, 1.0);
  for (int m = 0; m < n; ++m) {
    CMat a = lowering_operator(dims[static_cast<std::size_t>(m)]);
    CMat x = (a + a.adjoint()) / std::sqrt(2.0);
    CMat p = -im * (a - a.adjoint()) / std::sqrt(2.0);
    for (CMat* op : {&x, &p}) {
      CMat full = CMat::Identity(1, 1);
      for (int k = 0; k < n; ++k) {
        const int dk = dims[static_cast<std::size_t>(k)];
        full = kron(full, k == m ? *op : CMat::Identity(dk, dk));
      }
      quad.push_back(std::move(full));
    }
  }
  const double norm = rho.data().trace().real();
  mean.resize(2 * n);
  for (int j = 0; j < 2 * n; ++j) {
    mean(j) = (rho.data() * quad[static_cast<std::size_t>(j)]).trace().real() / norm;
  }
  cov.resize(2 * n, 2 * n);
  for (int j = 0; j < 2 * n; ++j) {
    for (int k = j; k < 2 * n; ++k) {
      const CMat& rj = quad[static_cast<std::size_t>(j)];
      const CMat& rk = quad[static_cast<std::size_t>(k)];
      const double sym = (rho.data() * (rj * rk + rk * rj)).trace().real() / norm;
      cov(j, k) = cov(k, j) = sym - 2.0 * mean(j) * mean(k);
    }
  }
}

FockOperator embed_mode(const FockOperator& rho, int mode, int new_cutoff) {
  const int n_modes = rho.n_modes();
  if (mode < 0 || mode >= n_modes) {
    throw std::invalid_argument("embed_mode: mode index out of range");
  }
  const std::vector<int>& dims = rho.mode_dims();
  if (new_cutoff < dims[static_cast<std::size_t>(mode)]) {
    throw std::invalid_argument("embed_mode: new cutoff smaller than current");
  }
  std::vector<int> out_dims = dims;
  out_dims[static_cast<std::size_t>(mode)] = new_cutoff;
  const int out_dim = checked_dim_product(out_dims);
  std::vector<long> out_stride(static_cast<std::size_t>(n_modes), 1);
  for (int m = n_modes - 2; m >= 0; --m) {
    out_stride[static_cast<std::size_t>(m)] =
        out_stride[static_cast<std::size_t>(m + 1)] *
        out_dims[static_cast<std::size_t>(m + 1)];
  }
  auto remap = [&](int index) {
    long out = 0;
    int rem = index;
    for (int m = n_modes - 1; m >= 0; --m) {
      const int level = rem % dims[static_cast<std::size_t>(m)];
      rem /= dims[static_cast<std::size_t>(m)];
      out += level * out_stride[static_cast<std::size_t>(m)];
    }
    return out;
  };
  std::vector<long> map(static_cast<std::size_t>(rho.dim()));
  for (int i = 0; i < rho.dim(); ++i) map[static_cast<std::size_t>(i)] = remap(i);
  CMat out = CMat::Zero(out_dim, out_dim);
  for (int i = 0; i < rho.dim(); ++i) {
    for (int j = 0; j < rho.dim(); ++j) {
      out(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) =
          rho.data()(i, j);
    }
  }
  return FockOperator(std::move(out_dims), std::move(out), rho.kind());
}

FockOperator apply_attenuator_fock(const FockOperator& rho, double eta,
                                   double env_photons, int env_cutoff) {
  if (rho.n_modes() != 1 || rho.kind() != OperatorKind::State) {
    throw std::invalid_argument("apply_attenuator_fock: expects a single-mode state");
  }
  check_env_cutoff(env_photons, env_cutoff);
  const FockOperator env = fock_tmsv(env_photons, env_cutoff, kInputDeficitTol);
  const FockOperator joint = tensor_fock(rho, env);
  const FockOperator u = beam_splitter(eta, rho.dim(), env_cutoff);
  const CMat rotated = conjugate_leading(joint.data(), u.data(), env_cutoff);
  const FockOperator full({rho.dim(), env_cutoff, env_cutoff}, rotated,
                          OperatorKind::State);
  return partial_trace_fock(full, {0});
}

FockOperator apply_complementary_fock(const FockOperator& rho, double eta,
                                      double env_photons, int env_cutoff) {
  if (rho.n_modes() != 1 || rho.kind() != OperatorKind::State) {
    throw std::invalid_argument("apply_complementary_fock: expects a single-mode state");
  }
  check_env_cutoff(env_photons, env_cutoff);
  const FockOperator env = fock_tmsv(env_photons, env_cutoff, kInputDeficitTol);
  const FockOperator joint = tensor_fock(rho, env);
  const FockOperator u = beam_splitter(eta, rho.dim(), env_cutoff);
  const CMat rotated = conjugate_leading(joint.data(), u.data(), env_cutoff);
  const FockOperator full({rho.dim(), env_cutoff, env_cutoff}, rotated,
                          OperatorKind::State);
  return partial_trace_fock(full, {1, 2});
}

std::vector<CMat> attenuator_kraus(double eta, double env_photons, int signal_cutoff,
                                   int env_cutoff) {
  check_env_cutoff(env_photons, env_cutoff);
  const FockOperator u = beam_splitter(eta, signal_cutoff, env_cutoff);
  const std::vector<double> c = env_schmidt_weights(env_photons, env_cutoff);
  std::vector<CMat> kraus;
  kraus.reserve(static_cast<std::size_t>(env_cutoff) * env_cutoff);
  for (int j = 0; j < env_cutoff; ++j) {      // traced E level
    for (int k = 0; k < env_cutoff; ++k) {    // traced E' level
      CMat op(signal_cutoff, signal_cutoff);
      for (int out = 0; out < signal_cutoff; ++out) {
        for (int in = 0; in < signal_cutoff; ++in) {
          op(out, in) = c[static_cast<std::size_t>(k)] *
                        u.data()(static_cast<long>(out) * env_cutoff + j,
                                 static_cast<long>(in) * env_cutoff + k);
        }
      }
      kraus.push_back(std::move(op));
    }
  }
  return kraus;
}

std::vector<CMat> complementary_kraus(double eta, double env_photons,
                                      int signal_cutoff, int env_cutoff) {
  check_env_cutoff(env_photons, env_cutoff);
  const FockOperator u = beam_splitter(eta, signal_cutoff, env_cutoff);
  const std::vector<double> c = env_schmidt_weights(env_photons, env_cutoff);
  std::vector<CMat> kraus;
  kraus.reserve(static_cast<std::size_t>(signal_cutoff));
  for (int j = 0; j < signal_cutoff; ++j) {   // traced signal-output level
    CMat op(static_cast<long>(env_cutoff) * env_cutoff, signal_cutoff);
    for (int e = 0; e < env_cutoff; ++e) {
      for (int ep = 0; ep < env_cutoff; ++ep) {
        for (int in = 0; in < signal_cutoff; ++in) {
          op(static_cast<long>(e) * env_cutoff + ep, in) =
              c[static_cast<std::size_t>(ep)] *
              u.data()(static_cast<long>(j) * env_cutoff + e,
                       static_cast<long>(in) * env_cutoff + ep);
        }
      }
    }
    kraus.push_back(std::move(op));
  }
  return kraus;
}

FockOperator apply_attenuator_fock_mode0(const FockOperator& rho, double eta,
                                         double env_photons, int env_cutoff) {
  if (rho.kind() != OperatorKind::State) {
    throw std::invalid_argument("apply_attenuator_fock_mode0: expects a state");
  }
  const int d = rho.mode_dims().front();
  const int rest = rho.dim() / d;
  const std::vector<CMat> kraus = attenuator_kraus(eta, env_photons, d, env_cutoff);
  CMat out;
  if (rest == 1) {
    out = CMat::Zero(d, d);
    for (const CMat& k : kraus) out += k * rho.data() * k.adjoint();
  } else {
    // Contract the Kraus set into the one-mode superoperator first; each
    // Kraus operator is a single photon-number stripe, so the accumulation
    // touches only its nonzero entries.
    CMat transfer = CMat::Zero(static_cast<long>(d) * d, static_cast<long>(d) * d);
    for (const CMat& k : kraus) {
      const CMat kc = k.conjugate();
      for (int b = 0; b < d; ++b) {
        for (int a = 0; a < d; ++a) {
          if (k(b, a) == std::complex<double>(0.0, 0.0)) continue;
          transfer.block(static_cast<long>(b) * d, static_cast<long>(a) * d, d, d) +=
              k(b, a) * kc;
        }
      }
    }
    // regroup rho[(a,i),(a',i')] as R[(a,a'),(i,i')], apply, and regroup back
    CMat regrouped(static_cast<long>(d) * d, static_cast<long>(rest) * rest);
    for (int a = 0; a < d; ++a) {
      for (int ap = 0; ap < d; ++ap) {
        for (int i = 0; i < rest; ++i) {
          for (int ip = 0; ip < rest; ++ip) {
            regrouped(static_cast<long>(a) * d + ap, static_cast<long>(i) * rest + ip) =
                rho.data()(static_cast<long>(a) * rest + i,
                           static_cast<long>(ap) * rest + ip);
          }
        }
      }
    }
    const CMat mapped = transfer * regrouped;
    out.resize(rho.dim(), rho.dim());
    for (int b = 0; b < d; ++b) {
      for (int bp = 0; bp < d; ++bp) {
        for (int i = 0; i < rest; ++i) {
          for (int ip = 0; ip < rest; ++ip) {
            out(static_cast<long>(b) * rest + i, static_cast<long>(bp) * rest + ip) =
                mapped(static_cast<long>(b) * d + bp, static_cast<long>(i) * rest + ip);
          }
        }
      }
    }
  }
  out = ((out + out.adjoint()) / 2.0).eval();
  return FockOperator(rho.mode_dims(), std::move(out), OperatorKind::State);
}

double entropy_fock(const FockOperator& rho) {
  const Eigen::VectorXd w = state_eigenvalues(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > kSpectralFloor) s -= w(i) * std::log(w(i));
  }
  return s;
}

double relative_entropy_fock(const FockOperator& rho, const FockOperator& sigma) {
  if (rho.mode_dims() != sigma.mode_dims()) {
    throw std::invalid_argument("relative_entropy_fock: mode cutoffs differ");
  }
  CMat hs = (sigma.data() + sigma.data().adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(hs);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("relative_entropy_fock: eigensolver failed");
  }
  const Eigen::VectorXd w = es.eigenvalues();
  const Eigen::VectorXd overlap =
      (es.eigenvectors().adjoint() * rho.data() * es.eigenvectors())
          .diagonal()
          .real();
  double outside_support = 0.0;
  double cross = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > kSpectralFloor) {
      cross -= overlap(i) * std::log(w(i));
    } else if (overlap(i) > 0.0) {
      outside_support += overlap(i);
    }
  }
  if (outside_support > kSupportMassTol) {
    return std::numeric_limits<double>::infinity();
  }
  return -entropy_fock(rho) + cross;
}

FockOperator random_state_with_energy(const std::vector<int>& mode_dims,
                                      double target_photons, std::uint64_t seed) {
  const int dim = checked_dim_product(mode_dims);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  }
  CMat raw = g * g.adjoint();
  return FockOperator(mode_dims, damp_to_energy(raw, mode_dims, -1, target_photons),
                      OperatorKind::State);
}

FockOperator random_low_rank_state(const std::vector<int>& mode_dims, int rank,
                                   int mode, double target_photons,
                                   std::uint64_t seed) {
  if (rank < 1) throw std::invalid_argument("random_low_rank_state: rank < 1");
  const int dim = checked_dim_product(mode_dims);
  if (mode < 0 || mode >= static_cast<int>(mode_dims.size())) {
    throw std::invalid_argument("random_low_rank_state: mode index out of range");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  CMat raw = CMat::Zero(dim, dim);
  for (int r = 0; r < rank; ++r) {
    CVec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = std::complex<double>(gauss(rng), gauss(rng));
    v.normalize();
    raw += unif(rng) * (v * v.adjoint());
  }
  raw /= raw.trace().real();
  return FockOperator(mode_dims, damp_to_energy(raw, mode_dims, mode, target_photons),
                      OperatorKind::State);
}

VerificationReport verify_lemma1(std::uint64_t seed, int samples, double eta,
                                 double env_photons, int cutoff, double tolerance) {
  if (samples < 1) throw std::invalid_argument("verify_lemma1: samples < 1");
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("verify_lemma1: eta must lie in (0,1]");
  }
  if (!(env_photons > 0.0)) {
    throw std::invalid_argument("verify_lemma1: environment photon number must be positive");
  }
  if (cutoff < 4) throw std::invalid_argument("verify_lemma1: cutoff < 4");
  const int env_cutoff = suggest_cutoff_tmsv(env_photons, kInputDeficitTol);
  if (static_cast<long>(cutoff) * env_cutoff > 4096) {
    throw CutoffError("verify_lemma1: parameters exceed desk scale", 0);
  }
  // keep the matched thermal reference representable at this cutoff:
  // (N/(N+1))^cutoff <= 1e-8
  const double representable =
      1.0 / (std::pow(kInputDeficitTol, -1.0 / cutoff) - 1.0);
  const double energy_cap = std::min(0.25, 0.95 * representable);
  const std::vector<CMat> kraus =
      complementary_kraus(eta, env_photons, cutoff, env_cutoff);
  auto complement = [&](const FockOperator& rho) {
    const long out_dim = static_cast<long>(env_cutoff) * env_cutoff;
    CMat out = CMat::Zero(out_dim, out_dim);
    for (const CMat& k : kraus) out += k * rho.data() * k.adjoint();
    out = ((out + out.adjoint()) / 2.0).eval();
    return FockOperator({env_cutoff, env_cutoff}, std::move(out), OperatorKind::State);
  };
  struct Outcome {
    double deviation = 0.0;
    std::uint64_t seed = 0;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(samples));
  parallel_for_index(samples, [&](int i) {
    const std::uint64_t sub = derive_seed(seed, static_cast<std::uint64_t>(i));
    FockOperator rho = [&]() {
      if (i == 0) return fock_thermal(0.8 * energy_cap, cutoff);
      std::mt19937_64 energy_rng(derive_seed(sub, 0x11d7));
      std::uniform_real_distribution<double> unif(0.2, 1.0);
      return random_state_with_energy({cutoff}, energy_cap * unif(energy_rng), sub);
    }();
    const double photons = mean_photons_fock(rho);
    const FockOperator sigma = fock_thermal(photons, cutoff);
    const FockOperator out_rho = complement(rho);
    const FockOperator out_sigma = complement(sigma);
    const double lhs = relative_entropy_fock(out_rho, out_sigma);
    const double rhs = entropy_fock(out_sigma) - entropy_fock(out_rho);
    outcomes[static_cast<std::size_t>(i)] = {std::abs(lhs - rhs), sub};
  });
  VerificationReport report;
  report.theorem_id = "lemma1";
  report.samples = samples;
  report.params.eta = eta;
  report.params.signal_photons = energy_cap;
  report.params.env_photons = env_photons;
  report.params.n_signal = 1;
  report.slack = tolerance;
  report.max_violation = 0.0;
  report.worst_case_seed = outcomes.front().seed;
  for (const Outcome& o : outcomes) {
    if (o.deviation > report.max_violation) {
      report.max_violation = o.deviation;
      report.worst_case_seed = o.seed;
    }
  }
  report.passed = report.max_violation <= tolerance;
  return report;
}

namespace {

struct ChannelSetup {
  int signal_cutoff;
  int env_cutoff;
  double noise_floor;  // (1-eta) N_B
};

ChannelSetup plan_cutoffs(const IlluminationParams& p, int input_cutoff) {
  ChannelSetup s;
  s.noise_floor = (1.0 - p.eta) * p.env_photons;
  const double out_photons = p.eta * p.signal_photons + s.noise_floor;
  s.signal_cutoff =
      std::max(input_cutoff, suggest_cutoff_thermal(out_photons, kInputDeficitTol)) + 6;
  s.env_cutoff = suggest_cutoff_tmsv(p.env_photons, kInputDeficitTol);
  if (s.signal_cutoff > 64 ||
      static_cast<long>(s.signal_cutoff) * s.env_cutoff > 4096) {
    throw CutoffError(
        "gaussian_crosscheck: parameters exceed desk scale; reduce E or N_B", 0);
  }
  return s;
}

}  // namespace

CrosscheckRecord gaussian_crosscheck(const std::string& quantity,
                                     const IlluminationParams& p) {
  validate(p);
  CrosscheckRecord rec;
  rec.quantity = quantity;
  if (quantity == "entropy") {
    const int cutoff = suggest_cutoff_thermal(p.signal_photons, 1e-12);
    if (cutoff > 512) {
      throw CutoffError("gaussian_crosscheck: thermal cutoff exceeds desk scale", 0);
    }
    const FockOperator rho = fock_thermal(p.signal_photons, cutoff);
    rec.gaussian_value = entropy(make_thermal(1, p.signal_photons));
    rec.fock_value = entropy_fock(rho);
    rec.cutoffs = {cutoff};
    rec.output_trace_deficit = rho.trace_deficit();
  } else if (quantity == "exponent_no_memory") {
    const std::complex<double> alpha(std::sqrt(p.signal_photons), 0.0);
    const ChannelSetup s =
        plan_cutoffs(p, suggest_cutoff_coherent(alpha, kInputDeficitTol));
    const FockOperator probe = fock_coherent(alpha, s.signal_cutoff);
    const FockOperator out =
        apply_attenuator_fock_mode0(probe, p.eta, p.env_photons, s.env_cutoff);
    const FockOperator reference = fock_thermal(s.noise_floor, s.signal_cutoff);
    rec.gaussian_value = exponent_no_memory(make_coherent({alpha}), p.eta, p.env_photons);
    rec.fock_value = relative_entropy_fock(out, reference);
    rec.cutoffs = {s.signal_cutoff, s.env_cutoff};
    rec.output_trace_deficit = out.trace_deficit();
  } else if (quantity == "exponent_with_memory" || quantity == "conditional_entropy") {
    const int idler_cutoff = suggest_cutoff_tmsv(p.signal_photons, kInputDeficitTol) + 4;
    const ChannelSetup s =
        plan_cutoffs(p, suggest_cutoff_tmsv(p.signal_photons, kInputDeficitTol));
    if (static_cast<long>(s.signal_cutoff) * idler_cutoff > 2048) {
      throw CutoffError("gaussian_crosscheck: joint space exceeds desk scale", 0);
    }
    const FockOperator probe =
        fock_tmsv_rect(p.signal_photons, s.signal_cutoff, idler_cutoff, kInputDeficitTol);
    const FockOperator out =
        apply_attenuator_fock_mode0(probe, p.eta, p.env_photons, s.env_cutoff);
    rec.cutoffs = {s.signal_cutoff, idler_cutoff, s.env_cutoff};
    rec.output_trace_deficit = out.trace_deficit();
    const GaussianState joint = apply_on_subsystem(
        attenuator(1, p.eta, p.env_photons), make_tmsv(p.signal_photons), {0});
    if (quantity == "exponent_with_memory") {
      const FockOperator reference =
          tensor_fock(fock_thermal(s.noise_floor, s.signal_cutoff),
                      fock_thermal(p.signal_photons, idler_cutoff));
      rec.gaussian_value =
          exponent_with_memory(make_tmsv(p.signal_photons), {0}, p.eta, p.env_photons);
      rec.fock_value = relative_entropy_fock(out, reference);
    } else {
      rec.gaussian_value = conditional_entropy(joint, {0});
      rec.fock_value =
          entropy_fock(out) - entropy_fock(partial_trace_fock(out, {1}));
    }
  } else {
    throw std::invalid_argument("gaussian_crosscheck: unknown quantity '" + quantity + "'");
  }
  rec.gap = std::abs(rec.gaussian_value - rec.fock_value);
  return rec;
}

}  // namespace qi::fock
