#pragma once

#include "qi/gaussian_state.hpp"

namespace qi {

/// Gaussian channel as an affine map on quadrature statistics:
/// cov -> X cov X^T + Y, mean -> X mean + d0. The constructor enforces Y
/// symmetry and the complete-positivity condition
/// min_eig(Y + i Omega_out - i X Omega_in X^T) >= -1e-9.
class GaussianChannel {
 public:
  GaussianChannel(Mat x, Mat y, Vec d0);

  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  const Mat& x() const { return x_; }
  const Mat& y() const { return y_; }
  const Vec& d0() const { return d0_; }

 private:
  int n_in_;
  int n_out_;
  Mat x_;
  Mat y_;
  Vec d0_;
};

/// Thermal attenuator of transmissivity eta in (0,1] with environment mean
/// photon number env_photons: X = sqrt(eta) I, Y = (1-eta)(2 env_photons+1) I.
/// For the eta = 0 limit use constant_thermal_channel.
GaussianChannel attenuator(int n_modes, double eta, double env_photons);

/// Degenerate eta = 0 attenuator: every input maps to thermal(env_photons).
GaussianChannel constant_thermal_channel(int n_modes, double env_photons);

/// Complementary channel of the thermal attenuator, built from the
/// beam-splitter dilation with a two-mode-squeezed environment. Output modes
/// are interleaved per input mode as (E1, E1', E2, E2', ...).
GaussianChannel complementary_attenuator(int n_modes, double eta, double env_photons);

/// Additive classical noise: X = I, Y = 2 kappa I; adds kappa photons per mode.
GaussianChannel additive_noise(int n_modes, double added_photons_per_mode);

/// Channel action on a full state.
GaussianState apply(const GaussianChannel& c, const GaussianState& s);

/// (Phi ⊗ Id) action: the channel acts on target_modes (in list order), all
/// other modes pass through. Requires c.n_in() == c.n_out().
GaussianState apply_on_subsystem(const GaussianChannel& c, const GaussianState& s,
                                 const std::vector<int>& target_modes);

/// outer ∘ inner.
GaussianChannel compose(const GaussianChannel& outer, const GaussianChannel& inner);

/// Complete-positivity check at the given tolerance.
bool is_completely_positive(const GaussianChannel& c, double tol = 1e-9);

}  // namespace qi
