#pragma once

#include "qi/gaussian_state.hpp"

#include <cstdint>
#include <random>

namespace qi {

/// Stateless per-sample seed derivation (splitmix64 mix of seed and index),
/// so sample loops can run in any order or in parallel.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Haar-ish random element of O(2n) ∩ Sp(2n) in (x1,p1,...) ordering, from a
/// random n x n unitary mapped blockwise to [[Re u, -Im u],[Im u, Re u]].
Mat random_orthogonal_symplectic(int n_modes, std::mt19937_64& rng);

/// Per-mode squeezer diag(e^{r_i}, e^{-r_i}).
Mat squeezer(const Vec& exponents);

/// Random mixed single-partition probe: an n-mode squeezed, rotated,
/// displaced thermal state whose total mean photon number equals
/// photons_per_mode * n exactly (global scale bisected).
GaussianState random_squeezed_thermal(int n_modes, double photons_per_mode,
                                      std::uint64_t seed);

}  // namespace qi
