#ifndef QIG_SAMPLING_HPP
#define QIG_SAMPLING_HPP

#include <cstdint>

#include "qig/hermitian.hpp"

namespace qig {

/// Stateless seed mixing. Sampling loops derive one seed per (stream, index)
/// so that results are identical for any thread count.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Hilbert-Schmidt-style state sample: G a d x k Ginibre matrix,
/// rho = G G^dag / Tr(G G^dag). k controls the purity bias; k = 0 means k = d,
/// which lands in the interior with overwhelming probability.
DensityMatrix random_density(int d, std::uint64_t seed, int k = 0);

/// GUE-style Hermitian sample, optionally projected onto the traceless
/// subspace, normalized to Frobenius norm 1.
TangentVector random_tangent(int d, std::uint64_t seed, bool traceless = true);

/// Haar unitary: QR of a Ginibre matrix with the R-diagonal phase fix.
Matrix random_unitary(int d, std::uint64_t seed);

/// Haar-random unit vector in C^d.
Vector random_pure_state(int d, std::uint64_t seed);

/// Interior point of the probability simplex (normalized exponentials).
RealVector random_simplex(int n, std::uint64_t seed);

/// Random direction in the simplex tangent space: Gaussian entries projected
/// to sum zero, normalized to unit Euclidean norm.
RealVector random_simplex_tangent(int n, std::uint64_t seed);

}  // namespace qig

#endif
