#ifndef QIG_SUPEROP_HPP
#define QIG_SUPEROP_HPP

#include "qig/types.hpp"

namespace qig {

// Column-stacking vectorization, fixed repo-wide: column j of A occupies
// slots j*d .. j*d+d-1. All superoperator and Choi conventions depend on it.

Vector vectorize(const Matrix& a);
Matrix devectorize(const Vector& v);

Matrix kron(const Matrix& a, const Matrix& b);

/// L_rho as a d^2 x d^2 matrix: devectorize(L_rho * vec(A)) == rho * A.
Matrix left_mult_superop(const Matrix& rho);

/// R_rho as a d^2 x d^2 matrix: devectorize(R_rho * vec(A)) == A * rho.
Matrix right_mult_superop(const Matrix& rho);

}  // namespace qig

#endif
