#include "qig/superop.hpp"

#include <cmath>

namespace qig {

Vector vectorize(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionError("vectorize: matrix is not square");
    }
    // Eigen is column-major, so the raw storage already is the column stack.
    return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix devectorize(const Vector& v) {
    const auto n = v.size();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
    if (d * d != n) {
        throw DimensionError("devectorize: length " + std::to_string(n) +
                             " is not a perfect square");
    }
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix left_mult_superop(const Matrix& rho) {
    const auto d = rho.rows();
    return kron(Matrix::Identity(d, d), rho);
}

Matrix right_mult_superop(const Matrix& rho) {
    const auto d = rho.rows();
    return kron(rho.transpose(), Matrix::Identity(d, d));
}

}  // namespace qig
