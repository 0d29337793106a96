#include "qig/hermitian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace qig {

Tolerances& tolerances() {
    static Tolerances tol;
    return tol;
}

namespace {

void fix_eigenvector_phases(Matrix& v) {
    const int d = static_cast<int>(v.rows());
    for (int c = 0; c < d; ++c) {
        int arg_max = 0;
        double best = -1.0;
        for (int r = 0; r < d; ++r) {
            const double a = std::abs(v(r, c));
            if (a > best) {
                best = a;
                arg_max = r;
            }
        }
        const Complex z = v(arg_max, c);
        if (std::abs(z) > 0.0) {
            v.col(c) *= std::conj(z) / std::abs(z);
        }
    }
}

}  // namespace

Spectral eig_hermitian(const Matrix& h) {
    if (h.rows() != h.cols()) {
        throw DimensionError("eig_hermitian: matrix is not square");
    }
    const Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eig_hermitian: eigensolver failed to converge on\n" << sym;
        throw EigFailure(os.str());
    }
    Spectral out{solver.eigenvalues(), solver.eigenvectors()};
    fix_eigenvector_phases(out.eigenvectors);
    return out;
}

Spectral eig_hermitian(const HermitianMatrix& h) {
    return eig_hermitian(h.mat());
}

HermitianMatrix::HermitianMatrix(Matrix m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimensionError("HermitianMatrix: matrix must be square and nonempty");
    }
    mat_ = 0.5 * (m + m.adjoint());
}

PsdMatrix::PsdMatrix(Matrix m)
    : HermitianMatrix(std::move(m)), spectral_(eig_hermitian(mat())) {
    const double min_eig = spectral_.eigenvalues(0);
    if (min_eig < -psd_slack(trace())) {
        throw DomainError("PsdMatrix: min eigenvalue " + std::to_string(min_eig) +
                          " below PSD tolerance");
    }
}

DensityMatrix::DensityMatrix(Matrix m) : PsdMatrix(std::move(m)) {
    if (std::abs(trace() - 1.0) > tolerances().trace_one) {
        throw DomainError("DensityMatrix: trace " + std::to_string(trace()) +
                          " is not 1");
    }
}

TangentVector::TangentVector(Matrix m, bool traceless)
    : HermitianMatrix(std::move(m)), traceless_(traceless) {
    if (traceless_ && std::abs(trace()) > tolerances().trace_one) {
        throw DomainError("TangentVector: flagged traceless but trace is " +
                          std::to_string(trace()));
    }
}

}  // namespace qig
