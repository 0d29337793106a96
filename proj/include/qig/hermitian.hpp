#ifndef QIG_HERMITIAN_HPP
#define QIG_HERMITIAN_HPP

#include <utility>

#include "qig/types.hpp"

namespace qig {

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// the unitary of eigenvectors (columns). The phase of every eigenvector is
/// fixed so that its largest-magnitude component is real positive, which
/// makes coordinate formulas reproducible across runs and backends.
struct Spectral {
    RealVector eigenvalues;
    Matrix eigenvectors;

    Matrix reconstruct() const {
        return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
    }
};

Spectral eig_hermitian(const Matrix& h);

/// A d x d complex matrix symmetrized to (H + H^dag)/2 at construction.
/// Immutable; all downstream types share the storage semantics.
class HermitianMatrix {
public:
    explicit HermitianMatrix(Matrix m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& mat() const { return mat_; }
    double trace() const { return mat_.trace().real(); }
    double frobenius_norm() const { return mat_.norm(); }

private:
    Matrix mat_;
};

Spectral eig_hermitian(const HermitianMatrix& h);

/// Positive semidefinite matrix. Construction eigendecomposes once, caches
/// the spectrum, and rejects anything with min eigenvalue below -psd_slack.
class PsdMatrix : public HermitianMatrix {
public:
    explicit PsdMatrix(Matrix m);

    double min_eigenvalue() const { return spectral_.eigenvalues(0); }
    bool interior() const {
        return min_eigenvalue() > interior_threshold(trace(), dim());
    }
    const Spectral& spectral() const { return spectral_; }

private:
    Spectral spectral_;
};

/// Trace-one positive matrix (a quantum state).
class DensityMatrix : public PsdMatrix {
public:
    explicit DensityMatrix(Matrix m);
};

/// Hermitian perturbation; traceless ones live in the tangent space of the
/// state manifold.
class TangentVector : public HermitianMatrix {
public:
    TangentVector(Matrix m, bool traceless);

    bool traceless() const { return traceless_; }

private:
    bool traceless_;
};

/// min eigenvalue > interior_threshold test on a raw spectrum, for callers
/// that already hold an eigendecomposition.
inline bool spectrum_interior(const RealVector& eigenvalues, int dim) {
    return eigenvalues(0) > interior_threshold(eigenvalues.sum(), dim);
}

}  // namespace qig

#endif
