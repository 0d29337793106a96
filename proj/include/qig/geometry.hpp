#ifndef QIG_GEOMETRY_HPP
#define QIG_GEOMETRY_HPP

#include <cstdint>

#include "qig/hermitian.hpp"
#include "qig/monotone.hpp"

namespace qig {

struct MetricValue {
    double value;
    std::string f_name;
    std::uint64_t basepoint_fingerprint;
};

struct DivergenceValue {
    double value;
    std::string g_name;
};

std::uint64_t matrix_fingerprint(const Matrix& m);

/// Inverse quantum Fisher operator applied to A at basepoint pi: in the
/// eigenbasis of pi with eigenvalues p, entry (i,j) of A is divided by
/// p_j * f(p_i / p_j). Requires pi interior.
HermitianMatrix fisher_inverse_apply(const PsdMatrix& pi, const HermitianMatrix& a,
                                     const MonotoneFunction& f);

/// Monotone metric K_f at pi: Tr{A Jf^-1[B]}. Real, symmetric, bilinear;
/// K(pi, pi) equals Tr pi for every f in the catalog.
MetricValue fisher_metric(const PsdMatrix& pi, const HermitianMatrix& a,
                          const HermitianMatrix& b, const MonotoneFunction& f);

/// Same bilinear form evaluated from an existing eigendecomposition of the
/// basepoint. No interior guard: callers on the sampling hot path check the
/// spectrum themselves.
double fisher_metric_in_basis(const Spectral& basis, const Matrix& a, const Matrix& b,
                              const MonotoneFunction& f);

inline double fisher_quadratic_in_basis(const Spectral& basis, const Matrix& a,
                                        const MonotoneFunction& f) {
    return fisher_metric_in_basis(basis, a, a, f);
}

/// Contrast function H_g(rho||sigma), evaluated spectrally:
/// sum_{ij} |<phi_i|psi_j>|^2 g(s_i/r_j) r_j over the two eigensystems.
/// O(d^3) instead of the d^2 x d^2 superoperator route, which is kept as a
/// cross-check oracle in the tests.
DivergenceValue contrast_eval(const PsdMatrix& rho, const PsdMatrix& sigma,
                              const ContrastGenerator& g);

/// | H_g(pi + eps A || pi + eps B) - (eps^2/2) g''(1) K_f(A-B, A-B) | with
/// f induced by g. Third order in eps by the local expansion of contrast
/// functions; the g''(1) factor undoes the f(1) = 1 normalization so the
/// comparison uses the raw correspondence.
double local_expansion_residual(const PsdMatrix& pi, const TangentVector& a,
                                const TangentVector& b, const ContrastGenerator& g,
                                double eps);

/// Fisher-Rao quadratic form sum_i dq_i^2 / p_i on the open simplex.
double classical_fisher(const RealVector& p, const RealVector& dq);

/// sum_i p_i log(p_i / q_i); entries with p_i = 0 contribute zero.
double relative_entropy(const RealVector& p, const RealVector& q);

}  // namespace qig

#endif
