#include "qig/geometry.hpp"

#include <cmath>
#include <cstring>

namespace qig {

std::uint64_t matrix_fingerprint(const Matrix& m) {
    // FNV-1a over the raw entry bytes; used only to correlate report rows.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
    const std::size_t n = sizeof(Complex) * static_cast<std::size_t>(m.size());
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

void require_interior(const PsdMatrix& p, const char* who) {
    if (!p.interior()) {
        throw SingularBasepoint(std::string(who) + ": basepoint min eigenvalue " +
                                    std::to_string(p.min_eigenvalue()) +
                                    " is not interior",
                                p.min_eigenvalue());
    }
}

}  // namespace

HermitianMatrix fisher_inverse_apply(const PsdMatrix& pi, const HermitianMatrix& a,
                                     const MonotoneFunction& f) {
    require_interior(pi, "fisher_inverse_apply");
    if (a.dim() != pi.dim()) {
        throw DimensionError("fisher_inverse_apply: dimension mismatch");
    }
    const Spectral& s = pi.spectral();
    const int d = pi.dim();
    Matrix at = s.eigenvectors.adjoint() * a.mat() * s.eigenvectors;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            at(i, j) /= s.eigenvalues(j) * f.eval(s.eigenvalues(i) / s.eigenvalues(j));
        }
    }
    return HermitianMatrix(s.eigenvectors * at * s.eigenvectors.adjoint());
}

double fisher_metric_in_basis(const Spectral& basis, const Matrix& a, const Matrix& b,
                              const MonotoneFunction& f) {
    const int d = static_cast<int>(basis.eigenvalues.size());
    const Matrix at = basis.eigenvectors.adjoint() * a * basis.eigenvectors;
    const Matrix bt = (&a == &b) ? at : Matrix(basis.eigenvectors.adjoint() * b * basis.eigenvectors);
    double value = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double denom =
                basis.eigenvalues(j) * f.eval(basis.eigenvalues(i) / basis.eigenvalues(j));
            value += (std::conj(at(i, j)) * bt(i, j)).real() / denom;
        }
    }
    return value;
}

MetricValue fisher_metric(const PsdMatrix& pi, const HermitianMatrix& a,
                          const HermitianMatrix& b, const MonotoneFunction& f) {
    require_interior(pi, "fisher_metric");
    if (a.dim() != pi.dim() || b.dim() != pi.dim()) {
        throw DimensionError("fisher_metric: dimension mismatch");
    }
    const double value = fisher_metric_in_basis(pi.spectral(), a.mat(), b.mat(), f);
    return MetricValue{value, f.name(), matrix_fingerprint(pi.mat())};
}

DivergenceValue contrast_eval(const PsdMatrix& rho, const PsdMatrix& sigma,
                              const ContrastGenerator& g) {
    require_interior(rho, "contrast_eval");
    require_interior(sigma, "contrast_eval");
    if (rho.dim() != sigma.dim()) {
        throw DimensionError("contrast_eval: dimension mismatch");
    }
    const Spectral& sr = rho.spectral();
    const Spectral& ss = sigma.spectral();
    const int d = rho.dim();
    // overlaps(i, j) = <phi_i | psi_j> between sigma and rho eigenvectors
    const Matrix overlaps = ss.eigenvectors.adjoint() * sr.eigenvectors;
    double h = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double w = std::norm(overlaps(i, j));
            h += w * g.eval(ss.eigenvalues(i) / sr.eigenvalues(j)) * sr.eigenvalues(j);
        }
    }
    return DivergenceValue{h, g.name()};
}

double local_expansion_residual(const PsdMatrix& pi, const TangentVector& a,
                                const TangentVector& b, const ContrastGenerator& g,
                                double eps) {
    if (!a.traceless() || !b.traceless()) {
        throw DomainError("local_expansion_residual: perturbations must be traceless");
    }
    PsdMatrix rho = [&] {
        try {
            return PsdMatrix(pi.mat() + eps * a.mat());
        } catch (const DomainError&) {
            throw DomainError("local_expansion_residual: eps leaves the PSD cone");
        }
    }();
    PsdMatrix sigma = [&] {
        try {
            return PsdMatrix(pi.mat() + eps * b.mat());
        } catch (const DomainError&) {
            throw DomainError("local_expansion_residual: eps leaves the PSD cone");
        }
    }();
    if (!rho.interior() || !sigma.interior()) {
        throw DomainError("local_expansion_residual: perturbed matrix left the interior");
    }
    const double h = contrast_eval(rho, sigma, g).value;
    const Matrix diff = a.mat() - b.mat();
    const MonotoneFunction f = MonotoneFunction::from_g(g);
    const double k = fisher_quadratic_in_basis(pi.spectral(), diff, f);
    return std::abs(h - 0.5 * eps * eps * g.curvature() * k);
}

double classical_fisher(const RealVector& p, const RealVector& dq) {
    if (p.size() != dq.size()) {
        throw DimensionError("classical_fisher: dimension mismatch");
    }
    if (p.minCoeff() <= 0.0) {
        throw DomainError("classical_fisher: p must be interior to the simplex");
    }
    if (std::abs(dq.sum()) > 1e-9 * std::max(1.0, dq.cwiseAbs().maxCoeff())) {
        throw DomainError("classical_fisher: dq must sum to zero");
    }
    return (dq.array().square() / p.array()).sum();
}

double relative_entropy(const RealVector& p, const RealVector& q) {
    if (p.size() != q.size()) {
        throw DimensionError("relative_entropy: dimension mismatch");
    }
    double d = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) < 0.0) {
            throw DomainError("relative_entropy: negative probability");
        }
        if (p(i) == 0.0) {
            continue;
        }
        if (q(i) <= 0.0) {
            throw DomainError("relative_entropy: q vanishes where p does not");
        }
        d += p(i) * std::log(p(i) / q(i));
    }
    return d;
}

}  // namespace qig
