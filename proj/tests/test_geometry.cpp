#include <doctest.h>

#include <cmath>

#include "qig/geometry.hpp"
#include "qig/sampling.hpp"
#include "qig/superop.hpp"

using namespace qig;

namespace {

std::vector<MonotoneFunction> catalog_fs() {
    std::vector<MonotoneFunction> fs;
    for (const auto& name : monotone_catalog_names()) {
        fs.push_back(MonotoneFunction::from_name(name));
    }
    return fs;
}

// Forward Fisher operator built from the multiplication superoperators, an
// oracle independent of the coordinate formula in fisher_inverse_apply.
// f(L R^-1) is evaluated spectrally: L R^-1 = kron(conj(pi)^-1 modes, pi
// modes) is unitarily diagonalized by kron(conj(V), V) with eigenvalues
// p_i / p_j.
Matrix fisher_forward_superop(const PsdMatrix& pi, const MonotoneFunction& f) {
    const Spectral& s = pi.spectral();
    const int d = pi.dim();
    const Matrix w = kron(s.eigenvectors.conjugate(), s.eigenvectors);
    Vector fvals(d * d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            fvals(j * d + i) = f.eval(s.eigenvalues(i) / s.eigenvalues(j));
        }
    }
    const Matrix f_lr = w * fvals.asDiagonal() * w.adjoint();
    return right_mult_superop(pi.mat()) * f_lr;
}

DensityMatrix well_mixed_density(int d, std::uint64_t seed) {
    const Matrix m = 0.7 * random_density(d, seed).mat() +
                     0.3 * Matrix::Identity(d, d) / static_cast<double>(d);
    return DensityMatrix(m);
}

// Spectral matrix logarithm, test-side oracle for the relative entropy.
Matrix matrix_log(const Matrix& h) {
    const Spectral s = eig_hermitian(h);
    Vector logs(s.eigenvalues.size());
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        logs(i) = std::log(s.eigenvalues(i));
    }
    return s.eigenvectors * logs.asDiagonal() * s.eigenvectors.adjoint();
}

}  // namespace

TEST_CASE("inverse Fisher operator maps the basepoint to the identity") {
    for (int d : {2, 3}) {
        for (const auto& f : catalog_fs()) {
            const DensityMatrix pi = well_mixed_density(d, derive_seed(41, d, 0));
            const HermitianMatrix out = fisher_inverse_apply(pi, HermitianMatrix(pi.mat()), f);
            CHECK((out.mat() - Matrix::Identity(d, d)).norm() < 1e-10);
        }
    }
}

TEST_CASE("inverse Fisher operator at the maximally mixed state scales by d") {
    const int d = 3;
    const PsdMatrix pi(Matrix(Matrix::Identity(d, d) / static_cast<double>(d)));
    const HermitianMatrix a(random_tangent(d, 5, false).mat());
    const HermitianMatrix out = fisher_inverse_apply(pi, a, MonotoneFunction::sld());
    CHECK((out.mat() - static_cast<double>(d) * a.mat()).norm() < 1e-10);
}

TEST_CASE("forward superoperator oracle inverts fisher_inverse_apply") {
    for (int d : {2, 3}) {
        for (const auto& f : catalog_fs()) {
            for (int rep = 0; rep < 5; ++rep) {
                const DensityMatrix pi = well_mixed_density(d, derive_seed(43, d, rep));
                const HermitianMatrix a(random_tangent(d, derive_seed(44, d, rep), false).mat());
                const HermitianMatrix inv = fisher_inverse_apply(pi, a, f);
                const Matrix forward = fisher_forward_superop(pi, f);
                const Matrix back = devectorize(forward * vectorize(inv.mat()));
                CAPTURE(f.name());
                CHECK((back - a.mat()).norm() < 1e-10);
            }
        }
    }
}

TEST_CASE("fisher_metric closed forms on qubits") {
    SUBCASE("diagonal tangent at the maximally mixed qubit gives 4") {
        Matrix pi = Matrix::Zero(2, 2);
        pi(0, 0) = pi(1, 1) = 0.5;
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 1.0;
        a(1, 1) = -1.0;
        for (const auto& f : catalog_fs()) {
            const MetricValue v = fisher_metric(PsdMatrix(pi), HermitianMatrix(a), HermitianMatrix(a), f);
            CAPTURE(f.name());
            CHECK(v.value == doctest::Approx(4.0).epsilon(1e-12));
        }
    }
    SUBCASE("sigma_x tangent under SLD gives 4 for every diagonal basepoint") {
        // closed form: sum_ij 2 |A_ij|^2 / (p_i + p_j) = 4 when p0 + p1 = 1
        Matrix sx = Matrix::Zero(2, 2);
        sx(0, 1) = sx(1, 0) = 1.0;
        for (const double p : {0.1, 0.35, 0.5, 0.82}) {
            Matrix pi = Matrix::Zero(2, 2);
            pi(0, 0) = p;
            pi(1, 1) = 1.0 - p;
            const MetricValue v = fisher_metric(PsdMatrix(pi), HermitianMatrix(sx),
                                                HermitianMatrix(sx), MonotoneFunction::sld());
            CHECK(v.value == doctest::Approx(4.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("K(rho, rho) equals the trace for interior states") {
    for (int d : {2, 3}) {
        for (const auto& f : catalog_fs()) {
            for (int rep = 0; rep < 100; ++rep) {
                const DensityMatrix rho = well_mixed_density(d, derive_seed(47, d, rep));
                const MetricValue v =
                    fisher_metric(rho, HermitianMatrix(rho.mat()), HermitianMatrix(rho.mat()), f);
                CAPTURE(f.name());
                CHECK(std::abs(v.value - rho.trace()) < 1e-10);
            }
        }
    }
}

TEST_CASE("fisher_metric is a real symmetric bilinear form") {
    const DensityMatrix pi = well_mixed_density(3, 61);
    const MonotoneFunction f = MonotoneFunction::kmb();
    const HermitianMatrix a(random_tangent(3, 62, false).mat());
    const HermitianMatrix b(random_tangent(3, 63, false).mat());
    const HermitianMatrix c(random_tangent(3, 64, false).mat());

    const double kab = fisher_metric(pi, a, b, f).value;
    const double kba = fisher_metric(pi, b, a, f).value;
    CHECK(std::abs(kab - kba) < 1e-10);

    for (const double s : {0.7, -1.3}) {
        const HermitianMatrix combo(b.mat() + s * c.mat());
        const double lhs = fisher_metric(pi, a, combo, f).value;
        const double rhs = kab + s * fisher_metric(pi, a, c, f).value;
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
    }
    CHECK(fisher_metric(pi, a, a, f).value > 0.0);
}

TEST_CASE("basepoint homogeneity: K at c*pi with tangents c*A is c*K") {
    const DensityMatrix pi = well_mixed_density(2, 71);
    const HermitianMatrix a(random_tangent(2, 72, false).mat());
    const MonotoneFunction f = MonotoneFunction::wy();
    const double base = fisher_metric(pi, a, a, f).value;
    for (const double c : {0.5, 2.0, 7.3}) {
        const PsdMatrix scaled(Matrix(c * pi.mat()));
        const HermitianMatrix ca(Matrix(c * a.mat()));
        const double val = fisher_metric(scaled, ca, ca, f).value;
        CHECK(std::abs(val - c * base) < 1e-10 * std::max(1.0, c * base));
    }
}

TEST_CASE("metric entry points reject boundary basepoints") {
    Matrix boundary = Matrix::Zero(2, 2);
    boundary(0, 0) = 1.0;
    const PsdMatrix pi(boundary);
    const HermitianMatrix a(Matrix::Identity(2, 2));
    CHECK_THROWS_AS(fisher_metric(pi, a, a, MonotoneFunction::sld()), SingularBasepoint);
    CHECK_THROWS_AS(fisher_inverse_apply(pi, a, MonotoneFunction::sld()), SingularBasepoint);
    CHECK_THROWS_AS(contrast_eval(pi, well_mixed_density(2, 3), ContrastGenerator::neg_log()),
                    SingularBasepoint);
}

TEST_CASE("contrast functions vanish exactly on equal arguments") {
    const DensityMatrix rho = well_mixed_density(3, 81);
    for (const auto& gname : contrast_catalog_names()) {
        const ContrastGenerator g = ContrastGenerator::from_name(gname);
        CHECK(std::abs(contrast_eval(rho, rho, g).value) < 1e-12);
    }
}

TEST_CASE("contrast with neglog recovers the relative entropy") {
    SUBCASE("commuting case reduces to the classical formula") {
        RealVector p(3), q(3);
        p << 0.5, 0.3, 0.2;
        q << 0.2, 0.45, 0.35;
        Matrix rho = Matrix::Zero(3, 3);
        Matrix sigma = Matrix::Zero(3, 3);
        for (int i = 0; i < 3; ++i) {
            rho(i, i) = p(i);
            sigma(i, i) = q(i);
        }
        const double h =
            contrast_eval(PsdMatrix(rho), PsdMatrix(sigma), ContrastGenerator::neg_log()).value;
        CHECK(std::abs(h - relative_entropy(p, q)) < 1e-12);
    }
    SUBCASE("noncommuting case matches the matrix-logarithm oracle") {
        for (int rep = 0; rep < 10; ++rep) {
            const DensityMatrix rho = well_mixed_density(3, derive_seed(83, 0, rep));
            const DensityMatrix sigma = well_mixed_density(3, derive_seed(84, 0, rep));
            const double h =
                contrast_eval(rho, sigma, ContrastGenerator::neg_log()).value;
            const double oracle =
                (rho.mat() * (matrix_log(rho.mat()) - matrix_log(sigma.mat()))).trace().real();
            CHECK(std::abs(h - oracle) < 1e-10);
        }
    }
}

TEST_CASE("contrast functions are positive and faithful on states") {
    for (const auto& gname : contrast_catalog_names()) {
        const ContrastGenerator g = ContrastGenerator::from_name(gname);
        for (int rep = 0; rep < 50; ++rep) {
            const DensityMatrix rho = well_mixed_density(2, derive_seed(85, 0, rep));
            const DensityMatrix sigma = well_mixed_density(2, derive_seed(86, 0, rep));
            const double h = contrast_eval(rho, sigma, g).value;
            CAPTURE(gname);
            CHECK(h > 0.0);  // distinct random states
        }
    }
}

TEST_CASE("contrast functions are jointly convex on random quadruples") {
    const ContrastGenerator g = ContrastGenerator::neg_log();
    for (int rep = 0; rep < 10; ++rep) {
        const DensityMatrix r1 = well_mixed_density(2, derive_seed(87, 1, rep));
        const DensityMatrix r2 = well_mixed_density(2, derive_seed(87, 2, rep));
        const DensityMatrix s1 = well_mixed_density(2, derive_seed(87, 3, rep));
        const DensityMatrix s2 = well_mixed_density(2, derive_seed(87, 4, rep));
        const double h11 = contrast_eval(r1, s1, g).value;
        const double h22 = contrast_eval(r2, s2, g).value;
        for (const double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const PsdMatrix rmix(Matrix(lam * r1.mat() + (1 - lam) * r2.mat()));
            const PsdMatrix smix(Matrix(lam * s1.mat() + (1 - lam) * s2.mat()));
            const double mixed = contrast_eval(rmix, smix, g).value;
            CHECK(mixed <= lam * h11 + (1 - lam) * h22 + 1e-10);
        }
    }
}

TEST_CASE("quantum quantities reduce to classical ones on diagonal inputs") {
    RealVector p(3);
    p << 0.5, 0.3, 0.2;
    RealVector dq(3);
    dq << 0.05, -0.02, -0.03;
    Matrix pi = Matrix::Zero(3, 3);
    Matrix a = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
        pi(i, i) = p(i);
        a(i, i) = dq(i);
    }
    const double classical = classical_fisher(p, dq);
    for (const auto& f : catalog_fs()) {
        const double quantum =
            fisher_metric(PsdMatrix(pi), HermitianMatrix(a), HermitianMatrix(a), f).value;
        CAPTURE(f.name());
        CHECK(std::abs(quantum - classical) < 1e-10);
    }
}

TEST_CASE("local expansion residual") {
    const ContrastGenerator g = ContrastGenerator::neg_log();
    SUBCASE("vanishes when both perturbations coincide") {
        const DensityMatrix pi = well_mixed_density(2, 91);
        const TangentVector a = random_tangent(2, 92, true);
        CHECK(local_expansion_residual(pi, a, a, g, 0.05) < 1e-13);
    }
    SUBCASE("is third order in eps") {
        const DensityMatrix pi = well_mixed_density(2, 93);
        const TangentVector a = random_tangent(2, 94, true);
        const TangentVector b = random_tangent(2, 95, true);
        const double r2 = local_expansion_residual(pi, a, b, g, 1e-2);
        const double r3 = local_expansion_residual(pi, a, b, g, 1e-3);
        CHECK(r3 < r2 / 100.0);  // slope strictly above 2
    }
    SUBCASE("diagonal perturbation against the classical closed form") {
        Matrix pi = Matrix::Zero(2, 2);
        pi(0, 0) = 0.6;
        pi(1, 1) = 0.4;
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 0.3;
        a(1, 1) = -0.3;
        const TangentVector ta(a, true);
        const TangentVector zero(Matrix::Zero(2, 2), true);
        const double eps = 1e-3;
        // classical oracle: H = D(p + eps a || p) and K = sum a_i^2 / p_i
        const double k_cl = a(0, 0).real() * a(0, 0).real() / 0.6 +
                            a(1, 1).real() * a(1, 1).real() / 0.4;
        RealVector p(2), pa(2);
        p << 0.6, 0.4;
        pa << 0.6 + eps * 0.3, 0.4 - eps * 0.3;
        const double h = relative_entropy(pa, p);
        const double residual_oracle = std::abs(h - 0.5 * eps * eps * k_cl);
        const double residual =
            local_expansion_residual(PsdMatrix(pi), ta, zero, g, eps);
        CHECK(std::abs(residual - residual_oracle) < 1e-13);
        CHECK(residual < 10.0 * eps * eps * eps);
    }
    SUBCASE("rejects non-traceless perturbations and oversized eps") {
        const DensityMatrix pi = well_mixed_density(2, 96);
        const TangentVector bad(Matrix::Identity(2, 2), false);
        const TangentVector good = random_tangent(2, 97, true);
        CHECK_THROWS_AS(local_expansion_residual(pi, bad, good, g, 1e-3), DomainError);
        CHECK_THROWS_AS(local_expansion_residual(pi, good, good, g, 50.0), DomainError);
    }
}

TEST_CASE("classical Fisher-Rao quadratic form") {
    RealVector p(2), dq(2);
    p << 0.5, 0.5;
    dq << 0.2, -0.2;
    CHECK(classical_fisher(p, dq) == doctest::Approx(4 * 0.2 * 0.2).epsilon(1e-14));
    dq.setZero();
    CHECK(classical_fisher(p, dq) == 0.0);
    dq << 0.2, 0.2;
    CHECK_THROWS_AS(classical_fisher(p, dq), DomainError);
}

TEST_CASE("relative entropy basics and Gibbs inequality") {
    RealVector p(2), q(2);
    p << 0.5, 0.5;
    CHECK(relative_entropy(p, p) == 0.0);
    p << 1.0, 0.0;
    q << 0.5, 0.5;
    CHECK(relative_entropy(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    q << 0.0, 1.0;
    CHECK_THROWS_AS(relative_entropy(p, q), DomainError);
    for (int rep = 0; rep < 1000; ++rep) {
        const RealVector a = random_simplex(4, derive_seed(101, 0, rep));
        const RealVector b = random_simplex(4, derive_seed(102, 0, rep));
        CHECK(relative_entropy(a, b) >= 0.0);
    }
}
