#include "qig/sampling.hpp"

#include <cmath>
#include <random>

namespace qig {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ (stream * 0xd1342543de82ef95ULL)) + index);
}

namespace {

Matrix ginibre(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix g(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            const double re = dist(gen);
            const double im = dist(gen);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

}  // namespace

DensityMatrix random_density(int d, std::uint64_t seed, int k) {
    if (d < 2) {
        throw DomainError("random_density: d must be >= 2");
    }
    if (k <= 0) {
        k = d;
    }
    const Matrix g = ginibre(d, k, seed);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

TangentVector random_tangent(int d, std::uint64_t seed, bool traceless) {
    const Matrix g = ginibre(d, d, seed);
    Matrix h = 0.5 * (g + g.adjoint());
    if (traceless) {
        h -= (h.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
    }
    const double norm = h.norm();
    if (norm > 0.0) {
        h /= norm;
    }
    return TangentVector(std::move(h), traceless);
}

Matrix random_unitary(int d, std::uint64_t seed) {
    const Matrix g = ginibre(d, d, seed);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the diagonal phases of R so Q is Haar distributed.
    for (int j = 0; j < d; ++j) {
        const Complex z = r(j, j);
        if (std::abs(z) > 0.0) {
            q.col(j) *= z / std::abs(z);
        }
    }
    return q;
}

Vector random_pure_state(int d, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector psi(d);
    for (int i = 0; i < d; ++i) {
        const double re = dist(gen);
        const double im = dist(gen);
        psi(i) = Complex(re, im);
    }
    psi /= psi.norm();
    return psi;
}

RealVector random_simplex(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::exponential_distribution<double> dist(1.0);
    RealVector p(n);
    for (int i = 0; i < n; ++i) {
        p(i) = dist(gen);
    }
    return p / p.sum();
}

RealVector random_simplex_tangent(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    RealVector dq(n);
    for (int i = 0; i < n; ++i) {
        dq(i) = dist(gen);
    }
    dq.array() -= dq.mean();
    const double norm = dq.norm();
    if (norm > 0.0) {
        dq /= norm;
    }
    return dq;
}

}  // namespace qig
