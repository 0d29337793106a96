#ifndef QIG_TYPES_HPP
#define QIG_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qig {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Tolerances used repo-wide. The PSD slack scales with the trace so that
// unnormalized positive matrices are judged on the same relative footing;
// the interior threshold is relative to the mean eigenvalue trace/dim.
struct Tolerances {
    double psd_scale = 1e-10;    // min eigenvalue >= -psd_scale * max(1, trace)
    double interior = 1e-8;      // interior <=> min eigenvalue > interior * trace / dim
    double hermitian = 1e-12;
    double trace_one = 1e-12;
};

// Process-wide tolerance set. Library defaults match the constants above;
// the CLI may override them from QIG_* environment variables before any
// work starts. Not synchronized: mutate only at startup.
Tolerances& tolerances();

inline double psd_slack(double trace) {
    return tolerances().psd_scale * std::max(1.0, trace);
}

inline double interior_threshold(double trace, int dim) {
    return tolerances().interior * trace / static_cast<double>(dim);
}

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

// Metric/divergence entry points refuse rank-deficient basepoints instead of
// returning huge values; the witness search controls boundary approach
// explicitly through its eta parameter.
struct SingularBasepoint : Error {
    SingularBasepoint(const std::string& what, double min_eig)
        : Error(what), min_eigenvalue(min_eig) {}
    double min_eigenvalue;
};

// Every sampled basepoint was mapped onto or outside the boundary, so the
// contraction property could not be probed even once.
struct Condition1Violated : Error {
    using Error::Error;
};

// The adjoint-map direction collapsed to zero. This cannot happen for a map
// with an interior fixed point, so it is reported as an inconsistency rather
// than silently skipped.
struct DegenerateAdjoint : Error {
    using Error::Error;
};

struct EigFailure : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace qig

#endif
