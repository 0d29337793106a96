#ifndef QIG_MONOTONE_HPP
#define QIG_MONOTONE_HPP

#include <optional>
#include <string>
#include <vector>

#include "qig/types.hpp"

namespace qig {

enum class GKind { NegLog, XLogX, Quadratic, PowerAlpha };

/// Matrix convex generator g with g(1) = 0. The catalog is trusted for
/// matrix convexity; scalar convexity is what the tests verify.
class ContrastGenerator {
public:
    static ContrastGenerator neg_log();
    static ContrastGenerator x_log_x();
    static ContrastGenerator quadratic();
    static ContrastGenerator power_alpha(double alpha);  // alpha in (0,1)
    static ContrastGenerator from_name(const std::string& name);

    GKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    std::string name() const;

    double eval(double x) const;
    /// g''(1), the curvature that sets the scale of the induced metric.
    double curvature() const;

private:
    ContrastGenerator(GKind kind, double alpha) : kind_(kind), alpha_(alpha) {}
    GKind kind_;
    double alpha_;
};

enum class FKind { Sld, Kmb, Wy, Rld, Harmonic, FromG };

/// Operator monotone function normalized to f(1) = 1 and satisfying the
/// symmetry f(x) = x f(1/x). Catalog:
///   sld       (1+x)/2
///   kmb       (x-1)/log x
///   wy        ((1+sqrt(x))/2)^2
///   rld       2x/(1+x)
///   harmonic  alias of rld (the harmonic-mean function)
/// plus FromG(g), the function induced by a contrast generator.
class MonotoneFunction {
public:
    static MonotoneFunction sld();
    static MonotoneFunction kmb();
    static MonotoneFunction wy();
    static MonotoneFunction rld();
    static MonotoneFunction harmonic();
    static MonotoneFunction from_g(ContrastGenerator g);
    /// Accepts a catalog f name, or a g name which resolves to FromG(g).
    static MonotoneFunction from_name(const std::string& name);

    FKind kind() const { return kind_; }
    std::string name() const;
    const std::optional<ContrastGenerator>& generator() const { return g_; }

    double eval(double x) const;

private:
    MonotoneFunction(FKind kind, std::optional<ContrastGenerator> g)
        : kind_(kind), g_(std::move(g)) {}
    FKind kind_;
    std::optional<ContrastGenerator> g_;
};

/// f(x) = (x-1)^2 / (g(x) + x g(1/x)), rescaled so f(1) = 1. Near x = 1 the
/// denominator is evaluated by series to avoid catastrophic cancellation.
double f_from_g(const ContrastGenerator& g, double x);

/// Max relative residual of f(x) - x f(1/x) over the grid.
double check_symmetry(const MonotoneFunction& f, const std::vector<double>& grid);

/// n logarithmically spaced points spanning [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

const std::vector<std::string>& monotone_catalog_names();
const std::vector<std::string>& contrast_catalog_names();

}  // namespace qig

#endif
