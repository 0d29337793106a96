#include "qig/monotone.hpp"

#include <cmath>

namespace qig {

namespace {

constexpr double kSeriesWindow = 1e-4;  // |x-1| below which series kick in

void require_positive(double x, const char* who) {
    if (!(x > 0.0)) {
        throw DomainError(std::string(who) + ": argument must be positive, got " +
                          std::to_string(x));
    }
}

// (x-1)/log x around x = 1, 4th order in u = x-1.
double kmb_series(double u) {
    return 1.0 + u * (0.5 + u * (-1.0 / 12.0 + u * (1.0 / 24.0 - u * 19.0 / 720.0)));
}

double kmb_eval(double x) {
    const double u = x - 1.0;
    if (std::abs(u) < kSeriesWindow) {
        return kmb_series(u);
    }
    return u / std::log(x);
}

double rld_eval(double x) { return 2.0 * x / (1.0 + x); }

// Generalized binomial coefficient C(gamma, k).
double gbinom(double gamma, int k) {
    double c = 1.0;
    for (int j = 0; j < k; ++j) {
        c *= (gamma - j) / (j + 1);
    }
    return c;
}

// g(x) + x g(1/x) for the power-alpha generator, as a series in u = x-1.
// The direct expression cancels O(1) terms down to O(u^2), so each Taylor
// term is summed individually:
// D = -(1/(a(1-a))) * sum_{k>=2} (C(a,k) + C(1-a,k)) u^k.
// The series converges for |u| < 1 and is used over a wider window than the
// other generators because the direct formula loses ~|u|^-2 digits here.
constexpr double kPowerSeriesWindow = 1e-2;

double power_alpha_denom_series(double alpha, double u) {
    double sum = 0.0;
    double uk = u * u;
    for (int k = 2; k <= 12; ++k) {
        sum += (gbinom(alpha, k) + gbinom(1.0 - alpha, k)) * uk;
        uk *= u;
    }
    return -sum / (alpha * (1.0 - alpha));
}

}  // namespace

ContrastGenerator ContrastGenerator::neg_log() { return {GKind::NegLog, 0.0}; }
ContrastGenerator ContrastGenerator::x_log_x() { return {GKind::XLogX, 0.0}; }
ContrastGenerator ContrastGenerator::quadratic() { return {GKind::Quadratic, 0.0}; }

ContrastGenerator ContrastGenerator::power_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("power_alpha: alpha must lie in (0,1), got " +
                          std::to_string(alpha));
    }
    return {GKind::PowerAlpha, alpha};
}

ContrastGenerator ContrastGenerator::from_name(const std::string& name) {
    if (name == "neglog") return neg_log();
    if (name == "xlogx") return x_log_x();
    if (name == "quadratic") return quadratic();
    const std::string prefix = "power_alpha:";
    if (name.rfind(prefix, 0) == 0) {
        return power_alpha(std::stod(name.substr(prefix.size())));
    }
    throw DomainError("unknown contrast generator '" + name +
                      "'; valid: neglog, xlogx, quadratic, power_alpha:<a>");
}

std::string ContrastGenerator::name() const {
    switch (kind_) {
        case GKind::NegLog: return "neglog";
        case GKind::XLogX: return "xlogx";
        case GKind::Quadratic: return "quadratic";
        case GKind::PowerAlpha: return "power_alpha:" + std::to_string(alpha_);
    }
    return "?";
}

double ContrastGenerator::eval(double x) const {
    require_positive(x, "ContrastGenerator::eval");
    switch (kind_) {
        case GKind::NegLog:
            return -std::log(x);
        case GKind::XLogX:
            return x * std::log(x);
        case GKind::Quadratic: {
            const double u = x - 1.0;
            return u * u;
        }
        case GKind::PowerAlpha:
            // affine-corrected alpha family: nonnegative, g(1) = 0, and the
            // affine part cancels out of g(x) + x g(1/x)
            return (1.0 - std::pow(x, alpha_) + alpha_ * (x - 1.0)) /
                   (alpha_ * (1.0 - alpha_));
    }
    return 0.0;
}

double ContrastGenerator::curvature() const {
    switch (kind_) {
        case GKind::NegLog: return 1.0;
        case GKind::XLogX: return 1.0;
        case GKind::Quadratic: return 2.0;
        case GKind::PowerAlpha: return 1.0;
    }
    return 1.0;
}

double f_from_g(const ContrastGenerator& g, double x) {
    require_positive(x, "f_from_g");
    const double u = x - 1.0;
    if (u == 0.0) {
        return 1.0;
    }
    // The generic denominator sums O(1) or O(u) terms that cancel to O(u^2),
    // so each kind switches to its series while the direct path still has
    // ~1e-16 / u^2 relative error; the window is sized per kind so the two
    // branches overlap at better than 1e-9.
    switch (g.kind()) {
        case GKind::NegLog:
        case GKind::XLogX:
            // shared denominator (x-1) log x
            if (std::abs(u) < 1e-3) {
                return kmb_series(u);
            }
            break;
        case GKind::Quadratic:
            if (std::abs(u) < kSeriesWindow) {
                return rld_eval(x);
            }
            break;
        case GKind::PowerAlpha:
            if (std::abs(u) < kPowerSeriesWindow) {
                return u * u / power_alpha_denom_series(g.alpha(), u) * g.curvature();
            }
            break;
    }
    const double denom = g.eval(x) + x * g.eval(1.0 / x);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
        throw DomainError("f_from_g: generator '" + g.name() +
                          "' has nonpositive denominator at x = " + std::to_string(x));
    }
    return u * u / denom * g.curvature();
}

MonotoneFunction MonotoneFunction::sld() { return {FKind::Sld, std::nullopt}; }
MonotoneFunction MonotoneFunction::kmb() { return {FKind::Kmb, std::nullopt}; }
MonotoneFunction MonotoneFunction::wy() { return {FKind::Wy, std::nullopt}; }
MonotoneFunction MonotoneFunction::rld() { return {FKind::Rld, std::nullopt}; }
MonotoneFunction MonotoneFunction::harmonic() { return {FKind::Harmonic, std::nullopt}; }

MonotoneFunction MonotoneFunction::from_g(ContrastGenerator g) {
    return {FKind::FromG, std::move(g)};
}

MonotoneFunction MonotoneFunction::from_name(const std::string& name) {
    if (name == "sld") return sld();
    if (name == "kmb") return kmb();
    if (name == "wy") return wy();
    if (name == "rld") return rld();
    if (name == "harmonic") return harmonic();
    const std::string prefix = "from_g:";
    const std::string gname = name.rfind(prefix, 0) == 0 ? name.substr(prefix.size()) : name;
    try {
        return from_g(ContrastGenerator::from_name(gname));
    } catch (const DomainError&) {
        throw DomainError("unknown monotone function '" + name +
                          "'; valid: sld, kmb, wy, rld, harmonic, or a contrast "
                          "generator name (neglog, xlogx, quadratic, power_alpha:<a>)");
    }
}

std::string MonotoneFunction::name() const {
    switch (kind_) {
        case FKind::Sld: return "sld";
        case FKind::Kmb: return "kmb";
        case FKind::Wy: return "wy";
        case FKind::Rld: return "rld";
        case FKind::Harmonic: return "harmonic";
        case FKind::FromG: return "from_g:" + g_->name();
    }
    return "?";
}

double MonotoneFunction::eval(double x) const {
    require_positive(x, "MonotoneFunction::eval");
    switch (kind_) {
        case FKind::Sld:
            return 0.5 * (1.0 + x);
        case FKind::Kmb:
            return kmb_eval(x);
        case FKind::Wy: {
            const double t = 0.5 * (1.0 + std::sqrt(x));
            return t * t;
        }
        case FKind::Rld:
        case FKind::Harmonic:
            return rld_eval(x);
        case FKind::FromG:
            return f_from_g(*g_, x);
    }
    return 0.0;
}

double check_symmetry(const MonotoneFunction& f, const std::vector<double>& grid) {
    double worst = 0.0;
    for (const double x : grid) {
        const double fx = f.eval(x);
        const double residual = std::abs(fx - x * f.eval(1.0 / x));
        worst = std::max(worst, residual / std::max(1.0, std::abs(fx)));
    }
    return worst;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw DomainError("log_grid: need 0 < lo < hi and n >= 2");
    }
    std::vector<double> grid(n);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < n; ++i) {
        grid[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    }
    return grid;
}

const std::vector<std::string>& monotone_catalog_names() {
    static const std::vector<std::string> names = {"sld", "kmb", "wy", "rld", "harmonic"};
    return names;
}

const std::vector<std::string>& contrast_catalog_names() {
    static const std::vector<std::string> names = {"neglog", "xlogx", "quadratic",
                                                   "power_alpha:0.5"};
    return names;
}

}  // namespace qig
