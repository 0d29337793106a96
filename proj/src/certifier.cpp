#include "qig/certifier.hpp"

#include <algorithm>
#include <cmath>

#include "qig/sampling.hpp"
#include "qig/superop.hpp"

namespace qig {

namespace {

constexpr std::uint64_t kRhoStream = 0x52484f31ULL;
constexpr std::uint64_t kTanStream = 0x54414e31ULL;
constexpr std::uint64_t kSigmaStream = 0x53494732ULL;
constexpr std::uint64_t kOracleStream = 0x4f524143ULL;
constexpr std::uint64_t kPiStream = 0x50492031ULL;
constexpr std::uint64_t kTraceStream = 0x54524143ULL;
constexpr std::uint64_t kLiftStream = 0x4c494654ULL;

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_hp(const LinearMapRep& map, const char* who) {
    const HpVerdict hp = is_hermitian_preserving(map);
    if (!hp.is_hp) {
        throw DomainError(std::string(who) + ": map is not Hermitian-preserving (residual " +
                          std::to_string(hp.residual) + ")");
    }
}

}  // namespace

Matrix witness_tangent_direction(const LinearMapRep& map, const Vector& psi, Mode mode) {
    const int d = map.dim();
    Matrix adj = symmetrize(map.apply_adjoint(psi * psi.adjoint()));
    if (mode == Mode::States) {
        adj -= (adj.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
    }
    const double norm = adj.norm();
    if (norm < 1e-12) {
        throw DegenerateAdjoint(
            "witness search: adjoint direction vanished; this contradicts the "
            "existence of an interior image point");
    }
    return adj / norm;
}

std::string mode_name(Mode m) { return m == Mode::States ? "states" : "psd"; }

Mode mode_from_name(const std::string& name) {
    if (name == "states") return Mode::States;
    if (name == "psd") return Mode::Psd;
    throw DomainError("unknown mode '" + name + "'; valid: states, psd");
}

std::vector<double> eta_schedule(const CertConfig& config) {
    if (!(config.eta0 > 0.0) || config.eta_levels < 0) {
        throw DomainError("eta_schedule: need eta0 > 0 and eta_levels >= 0");
    }
    std::vector<double> etas;
    etas.reserve(config.eta_levels + 1);
    double eta = config.eta0;
    for (int k = 0; k <= config.eta_levels; ++k) {
        etas.push_back(eta);
        eta *= 0.5;
    }
    return etas;
}

std::optional<double> contraction_ratio(const LinearMapRep& map, const MonotoneFunction& f,
                                        const PsdMatrix& rho, const HermitianMatrix& drho) {
    if (map.dim() != rho.dim() || map.dim() != drho.dim()) {
        throw DimensionError("contraction_ratio: dimension mismatch");
    }
    if (!rho.interior()) {
        return std::nullopt;
    }
    const Spectral image = eig_hermitian(map.apply(rho.mat()));
    if (!spectrum_interior(image.eigenvalues, map.dim())) {
        return std::nullopt;
    }
    const double den = fisher_quadratic_in_basis(rho.spectral(), drho.mat(), f);
    if (!(den > 0.0)) {
        return std::nullopt;
    }
    const Matrix image_tangent = symmetrize(map.apply(drho.mat()));
    const double num = fisher_quadratic_in_basis(image, image_tangent, f);
    return num / den;
}

double replay_ratio(const LinearMapRep& map, const ExpansionWitness& w) {
    const PsdMatrix rho(w.rho);
    const HermitianMatrix drho(w.drho);
    const MonotoneFunction f = MonotoneFunction::from_name(w.f_name);
    const auto ratio = contraction_ratio(map, f, rho, drho);
    if (!ratio) {
        throw SingularBasepoint("replay_ratio: stored basepoint is no longer interior",
                                rho.min_eigenvalue());
    }
    return *ratio;
}

ContractionOutcome sample_contraction_test(const LinearMapRep& map, const CertConfig& config) {
    require_hp(map, "sample_contraction_test");
    const int d = map.dim();
    const MonotoneFunction& f = config.f;
    const bool traceless = config.mode == Mode::States;

    auto sample_ratio = [&](std::int64_t i) -> std::optional<double> {
        const DensityMatrix rho =
            random_density(d, derive_seed(config.seed, kRhoStream, static_cast<std::uint64_t>(i)));
        const TangentVector drho = random_tangent(
            d, derive_seed(config.seed, kTanStream, static_cast<std::uint64_t>(i)), traceless);
        return contraction_ratio(map, f, rho, drho);
    };

    const ScanResult scan = chunked_scan(config.n_samples, config.exec, [&](std::int64_t i) {
        const auto ratio = sample_ratio(i);
        if (!ratio) {
            return 0;
        }
        return *ratio > 1.0 + config.ratio_tol ? 2 : 1;
    });

    ContractionOutcome outcome;
    if (scan.first_hit >= 0) {
        outcome.violation = true;
        const auto i = scan.first_hit;
        const DensityMatrix rho =
            random_density(d, derive_seed(config.seed, kRhoStream, static_cast<std::uint64_t>(i)));
        const TangentVector drho = random_tangent(
            d, derive_seed(config.seed, kTanStream, static_cast<std::uint64_t>(i)), traceless);
        ExpansionWitness w;
        w.rho = rho.mat();
        w.drho = drho.mat();
        w.f_name = f.name();
        w.ratio = *contraction_ratio(map, f, rho, drho);
        w.psi = eig_hermitian(map.apply(rho.mat())).eigenvectors.col(0);
        outcome.witness = std::move(w);
        outcome.n_effective = scan.clean + 1;
        outcome.n_skipped = scan.skipped;
        return outcome;
    }
    if (scan.clean == 0) {
        throw Condition1Violated("sample_contraction_test: all " +
                                 std::to_string(config.n_samples) +
                                 " sampled basepoints were mapped out of the interior");
    }
    outcome.n_effective = scan.clean;
    outcome.n_skipped = scan.skipped;
    return outcome;
}

namespace {

struct SegmentGeometry {
    bool found = false;
    Matrix pi;
    Matrix sigma;
    double lambda_star = std::numeric_limits<double>::quiet_NaN();
    double h_at_pi = 0.0;
    OracleVerdict oracle;
};

double image_min_eig_of(const LinearMapRep& map, const Matrix& x) {
    return eig_hermitian(map.apply(x)).eigenvalues(0);
}

// Steps (i)-(iii) of the constructive search: anchor point pi with interior
// image, interior sigma with negative-image direction from the positivity
// oracle, and the boundary crossing lambda* on the segment between them.
SegmentGeometry build_segment(const LinearMapRep& map, const CertConfig& config,
                              const std::vector<Vector>& hints) {
    const int d = map.dim();
    SegmentGeometry geo;

    Matrix pi = Matrix::Identity(d, d) / static_cast<double>(d);
    auto image_interior = [&](const Matrix& x) {
        const Spectral s = eig_hermitian(map.apply(x));
        return spectrum_interior(s.eigenvalues, d);
    };
    if (!image_interior(pi)) {
        bool ok = false;
        for (int attempt = 0; attempt < 512 && !ok; ++attempt) {
            const DensityMatrix cand = random_density(d, derive_seed(config.seed, kPiStream, attempt));
            if (cand.interior() && image_interior(cand.mat())) {
                pi = cand.mat();
                ok = true;
            }
        }
        if (!ok) {
            throw Condition1Violated(
                "witness_search: no interior point with interior image was found");
        }
    }
    geo.pi = pi;
    geo.h_at_pi = image_min_eig_of(map, pi);

    geo.oracle = positivity_oracle(map, config.oracle_grid, config.oracle_refine,
                                   derive_seed(config.seed, kOracleStream, 0), config.exec, hints);
    if (geo.oracle.worst_min_eig >= -psd_slack(1.0)) {
        return geo;  // no negative direction: nothing to build
    }

    const Matrix proj = geo.oracle.worst_state * geo.oracle.worst_state.adjoint();
    bool have_sigma = false;
    for (double mu = 1e-2; mu >= 1e-9; mu *= 0.1) {
        const Matrix cand = (1.0 - mu) * proj + mu * pi;
        if (image_min_eig_of(map, cand) < 0.25 * geo.oracle.worst_min_eig) {
            geo.sigma = cand;
            have_sigma = true;
            break;
        }
    }
    if (!have_sigma) {
        return geo;
    }

    auto h = [&](double lam) {
        const Matrix r = (1.0 - lam) * geo.pi + lam * geo.sigma;
        return image_min_eig_of(map, r);
    };
    double a = 0.0;
    double b = 1.0;
    while (b - a > config.bisection_tol) {
        const double mid = 0.5 * (a + b);
        (h(mid) > 0.0 ? a : b) = mid;
    }
    geo.lambda_star = 0.5 * (a + b);
    geo.found = true;
    return geo;
}

// Inner bisection: lambda on [0, lambda*) where the image min eigenvalue
// crosses the requested eta. Returns NaN when eta is not reachable.
double lambda_for_eta(const LinearMapRep& map, const SegmentGeometry& geo, double eta) {
    if (eta >= geo.h_at_pi) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    auto h = [&](double lam) {
        const Matrix r = (1.0 - lam) * geo.pi + lam * geo.sigma;
        return image_min_eig_of(map, r);
    };
    double lo = 0.0;
    double hi = geo.lambda_star;
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double hm = h(mid);
        if (std::abs(hm - eta) <= 1e-3 * eta) {
            return mid;
        }
        (hm > eta ? lo : hi) = mid;
    }
    return mid;
}

}  // namespace

WitnessSearchResult witness_search(const LinearMapRep& map, const CertConfig& config,
                                   const std::vector<Vector>& positivity_hints) {
    require_hp(map, "witness_search");
    const int d = map.dim();
    const MonotoneFunction& f = config.f;

    WitnessSearchResult result;
    const SegmentGeometry geo = build_segment(map, config, positivity_hints);
    if (!geo.found) {
        return result;  // NotFound: the oracle sees no negative direction
    }
    result.lambda_star = geo.lambda_star;

    double best_ratio = -std::numeric_limits<double>::infinity();
    ExpansionWitness best;
    for (const double eta : eta_schedule(config)) {
        const double lam = lambda_for_eta(map, geo, eta);
        if (!std::isfinite(lam)) {
            continue;
        }
        const PsdMatrix rho_eta(Matrix((1.0 - lam) * geo.pi + lam * geo.sigma));
        if (!rho_eta.interior()) {
            continue;
        }
        const Spectral image = eig_hermitian(map.apply(rho_eta.mat()));
        const double eta_actual = image.eigenvalues(0);
        if (!spectrum_interior(image.eigenvalues, d)) {
            continue;  // schedule went deeper than the interior guard allows
        }
        const Vector psi = image.eigenvectors.col(0);
        const Matrix drho = witness_tangent_direction(map, psi, config.mode);
        const double den = fisher_quadratic_in_basis(rho_eta.spectral(), drho, f);
        if (!(den > 0.0)) {
            continue;
        }
        const double num = fisher_quadratic_in_basis(image, symmetrize(map.apply(drho)), f);
        const double ratio = num / den;
        result.trace.push_back({eta_actual, lam, ratio});
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best.rho = rho_eta.mat();
            best.drho = drho;
            best.f_name = f.name();
            best.ratio = ratio;
            best.eta = eta_actual;
            best.lambda_star = geo.lambda_star;
            best.psi = psi;
        }
    }

    std::vector<std::pair<double, double>> xy;
    xy.reserve(result.trace.size());
    for (const auto& pt : result.trace) {
        xy.emplace_back(pt.eta, pt.ratio);
    }
    result.slope = fit_loglog_slope(xy);
    if (best_ratio > 1.0 + config.ratio_tol) {
        result.found = true;
        result.witness = std::move(best);
    }
    return result;
}

TraceMonotonicity trace_monotonicity_check(const LinearMapRep& map, const CertConfig& config) {
    require_hp(map, "trace_monotonicity_check");
    const int d = map.dim();
    const MonotoneFunction& f = config.f;
    const long n = std::min<long>(config.n_samples, 200);

    std::vector<double> excess(n, 0.0);
    std::vector<double> gap(n, 0.0);
    std::vector<char> route(n, 0);
    parallel_for(n, config.exec, [&](std::int64_t i) {
        const DensityMatrix rho =
            random_density(d, derive_seed(config.seed, kTraceStream, static_cast<std::uint64_t>(i)));
        const Matrix y = symmetrize(map.apply(rho.mat()));
        const double tr_out = y.trace().real();
        excess[i] = tr_out - rho.trace();
        const Spectral sy = eig_hermitian(y);
        if (spectrum_interior(sy.eigenvalues, d)) {
            gap[i] = std::abs(fisher_quadratic_in_basis(sy, y, f) - tr_out);
            route[i] = 1;
        }
    });

    TraceMonotonicity out;
    out.n_samples = n;
    out.max_excess = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < n; ++i) {
        out.max_excess = std::max(out.max_excess, excess[i]);
        if (route[i]) {
            out.max_route_gap = std::max(out.max_route_gap, gap[i]);
            ++out.n_route_checked;
        }
    }
    out.trace_nonincreasing = out.max_excess <= 1e-10;
    return out;
}

namespace {

ContractionSection section_from_sampling(const ContractionOutcome& o) {
    ContractionSection s;
    s.ran = true;
    s.clean = !o.violation;
    s.via_search = false;
    s.n_effective = o.n_effective;
    s.n_skipped = o.n_skipped;
    s.witness = o.witness;
    return s;
}

ContractionSection section_from_search(const WitnessSearchResult& r) {
    ContractionSection s;
    s.ran = true;
    s.clean = !r.found;
    s.via_search = true;
    s.witness = r.witness;
    s.trace = r.trace;
    s.slope = r.slope;
    return s;
}

Vector maximally_entangled(int d, int d_anc) {
    const int m = std::min(d, d_anc);
    Vector omega = Vector::Zero(d * d_anc);
    for (int i = 0; i < m; ++i) {
        omega(i * d_anc + i) = 1.0;
    }
    return omega / omega.norm();
}

}  // namespace

std::string classification_name(Classification c) {
    switch (c) {
        case Classification::Cptp: return "CPTP";
        case Classification::PtpNotCp: return "PTP-not-CP";
        case Classification::NonPositive: return "NonPositive";
        case Classification::NotHp: return "NotHP";
        case Classification::TraceIncreasing: return "TraceIncreasing";
    }
    return "?";
}

CertReport certify(const LinearMapRep& map, const CertConfig& config) {
    CertReport report;
    report.f_name = config.f.name();
    report.mode = config.mode;

    const HpVerdict hp = is_hermitian_preserving(map);
    report.hp = hp.is_hp;
    report.hp_residual = hp.residual;
    const TpVerdict tp = is_tp(map);
    report.tp = tp.is_tp;
    report.tp_residual = tp.residual;
    if (!report.hp) {
        report.oracle = cp_oracle(map);
        report.classification = Classification::NotHp;
        return report;
    }

    const int d = map.dim();
    report.oracle = positivity_oracle(map, config.oracle_grid, config.oracle_refine,
                                      derive_seed(config.seed, kOracleStream, 1), config.exec);

    // Base contraction: the oracle gates the expensive constructive search.
    if (!report.oracle.is_positive) {
        report.base = section_from_search(witness_search(map, config));
        if (report.base.clean) {
            report.base = section_from_sampling(sample_contraction_test(map, config));
            report.base.via_search = true;
        }
    } else {
        report.base = section_from_sampling(sample_contraction_test(map, config));
    }

    // Lifted contraction on map (x) identity, state-manifold mode.
    const int anc = config.ancilla_dim > 0 ? config.ancilla_dim : d;
    report.ancilla_used = anc;
    const LinearMapRep lifted = tensor_identity(map, anc);
    CertConfig lifted_config = config;
    lifted_config.mode = Mode::States;
    lifted_config.seed = derive_seed(config.seed, kLiftStream, 0);
    if (!report.oracle.is_cp) {
        std::vector<Vector> hints = {maximally_entangled(d, anc)};
        if (report.oracle.worst_state.size() == d) {
            Vector e0 = Vector::Zero(anc);
            e0(0) = 1.0;
            hints.push_back(Vector(kron(report.oracle.worst_state, e0).col(0)));
        }
        report.lifted = section_from_search(witness_search(lifted, lifted_config, hints));
        if (report.lifted.clean) {
            report.lifted = section_from_sampling(sample_contraction_test(lifted, lifted_config));
            report.lifted.via_search = true;
        }
    } else {
        report.lifted = section_from_sampling(sample_contraction_test(lifted, lifted_config));
    }

    report.trace_check = trace_monotonicity_check(map, config);

    if (!report.trace_check.trace_nonincreasing) {
        report.classification = Classification::TraceIncreasing;
    } else if (!report.base.clean) {
        report.classification = Classification::NonPositive;
    } else if (!report.lifted.clean) {
        report.classification = Classification::PtpNotCp;
    } else {
        report.classification = Classification::Cptp;
    }
    return report;
}

ContrastOutcome contrast_contraction_test(const LinearMapRep& map, const ContrastGenerator& g,
                                          const CertConfig& config, bool witness_mode) {
    require_hp(map, "contrast_contraction_test");
    const int d = map.dim();
    ContrastOutcome outcome;
    outcome.g_name = g.name();

    if (!witness_mode) {
        struct PairEval {
            int status;  // 0 skipped, 1 clean, 2 violation
            double h_before, h_after;
        };
        auto eval_pair = [&](std::int64_t i) -> PairEval {
            const DensityMatrix rho =
                random_density(d, derive_seed(config.seed, kRhoStream, static_cast<std::uint64_t>(i)));
            const DensityMatrix sigma =
                random_density(d, derive_seed(config.seed, kSigmaStream, static_cast<std::uint64_t>(i)));
            if (!rho.interior() || !sigma.interior()) {
                return {0, 0, 0};
            }
            try {
                const PsdMatrix img_rho(symmetrize(map.apply(rho.mat())));
                const PsdMatrix img_sigma(symmetrize(map.apply(sigma.mat())));
                if (!img_rho.interior() || !img_sigma.interior()) {
                    return {0, 0, 0};
                }
                const double before = contrast_eval(rho, sigma, g).value;
                const double after = contrast_eval(img_rho, img_sigma, g).value;
                const bool violation =
                    after > before + config.ratio_tol * std::max(1.0, std::abs(before));
                return {violation ? 2 : 1, before, after};
            } catch (const DomainError&) {
                return {0, 0, 0};  // image left the PSD cone: skipped, not a violation
            }
        };

        const ScanResult scan = chunked_scan(config.n_samples, config.exec,
                                             [&](std::int64_t i) { return eval_pair(i).status; });
        if (scan.first_hit >= 0) {
            const PairEval hit = eval_pair(scan.first_hit);
            outcome.violation = true;
            outcome.h_before = hit.h_before;
            outcome.h_after = hit.h_after;
            outcome.rho = random_density(d, derive_seed(config.seed, kRhoStream,
                                                        static_cast<std::uint64_t>(scan.first_hit)))
                              .mat();
            outcome.sigma = random_density(d, derive_seed(config.seed, kSigmaStream,
                                                          static_cast<std::uint64_t>(scan.first_hit)))
                                .mat();
            outcome.n_effective = scan.clean + 1;
            outcome.n_skipped = scan.skipped;
            return outcome;
        }
        if (scan.clean == 0) {
            throw Condition1Violated("contrast_contraction_test: every sampled pair was skipped");
        }
        outcome.n_effective = scan.clean;
        outcome.n_skipped = scan.skipped;
        return outcome;
    }

    // Witness mode: walk the same segment geometry as the metric search and
    // perturb along the adjoint direction, sign-fixed so the image eigenvalue
    // at psi grows and the perturbed image stays interior for small eps.
    const SegmentGeometry geo = build_segment(map, config, {});
    if (!geo.found) {
        return outcome;
    }
    double best_gain = -std::numeric_limits<double>::infinity();
    for (const double eta : eta_schedule(config)) {
        const double lam = lambda_for_eta(map, geo, eta);
        if (!std::isfinite(lam)) {
            continue;
        }
        const PsdMatrix rho_eta(Matrix((1.0 - lam) * geo.pi + lam * geo.sigma));
        const Spectral image = eig_hermitian(map.apply(rho_eta.mat()));
        if (!rho_eta.interior() || !spectrum_interior(image.eigenvalues, d)) {
            continue;
        }
        const Vector psi = image.eigenvectors.col(0);
        Matrix drho = witness_tangent_direction(map, psi, config.mode);
        const double overlap = (psi.adjoint() * map.apply(drho) * psi)(0, 0).real();
        if (overlap < 0.0) {
            drho = -drho;
        }
        double eps = config.contrast_eps;
        for (int attempt = 0; attempt < 8; ++attempt, eps *= 0.5) {
            try {
                const PsdMatrix sigma_q(Matrix(rho_eta.mat() + eps * drho));
                const PsdMatrix img_rho(symmetrize(map.apply(rho_eta.mat())));
                const PsdMatrix img_sigma(symmetrize(map.apply(sigma_q.mat())));
                if (!sigma_q.interior() || !img_sigma.interior()) {
                    continue;
                }
                const double before = contrast_eval(rho_eta, sigma_q, g).value;
                const double after = contrast_eval(img_rho, img_sigma, g).value;
                outcome.trace.push_back({image.eigenvalues(0), eps, before, after});
                const double gain = after - before;
                if (gain > config.ratio_tol * std::max(1.0, std::abs(before))) {
                    outcome.violation = true;
                    if (gain > best_gain) {
                        best_gain = gain;
                        outcome.rho = rho_eta.mat();
                        outcome.sigma = sigma_q.mat();
                        outcome.h_before = before;
                        outcome.h_after = after;
                    }
                }
                break;
            } catch (const DomainError&) {
                // eps pushed something out of the cone: halve and retry
            }
        }
    }
    return outcome;
}

namespace {

double raw_fisher_quadratic(const RealVector& p, const RealVector& dq) {
    return (dq.array().square() / p.array()).sum();
}

}  // namespace

ClassicalReport classical_contraction_test(const StochasticMap& map, const CertConfig& config) {
    const int n = map.dim();
    const RealMatrix& t = map.matrix();
    ClassicalReport report;

    const long n_samples = config.n_samples;
    std::vector<double> fisher_ratio(n_samples, 0.0);
    std::vector<double> entropy_ratio(n_samples, 0.0);
    std::vector<char> status(n_samples, 0);
    const double floor = tolerances().interior / n;
    parallel_for(n_samples, config.exec, [&](std::int64_t i) {
        const RealVector p = random_simplex(n, derive_seed(config.seed, kRhoStream, i));
        const RealVector q = random_simplex(n, derive_seed(config.seed, kSigmaStream, i));
        const RealVector dq = random_simplex_tangent(n, derive_seed(config.seed, kTanStream, i));
        const RealVector tp = t * p;
        const RealVector tq = t * q;
        if (tp.minCoeff() <= floor || tq.minCoeff() <= floor) {
            return;
        }
        const double den_f = raw_fisher_quadratic(p, dq);
        const double den_e = relative_entropy(p, q);
        if (!(den_f > 0.0) || !(den_e > 1e-12)) {
            return;
        }
        fisher_ratio[i] = raw_fisher_quadratic(tp, t * dq) / den_f;
        entropy_ratio[i] = relative_entropy(tp, tq) / den_e;
        status[i] = 1;
    });
    for (long i = 0; i < n_samples; ++i) {
        if (!status[i]) {
            ++report.n_skipped;
            continue;
        }
        ++report.n_effective;
        report.worst_fisher_ratio = std::max(report.worst_fisher_ratio, fisher_ratio[i]);
        report.worst_entropy_ratio = std::max(report.worst_entropy_ratio, entropy_ratio[i]);
    }
    report.fisher_violation = report.worst_fisher_ratio > 1.0 + config.ratio_tol;
    report.entropy_violation = report.worst_entropy_ratio > 1.0 + config.ratio_tol;

    // Boundary witness search, mirroring the quantum construction on the
    // simplex, when the matrix has a genuinely negative entry.
    if (map.min_entry() < -1e-12) {
        const RealVector pi = RealVector::Constant(n, 1.0 / n);
        if ((t * pi).minCoeff() > 0.0) {
            int worst_col = 0;
            double worst_val = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                const double v = t.col(j).minCoeff();
                if (v < worst_val) {
                    worst_val = v;
                    worst_col = j;
                }
            }
            RealVector sigma = RealVector::Zero(n);
            sigma(worst_col) = 1.0;
            for (double mu = 1e-2; mu >= 1e-9; mu *= 0.1) {
                const RealVector cand = (1.0 - mu) * sigma + mu * pi;
                if ((t * cand).minCoeff() < 0.25 * worst_val) {
                    sigma = cand;
                    break;
                }
            }
            auto h = [&](double lam) { return (t * ((1.0 - lam) * pi + lam * sigma)).minCoeff(); };
            if (h(1.0) < 0.0) {
                double a = 0.0;
                double b = 1.0;
                while (b - a > config.bisection_tol) {
                    const double mid = 0.5 * (a + b);
                    (h(mid) > 0.0 ? a : b) = mid;
                }
                const double h0 = h(0.0);
                double best_ratio = -std::numeric_limits<double>::infinity();
                for (const double eta : eta_schedule(config)) {
                    if (eta >= h0) {
                        continue;
                    }
                    double lo = 0.0;
                    double hi = a;
                    double lam = 0.5 * (lo + hi);
                    for (int iter = 0; iter < 200; ++iter) {
                        lam = 0.5 * (lo + hi);
                        const double hm = h(lam);
                        if (std::abs(hm - eta) <= 1e-3 * eta) {
                            break;
                        }
                        (hm > eta ? lo : hi) = lam;
                    }
                    const RealVector p_eta = (1.0 - lam) * pi + lam * sigma;
                    const RealVector image = t * p_eta;
                    int i_star = 0;
                    image.minCoeff(&i_star);
                    if (image(i_star) <= 0.0) {
                        continue;
                    }
                    RealVector dq = t.row(i_star).transpose();
                    dq.array() -= dq.mean();
                    const double norm = dq.norm();
                    if (norm < 1e-12) {
                        continue;
                    }
                    dq /= norm;
                    const double ratio =
                        raw_fisher_quadratic(image, t * dq) / raw_fisher_quadratic(p_eta, dq);
                    report.trace.push_back({image(i_star), lam, ratio});
                    if (ratio > best_ratio) {
                        best_ratio = ratio;
                        report.witness = ClassicalWitness{p_eta, dq, ratio, image(i_star)};
                    }
                }
                if (report.witness && best_ratio > 1.0 + config.ratio_tol) {
                    report.fisher_violation = true;
                } else {
                    report.witness.reset();
                }
            }
        }
    }
    return report;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& xy) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long n = 0;
    for (const auto& [x, y] : xy) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
            continue;
        }
        const double lx = std::log(x);
        const double ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double var = sxx - sx * sx / n;
    if (!(var > 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return (sxy - sx * sy / n) / var;
}

}  // namespace qig
