#ifndef QIG_CERTIFIER_HPP
#define QIG_CERTIFIER_HPP

#include <optional>
#include <vector>

#include "qig/geometry.hpp"
#include "qig/maps.hpp"

namespace qig {

/// Whether basepoints/tangents live on the state manifold (trace one,
/// traceless tangents) or in the full positive cone (general Hermitian
/// tangents, trace checks meaningful). The ancilla-lifted test always runs
/// in States mode.
enum class Mode { States, Psd };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);

struct CertConfig {
    MonotoneFunction f = MonotoneFunction::sld();
    long n_samples = 10000;
    std::uint64_t seed = 7;
    double ratio_tol = 1e-8;
    double eta0 = 0.1;
    int eta_levels = 20;  // schedule eta_k = eta0 * 2^-k for k = 0..eta_levels
    double bisection_tol = 1e-10;
    int ancilla_dim = 0;  // 0 = same as the map dimension
    Mode mode = Mode::Psd;
    Exec exec = Exec::OpenMp;
    int oracle_grid = 10000;
    int oracle_refine = 60;
    double contrast_eps = 1e-3;  // perturbation size in contrast witness mode
};

std::vector<double> eta_schedule(const CertConfig& config);

/// A concrete certificate of metric expansion: replaying both sides of the
/// contraction inequality from rho/drho/f reproduces ratio. eta, lambda_star
/// and psi are populated by the boundary-approach search and are NaN/empty
/// for witnesses found by plain sampling.
struct ExpansionWitness {
    Matrix rho;
    Matrix drho;
    std::string f_name;
    double ratio = 0.0;
    double eta = std::numeric_limits<double>::quiet_NaN();
    double lambda_star = std::numeric_limits<double>::quiet_NaN();
    Vector psi;
};

/// K_{f,Phi(rho)}(Phi(drho), Phi(drho)) / K_{f,rho}(drho, drho), or nullopt
/// when either basepoint is not interior (a skipped sample, not a violation).
std::optional<double> contraction_ratio(const LinearMapRep& map, const MonotoneFunction& f,
                                        const PsdMatrix& rho, const HermitianMatrix& drho);

/// Tangent direction used by the witness search: the adjoint map applied to
/// |psi><psi|, traceless-projected in States mode, unit Frobenius norm. This
/// maximizes <psi|Phi(drho)|psi> over unit tangents. Throws DegenerateAdjoint
/// when the direction collapses below 1e-12, which contradicts the existence
/// of an interior image point.
Matrix witness_tangent_direction(const LinearMapRep& map, const Vector& psi, Mode mode);

/// Recompute the ratio of a stored witness from scratch.
double replay_ratio(const LinearMapRep& map, const ExpansionWitness& w);

struct ContractionOutcome {
    bool violation = false;
    long n_effective = 0;
    long n_skipped = 0;
    std::optional<ExpansionWitness> witness;
};

/// Monte-Carlo contraction test over seeded (rho, drho) pairs. Returns the
/// lowest-index witness with ratio > 1 + ratio_tol, else the count of
/// non-skipped samples. Throws Condition1Violated if every sampled image
/// missed the interior.
ContractionOutcome sample_contraction_test(const LinearMapRep& map, const CertConfig& config);

struct EtaTracePoint {
    double eta;
    double lambda;
    double ratio;
};

struct WitnessSearchResult {
    bool found = false;
    std::optional<ExpansionWitness> witness;
    std::vector<EtaTracePoint> trace;
    double lambda_star = std::numeric_limits<double>::quiet_NaN();
    double slope = std::numeric_limits<double>::quiet_NaN();  // log ratio vs log eta
};

/// Constructive expansion-witness search along a segment from a well-mapped
/// interior point toward a state whose image leaves the positive cone:
/// bisect the boundary crossing, walk the eta schedule on the interior side,
/// and at each level take the tangent direction given by the adjoint map
/// applied to the bottom eigenprojector of the image. Returns the best
/// (largest-ratio) witness over the schedule together with the full
/// eta-to-ratio trace; found is false when the positivity oracle sees no
/// negative direction.
WitnessSearchResult witness_search(const LinearMapRep& map, const CertConfig& config,
                                   const std::vector<Vector>& positivity_hints = {});

struct TraceMonotonicity {
    bool trace_nonincreasing = true;
    double max_excess = 0.0;     // max Tr(Phi rho) - Tr rho over samples
    double max_route_gap = 0.0;  // |K_{f,Phi rho}(Phi rho, Phi rho) - Tr Phi rho|
    long n_samples = 0;
    long n_route_checked = 0;
};

/// Sampled check that Tr Phi(rho) <= Tr rho, plus the metric-identity route
/// K_{f,Phi(rho)}(Phi(rho), Phi(rho)) = Tr Phi(rho) on interior images.
TraceMonotonicity trace_monotonicity_check(const LinearMapRep& map, const CertConfig& config);

enum class Classification { Cptp, PtpNotCp, NonPositive, NotHp, TraceIncreasing };

std::string classification_name(Classification c);

struct ContractionSection {
    bool ran = false;
    bool clean = true;
    bool via_search = false;
    long n_effective = 0;
    long n_skipped = 0;
    std::optional<ExpansionWitness> witness;
    std::vector<EtaTracePoint> trace;
    double slope = std::numeric_limits<double>::quiet_NaN();
};

struct CertReport {
    bool hp = false;
    double hp_residual = 0.0;
    bool tp = false;
    double tp_residual = 0.0;
    ContractionSection base;
    ContractionSection lifted;
    TraceMonotonicity trace_check;
    OracleVerdict oracle;
    Classification classification = Classification::NotHp;
    int ancilla_used = 0;
    std::string f_name;
    Mode mode = Mode::Psd;
};

/// Full certification pipeline: HP check, base contraction (witness search
/// when the positivity oracle suspects a negative direction, sampling
/// otherwise), ancilla-lifted contraction, trace monotonicity, and the
/// classification those verdicts imply. The oracle evidence rides along for
/// cross-checking.
CertReport certify(const LinearMapRep& map, const CertConfig& config);

struct ContrastTracePoint {
    double eta;
    double eps;
    double h_before;
    double h_after;
};

struct ContrastOutcome {
    bool violation = false;
    long n_effective = 0;
    long n_skipped = 0;
    std::string g_name;
    std::optional<Matrix> rho;
    std::optional<Matrix> sigma;
    double h_before = std::numeric_limits<double>::quiet_NaN();
    double h_after = std::numeric_limits<double>::quiet_NaN();
    std::vector<ContrastTracePoint> trace;
};

/// Divergence monotonicity H_g(rho||sigma) >= H_g(Phi rho||Phi sigma).
/// Sampling mode draws state pairs; witness mode reuses the witness-search
/// geometry with sigma = rho_eta + eps * drho_eta, eps shrunk per level until
/// both perturbed states and their images stay interior.
ContrastOutcome contrast_contraction_test(const LinearMapRep& map, const ContrastGenerator& g,
                                          const CertConfig& config, bool witness_mode = false);

struct ClassicalWitness {
    RealVector p;
    RealVector dq;
    double ratio;
    double eta;
};

struct ClassicalReport {
    bool fisher_violation = false;
    bool entropy_violation = false;
    long n_effective = 0;
    long n_skipped = 0;
    double worst_fisher_ratio = 0.0;
    double worst_entropy_ratio = 0.0;
    std::optional<ClassicalWitness> witness;
    std::vector<EtaTracePoint> trace;
};

/// Simplex analogue of the quantum pipeline: Fisher-Rao and relative-entropy
/// contraction over sampled interior pairs, plus a boundary witness search
/// mirroring the quantum construction when the matrix has negative entries.
ClassicalReport classical_contraction_test(const StochasticMap& map, const CertConfig& config);

/// Least-squares slope of log(y) against log(x); NaN with fewer than two
/// usable points.
double fit_loglog_slope(const std::vector<std::pair<double, double>>& xy);

}  // namespace qig

#endif
