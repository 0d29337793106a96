#ifndef QIG_MAPS_HPP
#define QIG_MAPS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qig/hermitian.hpp"
#include "qig/parallel.hpp"

namespace qig {

enum class MapRepr { Kraus, Transfer, Choi };

/// Kraus form with optional real weights; weights of +-1 come out of the
/// eigendecomposition of a Hermitian (not necessarily positive) Choi matrix,
/// so Hermitian-preserving non-CP maps are representable too. Empty weights
/// mean all ones.
struct KrausRep {
    std::vector<Matrix> ops;
    std::vector<double> weights;
};

/// A Hermitian-preserving (or at least Hermitian-testable) linear map on
/// d x d matrices. The transfer matrix is the canonical representation; a
/// Kraus form is kept when the map was built from one. Conversions all flow
/// through the global column-stacking convention and the Choi block rule
/// block(i, j) = map(E_ij).
class LinearMapRep {
public:
    static LinearMapRep from_kraus(std::vector<Matrix> ops, std::vector<double> weights = {});
    static LinearMapRep from_transfer(Matrix t);
    static LinearMapRep from_choi(const Matrix& c);

    int dim() const { return dim_; }
    MapRepr source_repr() const { return source_; }
    const Matrix& transfer() const { return transfer_; }
    const std::optional<KrausRep>& kraus() const { return kraus_; }
    Matrix choi() const;

    Matrix apply(const Matrix& x) const;
    /// Adjoint with respect to the Hilbert-Schmidt inner product.
    Matrix apply_adjoint(const Matrix& x) const;

private:
    LinearMapRep(int dim, MapRepr source, Matrix transfer, std::optional<KrausRep> kraus)
        : dim_(dim), source_(source), transfer_(std::move(transfer)), kraus_(std::move(kraus)) {}

    int dim_;
    MapRepr source_;
    Matrix transfer_;
    std::optional<KrausRep> kraus_;
};

Matrix transfer_to_choi(const Matrix& t);
Matrix choi_to_transfer(const Matrix& c);
/// Spectral Kraus decomposition of a Hermitian Choi matrix; eigenvalue
/// components below 1e-12 are dropped.
KrausRep choi_to_kraus(const Matrix& c);

/// map (x) identity on a d * d_anc dimensional system, system factor first.
LinearMapRep tensor_identity(const LinearMapRep& m, int d_anc);

LinearMapRep scale_map(const LinearMapRep& m, double c);
LinearMapRep convex_mixture(const std::vector<LinearMapRep>& maps,
                            const std::vector<double>& weights);

struct TpVerdict {
    bool is_tp;
    double residual;
};
TpVerdict is_tp(const LinearMapRep& m);

struct HpVerdict {
    bool is_hp;
    double residual;
};
HpVerdict is_hermitian_preserving(const LinearMapRep& m);

struct OracleVerdict {
    bool is_cp = false;
    bool is_positive = false;
    bool is_tp = false;
    bool is_hp = false;
    double min_choi_eig = 0.0;
    double tp_residual = 0.0;
    double hp_residual = 0.0;
    /// Sampling evidence: worst pure state found and its image min eigenvalue.
    double worst_min_eig = 0.0;
    Vector worst_state;
    long n_samples = 0;
};

/// Structural oracle: CP iff the Choi matrix is PSD within tolerance.
/// is_positive is set to is_cp (the implication CP => P), never to a claim
/// about non-CP maps; positivity_oracle refines it by sampling.
OracleVerdict cp_oracle(const LinearMapRep& m);

/// Heuristic positivity oracle: minimize lambda_min(map(|psi><psi|)) over
/// seeded random pure states plus coordinate descent on the sphere.
/// extra_candidates are evaluated first and win ties, so callers can inject
/// analytically promising states (the lifted search injects the maximally
/// entangled one). Deterministic per seed for any thread count.
OracleVerdict positivity_oracle(const LinearMapRep& m, int n_grid, int n_refine,
                                std::uint64_t seed, Exec exec = Exec::OpenMp,
                                const std::vector<Vector>& extra_candidates = {});

/// Classical column-stochastic map candidate; the flag records whether the
/// matrix actually is stochastic.
class StochasticMap {
public:
    explicit StochasticMap(RealMatrix t);

    int dim() const { return static_cast<int>(t_.rows()); }
    const RealMatrix& matrix() const { return t_; }
    bool stochastic() const { return stochastic_; }
    double column_sum_residual() const { return column_residual_; }
    double min_entry() const { return t_.minCoeff(); }

private:
    RealMatrix t_;
    bool stochastic_;
    double column_residual_;
};

RealVector stochastic_apply(const StochasticMap& t, const RealVector& p);

// ---------------------------------------------------------------------------
// Catalog. Maps are addressable as "name?key=value&key=value", e.g.
// "depolarizing?p=1.5&d=3". Defaults: d=2, seed=1.

struct CatalogSpec {
    std::string name;
    std::map<std::string, double> params;
};
CatalogSpec parse_catalog_spec(const std::string& spec);

bool is_classical_catalog_name(const std::string& name);
LinearMapRep catalog_map(const std::string& spec);
StochasticMap catalog_stochastic(const std::string& spec);
const std::vector<std::string>& catalog_names();

// Direct constructors backing the catalog.
LinearMapRep identity_map(int d);
LinearMapRep unitary_map(const Matrix& u);
LinearMapRep transpose_map(int d);
LinearMapRep depolarizing_map(int d, double p);
LinearMapRep dephasing_map(int d, double lambda);
LinearMapRep amplitude_damping_map(double gamma);
LinearMapRep scalar_map(int d, double c);
LinearMapRep random_cptp_map(int d, int k, std::uint64_t seed);
LinearMapRep mixed_unitary_map(int d, int k, std::uint64_t seed);
LinearMapRep reset_map(int d);

StochasticMap random_stochastic(int n, std::uint64_t seed);
StochasticMap permutation_map(int n, std::uint64_t seed);
StochasticMap uniform_mixer(int n);
StochasticMap perturbed_stochastic(int n, std::uint64_t seed, double entry);

}  // namespace qig

#endif
