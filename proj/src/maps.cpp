#include "qig/maps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qig/sampling.hpp"
#include "qig/superop.hpp"

namespace qig {

namespace {

constexpr double kStructuralTol = 1e-10;
constexpr double kKrausCutoff = 1e-12;

Matrix kraus_to_transfer(const std::vector<Matrix>& ops, const std::vector<double>& weights) {
    const auto d = ops.front().rows();
    Matrix t = Matrix::Zero(d * d, d * d);
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const double w = weights.empty() ? 1.0 : weights[k];
        t += w * kron(ops[k].conjugate(), ops[k]);
    }
    return t;
}

}  // namespace

LinearMapRep LinearMapRep::from_kraus(std::vector<Matrix> ops, std::vector<double> weights) {
    if (ops.empty()) {
        throw DimensionError("from_kraus: need at least one operator");
    }
    const auto d = ops.front().rows();
    for (const auto& k : ops) {
        if (k.rows() != d || k.cols() != d) {
            throw DimensionError("from_kraus: operators must be square with equal dims");
        }
    }
    if (!weights.empty() && weights.size() != ops.size()) {
        throw DimensionError("from_kraus: weights/operators count mismatch");
    }
    Matrix t = kraus_to_transfer(ops, weights);
    return LinearMapRep(static_cast<int>(d), MapRepr::Kraus, std::move(t),
                        KrausRep{std::move(ops), std::move(weights)});
}

LinearMapRep LinearMapRep::from_transfer(Matrix t) {
    const auto n = t.rows();
    if (n != t.cols()) {
        throw DimensionError("from_transfer: matrix is not square");
    }
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
    if (d * d != n) {
        throw DimensionError("from_transfer: side " + std::to_string(n) +
                             " is not a perfect square");
    }
    return LinearMapRep(static_cast<int>(d), MapRepr::Transfer, std::move(t), std::nullopt);
}

LinearMapRep LinearMapRep::from_choi(const Matrix& c) {
    const double herm_residual = (c - c.adjoint()).norm();
    if (herm_residual > kStructuralTol * std::max(1.0, c.norm())) {
        throw DomainError("from_choi: Choi matrix is not Hermitian (residual " +
                          std::to_string(herm_residual) + ")");
    }
    Matrix t = choi_to_transfer(0.5 * (c + c.adjoint()));
    const auto d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(t.rows()))));
    return LinearMapRep(d, MapRepr::Choi, std::move(t), std::nullopt);
}

Matrix LinearMapRep::choi() const {
    return transfer_to_choi(transfer_);
}

Matrix LinearMapRep::apply(const Matrix& x) const {
    if (x.rows() != dim_ || x.cols() != dim_) {
        throw DimensionError("apply: input dimension mismatch");
    }
    if (kraus_) {
        Matrix y = Matrix::Zero(dim_, dim_);
        for (std::size_t k = 0; k < kraus_->ops.size(); ++k) {
            const double w = kraus_->weights.empty() ? 1.0 : kraus_->weights[k];
            y += w * kraus_->ops[k] * x * kraus_->ops[k].adjoint();
        }
        return y;
    }
    return devectorize(transfer_ * vectorize(x));
}

Matrix LinearMapRep::apply_adjoint(const Matrix& x) const {
    if (x.rows() != dim_ || x.cols() != dim_) {
        throw DimensionError("apply_adjoint: input dimension mismatch");
    }
    if (kraus_) {
        Matrix y = Matrix::Zero(dim_, dim_);
        for (std::size_t k = 0; k < kraus_->ops.size(); ++k) {
            const double w = kraus_->weights.empty() ? 1.0 : kraus_->weights[k];
            y += w * kraus_->ops[k].adjoint() * x * kraus_->ops[k];
        }
        return y;
    }
    return devectorize(transfer_.adjoint() * vectorize(x));
}

Matrix transfer_to_choi(const Matrix& t) {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(t.rows()))));
    Matrix c(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            // column (j*d + i) of the transfer matrix is vec(map(E_ij))
            const Matrix phi_eij = devectorize(t.col(j * d + i));
            c.block(i * d, j * d, d, d) = phi_eij;
        }
    }
    return c;
}

Matrix choi_to_transfer(const Matrix& c) {
    const auto n = c.rows();
    if (n != c.cols()) {
        throw DimensionError("choi_to_transfer: matrix is not square");
    }
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
    if (d * d != n) {
        throw DimensionError("choi_to_transfer: side is not a perfect square");
    }
    Matrix t(n, n);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            t.col(j * d + i) = vectorize(Matrix(c.block(i * d, j * d, d, d)));
        }
    }
    return t;
}

KrausRep choi_to_kraus(const Matrix& c) {
    const Spectral s = eig_hermitian(c);
    const auto n = c.rows();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
    KrausRep rep;
    bool any_negative = false;
    for (Eigen::Index m = 0; m < n; ++m) {
        const double mu = s.eigenvalues(m);
        if (std::abs(mu) < kKrausCutoff) {
            continue;
        }
        // Choi vector with index (i, a) = i*d + a maps to K(a, i).
        Matrix k(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index a = 0; a < d; ++a) {
                k(a, i) = s.eigenvectors(i * d + a, m);
            }
        }
        rep.ops.push_back(std::sqrt(std::abs(mu)) * k);
        rep.weights.push_back(mu >= 0.0 ? 1.0 : -1.0);
        any_negative = any_negative || mu < 0.0;
    }
    if (!any_negative) {
        rep.weights.clear();
    }
    if (rep.ops.empty()) {
        rep.ops.push_back(Matrix::Zero(d, d));
    }
    return rep;
}

LinearMapRep tensor_identity(const LinearMapRep& m, int d_anc) {
    if (d_anc < 1) {
        throw DimensionError("tensor_identity: ancilla dimension must be >= 1");
    }
    if (d_anc == 1) {
        return m;
    }
    const int d = m.dim();
    if (m.kraus()) {
        std::vector<Matrix> lifted;
        lifted.reserve(m.kraus()->ops.size());
        const Matrix eye = Matrix::Identity(d_anc, d_anc);
        for (const auto& k : m.kraus()->ops) {
            lifted.push_back(kron(k, eye));
        }
        return LinearMapRep::from_kraus(std::move(lifted), m.kraus()->weights);
    }
    const int dd = d * d_anc;
    const Matrix& t = m.transfer();
    Matrix lifted = Matrix::Zero(dd * dd, dd * dd);
    // (map x id)(X)[(s,a),(s',a')] = sum_{t,t'} map(E_tt')[s,s'] X[(t,a),(t',a')]
    for (int s = 0; s < d; ++s) {
        for (int sp = 0; sp < d; ++sp) {
            for (int u = 0; u < d; ++u) {
                for (int up = 0; up < d; ++up) {
                    const Complex coeff = t(sp * d + s, up * d + u);
                    if (coeff == Complex(0, 0)) {
                        continue;
                    }
                    for (int a = 0; a < d_anc; ++a) {
                        for (int ap = 0; ap < d_anc; ++ap) {
                            const int row = (sp * d_anc + ap) * dd + (s * d_anc + a);
                            const int col = (up * d_anc + ap) * dd + (u * d_anc + a);
                            lifted(row, col) = coeff;
                        }
                    }
                }
            }
        }
    }
    return LinearMapRep::from_transfer(std::move(lifted));
}

LinearMapRep scale_map(const LinearMapRep& m, double c) {
    if (c < 0.0) {
        throw DomainError("scale_map: scale must be nonnegative");
    }
    if (m.kraus()) {
        std::vector<Matrix> ops;
        ops.reserve(m.kraus()->ops.size());
        const double root = std::sqrt(c);
        for (const auto& k : m.kraus()->ops) {
            ops.push_back(root * k);
        }
        return LinearMapRep::from_kraus(std::move(ops), m.kraus()->weights);
    }
    return LinearMapRep::from_transfer(c * m.transfer());
}

LinearMapRep convex_mixture(const std::vector<LinearMapRep>& maps,
                            const std::vector<double>& weights) {
    if (maps.empty() || maps.size() != weights.size()) {
        throw DimensionError("convex_mixture: need matching nonempty maps/weights");
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12 ||
        std::any_of(weights.begin(), weights.end(), [](double w) { return w < 0.0; })) {
        throw DomainError("convex_mixture: weights must be a probability vector");
    }
    Matrix t = Matrix::Zero(maps.front().transfer().rows(), maps.front().transfer().cols());
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (maps[i].dim() != maps.front().dim()) {
            throw DimensionError("convex_mixture: dimension mismatch");
        }
        t += weights[i] * maps[i].transfer();
    }
    return LinearMapRep::from_transfer(std::move(t));
}

TpVerdict is_tp(const LinearMapRep& m) {
    const int d = m.dim();
    double residual;
    if (m.kraus()) {
        Matrix acc = Matrix::Zero(d, d);
        for (std::size_t k = 0; k < m.kraus()->ops.size(); ++k) {
            const double w = m.kraus()->weights.empty() ? 1.0 : m.kraus()->weights[k];
            acc += w * m.kraus()->ops[k].adjoint() * m.kraus()->ops[k];
        }
        residual = (acc - Matrix::Identity(d, d)).norm();
    } else {
        const Matrix c = m.choi();
        Matrix partial = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                partial(i, j) = c.block(i * d, j * d, d, d).trace();
            }
        }
        residual = (partial - Matrix::Identity(d, d)).norm();
    }
    return TpVerdict{residual < kStructuralTol, residual};
}

HpVerdict is_hermitian_preserving(const LinearMapRep& m) {
    const Matrix c = m.choi();
    const double residual = (c - c.adjoint()).norm() / std::max(1.0, c.norm());
    return HpVerdict{residual < kStructuralTol, residual};
}

OracleVerdict cp_oracle(const LinearMapRep& m) {
    OracleVerdict v;
    const Matrix c = m.choi();
    const HpVerdict hp = is_hermitian_preserving(m);
    v.is_hp = hp.is_hp;
    v.hp_residual = hp.residual;
    const TpVerdict tp = is_tp(m);
    v.is_tp = tp.is_tp;
    v.tp_residual = tp.residual;
    const Spectral s = eig_hermitian(c);
    v.min_choi_eig = s.eigenvalues(0);
    v.is_cp = v.is_hp && v.min_choi_eig >= -psd_slack(std::abs(c.trace().real()));
    v.is_positive = v.is_cp;  // CP => P; the sampling oracle refines this
    return v;
}

namespace {

double image_min_eig(const LinearMapRep& m, const Vector& psi) {
    const Matrix proj = psi * psi.adjoint();
    return eig_hermitian(m.apply(proj)).eigenvalues(0);
}

// Coordinate descent on the unit sphere of C^d, shrinking steps.
std::pair<double, Vector> refine_worst_state(const LinearMapRep& m, Vector psi, double val,
                                             int n_refine) {
    const int d = m.dim();
    double step = 0.1;
    for (int pass = 0; pass < n_refine; ++pass) {
        bool improved = false;
        for (int c = 0; c < d; ++c) {
            for (const Complex dir : {Complex(1, 0), Complex(0, 1)}) {
                for (const double sgn : {1.0, -1.0}) {
                    Vector cand = psi;
                    cand(c) += sgn * step * dir;
                    cand /= cand.norm();
                    const double v = image_min_eig(m, cand);
                    if (v < val - 1e-15) {
                        val = v;
                        psi = std::move(cand);
                        improved = true;
                    }
                }
            }
        }
        if (!improved) {
            step *= 0.5;
            if (step < 1e-7) {
                break;
            }
        }
    }
    return {val, std::move(psi)};
}

}  // namespace

OracleVerdict positivity_oracle(const LinearMapRep& m, int n_grid, int n_refine,
                                std::uint64_t seed, Exec exec,
                                const std::vector<Vector>& extra_candidates) {
    OracleVerdict v = cp_oracle(m);
    if (!v.is_hp) {
        throw DomainError("positivity_oracle: map is not Hermitian-preserving");
    }
    if (n_grid < 1) {
        throw DomainError("positivity_oracle: need n_grid >= 1");
    }
    const int d = m.dim();
    const auto n_extra = static_cast<std::int64_t>(extra_candidates.size());
    const std::int64_t total = n_extra + n_grid;
    auto candidate = [&](std::int64_t i) -> Vector {
        if (i < n_extra) {
            return extra_candidates[static_cast<std::size_t>(i)].normalized();
        }
        return random_pure_state(d, derive_seed(seed, 0x505349ULL, static_cast<std::uint64_t>(i - n_extra)));
    };
    const auto [coarse_min, coarse_idx] =
        min_index_scan(total, exec, [&](std::int64_t i) { return image_min_eig(m, candidate(i)); });
    auto [best, psi] = refine_worst_state(m, candidate(coarse_idx), coarse_min, n_refine);
    v.worst_min_eig = best;
    v.worst_state = std::move(psi);
    v.n_samples = total;
    v.is_positive = v.is_cp || best >= -psd_slack(1.0);
    return v;
}

StochasticMap::StochasticMap(RealMatrix t) : t_(std::move(t)) {
    if (t_.rows() != t_.cols() || t_.rows() == 0) {
        throw DimensionError("StochasticMap: matrix must be square and nonempty");
    }
    column_residual_ = (t_.colwise().sum().array() - 1.0).abs().maxCoeff();
    stochastic_ = column_residual_ <= 1e-12 && t_.minCoeff() >= -1e-12;
}

RealVector stochastic_apply(const StochasticMap& t, const RealVector& p) {
    if (p.size() != t.dim()) {
        throw DimensionError("stochastic_apply: dimension mismatch");
    }
    return t.matrix() * p;
}

// ---------------------------------------------------------------------------
// Catalog

CatalogSpec parse_catalog_spec(const std::string& spec) {
    CatalogSpec out;
    const auto qmark = spec.find('?');
    out.name = spec.substr(0, qmark);
    if (qmark == std::string::npos) {
        return out;
    }
    std::string rest = spec.substr(qmark + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        const auto amp = rest.find('&', pos);
        const std::string kv = rest.substr(pos, amp == std::string::npos ? amp : amp - pos);
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ParseError("catalog spec: malformed parameter '" + kv + "' in '" + spec + "'");
        }
        try {
            out.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ParseError("catalog spec: non-numeric value in '" + kv + "'");
        }
        pos = amp == std::string::npos ? rest.size() : amp + 1;
    }
    return out;
}

namespace {

double param_or(const CatalogSpec& s, const std::string& key, double fallback) {
    const auto it = s.params.find(key);
    return it == s.params.end() ? fallback : it->second;
}

int int_param_or(const CatalogSpec& s, const std::string& key, int fallback) {
    return static_cast<int>(std::llround(param_or(s, key, fallback)));
}

}  // namespace

LinearMapRep identity_map(int d) {
    return LinearMapRep::from_kraus({Matrix::Identity(d, d)});
}

LinearMapRep unitary_map(const Matrix& u) {
    return LinearMapRep::from_kraus({u});
}

LinearMapRep transpose_map(int d) {
    Matrix t = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            t(j * d + i, i * d + j) = 1.0;
        }
    }
    return LinearMapRep::from_transfer(std::move(t));
}

LinearMapRep depolarizing_map(int d, double p) {
    const Matrix eye = Matrix::Identity(d * d, d * d);
    const Vector vec_id = vectorize(Matrix::Identity(d, d));
    Matrix t = p * eye + ((1.0 - p) / d) * (vec_id * vec_id.adjoint());
    return LinearMapRep::from_transfer(std::move(t));
}

LinearMapRep dephasing_map(int d, double lambda) {
    Matrix t = lambda * Matrix::Identity(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        t(i * d + i, i * d + i) += 1.0 - lambda;
    }
    return LinearMapRep::from_transfer(std::move(t));
}

LinearMapRep amplitude_damping_map(double gamma) {
    if (gamma < 0.0 || gamma > 1.0) {
        throw DomainError("amplitude_damping: gamma must be in [0,1]");
    }
    Matrix k0 = Matrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - gamma);
    Matrix k1 = Matrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(gamma);
    return LinearMapRep::from_kraus({std::move(k0), std::move(k1)});
}

LinearMapRep scalar_map(int d, double c) {
    if (c < 0.0) {
        throw DomainError("scalar_map: c must be nonnegative");
    }
    return LinearMapRep::from_kraus({std::sqrt(c) * Matrix::Identity(d, d)});
}

LinearMapRep random_cptp_map(int d, int k, std::uint64_t seed) {
    if (k < 1) {
        throw DomainError("random_cptp: need k >= 1 Kraus operators");
    }
    std::vector<Matrix> ops;
    ops.reserve(k);
    std::mt19937_64 gen(splitmix64(seed));
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int m = 0; m < k; ++m) {
        Matrix g(d, d);
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) {
                g(i, j) = Complex(dist(gen), dist(gen));
            }
        }
        ops.push_back(std::move(g));
    }
    Matrix s = Matrix::Zero(d, d);
    for (const auto& op : ops) {
        s += op.adjoint() * op;
    }
    // Normalize: K -> K S^{-1/2} so that sum K^dag K = identity.
    const Spectral spec = eig_hermitian(s);
    const Vector inv_sqrt = spec.eigenvalues.cwiseSqrt().cwiseInverse().cast<Complex>();
    const Matrix inv_root =
        spec.eigenvectors * inv_sqrt.asDiagonal() * spec.eigenvectors.adjoint();
    for (auto& op : ops) {
        op = op * inv_root;
    }
    return LinearMapRep::from_kraus(std::move(ops));
}

LinearMapRep mixed_unitary_map(int d, int k, std::uint64_t seed) {
    if (k < 1) {
        throw DomainError("mixed_unitary: need k >= 1 unitaries");
    }
    std::vector<LinearMapRep> parts;
    RealVector w = random_simplex(k, derive_seed(seed, 0x4d55ULL, 0));
    std::vector<double> weights(w.data(), w.data() + k);
    parts.reserve(k);
    for (int m = 0; m < k; ++m) {
        parts.push_back(unitary_map(random_unitary(d, derive_seed(seed, 0x4d56ULL, m))));
    }
    return convex_mixture(parts, weights);
}

LinearMapRep reset_map(int d) {
    std::vector<Matrix> ops;
    ops.reserve(d);
    for (int i = 0; i < d; ++i) {
        Matrix k = Matrix::Zero(d, d);
        k(0, i) = 1.0;
        ops.push_back(std::move(k));
    }
    return LinearMapRep::from_kraus(std::move(ops));
}

StochasticMap random_stochastic(int n, std::uint64_t seed) {
    RealMatrix t(n, n);
    for (int j = 0; j < n; ++j) {
        t.col(j) = random_simplex(n, derive_seed(seed, 0x535443ULL, j));
    }
    return StochasticMap(std::move(t));
}

StochasticMap permutation_map(int n, std::uint64_t seed) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 gen(splitmix64(seed));
    std::shuffle(perm.begin(), perm.end(), gen);
    RealMatrix t = RealMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        t(perm[j], j) = 1.0;
    }
    return StochasticMap(std::move(t));
}

StochasticMap uniform_mixer(int n) {
    return StochasticMap(RealMatrix::Constant(n, n, 1.0 / n));
}

StochasticMap perturbed_stochastic(int n, std::uint64_t seed, double entry) {
    RealMatrix t = random_stochastic(n, seed).matrix();
    // Force one entry to the requested (typically negative) value and rescale
    // the rest of the column so the sum stays 1: sum-preserving, not positive.
    const double rest = t.col(0).sum() - t(0, 0);
    const double target_rest = 1.0 - entry;
    for (int i = 1; i < n; ++i) {
        t(i, 0) *= target_rest / rest;
    }
    t(0, 0) = entry;
    return StochasticMap(std::move(t));
}

bool is_classical_catalog_name(const std::string& name) {
    return name == "random_stochastic" || name == "permutation" || name == "uniform_mixer" ||
           name == "perturbed_stochastic";
}

LinearMapRep catalog_map(const std::string& spec) {
    const CatalogSpec s = parse_catalog_spec(spec);
    const int d = int_param_or(s, "d", 2);
    const auto seed = static_cast<std::uint64_t>(param_or(s, "seed", 1));
    if (s.name == "identity") return identity_map(d);
    if (s.name == "unitary") return unitary_map(random_unitary(d, seed));
    if (s.name == "transpose") return transpose_map(d);
    if (s.name == "depolarizing") return depolarizing_map(d, param_or(s, "p", 0.5));
    if (s.name == "dephasing") return dephasing_map(d, param_or(s, "lambda", 0.5));
    if (s.name == "amplitude_damping") return amplitude_damping_map(param_or(s, "gamma", 0.3));
    if (s.name == "scalar") return scalar_map(d, param_or(s, "c", 1.0));
    if (s.name == "random_cptp") return random_cptp_map(d, int_param_or(s, "k", d), seed);
    if (s.name == "mixed_unitary") return mixed_unitary_map(d, int_param_or(s, "k", 3), seed);
    if (s.name == "reset") return reset_map(d);
    throw ParseError("unknown catalog map '" + s.name + "'");
}

StochasticMap catalog_stochastic(const std::string& spec) {
    const CatalogSpec s = parse_catalog_spec(spec);
    const int n = int_param_or(s, "n", int_param_or(s, "d", 3));
    const auto seed = static_cast<std::uint64_t>(param_or(s, "seed", 1));
    if (s.name == "random_stochastic") return random_stochastic(n, seed);
    if (s.name == "permutation") return permutation_map(n, seed);
    if (s.name == "uniform_mixer") return uniform_mixer(n);
    if (s.name == "perturbed_stochastic") {
        return perturbed_stochastic(n, seed, param_or(s, "entry", -0.1));
    }
    throw ParseError("unknown classical catalog map '" + s.name + "'");
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "identity",      "unitary",       "transpose",         "depolarizing",
        "dephasing",     "amplitude_damping", "scalar",        "random_cptp",
        "mixed_unitary", "reset",         "random_stochastic", "permutation",
        "uniform_mixer", "perturbed_stochastic"};
    return names;
}

}  // namespace qig
