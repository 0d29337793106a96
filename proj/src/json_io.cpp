#include "qig/json_io.hpp"

#include <cmath>
#include <fstream>

namespace qig {

namespace {

double number_at(const Json& j, const std::string& where) {
    if (!j.is_number()) {
        throw ParseError(where + ": expected a number, got " + std::string(j.type_name()));
    }
    return j.get<double>();
}

Complex complex_at(const Json& j, const std::string& where) {
    if (j.is_number()) {
        return Complex(j.get<double>(), 0.0);
    }
    if (!j.is_array() || j.size() != 2) {
        throw ParseError(where + ": expected a [re, im] pair");
    }
    return Complex(number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]"));
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) {
        throw ParseError(where + ": expected a nonempty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array() || j[0].empty()) {
        throw ParseError(where + "[0]: expected a nonempty row array");
    }
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) {
            throw ParseError(rw + ": ragged row (expected " + std::to_string(cols) + " entries)");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = complex_at(j[r][c], rw + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

Json real_matrix_to_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RealMatrix real_matrix_from_json(const Json& j, const std::string& where) {
    const Matrix m = [&] {
        if (j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_number()) {
            // plain nested numbers
            Matrix out(j.size(), j[0].size());
            for (Eigen::Index r = 0; r < out.rows(); ++r) {
                const std::string rw = where + "[" + std::to_string(r) + "]";
                if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != out.cols()) {
                    throw ParseError(rw + ": ragged row");
                }
                for (Eigen::Index c = 0; c < out.cols(); ++c) {
                    out(r, c) = number_at(j[r][c], rw + "[" + std::to_string(c) + "]");
                }
            }
            return out;
        }
        return matrix_from_json(j, where);
    }();
    if (m.imag().cwiseAbs().maxCoeff() > 0.0) {
        throw ParseError(where + ": stochastic matrix entries must be real");
    }
    return m.real();
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(Json::array({v(i).real(), v(i).imag()}));
    }
    return out;
}

ParsedMap parse_map_json(const Json& j) {
    if (!j.is_object()) {
        throw ParseError("map: expected an object with dim/repr/data");
    }
    for (const char* key : {"dim", "repr", "data"}) {
        if (!j.contains(key)) {
            throw ParseError(std::string("map: missing field '") + key + "'");
        }
    }
    const int dim = j["dim"].get<int>();
    if (dim < 1) {
        throw ParseError("map/dim: must be a positive integer");
    }
    const std::string repr = j["repr"].get<std::string>();
    ParsedMap out;
    if (repr == "stochastic") {
        RealMatrix t = real_matrix_from_json(j["data"], "map/data");
        if (t.rows() != dim || t.cols() != dim) {
            throw ParseError("map/data: expected a " + std::to_string(dim) + "x" +
                             std::to_string(dim) + " matrix");
        }
        out.classical = StochasticMap(std::move(t));
        return out;
    }
    if (repr == "kraus") {
        if (!j["data"].is_array() || j["data"].empty()) {
            throw ParseError("map/data: expected a nonempty list of Kraus operators");
        }
        std::vector<Matrix> ops;
        for (std::size_t k = 0; k < j["data"].size(); ++k) {
            Matrix op = matrix_from_json(j["data"][k], "map/data[" + std::to_string(k) + "]");
            if (op.rows() != dim || op.cols() != dim) {
                throw ParseError("map/data[" + std::to_string(k) + "]: expected " +
                                 std::to_string(dim) + "x" + std::to_string(dim));
            }
            ops.push_back(std::move(op));
        }
        std::vector<double> weights;
        if (j.contains("weights")) {
            for (std::size_t k = 0; k < j["weights"].size(); ++k) {
                weights.push_back(number_at(j["weights"][k], "map/weights[" + std::to_string(k) + "]"));
            }
        }
        out.quantum = LinearMapRep::from_kraus(std::move(ops), std::move(weights));
    } else if (repr == "transfer" || repr == "choi") {
        Matrix m = matrix_from_json(j["data"], "map/data");
        if (m.rows() != dim * dim || m.cols() != dim * dim) {
            throw ParseError("map/data: expected a " + std::to_string(dim * dim) + "x" +
                             std::to_string(dim * dim) + " matrix for repr '" + repr + "'");
        }
        if (repr == "transfer") {
            out.quantum = LinearMapRep::from_transfer(std::move(m));
        } else {
            try {
                out.quantum = LinearMapRep::from_choi(m);
            } catch (const DomainError& e) {
                throw ParseError(std::string("map/data: ") + e.what());
            }
        }
    } else {
        throw ParseError("map/repr: unknown representation '" + repr +
                         "'; valid: kraus, transfer, choi, stochastic");
    }
    const HpVerdict hp = is_hermitian_preserving(*out.quantum);
    out.is_hp = hp.is_hp;
    out.hp_residual = hp.residual;
    const TpVerdict tp = is_tp(*out.quantum);
    out.is_tp = tp.is_tp;
    out.tp_residual = tp.residual;
    return out;
}

ParsedMap parse_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open map file '" + path + "'");
    }
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError("map file '" + path + "': " + e.what());
    }
    return parse_map_json(j);
}

ParsedMap parse_map_source(const std::string& source) {
    const std::string prefix = "catalog:";
    if (source.rfind(prefix, 0) == 0) {
        const std::string spec = source.substr(prefix.size());
        const CatalogSpec parsed = parse_catalog_spec(spec);
        ParsedMap out;
        if (is_classical_catalog_name(parsed.name)) {
            out.classical = catalog_stochastic(spec);
            return out;
        }
        out.quantum = catalog_map(spec);
        const HpVerdict hp = is_hermitian_preserving(*out.quantum);
        out.is_hp = hp.is_hp;
        out.hp_residual = hp.residual;
        const TpVerdict tp = is_tp(*out.quantum);
        out.is_tp = tp.is_tp;
        out.tp_residual = tp.residual;
        return out;
    }
    return parse_map_file(source);
}

Json map_to_json(const LinearMapRep& m) {
    Json j;
    j["dim"] = m.dim();
    if (m.kraus()) {
        j["repr"] = "kraus";
        Json data = Json::array();
        for (const auto& op : m.kraus()->ops) {
            data.push_back(matrix_to_json(op));
        }
        j["data"] = std::move(data);
        if (!m.kraus()->weights.empty()) {
            j["weights"] = m.kraus()->weights;
        }
    } else {
        j["repr"] = "transfer";
        j["data"] = matrix_to_json(m.transfer());
    }
    return j;
}

Json map_to_json(const StochasticMap& m) {
    Json j;
    j["dim"] = m.dim();
    j["repr"] = "stochastic";
    j["data"] = real_matrix_to_json(m.matrix());
    return j;
}

Json witness_to_json(const ExpansionWitness& w) {
    Json j;
    j["rho"] = matrix_to_json(w.rho);
    j["drho"] = matrix_to_json(w.drho);
    j["f"] = w.f_name;
    j["ratio"] = w.ratio;
    if (std::isfinite(w.eta)) {
        j["eta"] = w.eta;
    }
    if (std::isfinite(w.lambda_star)) {
        j["lambda_star"] = w.lambda_star;
    }
    if (w.psi.size() > 0) {
        j["psi"] = vector_to_json(w.psi);
    }
    return j;
}

Json eta_trace_to_json(const std::vector<EtaTracePoint>& trace) {
    Json out = Json::array();
    for (const auto& pt : trace) {
        out.push_back(Json{{"eta", pt.eta}, {"lambda", pt.lambda}, {"ratio", pt.ratio}});
    }
    return out;
}

Json contraction_section_to_json(const ContractionSection& s) {
    Json j;
    j["ran"] = s.ran;
    j["clean"] = s.clean;
    j["via_search"] = s.via_search;
    j["n_effective"] = s.n_effective;
    j["n_skipped"] = s.n_skipped;
    if (s.witness) {
        j["witness"] = witness_to_json(*s.witness);
    }
    if (!s.trace.empty()) {
        j["eta_trace"] = eta_trace_to_json(s.trace);
        if (std::isfinite(s.slope)) {
            j["slope"] = s.slope;
        }
    }
    return j;
}

Json oracle_to_json(const OracleVerdict& v) {
    Json j;
    j["is_cp"] = v.is_cp;
    j["is_positive"] = v.is_positive;
    j["is_tp"] = v.is_tp;
    j["is_hp"] = v.is_hp;
    j["min_choi_eig"] = v.min_choi_eig;
    j["tp_residual"] = v.tp_residual;
    j["hp_residual"] = v.hp_residual;
    j["worst_min_eig"] = v.worst_min_eig;
    j["n_samples"] = v.n_samples;
    if (v.worst_state.size() > 0) {
        j["worst_state"] = vector_to_json(v.worst_state);
    }
    return j;
}

Json cert_report_to_json(const CertReport& r) {
    Json j;
    j["classification"] = classification_name(r.classification);
    j["hp"] = r.hp;
    j["hp_residual"] = r.hp_residual;
    j["tp"] = r.tp;
    j["tp_residual"] = r.tp_residual;
    j["f"] = r.f_name;
    j["mode"] = mode_name(r.mode);
    j["ancilla"] = r.ancilla_used;
    j["base"] = contraction_section_to_json(r.base);
    j["lifted"] = contraction_section_to_json(r.lifted);
    j["trace_check"] = Json{{"trace_nonincreasing", r.trace_check.trace_nonincreasing},
                            {"max_excess", r.trace_check.max_excess},
                            {"max_route_gap", r.trace_check.max_route_gap},
                            {"n_samples", r.trace_check.n_samples},
                            {"n_route_checked", r.trace_check.n_route_checked}};
    j["oracle"] = oracle_to_json(r.oracle);
    return j;
}

Json contrast_outcome_to_json(const ContrastOutcome& o) {
    Json j;
    j["violation"] = o.violation;
    j["g"] = o.g_name;
    j["n_effective"] = o.n_effective;
    j["n_skipped"] = o.n_skipped;
    if (o.rho) {
        j["rho"] = matrix_to_json(*o.rho);
        j["sigma"] = matrix_to_json(*o.sigma);
        j["h_before"] = o.h_before;
        j["h_after"] = o.h_after;
    }
    if (!o.trace.empty()) {
        Json trace = Json::array();
        for (const auto& pt : o.trace) {
            trace.push_back(Json{{"eta", pt.eta},
                                 {"eps", pt.eps},
                                 {"h_before", pt.h_before},
                                 {"h_after", pt.h_after}});
        }
        j["eta_trace"] = std::move(trace);
    }
    return j;
}

Json classical_report_to_json(const ClassicalReport& r) {
    Json j;
    j["fisher_violation"] = r.fisher_violation;
    j["entropy_violation"] = r.entropy_violation;
    j["n_effective"] = r.n_effective;
    j["n_skipped"] = r.n_skipped;
    j["worst_fisher_ratio"] = r.worst_fisher_ratio;
    j["worst_entropy_ratio"] = r.worst_entropy_ratio;
    if (r.witness) {
        Json w;
        w["p"] = std::vector<double>(r.witness->p.data(), r.witness->p.data() + r.witness->p.size());
        w["dq"] =
            std::vector<double>(r.witness->dq.data(), r.witness->dq.data() + r.witness->dq.size());
        w["ratio"] = r.witness->ratio;
        w["eta"] = r.witness->eta;
        j["witness"] = std::move(w);
    }
    if (!r.trace.empty()) {
        j["eta_trace"] = eta_trace_to_json(r.trace);
    }
    return j;
}

Json cert_config_to_json(const CertConfig& c) {
    Json j;
    j["f"] = c.f.name();
    j["n_samples"] = c.n_samples;
    j["seed"] = c.seed;
    j["ratio_tol"] = c.ratio_tol;
    j["eta0"] = c.eta0;
    j["eta_levels"] = c.eta_levels;
    j["bisection_tol"] = c.bisection_tol;
    j["ancilla_dim"] = c.ancilla_dim;
    j["mode"] = mode_name(c.mode);
    j["exec"] = c.exec == Exec::OpenMp ? "openmp" : "serial";
    j["oracle_grid"] = c.oracle_grid;
    j["oracle_refine"] = c.oracle_refine;
    j["contrast_eps"] = c.contrast_eps;
    return j;
}

}  // namespace qig
