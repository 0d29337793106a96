#ifndef QIG_JSON_IO_HPP
#define QIG_JSON_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "qig/certifier.hpp"

namespace qig {

using Json = nlohmann::json;

// Matrix encoding used repo-wide: complex scalar = [re, im]; matrix =
// row-major nested arrays of complex scalars. Real (classical) matrices are
// plain nested number arrays; the parser accepts either form for them.

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where);
Json real_matrix_to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const Json& j, const std::string& where);
Json vector_to_json(const Vector& v);

/// Result of parsing a map source: exactly one of the two is set. Structural
/// flags are computed at load for quantum maps.
struct ParsedMap {
    std::optional<LinearMapRep> quantum;
    std::optional<StochasticMap> classical;
    bool is_hp = false;
    bool is_tp = false;
    double hp_residual = 0.0;
    double tp_residual = 0.0;
};

/// Map file schema:
///   {"dim": d, "repr": "kraus"|"transfer"|"choi"|"stochastic", "data": ...}
/// kraus data is a list of d x d matrices with an optional "weights" array;
/// transfer and choi data are single d^2 x d^2 matrices; stochastic data is
/// a d x d real matrix.
ParsedMap parse_map_json(const Json& j);
ParsedMap parse_map_file(const std::string& path);
/// Accepts "catalog:<name>?<params>" or a file path.
ParsedMap parse_map_source(const std::string& source);

Json map_to_json(const LinearMapRep& m);
Json map_to_json(const StochasticMap& m);

Json witness_to_json(const ExpansionWitness& w);
Json eta_trace_to_json(const std::vector<EtaTracePoint>& trace);
Json contraction_section_to_json(const ContractionSection& s);
Json oracle_to_json(const OracleVerdict& v);
Json cert_report_to_json(const CertReport& r);
Json contrast_outcome_to_json(const ContrastOutcome& o);
Json classical_report_to_json(const ClassicalReport& r);
Json cert_config_to_json(const CertConfig& c);

}  // namespace qig

#endif
