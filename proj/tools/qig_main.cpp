// qig: monotone Fisher metrics, contrast functions, and contraction-based
// certification of positivity / complete positivity for linear maps.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qig/json_io.hpp"
#include "qig/sampling.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr const char* kMapSchemaHelp = R"(Map sources
  --map accepts either a JSON file or a catalog spec "catalog:<name>?<k>=<v>&...".

  Map file schema:
    {"dim": d, "repr": "kraus"|"transfer"|"choi"|"stochastic", "data": ...}
  Complex scalars are [re, im] pairs; matrices are row-major nested arrays of
  them. "kraus" data is a list of d x d matrices (optional "weights" array of
  reals); "transfer" and "choi" take one d^2 x d^2 matrix (column-stacking
  vectorization, Choi block (i,j) = map(E_ij)); "stochastic" takes a d x d
  real matrix acting on probability columns.

  Catalog (defaults d=2, seed=1): identity, unitary(seed), transpose,
  depolarizing(p), dephasing(lambda), amplitude_damping(gamma), scalar(c),
  random_cptp(k,seed), mixed_unitary(k,seed), reset; classical:
  random_stochastic(n,seed), permutation(n,seed), uniform_mixer(n),
  perturbed_stochastic(n,seed,entry).

Environment overrides: QIG_TOL_PSD, QIG_TOL_INTERIOR, QIG_TOL_HERMITIAN,
QIG_TOL_TRACE_ONE.

Exit codes: 0 clean, 2 violation or witness found, 1 error.)";

using qig::Json;

struct CommonOpts {
    std::string map_source;
    std::string f_name = "sld";
    std::string g_name;
    std::string mode = "psd";
    std::string ancilla = "auto";
    std::string out_path;
    long samples = 10000;
    std::uint64_t seed = 7;  // default seed, documented; every run is reproducible
    double ratio_tol = 1e-8;
    double eta0 = 0.1;
    int levels = 20;
    double bisect_tol = 1e-10;
    int oracle_grid = 10000;
    int oracle_refine = 60;
    double contrast_eps = 1e-3;
    bool serial = false;
};

void add_config_flags(CLI::App* cmd, CommonOpts& o, bool with_map = true) {
    if (with_map) {
        cmd->add_option("--map", o.map_source, "map file or catalog:<spec>")->required();
    }
    cmd->add_option("--samples", o.samples, "Monte-Carlo sample count");
    cmd->add_option("--seed", o.seed, "RNG seed (all randomness derives from it)");
    cmd->add_option("--ratio-tol", o.ratio_tol, "violation threshold on ratios");
    cmd->add_option("--eta0", o.eta0, "top of the geometric eta schedule");
    cmd->add_option("--levels", o.levels, "eta schedule levels (eta0 * 2^-k, k<=levels)");
    cmd->add_option("--bisect-tol", o.bisect_tol, "segment bisection tolerance");
    cmd->add_option("--oracle-grid", o.oracle_grid, "positivity oracle sample count");
    cmd->add_option("--oracle-refine", o.oracle_refine, "positivity oracle refinement passes");
    cmd->add_option("--mode", o.mode, "tangent space: states (traceless) or psd")
        ->check(CLI::IsMember({"states", "psd"}));
    cmd->add_option("--out", o.out_path, "write the JSON report here instead of stdout");
    cmd->add_flag("--serial", o.serial, "run sampling kernels on the serial reference path");
}

qig::CertConfig make_config(const CommonOpts& o, int map_dim) {
    qig::CertConfig c;
    c.f = qig::MonotoneFunction::from_name(o.f_name);
    c.n_samples = o.samples;
    c.seed = o.seed;
    c.ratio_tol = o.ratio_tol;
    c.eta0 = o.eta0;
    c.eta_levels = o.levels;
    c.bisection_tol = o.bisect_tol;
    c.oracle_grid = o.oracle_grid;
    c.oracle_refine = o.oracle_refine;
    c.contrast_eps = o.contrast_eps;
    c.mode = qig::mode_from_name(o.mode);
    c.exec = o.serial ? qig::Exec::Serial : qig::Exec::OpenMp;
    if (o.ancilla == "auto") {
        c.ancilla_dim = map_dim;
    } else {
        c.ancilla_dim = std::stoi(o.ancilla);
        if (c.ancilla_dim < 1) {
            throw qig::DomainError("--ancilla must be 'auto' or a positive integer");
        }
    }
    return c;
}

void apply_env_tolerances() {
    auto read = [](const char* name, double& slot) {
        if (const char* v = std::getenv(name)) {
            slot = std::stod(v);
        }
    };
    auto& tol = qig::tolerances();
    read("QIG_TOL_PSD", tol.psd_scale);
    read("QIG_TOL_INTERIOR", tol.interior);
    read("QIG_TOL_HERMITIAN", tol.hermitian);
    read("QIG_TOL_TRACE_ONE", tol.trace_one);
}

void emit_report(const CommonOpts& o, const std::string& command, const Json& config,
                 const Json& payload, double wall_ms) {
    Json report;
    report["tool"] = "qig";
    report["version"] = kVersion;
    report["command"] = command;
    report["config"] = config;
    report["payload"] = payload;
    report["wall_ms"] = wall_ms;
    if (o.out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(o.out_path);
        if (!out) {
            throw qig::Error("cannot write report to '" + o.out_path + "'");
        }
        out << report.dump(2) << "\n";
    }
}

qig::LinearMapRep require_quantum(const qig::ParsedMap& parsed) {
    if (!parsed.quantum) {
        throw qig::DomainError("this subcommand needs a quantum map, got a stochastic one");
    }
    return *parsed.quantum;
}

qig::Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw qig::ParseError("cannot open matrix file '" + path + "'");
    }
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw qig::ParseError("matrix file '" + path + "': " + e.what());
    }
    return qig::matrix_from_json(j, path);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

int run_certify(const CommonOpts& o) {
    Timer timer;
    const qig::LinearMapRep map = require_quantum(qig::parse_map_source(o.map_source));
    const qig::CertConfig config = make_config(o, map.dim());
    const qig::CertReport report = qig::certify(map, config);
    Json cfg = qig::cert_config_to_json(config);
    cfg["map"] = o.map_source;
    emit_report(o, "certify", cfg, qig::cert_report_to_json(report), timer.ms());
    return report.classification == qig::Classification::Cptp ? 0 : 2;
}

int run_witness(const CommonOpts& o) {
    Timer timer;
    qig::LinearMapRep map = require_quantum(qig::parse_map_source(o.map_source));
    qig::CertConfig config = make_config(o, map.dim());
    if (o.ancilla != "auto" && config.ancilla_dim > 1) {
        map = qig::tensor_identity(map, config.ancilla_dim);
        config.mode = qig::Mode::States;
    }
    const qig::WitnessSearchResult result = qig::witness_search(map, config);
    Json payload;
    payload["found"] = result.found;
    if (result.witness) {
        payload["witness"] = qig::witness_to_json(*result.witness);
        payload["replay_ratio"] = qig::replay_ratio(map, *result.witness);
    }
    payload["eta_trace"] = qig::eta_trace_to_json(result.trace);
    if (std::isfinite(result.slope)) {
        payload["slope"] = result.slope;
    }
    if (std::isfinite(result.lambda_star)) {
        payload["lambda_star"] = result.lambda_star;
    }
    Json cfg = qig::cert_config_to_json(config);
    cfg["map"] = o.map_source;
    emit_report(o, "witness", cfg, payload, timer.ms());
    return result.found ? 2 : 0;
}

int run_metric(const CommonOpts& o, const std::string& state_path, const std::string& a_path,
               const std::string& b_path) {
    Timer timer;
    const qig::PsdMatrix pi(load_matrix(state_path));
    const qig::HermitianMatrix a(load_matrix(a_path));
    const qig::HermitianMatrix b(b_path.empty() ? a.mat() : load_matrix(b_path));
    const qig::MonotoneFunction f = qig::MonotoneFunction::from_name(o.f_name);
    const qig::MetricValue value = qig::fisher_metric(pi, a, b, f);
    Json payload;
    payload["value"] = value.value;
    payload["f_or_g"] = value.f_name;
    payload["basepoint_mineig"] = pi.min_eigenvalue();
    Json cfg;
    cfg["state"] = state_path;
    cfg["a"] = a_path;
    cfg["b"] = b_path.empty() ? a_path : b_path;
    cfg["f"] = o.f_name;
    emit_report(o, "metric", cfg, payload, timer.ms());
    return 0;
}

int run_divergence(const CommonOpts& o, const std::string& rho_path,
                   const std::string& sigma_path) {
    Timer timer;
    const qig::PsdMatrix rho(load_matrix(rho_path));
    const qig::PsdMatrix sigma(load_matrix(sigma_path));
    const qig::ContrastGenerator g = qig::ContrastGenerator::from_name(o.g_name);
    const qig::DivergenceValue value = qig::contrast_eval(rho, sigma, g);
    Json payload;
    payload["value"] = value.value;
    payload["f_or_g"] = value.g_name;
    payload["basepoint_mineig"] = std::min(rho.min_eigenvalue(), sigma.min_eigenvalue());
    Json cfg;
    cfg["rho"] = rho_path;
    cfg["sigma"] = sigma_path;
    cfg["g"] = o.g_name;
    emit_report(o, "divergence", cfg, payload, timer.ms());
    return 0;
}

int run_contract_test(const CommonOpts& o, bool contrast_witness_mode) {
    Timer timer;
    qig::LinearMapRep map = require_quantum(qig::parse_map_source(o.map_source));
    qig::CertConfig config = make_config(o, map.dim());
    if (o.ancilla != "auto" && config.ancilla_dim > 1) {
        map = qig::tensor_identity(map, config.ancilla_dim);
        config.mode = qig::Mode::States;
    }
    Json cfg = qig::cert_config_to_json(config);
    cfg["map"] = o.map_source;
    if (!o.g_name.empty()) {
        const qig::ContrastGenerator g = qig::ContrastGenerator::from_name(o.g_name);
        const qig::ContrastOutcome outcome =
            qig::contrast_contraction_test(map, g, config, contrast_witness_mode);
        cfg["g"] = o.g_name;
        emit_report(o, "contract-test", cfg, qig::contrast_outcome_to_json(outcome), timer.ms());
        return outcome.violation ? 2 : 0;
    }
    const qig::ContractionOutcome outcome = qig::sample_contraction_test(map, config);
    Json payload;
    payload["violation"] = outcome.violation;
    payload["n_effective"] = outcome.n_effective;
    payload["n_skipped"] = outcome.n_skipped;
    if (outcome.witness) {
        payload["witness"] = qig::witness_to_json(*outcome.witness);
        payload["replay_ratio"] = qig::replay_ratio(map, *outcome.witness);
    }
    emit_report(o, "contract-test", cfg, payload, timer.ms());
    return outcome.violation ? 2 : 0;
}

int run_classical(const CommonOpts& o) {
    Timer timer;
    const qig::ParsedMap parsed = qig::parse_map_source(o.map_source);
    if (!parsed.classical) {
        throw qig::DomainError("classical: the map source must be stochastic");
    }
    const qig::CertConfig config = make_config(o, parsed.classical->dim());
    const qig::ClassicalReport report = qig::classical_contraction_test(*parsed.classical, config);
    Json cfg = qig::cert_config_to_json(config);
    cfg["map"] = o.map_source;
    emit_report(o, "classical", cfg, qig::classical_report_to_json(report), timer.ms());
    return report.fisher_violation || report.entropy_violation ? 2 : 0;
}

int run_catalog(const CommonOpts& o, const std::string& emit_spec) {
    Timer timer;
    if (emit_spec.empty()) {
        Json payload = Json::array();
        for (const auto& name : qig::catalog_names()) {
            payload.push_back(name);
        }
        emit_report(o, "catalog", Json::object(), payload, timer.ms());
        return 0;
    }
    const qig::ParsedMap parsed = qig::parse_map_source("catalog:" + emit_spec);
    const Json payload =
        parsed.quantum ? qig::map_to_json(*parsed.quantum) : qig::map_to_json(*parsed.classical);
    Json cfg;
    cfg["emit"] = emit_spec;
    emit_report(o, "catalog", cfg, payload, timer.ms());
    return 0;
}

int run_sweep(const CommonOpts& o, const std::string& family, const std::string& param_key,
              const std::vector<double>& grid, int d, const std::string& format) {
    Timer timer;
    std::vector<Json> rows;
    for (const double value : grid) {
        const std::string spec =
            family + "?" + param_key + "=" + std::to_string(value) + "&d=" + std::to_string(d);
        const qig::LinearMapRep map = qig::catalog_map(spec);
        const qig::CertConfig config = make_config(o, map.dim());
        const qig::CertReport report = qig::certify(map, config);
        Json row;
        row[param_key] = value;
        row["classification"] = qig::classification_name(report.classification);
        row["base_clean"] = report.base.clean;
        row["lifted_clean"] = report.lifted.clean;
        row["trace_ok"] = report.trace_check.trace_nonincreasing;
        row["min_choi_eig"] = report.oracle.min_choi_eig;
        row["oracle_positive"] = report.oracle.is_positive;
        rows.push_back(std::move(row));
    }
    if (format == "csv") {
        std::ostringstream csv;
        csv << param_key << ",classification,base_clean,lifted_clean,trace_ok,min_choi_eig,"
            << "oracle_positive\n";
        for (const auto& row : rows) {
            csv << row[param_key].get<double>() << "," << row["classification"].get<std::string>()
                << "," << row["base_clean"].get<bool>() << "," << row["lifted_clean"].get<bool>()
                << "," << row["trace_ok"].get<bool>() << "," << row["min_choi_eig"].get<double>()
                << "," << row["oracle_positive"].get<bool>() << "\n";
        }
        if (o.out_path.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream out(o.out_path);
            out << csv.str();
        }
        return 0;
    }
    Json cfg;
    cfg["family"] = family;
    cfg["param"] = param_key;
    cfg["d"] = d;
    cfg["f"] = o.f_name;
    cfg["samples"] = o.samples;
    cfg["seed"] = o.seed;
    emit_report(o, "sweep", cfg, Json(rows), timer.ms());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    apply_env_tolerances();
    CLI::App app{std::string("qig ") + kVersion +
                 " - monotone metric and map-contraction toolkit\n\n" + kMapSchemaHelp};
    app.require_subcommand(1);

    CommonOpts o;

    auto* certify = app.add_subcommand("certify", "classify a map via metric contraction");
    add_config_flags(certify, o);
    certify->add_option("--f", o.f_name, "monotone function (sld, kmb, wy, rld, harmonic)");
    certify->add_option("--ancilla", o.ancilla, "ancilla dim for the lifted test ('auto' = d)");

    auto* witness = app.add_subcommand("witness", "constructive expansion-witness search");
    add_config_flags(witness, o);
    witness->add_option("--f", o.f_name, "monotone function");
    witness->add_option("--ancilla", o.ancilla,
                        "lift the map by this ancilla before searching (default: no lift)");

    auto* metric = app.add_subcommand("metric", "evaluate K_f at a basepoint");
    std::string state_path, a_path, b_path;
    metric->add_option("--state", state_path, "basepoint matrix JSON")->required();
    metric->add_option("--a", a_path, "first tangent matrix JSON")->required();
    metric->add_option("--b", b_path, "second tangent matrix JSON (default: --a)");
    metric->add_option("--f", o.f_name, "monotone function");
    metric->add_option("--out", o.out_path, "report path");

    auto* divergence = app.add_subcommand("divergence", "evaluate H_g between two states");
    std::string rho_path, sigma_path;
    divergence->add_option("--rho", rho_path, "first matrix JSON")->required();
    divergence->add_option("--sigma", sigma_path, "second matrix JSON")->required();
    divergence->add_option("--g", o.g_name, "contrast generator (neglog, xlogx, ...)")
        ->default_val("neglog");
    divergence->add_option("--out", o.out_path, "report path");

    auto* contract = app.add_subcommand(
        "contract-test", "sampled contraction test (metric, or H_g with --g)");
    add_config_flags(contract, o);
    contract->add_option("--f", o.f_name, "monotone function for the metric test");
    contract->add_option("--g", o.g_name, "contrast generator: run the divergence test instead");
    contract->add_option("--ancilla", o.ancilla, "lift the map by this ancilla (default: none)");
    bool contrast_witness_mode = false;
    contract->add_flag("--witness", contrast_witness_mode,
                       "with --g: boundary witness mode instead of sampling");
    contract->add_option("--eps", o.contrast_eps, "perturbation size for --g --witness");

    auto* classical = app.add_subcommand("classical", "simplex contraction test");
    add_config_flags(classical, o);

    auto* catalog = app.add_subcommand("catalog", "list catalog maps or emit one as JSON");
    std::string emit_spec;
    catalog->add_option("--emit", emit_spec, "catalog spec to emit, e.g. depolarizing?p=1.5");
    catalog->add_option("--out", o.out_path, "report path");

    auto* sweep = app.add_subcommand("sweep", "certify a catalog family over a parameter grid");
    add_config_flags(sweep, o, false);
    std::string family = "depolarizing", param_key = "p", format = "csv";
    std::vector<double> grid;
    int sweep_d = 2;
    sweep->add_option("--family", family, "catalog family name");
    sweep->add_option("--param", param_key, "parameter key, e.g. p");
    sweep->add_option("--values", grid, "grid values")->required()->delimiter(',');
    sweep->add_option("--d", sweep_d, "map dimension");
    sweep->add_option("--f", o.f_name, "monotone function");
    sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (certify->parsed()) return run_certify(o);
        if (witness->parsed()) return run_witness(o);
        if (metric->parsed()) return run_metric(o, state_path, a_path, b_path);
        if (divergence->parsed()) return run_divergence(o, rho_path, sigma_path);
        if (contract->parsed()) return run_contract_test(o, contrast_witness_mode);
        if (classical->parsed()) return run_classical(o);
        if (catalog->parsed()) return run_catalog(o, emit_spec);
        if (sweep->parsed()) return run_sweep(o, family, param_key, grid, sweep_d, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
