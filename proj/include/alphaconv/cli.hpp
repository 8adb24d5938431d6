#pragma once

// Command layer behind the alphaconv binary: JSON run configuration,
// experiment orchestration, and result serialization.  Exit codes:
//   0  success
//   1  verification failure (cmd_check found violations)
//   2  usage or configuration error
//   3  solver did not converge (outputs still written)

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "alphaconv/analysis.hpp"
#include "alphaconv/envelope.hpp"
#include "alphaconv/io.hpp"
#include "alphaconv/oracles.hpp"

namespace alphaconv {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    StrictlyConvexDomain domain;
    BoundaryDatum datum;
    std::vector<double> alphas;
    double h = 1.0 / 32.0;
    int width = 2;
    double tol = 1e-10;
    int max_iter = 100000;
    IterationMode mode = IterationMode::GaussSeidel;
    std::filesystem::path out_dir = "out";
    uint64_t seed = 0;
};

namespace clidet {

using nlohmann::json;

inline StrictlyConvexDomain parse_domain(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw config_error("domain: missing 'kind'");
    Vec2 center{0.0, 0.0};
    if (j.contains("center")) {
        const auto& c = j.at("center");
        if (!c.is_array() || c.size() != 2) throw config_error("domain.center: expected [x, y]");
        center = {c[0].get<double>(), c[1].get<double>()};
    }
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "disc") return StrictlyConvexDomain::disc(center, j.at("radius").get<double>());
        if (kind == "ellipse") {
            const auto& s = j.at("semi_axes");
            return StrictlyConvexDomain::ellipse(center, s.at(0).get<double>(), s.at(1).get<double>());
        }
        if (kind == "superellipse") {
            const auto& s = j.at("semi_axes");
            return StrictlyConvexDomain::superellipse(center, s.at(0).get<double>(),
                                                      s.at(1).get<double>(),
                                                      j.at("exponent").get<double>());
        }
    } catch (const json::exception& e) {
        throw config_error(std::string("domain: ") + e.what());
    } catch (const std::domain_error& e) {
        throw config_error(std::string("domain: ") + e.what());
    }
    throw config_error("domain.kind must be disc, ellipse, or superellipse");
}

inline json summary_json(const RunConfig& cfg, const EnvelopeResult& res,
                         const StrictlyConvexDomain& domain) {
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (double v : res.field.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    json j;
    j["schema"] = kSummarySchema;
    j["alpha"] = res.alpha.value;
    j["h"] = res.h;
    j["W"] = res.width;
    j["tol"] = res.tol;
    j["mode"] = cfg.mode == IterationMode::GaussSeidel ? "gauss-seidel" : "jacobi";
    j["seed"] = cfg.seed;
    j["datum"] = cfg.datum.text();
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["last_sweep_delta"] = res.last_sweep_delta;
    j["residual_max"] = res.residual_max;
    j["lipschitz_estimate"] = lipschitz_estimate(res.field, domain);
    j["field_min"] = vmin;
    j["field_max"] = vmax;
    j["nodes"] = res.field.size();
    if (res.alpha.quasiconvex_limit())
        j["note"] = "alpha = 0: discrete solutions are not unique among non-quasiconvex "
                    "fields; this is the maximal fixed point of the monotone-from-above "
                    "iteration";
    return j;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

}  // namespace clidet

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }

    RunConfig cfg;
    try {
        cfg.domain = clidet::parse_domain(j.at("domain"));
        const std::string datum_text = j.at("datum").get<std::string>();
        try {
            cfg.datum = parse_datum(datum_text);
        } catch (const expr_error& e) {
            throw config_error(std::string("datum: ") + e.what());
        }
        if (j.contains("alphas"))
            cfg.alphas = j.at("alphas").get<std::vector<double>>();
        else if (j.contains("alpha"))
            cfg.alphas = {j.at("alpha").get<double>()};
        else
            throw config_error("config: need 'alpha' or 'alphas'");
        if (j.contains("h")) cfg.h = j.at("h").get<double>();
        if (j.contains("W")) cfg.width = j.at("W").get<int>();
        if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
        if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<int>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
        if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
        if (j.contains("mode")) {
            const std::string m = j.at("mode").get<std::string>();
            if (m == "gauss-seidel")
                cfg.mode = IterationMode::GaussSeidel;
            else if (m == "jacobi")
                cfg.mode = IterationMode::Jacobi;
            else
                throw config_error("config: mode must be 'gauss-seidel' or 'jacobi'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }

    // Validate numeric fields against the solver preconditions up front.
    for (double a : cfg.alphas)
        if (!(a >= 0.0 && a <= 1.0)) throw config_error("config: alpha outside [0,1]");
    if (!(cfg.h > 0.0)) throw config_error("config: h must be positive");
    if (cfg.h > cfg.domain.diameter() / 4.0)
        throw config_error("config: h exceeds a quarter of the domain diameter");
    if (cfg.width < 1) throw config_error("config: W must be >= 1");
    if (!(cfg.tol > 0.0)) throw config_error("config: tol must be positive");
    if (cfg.max_iter < 1) throw config_error("config: max_iter must be >= 1");
    return cfg;
}

// solve: single alpha; writes field.csv and summary.json.
inline int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    if (cfg.alphas.size() != 1) {
        std::cerr << "solve: config must carry exactly one alpha\n";
        return 2;
    }
    std::filesystem::create_directories(out_dir);
    const EnvelopeResult res =
        solve_envelope(cfg.domain, cfg.datum, make_alpha(cfg.alphas[0]), cfg.h, cfg.width, cfg.tol,
                       cfg.max_iter, cfg.mode);
    write_field_csv(out_dir / "field.csv", res.field);
    clidet::write_json(out_dir / "summary.json", clidet::summary_json(cfg, res, cfg.domain));
    return res.converged ? 0 : 3;
}

// sweep: ascending alpha list (>= 2 entries); per-alpha outputs plus a
// bridge report with pairwise sup-diffs, monotonicity flags, and the
// sandwich check against the endpoint runs.
inline int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    if (cfg.alphas.size() < 2) {
        std::cerr << "sweep: need an ascending list of at least two alphas\n";
        return 2;
    }
    for (size_t i = 0; i + 1 < cfg.alphas.size(); ++i) {
        if (!(cfg.alphas[i] < cfg.alphas[i + 1])) {
            std::cerr << "sweep: alphas must be strictly ascending\n";
            return 2;
        }
    }
    std::filesystem::create_directories(out_dir);
    const std::vector<EnvelopeResult> runs =
        alpha_sweep(cfg.domain, cfg.datum, cfg.alphas, cfg.h, cfg.width, cfg.tol, cfg.max_iter,
                    cfg.mode);

    bool all_converged = true;
    for (size_t i = 0; i < runs.size(); ++i) {
        char tag[32];
        std::snprintf(tag, sizeof tag, "%03zu", i);
        write_field_csv(out_dir / ("field_" + std::string(tag) + ".csv"), runs[i].field);
        clidet::write_json(out_dir / ("summary_" + std::string(tag) + ".json"),
                           clidet::summary_json(cfg, runs[i], cfg.domain));
        all_converged = all_converged && runs[i].converged;
    }

    nlohmann::json bridge;
    bridge["schema"] = kBridgeSchema;
    bridge["alphas"] = cfg.alphas;
    nlohmann::json pairs = nlohmann::json::array();
    bool monotone_all = true;
    for (size_t i = 0; i + 1 < runs.size(); ++i) {
        const FieldComparison cmp = compare_fields(runs[i + 1].field, runs[i].field);
        pairs.push_back({{"alpha_lo", cfg.alphas[i]},
                         {"alpha_hi", cfg.alphas[i + 1]},
                         {"sup_diff", cmp.sup_diff},
                         {"monotone", cmp.first_le_second}});
        monotone_all = monotone_all && cmp.first_le_second;
    }
    bridge["pairwise"] = pairs;
    bridge["monotone_all"] = monotone_all;
    bool sandwich = true;
    for (const EnvelopeResult& r : runs) {
        sandwich = sandwich && compare_fields(runs.back().field, r.field).first_le_second &&
                   compare_fields(r.field, runs.front().field).first_le_second;
    }
    bridge["sandwich"] = sandwich;
    clidet::write_json(out_dir / "bridge.json", bridge);
    return all_converged ? 0 : 3;
}

// check: verify a field CSV against the config grid.
inline int cmd_check(const RunConfig& cfg, const std::filesystem::path& field_csv,
                     const std::filesystem::path& out_dir) {
    if (cfg.alphas.size() != 1) {
        std::cerr << "check: config must carry exactly one alpha\n";
        return 2;
    }
    std::filesystem::create_directories(out_dir);
    GridPtr grid = build_grid(cfg.domain, cfg.h);
    Field field;
    try {
        field = read_field_csv(field_csv, grid);
    } catch (const std::exception& e) {
        std::cerr << "check: " << e.what() << "\n";
        return 2;
    }
    const Alpha alpha = make_alpha(cfg.alphas[0]);
    const ArmTable arms = build_arms(grid, cfg.domain, cfg.datum, build_directions(cfg.width));
    const double tol = std::max(1e-9, 10.0 * cfg.tol);
    const ViolationReport rep = check_alpha_convex(field, alpha, arms, tol);
    const ResidualReport res = residual(field, alpha, arms);

    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["alpha"] = alpha.value;
    j["tolerance"] = tol;
    j["violations"] = rep.entries.size();
    j["worst_deficit"] = rep.worst;
    nlohmann::json vlist = nlohmann::json::array();
    for (size_t k = 0; k < rep.entries.size() && k < 64; ++k) {
        const Violation& v = rep.entries[k];
        const Vec2 z = grid->coord(v.node);
        vlist.push_back({{"node", v.node},
                         {"x", z.x},
                         {"y", z.y},
                         {"line", v.line},
                         {"chord", v.chord},
                         {"value", v.value},
                         {"deficit", v.deficit}});
    }
    j["violation_list"] = vlist;
    j["residual_max"] = res.max_abs;
    j["lipschitz_estimate"] = lipschitz_estimate(field, cfg.domain);
    nlohmann::json c1 = nlohmann::json::array();
    for (const GradientJump& gj : c1_diagnostic(field))
        c1.push_back({{"separation", gj.separation}, {"max_jump", gj.max_jump}});
    j["c1_diagnostic"] = c1;
    clidet::write_json(out_dir / "report.json", j);
    return rep.empty() ? 0 : 1;
}

// oracle-compare: endpoint alphas only; solves, then compares against the
// matching brute-force envelope at every interior node (1024 boundary
// samples).
inline int cmd_oracle_compare(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    if (cfg.alphas.size() != 1 || (cfg.alphas[0] != 0.0 && cfg.alphas[0] != 1.0)) {
        std::cerr << "oracle-compare: alpha must be exactly 0 or 1\n";
        return 2;
    }
    std::filesystem::create_directories(out_dir);
    const Alpha alpha = make_alpha(cfg.alphas[0]);
    const EnvelopeResult res = solve_envelope(cfg.domain, cfg.datum, alpha, cfg.h, cfg.width,
                                              cfg.tol, cfg.max_iter, cfg.mode);
    const int m = 1024;
    const BoundarySampling samples = sample_boundary(cfg.domain, cfg.datum, m);

    double sup = 0.0, mean = 0.0;
    const Grid& grid = *res.field.grid;
    if (alpha.affine_limit()) {
        for (size_t n = 0; n < res.field.size(); ++n) {
            const double d =
                std::abs(res.field[n] - convex_envelope_lp(samples, grid.coord(static_cast<int>(n))));
            sup = std::max(sup, d);
            mean += d;
        }
    } else {
        const QuasiconvexEnvelopeOracle oracle(samples);
        for (size_t n = 0; n < res.field.size(); ++n) {
            const double d = std::abs(res.field[n] - oracle(grid.coord(static_cast<int>(n))));
            sup = std::max(sup, d);
            mean += d;
        }
    }
    mean /= static_cast<double>(res.field.size());

    nlohmann::json j;
    j["schema"] = kOracleSchema;
    j["alpha"] = alpha.value;
    j["m"] = m;
    j["nodes"] = res.field.size();
    j["sup_abs_diff"] = sup;
    j["mean_abs_diff"] = mean;
    j["converged"] = res.converged;
    clidet::write_json(out_dir / "oracle_compare.json", j);
    return res.converged ? 0 : 3;
}

}  // namespace alphaconv
