#include "jang/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>

#include "jang/errors.hpp"
#include "jang/geometry.hpp"

namespace jang {

namespace {

constexpr const char* kVersion = "0.2.0";

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double now_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

Json falloff_to_json(const FalloffReport& rep) {
    Json out;
    out["pass"] = rep.pass;
    out["clauses"] = Json::array();
    for (const auto& c : rep.clauses) {
        Json jc;
        jc["name"] = c.name;
        jc["fitted_exponent"] = std::isfinite(c.fitted_exponent) ? c.fitted_exponent : 1e308;
        jc["required_exponent"] = c.required_exponent;
        jc["trivially_zero"] = c.trivially_zero;
        jc["pass"] = c.pass;
        out["clauses"].push_back(jc);
    }
    return out;
}

Json verification_to_json(const VerificationReport& rep) {
    Json out;
    out["pass"] = rep.pass;
    out["checks"] = Json::array();
    for (const auto& c : rep.checks) {
        Json jc;
        jc["name"] = c.name;
        jc["norm_sup"] = c.norm_sup;
        jc["norm_l2"] = c.norm_l2;
        jc["order"] = c.order;
        jc["pass"] = c.pass;
        if (!c.detail.empty()) jc["detail"] = c.detail;
        out["checks"].push_back(jc);
    }
    return out;
}

Json penrose_to_json(const PenroseReport& rep) {
    Json out;
    out["m_adm"] = rep.m_adm;
    out["m_adm_uncertainty"] = rep.m_adm_uncertainty;
    out["area"] = rep.area;
    out["margin"] = rep.margin;
    out["mass_profile_margin"] = rep.mass_profile_margin;
    out["verdict"] = rep.verdict;
    out["decomposition"] = {{"energy", rep.decomposition.energy},
                            {"deficit", rep.decomposition.deficit},
                            {"q", rep.decomposition.q_term},
                            {"divergence", rep.decomposition.divergence}};
    out["boundary_terms"] = {{"inner", rep.boundary_inner}, {"outer", rep.boundary_outer}};
    out["decomposition_consistent"] = rep.decomposition_consistent;
    out["decomposition_tolerance"] = rep.decomposition_tolerance;
    out["dec_passed"] = rep.dec_passed;
    return out;
}

Json rigidity_to_json(const RigidityReport& rep) {
    Json out;
    out["applicable"] = rep.applicable;
    if (!rep.applicable) {
        out["note"] = rep.note;
        return out;
    }
    out["residuals"] = {{"mu_minus_Jw", rep.res_energy},
                        {"deficit", rep.res_deficit},
                        {"q", rep.res_q},
                        {"phi_schwarzschild", rep.res_phi},
                        {"gbar_schwarzschild", rep.res_gbar}};
    out["tolerance"] = rep.tolerance;
    out["pass"] = rep.pass;
    return out;
}

}  // namespace

InitialData load_data_descriptor(const Json& d) {
    if (d.contains("family")) {
        Params params;
        if (d.contains("params"))
            for (auto& [k, v] : d.at("params").items()) params[k] = v.get<double>();
        return build_builtin(d.at("family").get<std::string>(), params);
    }
    if (d.contains("samples")) {
        const Json& s = d.at("samples");
        auto get = [&](const char* key) {
            if (!s.contains(key))
                throw ConfigError(std::string("data samples: missing array '") + key + "'");
            return s.at(key).get<std::vector<double>>();
        };
        auto r = get("r");
        return load_sampled(r, get("g11"), get("rho"), get("ka"), get("kb"));
    }
    if (d.contains("file")) {
        std::ifstream in(d.at("file").get<std::string>());
        if (!in) throw ConfigError("data file not readable: " + d.at("file").get<std::string>());
        Json inner = Json::parse(in);
        return load_data_descriptor(inner);
    }
    throw ConfigError("data descriptor needs 'family', 'samples' or 'file'");
}

RunConfig parse_run_config(const Json& j) {
    RunConfig c;
    if (!j.contains("data")) throw ConfigError("run config: missing 'data'");
    c.data_descriptor = j.at("data");
    if (j.contains("solver")) {
        const Json& s = j.at("solver");
        if (s.contains("rmax")) c.solver.r_max = s.at("rmax").get<double>();
        if (s.contains("rtol")) c.solver.rel_tol = s.at("rtol").get<double>();
        if (s.contains("atol")) c.solver.abs_tol = s.at("atol").get<double>();
        if (s.contains("nodes")) c.solver.nodes = s.at("nodes").get<std::size_t>();
        if (s.contains("series_cutoff")) c.solver.series_cutoff = s.at("series_cutoff").get<double>();
        if (s.contains("residual_gate")) c.solver.residual_gate = s.at("residual_gate").get<double>();
        if (s.contains("branch")) {
            const auto b = s.at("branch").get<std::string>();
            if (b == "theta-minus")
                c.solver.branch = Branch::ThetaMinus;
            else if (b == "theta-plus")
                c.solver.branch = Branch::ThetaPlus;
            else if (b == "auto")
                c.solver.branch = Branch::Auto;
            else
                throw ConfigError("run config: unknown branch '" + b + "'");
        }
        if (s.contains("boundary")) {
            const Json& b = s.at("boundary");
            if (b.is_string()) {
                c.boundary = b.get<std::string>();
                if (c.boundary != "past-horizon" && c.boundary != "future-horizon" &&
                    c.boundary != "auto")
                    throw ConfigError("run config: unknown boundary '" + c.boundary + "'");
            } else if (b.is_object() && b.contains("alpha")) {
                c.boundary = "alpha";
                c.alpha = b.at("alpha").get<double>();
            } else {
                throw ConfigError("run config: malformed boundary");
            }
        }
    }
    if (j.contains("levels")) c.levels = j.at("levels").get<int>();
    if (j.contains("checks")) {
        if (j.at("checks").is_string()) {
            c.checks = {j.at("checks").get<std::string>()};
        } else {
            c.checks = j.at("checks").get<std::vector<std::string>>();
        }
    } else {
        c.checks = {"all"};
    }
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    return c;
}

Json run_config_to_json(const RunConfig& c) {
    Json j;
    j["data"] = c.data_descriptor;
    Json s;
    s["rmax"] = c.solver.r_max;
    s["rtol"] = c.solver.rel_tol;
    s["atol"] = c.solver.abs_tol;
    s["nodes"] = c.solver.nodes;
    s["residual_gate"] = c.solver.residual_gate;
    if (c.boundary == "alpha")
        s["boundary"] = Json{{"alpha", c.alpha}};
    else
        s["boundary"] = c.boundary;
    j["solver"] = s;
    j["levels"] = c.levels;
    j["checks"] = c.checks;
    if (!c.out_dir.empty()) j["out"] = c.out_dir;
    return j;
}

std::vector<std::string> emit_profiles(const InitialData& data, const JangSolution& sol,
                                       const GeometryProfile& geom, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir))
        throw ConfigError("emit_profiles: output directory not writable: " + dir);

    std::vector<std::string> manifest;
    auto open = [&](const std::string& name) {
        const std::string path = (fs::path(dir) / name).string();
        std::ofstream out(path);
        if (!out) throw ConfigError("emit_profiles: cannot write " + path);
        manifest.push_back(path);
        return out;
    };

    {
        auto f = open("solution.csv");
        f << "r,v,v_r,s,phi\n";
        for (std::size_t i = 0; i < sol.grid.size(); ++i)
            f << fmt17(sol.grid[i]) << ',' << fmt17(sol.v[i]) << ',' << fmt17(sol.v_r[i]) << ','
              << fmt17(sol.s[i]) << ',' << fmt17(sol.phi[i]) << '\n';
    }
    {
        auto f = open("geometry.csv");
        f << "r,s,rho,rho_s,m,Rbar,area,Hbar\n";
        for (std::size_t i = 0; i < geom.grid.size(); ++i)
            f << fmt17(geom.grid[i]) << ',' << fmt17(geom.s[i]) << ',' << fmt17(geom.rho[i])
              << ',' << fmt17(geom.rho_s[i]) << ',' << fmt17(geom.m[i]) << ','
              << fmt17(geom.Rbar[i]) << ',' << fmt17(geom.area[i]) << ',' << fmt17(geom.Hbar[i])
              << '\n';
    }
    {
        auto th = curvature_identity_residual(data, sol, DerivativeSource::GridFd);
        auto f = open("residuals.csv");
        f << "r,theorem1_residual,boundary_integrand\n";
        for (std::size_t i = 0; i < sol.grid.size(); ++i) {
            double b = boundary_integrand(data, sol, i);
            if (!std::isfinite(b)) b = 0.0;
            f << fmt17(sol.grid[i]) << ',' << fmt17(th.profile[i]) << ',' << fmt17(b) << '\n';
        }
    }
    return manifest;
}

RunReport run(const RunConfig& config) {
    RunReport rep;
    Json& j = rep.json;
    j["config"] = run_config_to_json(config);
    j["versions"] = {{"jang-penrose", kVersion}};
    j["stages"] = Json::array();
    j["reports"] = Json::object();
    j["manifest"] = Json::array();
    Json timings = Json::object();

    std::set<std::string> want(config.checks.begin(), config.checks.end());
    const bool all = want.count("all") > 0;
    auto enabled = [&](const std::string& stage) {
        if (all) return true;
        if (stage == "validate") return true;  // always
        if (stage == "solve") return want.count("solve") || want.count("verify") ||
                                     want.count("penrose");
        if (stage == "verify") return want.count("verify") > 0;
        if (stage == "penrose") return want.count("penrose") > 0;
        return false;
    };

    auto stage_entry = [&](const std::string& name, const std::string& status,
                           const std::string& error = "") {
        Json e;
        e["name"] = name;
        e["status"] = status;
        if (!error.empty()) e["error"] = error;
        j["stages"].push_back(e);
    };

    const auto t0 = std::chrono::steady_clock::now();
    InitialData data;
    bool dec_ok = true;

    // --- validate ---
    try {
        data = load_data_descriptor(config.data_descriptor);
        Json v;
        v["family"] = data.name();
        v["mass_scale"] = data.mass_scale();
        v["r_max"] = data.r_max();
        v["truncation_offset"] = data.truncation_offset();

        auto cls = classify_horizon(data);
        const char* type = cls.type == HorizonType::Past     ? "past"
                           : cls.type == HorizonType::Future ? "future"
                           : cls.type == HorizonType::Both   ? "both"
                                                             : "none";
        v["horizon"] = {{"type", type},
                        {"theta_plus0", cls.theta_plus0},
                        {"theta_minus0", cls.theta_minus0},
                        {"vanishing_slope", cls.vanishing_slope}};

        auto h = find_outermost_horizon(data);
        if (h.found && (h.outer_violation || h.r_horizon > 1e-8 * data.mass_scale()))
            throw ConfigError("validate: data violate the outermost-horizon condition");

        const std::size_t n_dec = std::min<std::size_t>(config.solver.nodes, 4096);
        auto grid = RadialGrid::cosh_clustered(
            config.solver.r_max > 0 ? std::min(config.solver.r_max, data.r_max())
                                    : std::min(1e4 * data.mass_scale(), data.r_max()),
            data.mass_scale(), std::max<std::size_t>(n_dec, 64));
        auto dec = check_dec(data, grid);
        dec_ok = dec.pass;
        v["dec"] = {{"pass", dec.pass},
                    {"min_margin", dec.min_margin},
                    {"worst_r", dec.worst_r},
                    {"tolerance", dec.tolerance}};

        try {
            auto fal = check_falloff(data);
            v["falloff"] = falloff_to_json(fal);
            if (!fal.pass) {
                v["warnings"] = Json::array({"fall-off clause failure; run proceeds"});
            }
        } catch (const DomainError& e) {
            v["falloff"] = {{"skipped", e.what()}};
        }

        j["reports"]["validate"] = v;
        if (!dec_ok) {
            stage_entry("validate", "failed", "dominant energy condition violated");
            rep.exit_code = kExitCheckFailure;
            j["failed_check"] = "dec";
        } else {
            stage_entry("validate", "ok");
        }
    } catch (const ConfigError& e) {
        stage_entry("validate", "error", e.what());
        rep.exit_code = kExitConfigError;
    } catch (const std::exception& e) {
        stage_entry("validate", "error", e.what());
        rep.exit_code = kExitConfigError;
    }
    timings["validate_ms"] = now_ms(t0);

    // --- solve ---
    JangSolution sol;
    GeometryProfile geom;
    bool solved = false;
    if (rep.exit_code == kExitOk && enabled("solve")) {
        const auto t1 = std::chrono::steady_clock::now();
        try {
            BoundaryCondition bc;
            if (config.boundary == "past-horizon") {
                bc = BoundaryCondition::past_horizon();
            } else if (config.boundary == "future-horizon") {
                bc = BoundaryCondition::future_horizon();
            } else if (config.boundary == "alpha") {
                bc = BoundaryCondition::regular(config.alpha);
            } else {  // auto
                auto cls = classify_horizon(data);
                bc = cls.type == HorizonType::Past     ? BoundaryCondition::past_horizon()
                     : cls.type == HorizonType::Future ? BoundaryCondition::future_horizon()
                                                       : BoundaryCondition::regular(0.0);
            }
            sol = solve(data, bc, config.solver);
            geom = build_geometry(data, sol);
            solved = true;

            Json s;
            s["nodes"] = sol.grid.size();
            s["v0"] = sol.diag.v0;
            s["slope0"] = sol.diag.slope0;
            s["eps_series"] = sol.diag.eps_series;
            s["steps"] = sol.diag.n_steps;
            s["rejected_steps"] = sol.diag.n_rejected;
            s["cross_residual_sup"] = sol.diag.cross_residual_sup;
            s["cross_residual_l2"] = sol.diag.cross_residual_l2;
            s["max_abs_v_interior"] = [&] {
                double m = 0.0;
                for (std::size_t i = 1; i < sol.grid.size(); ++i)
                    m = std::max(m, std::abs(sol.v[i]));
                return m;
            }();
            auto asym = asymptotic_report(sol);
            s["asymptotics"] = {{"zero_tail", asym.zero_tail},
                                {"exponent_v", asym.exponent_v},
                                {"exponent_v_r", asym.exponent_vr},
                                {"sup_r2_v", asym.sup_r2_v}};
            s["adm"] = {{"value", geom.adm.value}, {"uncertainty", geom.adm.uncertainty}};
            j["reports"]["solve"] = s;
            stage_entry("solve", "ok");
        } catch (const SolveError& e) {
            stage_entry("solve", "error", e.what());
            rep.exit_code = kExitSolverFailure;
        } catch (const ConfigError& e) {
            stage_entry("solve", "error", e.what());
            rep.exit_code = kExitConfigError;
        } catch (const std::exception& e) {
            stage_entry("solve", "error", e.what());
            rep.exit_code = kExitSolverFailure;
        }
        timings["solve_ms"] = now_ms(t1);
    }

    // --- verify ---
    if (rep.exit_code == kExitOk && solved && enabled("verify")) {
        const auto t2 = std::chrono::steady_clock::now();
        try {
            auto ver = run_verification(data, sol.boundary, config.solver, config.levels);
            j["reports"]["verification"] = verification_to_json(ver);
            if (!config.out_dir.empty()) {
                // one residual CSV per refinement level
                namespace fs = std::filesystem;
                fs::create_directories(config.out_dir);
                for (int l = 0; l < config.levels; ++l) {
                    SolverConfig c = config.solver;
                    c.nodes = config.solver.nodes << l;
                    auto sl = solve(data, sol.boundary, c);
                    auto th = curvature_identity_residual(data, sl, DerivativeSource::GridFd);
                    const std::string path =
                        (fs::path(config.out_dir) / ("residuals_L" + std::to_string(l) + ".csv"))
                            .string();
                    std::ofstream out(path);
                    if (!out) throw ConfigError("verify: cannot write " + path);
                    out << "r,theorem1_residual,boundary_integrand\n";
                    for (std::size_t i = 0; i < sl.grid.size(); ++i) {
                        double b = boundary_integrand(data, sl, i);
                        if (!std::isfinite(b)) b = 0.0;
                        out << fmt17(sl.grid[i]) << ',' << fmt17(th.profile[i]) << ',' << fmt17(b)
                            << '\n';
                    }
                    j["manifest"].push_back(path);
                }
            }
            if (!ver.pass) {
                stage_entry("verify", "failed");
                for (auto& c : ver.checks)
                    if (!c.pass) {
                        j["failed_check"] = c.name;
                        break;
                    }
                rep.exit_code = kExitCheckFailure;
            } else {
                stage_entry("verify", "ok");
            }
        } catch (const std::exception& e) {
            stage_entry("verify", "error", e.what());
            rep.exit_code = kExitSolverFailure;
        }
        timings["verify_ms"] = now_ms(t2);
    }

    // --- penrose ---
    if (rep.exit_code == kExitOk && solved && enabled("penrose")) {
        const auto t3 = std::chrono::steady_clock::now();
        try {
            auto pr = penrose_report(data, sol, geom, dec_ok);
            j["reports"]["penrose"] = penrose_to_json(pr);
            auto rg = rigidity_check(data, sol, geom, pr);
            j["reports"]["rigidity"] = rigidity_to_json(rg);
            if (!pr.pass) {
                stage_entry("penrose", "failed");
                j["failed_check"] = "penrose";
                rep.exit_code = kExitCheckFailure;
            } else {
                stage_entry("penrose", "ok");
            }
        } catch (const std::exception& e) {
            stage_entry("penrose", "error", e.what());
            rep.exit_code = kExitSolverFailure;
        }
        timings["penrose_ms"] = now_ms(t3);
    }

    // --- profile emission ---
    if (solved && !config.out_dir.empty()) {
        try {
            auto manifest = emit_profiles(data, sol, geom, config.out_dir);
            for (auto& f : manifest) j["manifest"].push_back(f);
        } catch (const ConfigError& e) {
            stage_entry("emit", "error", e.what());
            if (rep.exit_code == kExitOk) rep.exit_code = kExitConfigError;
        }
    }

    j["status"] = rep.exit_code == kExitOk ? "PASS" : "FAIL";
    j["exit_code"] = rep.exit_code;
    j["timings"] = timings;
    return rep;
}

RunReport run_batch(const std::vector<RunConfig>& configs, int workers) {
    RunReport agg;
    agg.json["runs"] = Json::array();
    if (workers < 1) workers = 1;

    std::vector<Json> results(configs.size());
    std::vector<int> codes(configs.size(), 0);
    std::size_t next = 0;
    while (next < configs.size()) {
        const std::size_t batch = std::min<std::size_t>(workers, configs.size() - next);
        std::vector<std::future<RunReport>> futs;
        for (std::size_t k = 0; k < batch; ++k)
            futs.push_back(std::async(std::launch::async,
                                      [&configs, i = next + k] { return run(configs[i]); }));
        for (std::size_t k = 0; k < batch; ++k) {
            auto r = futs[k].get();
            results[next + k] = std::move(r.json);
            codes[next + k] = r.exit_code;
        }
        next += batch;
    }

    int exit_code = kExitOk;
    bool any_fail = false;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        Json entry;
        entry["index"] = i;
        entry["exit_code"] = codes[i];
        entry["verdict"] = codes[i] == 0 ? "PASS" : "FAIL";
        entry["report"] = results[i];
        agg.json["runs"].push_back(entry);
        if (codes[i] >= 2) exit_code = kExitConfigError;
        if (codes[i] != 0) any_fail = true;
    }
    if (exit_code == kExitOk && any_fail) exit_code = kExitCheckFailure;
    agg.exit_code = exit_code;
    agg.json["verdict"] = any_fail ? "FAIL" : "PASS";
    agg.json["exit_code"] = exit_code;
    return agg;
}

}  // namespace jang
