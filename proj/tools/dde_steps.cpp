// dde_steps: declare a delay-equation experiment in a JSON config, run it,
// and leave byte-deterministic CSV/JSON artifacts in an output directory.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddesteps/bounds.hpp"
#include "ddesteps/convergence.hpp"
#include "ddesteps/core.hpp"
#include "ddesteps/csv.hpp"
#include "ddesteps/models.hpp"
#include "ddesteps/probe.hpp"
#include "ddesteps/stepper.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ddesteps;

namespace {

// ---------------------------------------------------------------------------
// JSON helpers

[[noreturn]] void bad_config(const std::string& what) { throw ConfigError(what); }

const json& need(const json& obj, const char* key, const char* where) {
    if (!obj.contains(key))
        bad_config(std::string("missing '") + key + "' in " + where);
    return obj.at(key);
}

double as_number(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    bad_config(where + " must be a number");
}

long long as_integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) bad_config(where + " must be an integer");
    return v.get<long long>();
}

std::vector<double> as_vector(const json& v, const std::string& where) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
        return out;
    }
    if (!v.is_array()) bad_config(where + " must be a number or an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

// Non-finite values are not valid JSON numbers; they travel as strings.
json json_num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json json_num_list(const std::vector<double>& vs) {
    json arr = json::array();
    for (double v : vs) arr.push_back(json_num(v));
    return arr;
}

void reject_unknown_keys(const json& obj, std::vector<std::string> allowed,
                         const char* where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const std::string& k : allowed)
            if (key == k) ok = true;
        if (!ok) bad_config("unknown key '" + key + "' in " + where);
    }
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) bad_config("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) bad_config("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Config model

struct Experiment {
    std::string command;  // solve | ladder | bounds | probe
    std::string model;    // catalog name, "custom", or "" (bounds without model)
    json resolved_params = json::object();

    // Problem data; absent only for model-free bounds runs.
    std::optional<DdeProblem> problem;
    std::optional<AssumptionProfile> certified;

    double tau = 0.0;
    int horizon = 0;
    std::vector<double> eta;

    // Command payloads.
    int solve_N = 0;
    std::vector<int> ladder_N;
    int ladder_refinement = 0;
    AssumptionProfile profile;  // bounds / probe declared
    ProbeBox box;
    long long probe_samples = 0;
    unsigned long long probe_seed = 0;
};

AssumptionProfile parse_profile(const json& v, const char* where) {
    if (!v.is_object()) bad_config(std::string(where) + " must be an object");
    reject_unknown_keys(v, {"K", "H", "L", "alpha", "betas", "gammas"}, where);
    AssumptionProfile p;
    p.K = as_number(need(v, "K", where), std::string(where) + ".K");
    p.H = as_number(need(v, "H", where), std::string(where) + ".H");
    p.L = as_number(need(v, "L", where), std::string(where) + ".L");
    p.alpha = as_number(need(v, "alpha", where), std::string(where) + ".alpha");
    p.betas = as_vector(need(v, "betas", where), std::string(where) + ".betas");
    p.gammas = as_vector(need(v, "gammas", where), std::string(where) + ".gammas");
    p.validate();
    return p;
}

json profile_json(const AssumptionProfile& p) {
    json v = json::object();
    v["K"] = json_num(p.K);
    v["H"] = json_num(p.H);
    v["L"] = json_num(p.L);
    v["alpha"] = json_num(p.alpha);
    v["betas"] = json_num_list(p.betas);
    v["gammas"] = json_num_list(p.gammas);
    return v;
}

// Ranges arrive as [lo, hi] pairs; a dimension-1 block may be a bare pair.
std::vector<std::pair<double, double>> parse_ranges(const json& v, std::size_t want,
                                                    const std::string& where) {
    std::vector<std::pair<double, double>> out;
    auto one = [&](const json& r, const std::string& w) {
        if (!r.is_array() || r.size() != 2)
            bad_config(w + " must be a [lo, hi] pair");
        out.emplace_back(as_number(r[0], w + "[0]"), as_number(r[1], w + "[1]"));
    };
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number() && want == 1) {
        one(v, where);
        return out;
    }
    if (!v.is_array()) bad_config(where + " must be an array of [lo, hi] pairs");
    for (std::size_t i = 0; i < v.size(); ++i) one(v[i], where + "[" + std::to_string(i) + "]");
    if (out.size() != want)
        bad_config(where + " needs " + std::to_string(want) + " [lo, hi] pairs, got " +
                   std::to_string(out.size()));
    return out;
}

double param_or(const json& params, const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    return as_number(params.at(key), std::string("params.") + key);
}

// Builds the problem + certificate for the configured model, with parameter
// overrides applied, and records the fully resolved parameter object.
void build_model(Experiment& exp, const json& params) {
    const std::string& model = exp.model;
    if (model == "custom") {
        reject_unknown_keys(params, {"form", "dim"}, "params");
        const json& form_v = need(params, "form", "params (custom model)");
        if (!form_v.is_string()) bad_config("params.form must be a string");
        const std::string form = form_v.get<std::string>();
        const long long dim = params.contains("dim")
                                  ? as_integer(params.at("dim"), "params.dim")
                                  : 1;
        if (dim < 1 || dim > 1024) bad_config("params.dim must be in [1, 1024]");
        DdeProblem prob;
        if (form == "zero")
            prob.rhs = zero_rhs(static_cast<int>(dim));
        else if (form == "pure_delay")
            prob.rhs = pure_delay_rhs(static_cast<int>(dim));
        else if (form == "linear_decay")
            prob.rhs = linear_decay_rhs(static_cast<int>(dim));
        else
            bad_config("params.form must be one of: zero, pure_delay, linear_decay");
        prob.tag = "custom:" + form;
        exp.problem = std::move(prob);
        exp.resolved_params = {{"form", form}, {"dim", dim}};
        return;
    }
    if (model.rfind("metal", 0) == 0) {
        reject_unknown_keys(params, {"A", "B", "C", "D", "rho", "gamma"}, "params");
        MetalModelParams p = metal_preset_params(model);
        p.A = param_or(params, "A", p.A);
        p.B = param_or(params, "B", p.B);
        p.C = param_or(params, "C", p.C);
        p.D = param_or(params, "D", p.D);
        p.rho = param_or(params, "rho", p.rho);
        p.gamma = param_or(params, "gamma", p.gamma);
        ModelPreset preset = make_preset(model);
        preset.problem.rhs = metal_rhs(p);
        exp.certified = metal_certified_profile(p);
        exp.problem = std::move(preset.problem);
        exp.resolved_params = {{"A", p.A},     {"B", p.B},         {"C", p.C},
                               {"D", p.D},     {"rho", p.rho},     {"gamma", p.gamma}};
        return;
    }
    if (model == "mackey_glass") {
        reject_unknown_keys(params, {"a", "b", "m"}, "params");
        MackeyGlassParams p;
        p.a = param_or(params, "a", p.a);
        p.b = param_or(params, "b", p.b);
        p.m = param_or(params, "m", p.m);
        ModelPreset preset = make_preset(model);
        preset.problem.rhs = mackey_glass_rhs(p);
        exp.problem = std::move(preset.problem);
        exp.resolved_params = {{"a", p.a}, {"b", p.b}, {"m", p.m}};
        return;
    }
    if (model == "sir8") {
        reject_unknown_keys(params,
                            {"beta", "eps", "gamma_b", "gamma_g", "gamma_c", "alpha",
                             "eta_a", "eta_s", "mu_s", "mu_b", "mu_g", "mu_c", "r_b",
                             "r_g", "r_c", "tau1", "tau2", "tau3", "tau4", "n_pop"},
                            "params");
        SirParams p;
        p.beta = param_or(params, "beta", p.beta);
        p.eps = param_or(params, "eps", p.eps);
        p.gamma_b = param_or(params, "gamma_b", p.gamma_b);
        p.gamma_g = param_or(params, "gamma_g", p.gamma_g);
        p.gamma_c = param_or(params, "gamma_c", p.gamma_c);
        p.alpha = param_or(params, "alpha", p.alpha);
        p.eta_a = param_or(params, "eta_a", p.eta_a);
        p.eta_s = param_or(params, "eta_s", p.eta_s);
        p.mu_s = param_or(params, "mu_s", p.mu_s);
        p.mu_b = param_or(params, "mu_b", p.mu_b);
        p.mu_g = param_or(params, "mu_g", p.mu_g);
        p.mu_c = param_or(params, "mu_c", p.mu_c);
        p.r_b = param_or(params, "r_b", p.r_b);
        p.r_g = param_or(params, "r_g", p.r_g);
        p.r_c = param_or(params, "r_c", p.r_c);
        p.tau1 = param_or(params, "tau1", p.tau1);
        p.tau2 = param_or(params, "tau2", p.tau2);
        p.tau3 = param_or(params, "tau3", p.tau3);
        p.tau4 = param_or(params, "tau4", p.tau4);
        p.n_pop = param_or(params, "n_pop", p.n_pop);
        for (const std::string& w : p.warnings())
            std::fprintf(stderr, "warning: %s\n", w.c_str());
        ModelPreset preset = make_preset(model);
        preset.problem.rhs = sir_rhs(p);
        preset.problem.lags = {p.tau1, p.tau2, p.tau3, p.tau4};
        exp.problem = std::move(preset.problem);
        exp.resolved_params = {
            {"beta", p.beta},       {"eps", p.eps},     {"gamma_b", p.gamma_b},
            {"gamma_g", p.gamma_g}, {"gamma_c", p.gamma_c}, {"alpha", p.alpha},
            {"eta_a", p.eta_a},     {"eta_s", p.eta_s}, {"mu_s", p.mu_s},
            {"mu_b", p.mu_b},       {"mu_g", p.mu_g},   {"mu_c", p.mu_c},
            {"r_b", p.r_b},         {"r_g", p.r_g},     {"r_c", p.r_c},
            {"tau1", p.tau1},       {"tau2", p.tau2},   {"tau3", p.tau3},
            {"tau4", p.tau4},       {"n_pop", p.n_pop}};
        return;
    }
    // Any other name must be a catalog preset without parameter overrides.
    ModelPreset preset = make_preset(model);
    if (!params.empty())
        bad_config("model '" + model + "' does not accept parameter overrides");
    exp.certified = preset.profile;
    exp.problem = std::move(preset.problem);
}

Experiment load_config(const std::string& path, const std::string& command) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad_config("cannot read config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        bad_config(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) bad_config("config root must be a JSON object");
    reject_unknown_keys(
        doc, {"model", "params", "tau", "n", "eta", "solve", "ladder", "bounds", "probe"},
        "config");

    int blocks = 0;
    for (const char* key : {"solve", "ladder", "bounds", "probe"})
        if (doc.contains(key)) ++blocks;
    if (blocks != 1)
        bad_config("config must contain exactly one command block "
                   "(solve, ladder, bounds, or probe)");
    if (!doc.contains(command))
        bad_config("config declares a different command block than the '" + command +
                   "' command being run");

    Experiment exp;
    exp.command = command;
    const json params = doc.value("params", json::object());
    if (!params.is_object()) bad_config("params must be a JSON object");

    if (doc.contains("model")) {
        const json& mv = doc.at("model");
        if (!mv.is_string()) bad_config("model must be a string");
        exp.model = mv.get<std::string>();
        build_model(exp, params);
    } else if (command != "bounds") {
        bad_config("config needs a model (only bounds runs may omit it)");
    } else if (!params.empty()) {
        bad_config("params given without a model");
    }

    // Problem data: preset defaults, then explicit overrides.
    if (exp.problem) {
        exp.tau = exp.problem->tau;
        exp.horizon = exp.problem->horizon;
        exp.eta = exp.problem->eta;
    }
    if (doc.contains("tau")) exp.tau = as_number(doc.at("tau"), "tau");
    if (doc.contains("n")) {
        const long long n = as_integer(doc.at("n"), "n");
        if (n < 0) bad_config("n must be >= 0");
        exp.horizon = static_cast<int>(n);
    }
    if (doc.contains("eta")) exp.eta = as_vector(doc.at("eta"), "eta");
    if (exp.problem) {
        exp.problem->tau = exp.tau;
        exp.problem->horizon = exp.horizon;
        exp.problem->eta = exp.eta;
        // Single-lag models follow the base grid; multi-lag models keep their
        // own lag list and only reinterpret the grid.
        if (exp.problem->lags.size() <= 1) exp.problem->lags = {exp.tau};
        exp.problem->validate();
    } else if (!doc.contains("tau") || !doc.contains("n") || !doc.contains("eta")) {
        bad_config("model-free bounds runs need explicit tau, n, and eta");
    }

    const char* cmd = command.c_str();
    const json& block = doc.at(command);
    if (!block.is_object()) bad_config("the " + command + " block must be an object");
    if (command == "solve") {
        reject_unknown_keys(block, {"N"}, cmd);
        const long long N = as_integer(need(block, "N", cmd), "solve.N");
        if (N < 1 || N > 100'000'000) bad_config("solve.N must be in [1, 1e8]");
        exp.solve_N = static_cast<int>(N);
    } else if (command == "ladder") {
        reject_unknown_keys(block, {"N_values", "refinement"}, cmd);
        const json& nv = need(block, "N_values", cmd);
        if (!nv.is_array() || nv.empty()) bad_config("ladder.N_values must be a nonempty array");
        for (std::size_t i = 0; i < nv.size(); ++i) {
            const long long N =
                as_integer(nv[i], "ladder.N_values[" + std::to_string(i) + "]");
            if (N < 1 || N > 100'000'000) bad_config("ladder N values must be in [1, 1e8]");
            exp.ladder_N.push_back(static_cast<int>(N));
        }
        const long long refinement = as_integer(need(block, "refinement", cmd), "ladder.refinement");
        if (refinement < 1 || refinement > 1'000'000)
            bad_config("ladder.refinement must be in [1, 1e6]");
        exp.ladder_refinement = static_cast<int>(refinement);
    } else if (command == "bounds") {
        reject_unknown_keys(block, {"profile"}, cmd);
        if (block.contains("profile"))
            exp.profile = parse_profile(block.at("profile"), "bounds.profile");
        else if (exp.certified)
            exp.profile = *exp.certified;
        else
            bad_config("bounds needs a profile (no certificate exists for this model)");
    } else {  // probe
        reject_unknown_keys(block, {"box", "samples", "seed", "declared"}, cmd);
        if (!exp.problem) bad_config("probe needs a model");
        const json& box_v = need(block, "box", cmd);
        if (!box_v.is_object()) bad_config("probe.box must be an object");
        reject_unknown_keys(box_v, {"t", "y", "z"}, "probe.box");
        const int dim = exp.problem->rhs.dim;
        const int lags = exp.problem->rhs.num_lags;
        const auto t_range = parse_ranges(need(box_v, "t", "probe.box"), 1, "probe.box.t");
        exp.box.t_lo = t_range[0].first;
        exp.box.t_hi = t_range[0].second;
        for (const auto& [lo, hi] :
             parse_ranges(need(box_v, "y", "probe.box"), dim, "probe.box.y")) {
            exp.box.y_lo.push_back(lo);
            exp.box.y_hi.push_back(hi);
        }
        for (const auto& [lo, hi] : parse_ranges(need(box_v, "z", "probe.box"),
                                                 static_cast<std::size_t>(dim) * lags,
                                                 "probe.box.z")) {
            exp.box.z_lo.push_back(lo);
            exp.box.z_hi.push_back(hi);
        }
        exp.box.validate(dim, lags);
        const long long samples = as_integer(need(block, "samples", cmd), "probe.samples");
        if (samples < 0 || samples > 1'000'000'000) bad_config("probe.samples must be in [0, 1e9]");
        exp.probe_samples = samples;
        if (block.contains("seed")) {
            const long long seed = as_integer(block.at("seed"), "probe.seed");
            if (seed < 0) bad_config("probe.seed must be >= 0");
            exp.probe_seed = static_cast<unsigned long long>(seed);
        }
        if (block.contains("declared"))
            exp.profile = parse_profile(block.at("declared"), "probe.declared");
        else if (exp.certified)
            exp.profile = *exp.certified;
        else
            bad_config("probe needs a declared profile (no certificate exists for this model)");
    }
    return exp;
}

// The canonical re-emission: fully resolved values in a fixed key order, so
// normalizing a normalized config is the identity.
json normalized_config(const Experiment& exp) {
    json doc = json::object();
    if (!exp.model.empty()) doc["model"] = exp.model;
    if (!exp.resolved_params.empty()) doc["params"] = exp.resolved_params;
    doc["tau"] = exp.tau;
    doc["n"] = exp.horizon;
    doc["eta"] = json_num_list(exp.eta);
    if (exp.command == "solve") {
        doc["solve"] = {{"N", exp.solve_N}};
    } else if (exp.command == "ladder") {
        doc["ladder"] = {{"N_values", exp.ladder_N}, {"refinement", exp.ladder_refinement}};
    } else if (exp.command == "bounds") {
        doc["bounds"] = {{"profile", profile_json(exp.profile)}};
    } else {
        json ranges = json::object();
        ranges["t"] = json::array({json_num(exp.box.t_lo), json_num(exp.box.t_hi)});
        json yr = json::array();
        for (std::size_t i = 0; i < exp.box.y_lo.size(); ++i)
            yr.push_back(json::array({json_num(exp.box.y_lo[i]), json_num(exp.box.y_hi[i])}));
        ranges["y"] = yr;
        json zr = json::array();
        for (std::size_t i = 0; i < exp.box.z_lo.size(); ++i)
            zr.push_back(json::array({json_num(exp.box.z_lo[i]), json_num(exp.box.z_hi[i])}));
        ranges["z"] = zr;
        doc["probe"] = {{"box", ranges},
                        {"samples", exp.probe_samples},
                        {"seed", exp.probe_seed},
                        {"declared", profile_json(exp.profile)}};
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_solve(const Experiment& exp, const fs::path& out_dir) {
    const Trajectory traj = euler_solve_dde(*exp.problem, exp.solve_N);
    {
        std::ofstream csv(out_dir / "trajectory.csv", std::ios::binary);
        if (!csv) bad_config("cannot open trajectory.csv for writing");
        write_trajectory_csv(traj, csv);
    }
    const auto last = traj.nodes() == 0
                          ? std::span<const double>()
                          : traj.state(traj.nodes() - 1);
    std::printf("final state:");
    for (double v : last) std::printf(" %.17g", v);
    std::printf("\nmax node norm: %.17g\n", traj.max_node_norm());
    if (traj.diverged) {
        std::printf("solve left the finite range at node %zu (t=%.17g); "
                    "trajectory truncated there\n",
                    traj.diverged_at, traj.mesh.time_at(traj.diverged_at));
        return 3;
    }
    return 0;
}

int cmd_ladder(const Experiment& exp, const fs::path& out_dir, int jobs) {
    LadderSpec spec;
    spec.problem = *exp.problem;
    spec.N_values = exp.ladder_N;
    spec.refinement = exp.ladder_refinement;
    spec.profile = exp.certified;
    const ConvergenceReport report = run_ladder(spec, jobs);

    std::string csv = "N,h,sup_error\n";
    for (const LadderRow& row : report.rows) {
        char line[128];
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", row.N, row.h, row.sup_error);
        csv += line;
    }
    write_text(out_dir / "ladder.csv", csv);

    std::string loglog;
    for (const LadderRow& row : report.rows) {
        if (!(row.sup_error > 0.0) || !std::isfinite(row.sup_error)) continue;
        char line[128];
        std::snprintf(line, sizeof line, "%.17g %.17g\n", std::log10(double(row.N)),
                      -std::log10(row.sup_error));
        loglog += line;
    }
    write_text(out_dir / "loglog.dat", loglog);

    json summary = json::object();
    summary["slope"] = report.slope ? json_num(*report.slope) : json();
    summary["intercept"] = report.intercept ? json_num(*report.intercept) : json();
    summary["theoretical_rate"] =
        report.theoretical_rate ? json_num(*report.theoretical_rate) : json();
    summary["rate_extrapolated"] = report.rate_extrapolated;
    summary["warnings"] = report.warnings;
    write_text(out_dir / "summary.json", summary.dump(2) + "\n");

    for (const std::string& w : report.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (report.slope)
        std::printf("empirical slope: %.6f", *report.slope);
    else
        std::printf("empirical slope: undefined");
    if (report.theoretical_rate)
        std::printf("   proved rate: %.6f%s\n", *report.theoretical_rate,
                    report.rate_extrapolated ? " (extrapolated)" : "");
    else
        std::printf("   proved rate: n/a\n");
    return report.slope ? 0 : 4;
}

int cmd_bounds(const Experiment& exp, const fs::path& out_dir) {
    const double eta_norm = norm2(exp.eta);
    const SolutionBounds sol =
        analytic_solution_bounds(exp.profile, exp.eta, exp.tau, exp.horizon);
    const std::vector<double> ktilde =
        euler_trajectory_bound(exp.profile, exp.eta, exp.tau, exp.horizon);
    const RateExponents rates = rate_exponents(exp.profile, exp.horizon);

    json doc = json::object();
    doc["eta_norm"] = json_num(eta_norm);
    doc["K_minus1"] = json_num(sol.K_minus1);
    doc["K"] = json_num_list(sol.K_list);
    doc["Kbar"] = json_num_list(sol.Kbar_list);
    doc["Ktilde"] = json_num_list(ktilde);
    doc["rate_per_segment"] = json_num_list(rates.per_segment);
    json terms = json::array();
    for (const std::vector<double>& seg : rates.term_sets) terms.push_back(json_num_list(seg));
    doc["rate_terms"] = terms;
    doc["rate_extrapolated"] = rates.extrapolated;
    write_text(out_dir / "bounds.json", doc.dump(2) + "\n");

    std::printf("segment rates:");
    for (double r : rates.per_segment) std::printf(" %.6g", r);
    std::printf("%s\n", rates.extrapolated ? " (extrapolated)" : "");
    return 0;
}

int cmd_probe(const Experiment& exp, const fs::path& out_dir, int jobs) {
    const ProbeReport report = probe_assumptions(exp.problem->rhs, exp.profile, exp.box,
                                                 exp.probe_samples, exp.probe_seed, jobs);
    json doc = json::object();
    doc["samples"] = report.samples;
    doc["K_est"] = json_num(report.K_est);
    doc["H_est"] = json_num(report.H_est);
    doc["L_est"] = json_num(report.L_est);
    doc["alpha_fit"] = json_num(report.alpha_fit);
    doc["beta_fit"] = json_num(report.beta_fit);
    doc["gamma_fit"] = json_num(report.gamma_fit);
    doc["total_violations"] = report.total_violations;
    json vs = json::array();
    for (const ProbeViolation& v : report.violations) {
        json row = json::object();
        row["condition"] = v.condition;
        row["sample"] = v.sample;
        row["lhs"] = json_num(v.lhs);
        row["rhs"] = json_num(v.rhs);
        row["t"] = json_num(v.t);
        row["y"] = json_num_list(v.y);
        row["z"] = json_num_list(v.z);
        vs.push_back(row);
    }
    doc["violations"] = vs;
    write_text(out_dir / "probe.json", doc.dump(2) + "\n");

    // Violations are findings, not failures; the run itself succeeded.
    std::printf("%lld samples, %lld violation(s); K_est=%.6g H_est=%.6g L_est=%.6g\n",
                static_cast<long long>(report.samples),
                static_cast<long long>(report.total_violations), report.K_est,
                report.H_est, report.L_est);
    return 0;
}

int run(const std::string& command, const std::string& config_path,
        const std::string& out_path, int jobs) {
    const Experiment exp = load_config(config_path, command);
    const fs::path out_dir(out_path);
    fs::create_directories(out_dir);
    write_text(out_dir / "config.json", normalized_config(exp).dump(2) + "\n");
    if (command == "solve") return cmd_solve(exp, out_dir);
    if (command == "ladder") return cmd_ladder(exp, out_dir, jobs);
    if (command == "bounds") return cmd_bounds(exp, out_dir);
    return cmd_probe(exp, out_dir, jobs);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-step delay-equation solver and experiment harness"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int jobs = 1;
    std::vector<CLI::App*> subs;
    for (const char* name : {"solve", "ladder", "bounds", "probe"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")
            ->required();
        sub->add_option("--out", out_path, "output directory")->required();
        sub->add_option("--jobs", jobs, "worker count for parallel phases")
            ->envname("DDE_STEPS_JOBS")
            ->check(CLI::Range(1, 4096));
        subs.push_back(sub);
    }
    (void)subs;

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, config_path, out_path, jobs);
    } catch (const DegenerateFitError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
