// finsler-lab: command-line front end for the anisotropic semilinear
// verification toolkit.  Every subcommand reads one JSON config document,
// runs the corresponding library checks, writes <out>/summary.json (schema
// "finsler-lab/1") plus CSV data files, and exits 0 when every asserted
// property holds, 2 on a property failure, 1 on usage or domain errors.
// All emitted artifacts are byte-deterministic for a fixed config + seed.

#include "CLI11.hpp"

#include "finsler/bvp.hpp"
#include "finsler/energy.hpp"
#include "finsler/geometry.hpp"
#include "finsler/inequalities.hpp"
#include "finsler/io.hpp"
#include "finsler/norm.hpp"
#include "finsler/norm_checks.hpp"
#include "finsler/radial.hpp"
#include "finsler/regularity.hpp"
#include "finsler/rng.hpp"
#include "finsler/stability.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

using nlohmann::json;
using namespace finsler;

namespace {

// ----------------------------------------------------------- config access

[[noreturn]] void config_error(const std::string& msg) {
    throw std::domain_error("config: " + msg);
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    if (!j.is_object()) config_error(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            config_error("unknown key \"" + it.key() + "\" in " + where);
}

const json& require(const json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) config_error("missing key \"" + key + "\" in " + where);
    return *it;
}

double get_number(const json& j, const std::string& key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_number()) config_error("\"" + key + "\" in " + where + " must be a number");
    return v.get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) config_error("\"" + key + "\" must be a number");
    return it->get<double>();
}

int get_int_or(const json& j, const std::string& key, int fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) config_error("\"" + key + "\" must be an integer");
    return it->get<int>();
}

bool get_bool_or(const json& j, const std::string& key, bool fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) config_error("\"" + key + "\" must be a boolean");
    return it->get<bool>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_string()) config_error("\"" + key + "\" in " + where + " must be a string");
    return v.get<std::string>();
}

// ---------------------------------------------------------- domain parsing

Norm parse_norm(const json& j) {
    check_keys(j, {"kind", "dim", "A", "diag", "eps", "harmonic"}, "norm");
    const std::string kind = get_string(j, "kind", "norm");
    if (kind == "euclidean") {
        return Norm(NormSpec::euclidean(get_int_or(j, "dim", 2)));
    }
    if (kind == "ellipsoidal") {
        Eigen::MatrixXd A;
        if (j.contains("diag")) {
            const auto d = j.at("diag").get<std::vector<double>>();
            A = Eigen::MatrixXd::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
            for (std::size_t i = 0; i < d.size(); ++i)
                A(static_cast<int>(i), static_cast<int>(i)) = d[i];
        } else if (j.contains("A")) {
            const auto rows = j.at("A").get<std::vector<std::vector<double>>>();
            const int n = static_cast<int>(rows.size());
            A.resize(n, n);
            for (int r = 0; r < n; ++r) {
                if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != n)
                    config_error("norm matrix \"A\" must be square");
                for (int c = 0; c < n; ++c)
                    A(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            }
        } else {
            config_error("ellipsoidal norm needs \"A\" or \"diag\"");
        }
        return Norm(NormSpec::ellipsoidal(A));
    }
    if (kind == "perturbed") {
        return Norm(NormSpec::perturbed(get_number(j, "eps", "norm"),
                                        get_int_or(j, "harmonic", 4)));
    }
    config_error("unknown norm kind \"" + kind + "\"");
}

Nonlinearity parse_nonlinearity(const json& j) {
    check_keys(j, {"kind", "p"}, "nonlinearity");
    const std::string kind = get_string(j, "kind", "nonlinearity");
    const double p = get_number_or(j, "p", 0.0);
    return Nonlinearity::from_name(kind, p);
}

std::vector<double> parse_grid(const json& j, const std::string& where) {
    if (j.is_array()) {
        const auto v = j.get<std::vector<double>>();
        if (v.empty()) config_error(where + " must be nonempty");
        return v;
    }
    check_keys(j, {"from", "to", "points", "spacing"}, where);
    const double a = get_number(j, "from", where);
    const double b = get_number(j, "to", where);
    const int n = get_int_or(j, "points", 101);
    std::string spacing = "uniform";
    if (j.contains("spacing")) spacing = get_string(j, "spacing", where);
    if (spacing == "uniform") return uniform_grid(a, b, n);
    if (spacing == "geometric") return geometric_grid(a, b, n);
    config_error(where + ": spacing must be \"uniform\" or \"geometric\"");
}

RadialProfile parse_profile(const json& j) {
    check_keys(j, {"family", "lambda", "N", "grid", "nonlinearity", "u0", "r_max", "steps"},
               "profile");
    const std::string family = get_string(j, "family", "profile");
    std::vector<double> grid;
    if (j.contains("grid")) grid = parse_grid(j.at("grid"), "profile.grid");
    if (family == "liouville")
        return explicit_liouville(get_number_or(j, "lambda", 1.0), grid);
    if (family == "critical_power")
        return explicit_critical_power(get_number_or(j, "lambda", 1.0),
                                       get_int_or(j, "N", 4), grid);
    if (family == "singular_log")
        return singular_log_solution(get_int_or(j, "N", 10), grid);
    if (family == "shoot") {
        const Nonlinearity f = parse_nonlinearity(require(j, "nonlinearity", "profile"));
        return shoot(f, get_int_or(j, "N", 4), get_number(j, "u0", "profile"),
                     get_number_or(j, "r_max", 10.0), get_int_or(j, "steps", 4000));
    }
    config_error("unknown profile family \"" + family + "\"");
}

GridDomain2D parse_domain(const json& j, const Norm& norm) {
    check_keys(j, {"shape", "radius", "cells_across", "ax", "ay", "bx", "by", "cells_x"},
               "domain");
    const std::string shape = get_string(j, "shape", "domain");
    if (shape == "wulff_ball")
        return GridDomain2D::wulff_ball(norm, get_number(j, "radius", "domain"),
                                        get_int_or(j, "cells_across", 64));
    if (shape == "rectangle")
        return GridDomain2D::rectangle(get_number(j, "ax", "domain"),
                                       get_number(j, "ay", "domain"),
                                       get_number(j, "bx", "domain"),
                                       get_number(j, "by", "domain"),
                                       get_int_or(j, "cells_x", 64));
    config_error("unknown domain shape \"" + shape + "\"");
}

/// Scalar field sampled onto grids for coarea / epsilon-scan / decay-probe.
std::function<double(double, double)> parse_field(const json& j, const Norm& norm) {
    check_keys(j, {"kind", "profile", "ax", "ay", "b"}, "field");
    const std::string kind = get_string(j, "kind", "field");
    if (kind == "cone") {
        return [&norm](double x, double y) {
            Eigen::Vector2d v(x, y);
            return 1.0 - norm.dual(v);
        };
    }
    if (kind == "linear") {
        const double ax = get_number_or(j, "ax", 1.0);
        const double ay = get_number_or(j, "ay", 0.0);
        const double b = get_number_or(j, "b", 0.0);
        return [ax, ay, b](double x, double y) { return ax * x + ay * y + b; };
    }
    if (kind == "radial") {
        auto profile = std::make_shared<RadialProfile>(parse_profile(require(j, "profile", "field")));
        return [profile, &norm](double x, double y) {
            Eigen::Vector2d v(x, y);
            return profile->value(norm.dual(v));
        };
    }
    config_error("unknown field kind \"" + kind + "\"");
}

EnergyKind parse_energy_kind(const std::string& s) {
    if (s == "exponential") return EnergyKind::Exponential;
    if (s == "power") return EnergyKind::Power;
    if (s == "negative-power") return EnergyKind::NegativePower;
    config_error("unknown energy kind \"" + s + "\"");
}

// --------------------------------------------------------------- run state

struct RunContext {
    json config;
    std::string config_hash;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool quiet = false;

    json results;
    json tolerances;
    bool pass = true;

    void note(const std::string& line) const {
        if (!quiet) std::cout << line << "\n";
    }
    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& rows) const {
        io::write_csv(out_dir + "/" + name, header, rows);
    }
};

void write_summary(RunContext& ctx, const std::string& subcommand) {
    json summary;
    summary["schema"] = "finsler-lab/1";
    summary["subcommand"] = subcommand;
    summary["config_hash"] = ctx.config_hash;
    summary["seed"] = ctx.seed;
    summary["pass"] = ctx.pass;
    summary["tolerances"] = ctx.tolerances;
    summary["results"] = ctx.results;
    io::write_text_file(ctx.out_dir + "/summary.json", io::dump_deterministic(summary));
    ctx.note(std::string(ctx.pass ? "[PASS] " : "[FAIL] ") + subcommand + " -> " +
             ctx.out_dir + "/summary.json");
}

json profile_json(const RadialProfile& p) {
    json out;
    out["provenance"] = to_string(p.provenance);
    out["N"] = p.N;
    out["origin_regular"] = p.origin_regular;
    out["r_min"] = p.r_min();
    out["r_max"] = p.r_max();
    out["points"] = p.r.size();
    out["truncated"] = p.truncated;
    json params = json::object();
    for (const auto& [k, v] : p.params) params[k] = v;
    out["params"] = params;
    return out;
}

// ------------------------------------------------------------- subcommands

void run_norm_check(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"norm", "samples", "tolerance", "seed"}, "config");
    const Norm norm = parse_norm(require(cfg, "norm", "config"));
    const int samples = get_int_or(cfg, "samples", 1000);
    const double tol = get_number_or(cfg, "tolerance", default_norm_tol(norm));
    const NormPropertyReport report = verify_properties(norm, samples, ctx.seed, tol);

    ctx.tolerances["identity"] = tol;
    json props = json::array();
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < report.properties.size(); ++i) {
        const PropertyResult& p = report.properties[i];
        json e;
        e["name"] = p.name;
        e["max_residual"] = p.max_residual;
        e["tolerance"] = p.tol;
        e["pass"] = p.pass;
        props.push_back(e);
        rows.push_back({static_cast<double>(i), p.max_residual, p.tol,
                        p.pass ? 1.0 : 0.0});
        if (!p.pass)
            ctx.note("  violated: " + p.name + " (max residual " +
                     io::format_g17(p.max_residual) + ")");
    }
    ctx.results["kind"] = to_string(norm.kind());
    ctx.results["samples"] = samples;
    ctx.results["properties"] = props;
    ctx.results["kappa0"] = norm.kappa0();
    ctx.results["kappa0_error"] = norm.kappa0_error();
    json emp;
    emp["a"] = report.a_empirical;
    emp["b"] = report.b_empirical;
    emp["lambda_sq"] = report.lambda2_empirical;
    emp["Lambda"] = report.Lambda_empirical;
    ctx.results["empirical"] = emp;
    ctx.csv("norm_properties.csv", {"index", "max_residual", "tolerance", "pass"}, rows);
    ctx.pass = report.all_pass();
}

void run_solve_radial(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"profile", "nonlinearity", "tolerance", "seed"}, "config");
    const RadialProfile profile = parse_profile(require(cfg, "profile", "config"));
    const Nonlinearity f = parse_nonlinearity(require(cfg, "nonlinearity", "config"));
    const double tol = get_number_or(cfg, "tolerance", 1e-8);
    const double res = residual(profile, f);

    ctx.tolerances["residual"] = tol;
    ctx.results["profile"] = profile_json(profile);
    ctx.results["nonlinearity"] = f.name();
    ctx.results["residual"] = res;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < profile.r.size(); ++i)
        rows.push_back({profile.r[i], profile.phi[i], profile.dphi[i]});
    ctx.csv("profile.csv", {"r", "phi", "dphi"}, rows);
    ctx.pass = res <= tol;
}

void run_solve_bvp(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"norm", "nonlinearity", "domain", "boundary", "newton", "tolerance", "seed"},
               "config");
    const Norm norm = parse_norm(require(cfg, "norm", "config"));
    const Nonlinearity f = parse_nonlinearity(require(cfg, "nonlinearity", "config"));
    GridDomain2D domain = parse_domain(require(cfg, "domain", "config"), norm);

    const json& bc = require(cfg, "boundary", "config");
    check_keys(bc, {"kind", "value", "profile"}, "boundary");
    const std::string bkind = get_string(bc, "kind", "boundary");
    if (bkind == "zero") {
        domain.set_boundary_values([](double, double) { return 0.0; });
    } else if (bkind == "constant") {
        const double v = get_number(bc, "value", "boundary");
        domain.set_boundary_values([v](double, double) { return v; });
    } else if (bkind == "radial") {
        auto profile = std::make_shared<RadialProfile>(parse_profile(require(bc, "profile", "boundary")));
        domain.set_boundary_values([profile, &norm](double x, double y) {
            Eigen::Vector2d v(x, y);
            return profile->value(norm.dual(v));
        });
    } else {
        config_error("unknown boundary kind \"" + bkind + "\"");
    }

    NewtonOptions opts;
    if (cfg.contains("newton")) {
        const json& nw = cfg.at("newton");
        check_keys(nw, {"tol", "max_iter", "max_halvings"}, "newton");
        opts.tol = get_number_or(nw, "tol", opts.tol);
        opts.max_iter = get_int_or(nw, "max_iter", opts.max_iter);
        opts.max_halvings = get_int_or(nw, "max_halvings", opts.max_halvings);
    }
    const double tol = get_number_or(cfg, "tolerance", 1e-8);
    ctx.tolerances["residual"] = tol;

    try {
        const DiscreteSolution2D sol = solve_semilinear(domain, norm, f, opts);
        const double recheck = residual_norm(sol);
        ctx.results["converged"] = sol.converged;
        ctx.results["iterations"] = sol.iterations;
        ctx.results["residual"] = recheck;
        ctx.results["residual_history"] = sol.residual_history;
        ctx.results["interior_nodes"] = sol.domain.count(NodeStatus::Interior);
        ctx.results["shape"] = sol.domain.shape;
        std::vector<std::vector<double>> rows;
        for (int j = 0; j < domain.ny; ++j)
            for (int i = 0; i < domain.nx; ++i) {
                if (domain.at(i, j) == NodeStatus::Outside) continue;
                const Eigen::Vector2d p = domain.point(i, j);
                rows.push_back({p.x(), p.y(), sol.values[static_cast<std::size_t>(domain.index(i, j))],
                                domain.at(i, j) == NodeStatus::Interior ? 1.0 : 0.0});
            }
        ctx.csv("solution.csv", {"x", "y", "u", "interior"}, rows);
        ctx.pass = sol.converged && recheck <= tol;
    } catch (const NewtonDivergence& e) {
        ctx.results["converged"] = false;
        ctx.results["error"] = std::string(e.what());
        ctx.results["residual_history"] = e.residual_history;
        ctx.pass = false;
    }
}

void run_stability(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"profile", "nonlinearity", "R0", "R1", "nodes", "expect", "seed"}, "config");
    const RadialProfile profile = parse_profile(require(cfg, "profile", "config"));
    const Nonlinearity f = parse_nonlinearity(require(cfg, "nonlinearity", "config"));
    const double R0 = get_number_or(cfg, "R0", 0.0);
    const double R1 = get_number(cfg, "R1", "config");
    const int nodes = get_int_or(cfg, "nodes", 2000);

    const StabilityVerdict v = stability_verdict(profile, f, R0, R1, nodes);
    ctx.tolerances["eigenvalue_floor"] = kStabilityTol;
    ctx.results["profile"] = profile_json(profile);
    ctx.results["domain"] = v.domain;
    ctx.results["kind"] = to_string(v.kind);
    ctx.results["lambda_min"] = v.lambda_min;
    ctx.results["direct_form_value"] = v.direct_form_value;
    ctx.results["direct_mass_value"] = v.direct_mass_value;
    ctx.csv("stability.csv", {"R0", "R1", "lambda_min", "direct_form_value"},
            {{R0, R1, v.lambda_min, v.direct_form_value}});

    if (cfg.contains("expect")) {
        const std::string expect = get_string(cfg, "expect", "config");
        if (expect == "stable")
            ctx.pass = v.kind == VerdictKind::StableCertified;
        else if (expect == "unstable")
            ctx.pass = v.kind == VerdictKind::UnstableWithCertificate;
        else
            config_error("expect must be \"stable\" or \"unstable\"");
        ctx.results["expect"] = expect;
    } else {
        ctx.pass = v.kind != VerdictKind::Inconclusive;
    }
}

void run_exterior_stability(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"profile", "nonlinearity", "R0_ladder", "multipliers", "nodes", "seed"},
               "config");
    const RadialProfile profile = parse_profile(require(cfg, "profile", "config"));
    const Nonlinearity f = parse_nonlinearity(require(cfg, "nonlinearity", "config"));
    const std::vector<double> ladder =
        parse_grid(require(cfg, "R0_ladder", "config"), "R0_ladder");
    std::vector<double> multipliers{2.0, 4.0, 8.0};
    if (cfg.contains("multipliers"))
        multipliers = parse_grid(cfg.at("multipliers"), "multipliers");
    const int nodes = get_int_or(cfg, "nodes", 2000);

    const ExteriorScanResult scan = exterior_scan(profile, f, ladder, multipliers, nodes);
    ctx.tolerances["eigenvalue_floor"] = kStabilityTol;
    ctx.results["profile"] = profile_json(profile);
    ctx.results["found"] = scan.found;
    ctx.results["stable_R0"] = scan.stable_R0;
    ctx.results["annuli_tested"] = scan.verdicts.size();
    std::vector<std::vector<double>> rows;
    json verdicts = json::array();
    for (std::size_t i = 0; i < scan.verdicts.size(); ++i) {
        const StabilityVerdict& v = scan.verdicts[i];
        json e;
        e["domain"] = v.domain;
        e["kind"] = to_string(v.kind);
        e["lambda_min"] = v.lambda_min;
        verdicts.push_back(e);
        rows.push_back({static_cast<double>(i), v.lambda_min});
    }
    ctx.results["verdicts"] = verdicts;
    ctx.csv("exterior.csv", {"index", "lambda_min"}, rows);
    ctx.pass = scan.found;
}

void run_energy_scan(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"profile", "kind", "p", "lambdas", "negate", "tolerance", "seed"}, "config");
    const RadialProfile profile = parse_profile(require(cfg, "profile", "config"));
    const EnergyKind kind = parse_energy_kind(get_string(cfg, "kind", "config"));
    const double p = get_number_or(cfg, "p", 0.0);
    const std::vector<double> lambdas = parse_grid(require(cfg, "lambdas", "config"), "lambdas");
    const bool negate = get_bool_or(cfg, "negate", false);
    const double tol = get_number_or(cfg, "tolerance", 1e-7);

    const EnergyScan scan = monotonicity_scan(kind, profile, p, lambdas, negate);
    ctx.tolerances["monotonicity"] = tol;
    ctx.results["profile"] = profile_json(profile);
    ctx.results["kind"] = to_string(kind);
    ctx.results["negated"] = scan.negated;
    ctx.results["log_substitution"] = scan.log_substitution;
    ctx.results["min_forward_diff"] = scan.min_forward_diff;
    ctx.results["min_index"] = scan.min_index;
    ctx.results["value_scale"] = scan.value_scale;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < scan.lambda.size(); ++i)
        rows.push_back({scan.lambda[i], scan.value[i],
                        i < scan.forward_diff.size() ? scan.forward_diff[i] : 0.0});
    ctx.csv("energy.csv", {"lambda", "value", "forward_diff"}, rows);
    ctx.pass = scan.passes(tol);
}

void run_hardy(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"N", "s", "tests", "origin_avoiding", "tolerance", "extremal", "seed"},
               "config");
    const int N = get_int_or(cfg, "N", 3);
    const double s = get_number(cfg, "s", "config");
    const int tests = get_int_or(cfg, "tests", 100);
    const bool origin_avoiding = get_bool_or(cfg, "origin_avoiding", s > N);
    const double tol = get_number_or(cfg, "tolerance", 1e-6);

    const HardyResult result = hardy_check(N, s, tests, ctx.seed, origin_avoiding);
    ctx.tolerances["ratio_slack"] = tol;
    ctx.results["N"] = N;
    ctx.results["s"] = s;
    ctx.results["tests"] = tests;
    ctx.results["origin_avoiding"] = origin_avoiding;
    ctx.results["threshold"] = result.threshold;
    ctx.results["min_ratio"] = result.min_ratio;
    ctx.results["worst_index"] = result.worst_index;
    ctx.pass = result.min_ratio >= 1.0 - tol;

    if (cfg.contains("extremal")) {
        const json& ex = cfg.at("extremal");
        check_keys(ex, {"ramp", "plateau", "max_ratio"}, "extremal");
        const double ramp = get_number_or(ex, "ramp", 8.0);
        const double plateau = get_number_or(ex, "plateau", 24.0);
        const double cap = get_number_or(ex, "max_ratio", 1.05);
        const double ratio = hardy_extremal_ratio(N, s, ramp, plateau);
        ctx.tolerances["extremal_cap"] = cap;
        json e;
        e["ramp"] = ramp;
        e["plateau"] = plateau;
        e["ratio"] = ratio;
        ctx.results["extremal"] = e;
        ctx.pass = ctx.pass && ratio <= cap;
    }

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < result.ratios.size(); ++i)
        rows.push_back({result.tests[i].center, result.tests[i].width, result.ratios[i]});
    ctx.csv("hardy.csv", {"center", "width", "ratio"}, rows);
}

void run_isoperimetric(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"norm", "shapes", "tolerance", "wulff_tolerance", "seed"}, "config");
    const Norm norm = parse_norm(require(cfg, "norm", "config"));
    const double tol = get_number_or(cfg, "tolerance", 1e-6);
    const double wtol = get_number_or(cfg, "wulff_tolerance", 1e-3);
    ctx.tolerances["deficit_slack"] = tol;
    ctx.tolerances["wulff_relative"] = wtol;

    const json& shapes = require(cfg, "shapes", "config");
    if (!shapes.is_array() || shapes.empty()) config_error("\"shapes\" must be a nonempty array");

    Rng rng(ctx.seed);
    json entries = json::array();
    std::vector<std::vector<double>> rows;
    bool all_pass = true;
    int shape_index = 0;

    const auto record = [&](const std::string& label, const Polygon& poly, bool equality_case) {
        const IsoperimetricResult iso = isoperimetric_check(poly, norm);
        const bool ok = equality_case ? std::abs(iso.deficit) <= wtol * iso.perimeter
                                      : iso.deficit >= -tol * iso.perimeter;
        json e;
        e["label"] = label;
        e["vertices"] = poly.v.size();
        e["perimeter"] = iso.perimeter;
        e["area"] = iso.area;
        e["bound"] = iso.bound;
        e["deficit"] = iso.deficit;
        e["equality_case"] = equality_case;
        e["pass"] = ok;
        entries.push_back(e);
        rows.push_back({static_cast<double>(shape_index++), iso.perimeter, iso.area,
                        iso.bound, iso.deficit, ok ? 1.0 : 0.0});
        all_pass = all_pass && ok;
    };

    for (const json& sh : shapes) {
        check_keys(sh, {"kind", "vertices", "side", "sides", "radius", "count", "points", "scale"},
                   "shape");
        const std::string kind = get_string(sh, "kind", "shape");
        if (kind == "wulff") {
            const int vertices = get_int_or(sh, "vertices", 4096);
            record("wulff-" + std::to_string(vertices), wulff_polygon(norm, vertices), true);
        } else if (kind == "square") {
            const double side = get_number_or(sh, "side", 1.0);
            Polygon sq;
            sq.v = {{0.0, 0.0}, {side, 0.0}, {side, side}, {0.0, side}};
            record("square", sq, false);
        } else if (kind == "regular") {
            const int sides = get_int_or(sh, "sides", 6);
            const double radius = get_number_or(sh, "radius", 1.0);
            record("regular-" + std::to_string(sides), Polygon::regular(sides, radius), false);
        } else if (kind == "random_hulls") {
            const int count = get_int_or(sh, "count", 50);
            const int points = get_int_or(sh, "points", 12);
            const double scale = get_number_or(sh, "scale", 3.0);
            for (int k = 0; k < count; ++k) {
                std::vector<Eigen::Vector2d> cloud;
                for (int q = 0; q < points; ++q)
                    cloud.emplace_back(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
                record("hull-" + std::to_string(k), convex_hull(cloud), false);
            }
        } else {
            config_error("unknown shape kind \"" + kind + "\"");
        }
    }
    ctx.results["norm"] = to_string(norm.kind());
    ctx.results["kappa0"] = norm.kappa0();
    ctx.results["shapes"] = entries;
    ctx.csv("isoperimetric.csv", {"index", "perimeter", "area", "bound", "deficit", "pass"},
            rows);
    ctx.pass = all_pass;
}

void run_coarea(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"norm", "domain", "field", "t_grid", "dt", "tolerance", "seed"}, "config");
    const Norm norm = parse_norm(require(cfg, "norm", "config"));
    const GridDomain2D domain = parse_domain(require(cfg, "domain", "config"), norm);
    const auto field = parse_field(require(cfg, "field", "config"), norm);
    const std::vector<double> t_grid = parse_grid(require(cfg, "t_grid", "config"), "t_grid");
    const double dt = get_number_or(cfg, "dt", 0.0);
    const double tol = get_number_or(cfg, "tolerance", 2e-2);

    const std::vector<double> u = domain.sample(field);
    const CoareaResult result = coarea_check(domain, u, norm, t_grid, dt);
    ctx.tolerances["max_residual"] = tol;
    ctx.results["levels_requested"] = t_grid.size();
    ctx.results["levels_evaluated"] = result.evaluated;
    ctx.results["max_residual"] = result.max_residual;
    std::vector<std::vector<double>> rows;
    int skipped = 0, boundary = 0;
    for (const CoareaLevel& lv : result.levels) {
        rows.push_back({lv.t, lv.lhs, lv.rhs, lv.residual, lv.skipped ? 1.0 : 0.0,
                        lv.touches_boundary ? 1.0 : 0.0});
        skipped += lv.skipped ? 1 : 0;
        boundary += lv.touches_boundary ? 1 : 0;
    }
    ctx.results["levels_skipped"] = skipped;
    ctx.results["levels_touching_boundary"] = boundary;
    ctx.csv("coarea.csv", {"t", "lhs", "rhs", "residual", "skipped", "touches_boundary"}, rows);
    ctx.pass = result.evaluated >= 1 && result.max_residual <= tol;
}

void run_capacity_scan(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"profile", "kind", "p", "alphas", "R_grid", "tolerance", "assert_slopes",
                     "seed"},
               "config");
    const RadialProfile profile = parse_profile(require(cfg, "profile", "config"));
    const Nonlinearity f =
        Nonlinearity::from_name(get_string(cfg, "kind", "config"), get_number_or(cfg, "p", 2.0));
    const std::vector<double> alphas = parse_grid(require(cfg, "alphas", "config"), "alphas");
    const std::vector<double> R_grid = parse_grid(require(cfg, "R_grid", "config"), "R_grid");
    const double tol = get_number_or(cfg, "tolerance", 1e-3);
    const bool assert_slopes = get_bool_or(cfg, "assert_slopes", true);
    const int N = profile.N;

    ctx.tolerances["slope"] = tol;
    ctx.results["profile"] = profile_json(profile);
    ctx.results["kind"] = f.name();

    // Cutoff-scaling prediction for the integral growth exponent.
    const auto predicted = [&](double alpha) -> double {
        switch (f.kind) {
            case Nonlinearity::Kind::Exponential:
                return N - 2.0 * (alpha + 1.0);
            case Nonlinearity::Kind::Power:
                return N - 2.0 * (f.p + 2.0 * alpha - 1.0) / (f.p - 1.0);
            case Nonlinearity::Kind::NegativePower:
                return N - 2.0 * (2.0 * alpha + f.p + 1.0) / (f.p + 1.0);
            default:
                config_error("capacity-scan: unsupported kind");
        }
    };

    bool all = true;
    json fits = json::array();
    std::vector<std::vector<double>> rows;
    for (double alpha : alphas) {
        const CapacityFit fit = capacity_scaling(profile, f.kind, f.p, alpha, R_grid);
        const double expected = predicted(alpha);
        const bool ok = !assert_slopes || std::abs(fit.slope - expected) <= tol;
        json e;
        e["alpha"] = alpha;
        e["slope"] = fit.slope;
        e["expected"] = expected;
        e["intercept"] = fit.intercept;
        e["pass"] = ok;
        fits.push_back(e);
        for (std::size_t i = 0; i < fit.R.size(); ++i)
            rows.push_back({alpha, fit.R[i], fit.I[i]});
        all = all && ok;
    }
    ctx.results["fits"] = fits;
    ctx.csv("capacity.csv", {"alpha", "R", "I"}, rows);
    ctx.pass = all;
}

json report_json(const SingularityReport& report) {
    json centers = json::array();
    for (const CenterVerdict& v : report.centers) {
        json e;
        e["dist"] = v.dist;
        e["center"] = std::vector<double>{v.center.x(), v.center.y()};
        e["flagged"] = v.flagged;
        e["tested"] = v.tested;
        e["radii"] = v.radii;
        json q = json::array();
        for (std::size_t k = 0; k < v.quantity.size(); ++k)
            q.push_back(v.skipped[k] ? json() : json(v.quantity[k]));
        e["quantity"] = q;
        centers.push_back(e);
    }
    json out;
    out["p"] = report.p;
    out["epsilon"] = report.epsilon;
    out["centers"] = centers;
    out["flagged"] = report.flagged;
    return out;
}

void run_epsilon_scan(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"norm", "profile", "domain", "field", "p", "epsilon", "centers", "radii",
                     "expect_flagged", "seed"},
               "config");
    const Norm norm = parse_norm(require(cfg, "norm", "config"));
    const double p = get_number_or(cfg, "p", 1.0);
    const std::vector<double> radii = parse_grid(require(cfg, "radii", "config"), "radii");

    SingularityReport report;
    if (cfg.contains("profile")) {
        const RadialProfile profile = parse_profile(cfg.at("profile"));
        double epsilon = 0.0;
        const json& ej = require(cfg, "epsilon", "config");
        if (ej.is_string() && ej.get<std::string>() == "N_kappa0")
            epsilon = profile.N * norm.kappa0();
        else if (ej.is_number())
            epsilon = ej.get<double>();
        else
            config_error("epsilon must be a number or \"N_kappa0\"");
        const auto dists = require(cfg, "centers", "config").get<std::vector<double>>();
        report = epsilon_scan(profile, norm, p, epsilon, dists, radii);
        ctx.results["profile"] = profile_json(profile);
    } else {
        const GridDomain2D domain = parse_domain(require(cfg, "domain", "config"), norm);
        const auto field = parse_field(require(cfg, "field", "config"), norm);
        const double epsilon = get_number(cfg, "epsilon", "config");
        std::vector<Eigen::Vector2d> centers;
        for (const auto& c :
             require(cfg, "centers", "config").get<std::vector<std::vector<double>>>()) {
            if (c.size() != 2) config_error("grid centers must be [x, y] pairs");
            centers.emplace_back(c[0], c[1]);
        }
        report = epsilon_scan(domain, domain.sample(field), norm, p, epsilon, centers, radii);
    }

    ctx.tolerances["epsilon"] = report.epsilon;
    ctx.results["report"] = report_json(report);
    std::vector<std::vector<double>> rows;
    for (std::size_t c = 0; c < report.centers.size(); ++c) {
        const CenterVerdict& v = report.centers[c];
        for (std::size_t k = 0; k < v.radii.size(); ++k)
            rows.push_back({static_cast<double>(c), v.dist, v.radii[k],
                            v.skipped[k] ? std::numeric_limits<double>::quiet_NaN()
                                         : v.quantity[k],
                            v.skipped[k] ? 1.0 : 0.0});
    }
    ctx.csv("epsilon_scan.csv", {"center_index", "dist", "r", "quantity", "skipped"}, rows);

    if (cfg.contains("expect_flagged")) {
        const auto expect = cfg.at("expect_flagged").get<std::vector<std::size_t>>();
        ctx.results["expect_flagged"] = expect;
        ctx.pass = expect == report.flagged;
    } else {
        ctx.pass = true;
    }
}

void run_decay_probe(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_keys(cfg, {"norm", "profile", "domain", "field", "r_inner", "r_outer", "max_ratio",
                     "seed"},
               "config");
    const Norm norm = parse_norm(require(cfg, "norm", "config"));
    const double r_inner = get_number_or(cfg, "r_inner", 0.25);
    const double r_outer = get_number_or(cfg, "r_outer", 2.0);

    DecayProbe probe;
    if (cfg.contains("profile")) {
        const RadialProfile profile = parse_profile(cfg.at("profile"));
        probe = decay_probe(profile, norm, r_inner, r_outer);
        ctx.results["profile"] = profile_json(profile);
    } else {
        const GridDomain2D domain = parse_domain(require(cfg, "domain", "config"), norm);
        const auto field = parse_field(require(cfg, "field", "config"), norm);
        probe = decay_probe(domain, domain.sample(field), norm, r_inner, r_outer);
    }

    ctx.results["r_inner"] = probe.r_inner;
    ctx.results["r_outer"] = probe.r_outer;
    ctx.results["q_inner"] = probe.q_inner;
    ctx.results["q_outer"] = probe.q_outer;
    ctx.results["ratio"] = probe.ratio;
    ctx.csv("decay_probe.csv", {"r_inner", "r_outer", "q_inner", "q_outer", "ratio"},
            {{probe.r_inner, probe.r_outer, probe.q_inner, probe.q_outer, probe.ratio}});

    if (cfg.contains("max_ratio")) {
        const double cap = get_number(cfg, "max_ratio", "config");
        ctx.tolerances["max_ratio"] = cap;
        ctx.pass = probe.ratio <= cap;
    } else {
        ctx.pass = true;  // measurement only
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finsler-lab: verification toolkit for anisotropic semilinear "
                 "elliptic equations -Qu = f(u)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::int64_t seed_flag = -1;
    bool quiet = false;

    struct Subcommand {
        std::string description;
        std::function<void(RunContext&)> run;
    };
    const std::map<std::string, Subcommand> handlers = {
        {"norm-check", {"verify the structural identities of a norm", run_norm_check}},
        {"solve-radial", {"check a radial profile against -Qu = f(u)", run_solve_radial}},
        {"solve-bvp", {"solve the 2D Dirichlet problem by damped Newton", run_solve_bvp}},
        {"stability", {"spectral stability verdict on a radial window", run_stability}},
        {"exterior-stability",
         {"find an exterior-stability radius by annulus scan", run_exterior_stability}},
        {"energy-scan", {"monotonicity scan of the rescaled energy", run_energy_scan}},
        {"hardy", {"anisotropic Hardy inequality on random bumps", run_hardy}},
        {"isoperimetric", {"anisotropic isoperimetric deficit on polygons", run_isoperimetric}},
        {"coarea", {"coarea identity: level-set perimeters vs. bulk integral", run_coarea}},
        {"capacity-scan", {"log-log growth exponents of capacity-type integrals",
                           run_capacity_scan}},
        {"epsilon-scan", {"flag singular centers by scale-invariant density", run_epsilon_scan}},
        {"decay-probe", {"one-step decay measurement q_inner / q_outer", run_decay_probe}},
    };

    for (const auto& [name, sub_def] : handlers) {
        CLI::App* sub = app.add_subcommand(name, sub_def.description);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory (default: out)");
        sub->add_option("--seed", seed_flag, "seed override");
        sub->add_flag("--quiet", quiet, "suppress progress output");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 1;
    }

    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        RunContext ctx;
        const std::string raw = io::read_text_file(config_path);
        ctx.config_hash = io::fnv1a_hex(raw);
        try {
            ctx.config = json::parse(raw);
        } catch (const json::parse_error& e) {
            config_error(std::string("not valid JSON: ") + e.what());
        }
        if (!ctx.config.is_object()) config_error("top level must be a JSON object");

        // Seed: config value, overridden by --seed.
        ctx.seed = 0;
        if (ctx.config.contains("seed")) {
            if (!ctx.config.at("seed").is_number_integer())
                config_error("\"seed\" must be an integer");
            ctx.seed = ctx.config.at("seed").get<std::uint64_t>();
        }
        if (seed_flag >= 0) ctx.seed = static_cast<std::uint64_t>(seed_flag);
        ctx.quiet = quiet;

        // Output directory: --out flag wins, then FINSLER_LAB_OUT, then "out".
        ctx.out_dir = out_dir;
        if (ctx.out_dir.empty())
            if (const char* env = std::getenv("FINSLER_LAB_OUT")) ctx.out_dir = env;
        if (ctx.out_dir.empty()) ctx.out_dir = "out";
        std::filesystem::create_directories(ctx.out_dir);

        handlers.at(sub).run(ctx);
        write_summary(ctx, sub);
        return ctx.pass ? 0 : 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
