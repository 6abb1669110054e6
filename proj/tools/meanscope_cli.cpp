// Command-line front end: classify candidate mean functions, evaluate
// Hansen densities, scan parameter regions, fuzz the power-inequality
// implication on random matrices, and re-run the named separation
// experiments as pass/fail reports.
//
// Exit codes: 0 all requested properties hold / experiment passes / no
// witness; 1 a property is violated / a witness was found / a reproduction
// fails; 2 usage or input errors.
//
// Reports are deterministic for a fixed config and seed (no timestamps),
// and embed the effective grid, tolerances and seed for replay.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meanscope/meanscope.hpp"

namespace ms = meanscope;
using ms::json;

namespace {

struct run_config {
    ms::grid_spec grid;
    ms::tolerance_config tol;
    std::uint64_t seed = 7;
    std::string format = "table";
    std::string out;  // empty: stdout
};

json to_json(const run_config& rc) {
    return json{{"grid", ms::to_json(rc.grid)},
                {"tolerances", ms::to_json(rc.tol)},
                {"seed", rc.seed},
                {"format", rc.format},
                {"out", rc.out}};
}

struct common_flags {
    CLI::Option* t_min = nullptr;
    CLI::Option* t_max = nullptr;
    CLI::Option* points = nullptr;
    CLI::Option* r_values = nullptr;
    CLI::Option* slack = nullptr;
    CLI::Option* fd_step = nullptr;
    CLI::Option* rel_eval = nullptr;
    CLI::Option* derivative_tol = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* format = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* config = nullptr;

    double t_min_v = 1e-4, t_max_v = 1e4;
    int points_v = 241;
    std::vector<double> r_values_v;
    double slack_v = 1e-10, fd_step_v = 1e-4, rel_eval_v = 1e-10,
           derivative_tol_v = 1e-6;
    std::uint64_t seed_v = 7;
    std::string format_v, out_v, config_v;
};

void add_common_flags(CLI::App* cmd, common_flags& cf,
                      const std::string& default_format) {
    cf.t_min = cmd->add_option("--t-min", cf.t_min_v, "grid lower endpoint");
    cf.t_max = cmd->add_option("--t-max", cf.t_max_v, "grid upper endpoint");
    cf.points = cmd->add_option("--points", cf.points_v, "grid point count");
    cf.r_values = cmd->add_option("--r-values", cf.r_values_v,
                                  "exponent list for pmi-style checks")
                      ->delimiter(',');
    cf.slack = cmd->add_option("--slack", cf.slack_v, "criterion slack");
    cf.fd_step = cmd->add_option("--fd-step", cf.fd_step_v,
                                 "finite-difference step");
    cf.rel_eval = cmd->add_option("--rel-eval", cf.rel_eval_v,
                                  "relative evaluation tolerance");
    cf.derivative_tol = cmd->add_option("--derivative-tol", cf.derivative_tol_v,
                                        "derivative noise tolerance");
    cf.seed = cmd->add_option("--seed", cf.seed_v, "random seed");
    cf.format_v = default_format;
    cf.format = cmd->add_option("--format", cf.format_v, "json|csv|table")
                    ->check(CLI::IsMember({"json", "csv", "table"}));
    cf.out = cmd->add_option("--out", cf.out_v, "output path (default stdout)");
    cf.config = cmd->add_option("--config", cf.config_v,
                                "JSON config file mirroring the run config");
}

// Defaults < config file < environment seed < explicit flags.
run_config resolve_config(const common_flags& cf,
                          const std::string& default_format) {
    run_config rc;
    rc.format = default_format;

    json file;
    if (cf.config->count() > 0) {
        std::ifstream in(cf.config_v);
        if (!in) throw std::invalid_argument("config: cannot open " + cf.config_v);
        in >> file;
        if (file.contains("grid")) rc.grid = ms::grid_from_json(file.at("grid"));
        if (file.contains("tolerances")) {
            rc.tol = ms::tolerances_from_json(file.at("tolerances"));
        }
        if (file.contains("seed")) rc.seed = file.at("seed").get<std::uint64_t>();
        if (file.contains("format")) {
            rc.format = file.at("format").get<std::string>();
        }
        if (file.contains("out")) rc.out = file.at("out").get<std::string>();
    }

    if (const char* env = std::getenv("MEANSCOPE_SEED");
        env && cf.seed->count() == 0) {
        rc.seed = std::strtoull(env, nullptr, 10);
    }

    if (cf.t_min->count()) rc.grid.t_min = cf.t_min_v;
    if (cf.t_max->count()) rc.grid.t_max = cf.t_max_v;
    if (cf.points->count()) rc.grid.n_points = cf.points_v;
    if (cf.r_values->count()) rc.grid.r_values = cf.r_values_v;
    if (cf.slack->count()) rc.tol.criterion_slack = cf.slack_v;
    if (cf.fd_step->count()) rc.tol.fd_step = cf.fd_step_v;
    if (cf.rel_eval->count()) rc.tol.rel_eval = cf.rel_eval_v;
    if (cf.derivative_tol->count()) rc.tol.derivative_tol = cf.derivative_tol_v;
    if (cf.seed->count()) rc.seed = cf.seed_v;
    if (cf.format->count()) rc.format = cf.format_v;
    if (cf.out->count()) rc.out = cf.out_v;

    rc.grid.validate();
    rc.tol.validate();
    return rc;
}

void emit(const run_config& rc, const std::string& text) {
    if (rc.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(rc.out);
    if (!out) throw std::runtime_error("cannot write " + rc.out);
    out << text;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

// --- function specs ---------------------------------------------------------

struct function_spec {
    std::string family;
    double alpha = 0.5;
    double bp = 0.5;
    double a = 1.0, b = 0.5;
    std::vector<double> weights, exponents;
    std::string density;
    CLI::Option* density_opt = nullptr;
};

void add_function_flags(CLI::App* cmd, function_spec& fs) {
    cmd->add_option("--family", fs.family,
                    "power|binomial|uab|stolarsky|geodesic|hansen|section5")
        ->required();
    cmd->add_option("--alpha", fs.alpha, "power/stolarsky parameter");
    cmd->add_option("--bp", fs.bp, "binomial parameter p");
    cmd->add_option("--a", fs.a, "uab parameter a");
    cmd->add_option("--b", fs.b, "uab parameter b");
    cmd->add_option("--weights", fs.weights, "geodesic atom weights")
        ->delimiter(',');
    cmd->add_option("--exponents", fs.exponents, "geodesic atom exponents")
        ->delimiter(',');
    fs.density_opt = cmd->add_option(
        "--density", fs.density, "hansen density JSON file, or 'theorem'");
}

ms::hansen_density load_density(const std::string& spec) {
    if (spec == "theorem") return ms::theorem_counterexample();
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("density: cannot open " + spec);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("density: bad JSON: ") + e.what());
    }
    return ms::density_from_json(j);
}

// allow_outside_gamma relaxes the Gamma membership requirement on uab so the
// fuzzer can attack formulas that are not operator means.
ms::mean_function build_function(const function_spec& fs,
                                 bool allow_outside_gamma) {
    if (fs.family == "power") return ms::mean_function::power(fs.alpha);
    if (fs.family == "binomial") return ms::mean_function::binomial(fs.bp);
    if (fs.family == "uab") {
        return allow_outside_gamma ? ms::mean_function::uab_formula(fs.a, fs.b)
                                   : ms::mean_function::uab(fs.a, fs.b);
    }
    if (fs.family == "stolarsky") return ms::mean_function::stolarsky(fs.alpha);
    if (fs.family == "section5") return ms::mean_function::section5_example();
    if (fs.family == "geodesic") {
        if (fs.weights.size() != fs.exponents.size() || fs.weights.empty()) {
            throw std::invalid_argument(
                "geodesic: --weights and --exponents must match");
        }
        std::vector<ms::geodesic_atom> atoms;
        for (std::size_t i = 0; i < fs.weights.size(); ++i) {
            atoms.push_back({fs.weights[i], fs.exponents[i]});
        }
        return ms::mean_function::geodesic(ms::geodesic_measure(atoms));
    }
    if (fs.family == "hansen") {
        if (fs.density_opt->count() == 0) {
            throw std::invalid_argument("hansen: --density is required");
        }
        return ms::mean_function::hansen(load_density(fs.density));
    }
    throw std::invalid_argument("unknown family: " + fs.family);
}

// --- classify ----------------------------------------------------------------

int run_classify(const function_spec& fs, const std::vector<std::string>& props,
                 double r_param, const run_config& rc) {
    const ms::mean_function f = build_function(fs, false);
    std::vector<ms::classification_report> reports;
    for (const std::string& prop : props) {
        if (prop == "gcv") {
            reports.push_back(ms::check_gcv(f, rc.grid, rc.tol));
        } else if (prop == "gcc") {
            reports.push_back(ms::check_gcc(f, rc.grid, rc.tol));
        } else if (prop == "pmi") {
            reports.push_back(ms::check_pmi(f, rc.grid, rc.tol));
        } else if (prop == "pmd") {
            reports.push_back(ms::check_pmd(f, rc.grid, rc.tol));
        } else if (prop == "pmi_r") {
            reports.push_back(ms::check_pmi_r(f, r_param, rc.grid, rc.tol));
        } else if (prop == "pmi_inf") {
            reports.push_back(ms::check_pmi_inf(f, rc.grid, rc.tol));
        } else {
            throw std::invalid_argument("unknown property: " + prop);
        }
    }

    bool all_hold = true;
    for (const auto& rep : reports) all_hold = all_hold && rep.holds();

    if (rc.format == "json") {
        json j;
        j["command"] = "classify";
        j["function"] = f.name();
        json arr = json::array();
        for (const auto& rep : reports) arr.push_back(ms::to_json(rep));
        j["reports"] = arr;
        j["config"] = to_json(rc);
        emit(rc, json_text(j));
    } else if (rc.format == "csv") {
        std::ostringstream os;
        os << "property,verdict,witness_t,witness_r,witness_value\n";
        for (const auto& rep : reports) {
            os << ms::to_string(rep.prop) << "," << ms::to_string(rep.result)
               << ",";
            if (rep.witness) {
                os << rep.witness->t << ",";
                if (rep.witness->r) os << *rep.witness->r;
                os << "," << rep.witness->value;
            } else {
                os << ",,";
            }
            os << "\n";
        }
        emit(rc, os.str());
    } else {
        std::ostringstream os;
        os << "function: " << f.name() << "\n";
        for (const auto& rep : reports) {
            os << "  " << ms::to_string(rep.prop);
            if (rep.r_param) os << "(" << *rep.r_param << ")";
            os << ": " << ms::to_string(rep.result);
            if (rep.witness) {
                os << "  [witness t=" << rep.witness->t;
                if (rep.witness->r) os << " r=" << *rep.witness->r;
                os << " value=" << rep.witness->value << "]";
            }
            os << "\n";
        }
        emit(rc, os.str());
    }
    return all_hold ? 0 : 1;
}

// --- hansen -------------------------------------------------------------------

int run_hansen(const std::string& density_spec, const std::string& criterion,
               const std::vector<double>& t_list, const std::vector<double>& rs,
               const std::string& method_name, const run_config& rc) {
    const ms::hansen_density h = load_density(density_spec);
    const ms::integral_method method = method_name == "quadrature"
                                           ? ms::integral_method::quadrature
                                           : ms::integral_method::closed_form;
    std::vector<double> ts = t_list;
    if (ts.empty()) {
        for (double x : rc.grid.log_points()) ts.push_back(std::exp(x));
    }

    std::vector<ms::integrand_report> rows;
    for (double t : ts) {
        if (criterion == "eval") {
            ms::integrand_report rep;
            rep.t = t;
            rep.value = ms::hansen_eval(h, t, method);
            rep.method = method;
            rows.push_back(rep);
        } else if (criterion == "gcv") {
            rows.push_back(ms::make_integrand_report(h, t, std::nullopt, method));
        } else if (criterion == "pmi") {
            const std::vector<double>& r_set = rs.empty() ? rc.grid.r_values : rs;
            for (double r : r_set) {
                rows.push_back(ms::make_integrand_report(h, t, r, method));
            }
        } else {
            throw std::invalid_argument("unknown criterion: " + criterion);
        }
    }

    if (rc.format == "json") {
        json j;
        j["command"] = "hansen";
        j["criterion"] = criterion;
        j["density"] = ms::to_json(h);
        json arr = json::array();
        for (const auto& rep : rows) arr.push_back(ms::to_json(rep));
        j["rows"] = arr;
        j["config"] = to_json(rc);
        emit(rc, json_text(j));
    } else {
        // CSV column order is fixed: t, r, value, method.
        std::ostringstream os;
        const char* sep = rc.format == "csv" ? "," : "  ";
        os << "t" << sep << "r" << sep << "value" << sep << "method\n";
        for (const auto& rep : rows) {
            os << rep.t << sep;
            if (rep.r) os << *rep.r;
            os << sep << rep.value << sep
               << (rep.method == ms::integral_method::closed_form ? "closed_form"
                                                                  : "quadrature")
               << "\n";
        }
        emit(rc, os.str());
    }
    return 0;
}

// --- fuzz ---------------------------------------------------------------------

int run_fuzz(const function_spec& fs, double p, int trials, int dim,
             const run_config& rc) {
    const ms::mean_function f = build_function(fs, true);
    ms::ando_hiai_config cfg;
    cfg.p = p;
    cfg.trials = trials;
    cfg.dim = dim;
    cfg.seed = rc.seed;
    cfg.probe_grid = rc.grid;
    const auto witness = ms::ando_hiai_search(f, cfg);

    if (rc.format == "json") {
        json j;
        j["command"] = "fuzz";
        j["function"] = f.name();
        j["gamma_member"] = f.gamma_member();
        j["p"] = p;
        j["trials"] = trials;
        j["dim"] = dim;
        j["seed"] = rc.seed;
        j["witness"] = witness ? ms::to_json(*witness) : json(nullptr);
        j["config"] = to_json(rc);
        emit(rc, json_text(j));
    } else {
        std::ostringstream os;
        os << "function: " << f.name() << "  p=" << p << " trials=" << trials
           << " dim=" << dim << " seed=" << rc.seed << "\n";
        if (!f.gamma_member()) {
            os << "note: parameters outside Gamma; not an operator mean\n";
        }
        if (witness) {
            os << "witness found (phase=" << witness->phase
               << ", trial=" << witness->trial_index
               << "): min_eig_before=" << witness->min_eig_before
               << " min_eig_after=" << witness->min_eig_after << "\n";
        } else {
            os << "no witness\n";
        }
        emit(rc, os.str());
    }
    return witness ? 1 : 0;
}

// --- scan ---------------------------------------------------------------------

int run_scan(const std::string& family, const std::string& prop_name,
             double step, const run_config& rc) {
    const auto prop = ms::property_from_string(prop_name);
    if (!prop) throw std::invalid_argument("unknown property: " + prop_name);

    ms::region_scan_result result;
    if (family == "uab") {
        const auto values = ms::param_range(-2.0, 2.0, step);
        result = ms::region_scan_uab(*prop, values, values, rc.grid, rc.tol);
    } else if (family == "stolarsky") {
        result = ms::region_scan_stolarsky(*prop, ms::param_range(-2.0, 2.0, step),
                                           rc.grid, rc.tol);
    } else if (family == "binomial") {
        result = ms::region_scan_binomial(*prop, ms::param_range(-1.0, 1.0, step),
                                          rc.grid, rc.tol);
    } else {
        throw std::invalid_argument("unknown scan family: " + family);
    }

    if (rc.format == "json") {
        json j;
        j["command"] = "scan";
        j["result"] = ms::to_json(result);
        j["config"] = to_json(rc);
        emit(rc, json_text(j));
    } else if (rc.format == "table") {
        std::ostringstream os;
        os << "family=" << family << " property=" << prop_name
           << " interior_mismatches=" << result.interior_mismatches << "\n";
        for (const auto& row : result.rows) {
            os << "  a=" << row.a;
            if (family == "uab") os << " b=" << row.b;
            os << " predicted=" << (row.predicted ? "T" : "F")
               << " observed=" << (row.observed ? "T" : "F")
               << (row.boundary ? " (boundary)" : "") << "\n";
        }
        emit(rc, os.str());
    } else {
        emit(rc, ms::region_scan_csv(result));
    }
    return result.interior_mismatches == 0 ? 0 : 1;
}

// --- reproduce ------------------------------------------------------------------

struct check_line {
    std::string name;
    bool pass;
    double value;
};

int emit_reproduce(const std::string& name, const std::vector<check_line>& checks,
                   const run_config& rc) {
    bool pass = true;
    for (const auto& c : checks) pass = pass && c.pass;

    if (rc.format == "json") {
        json arr = json::array();
        for (const auto& c : checks) {
            arr.push_back(
                json{{"name", c.name}, {"pass", c.pass}, {"value", c.value}});
        }
        json j{{"command", "reproduce"},
               {"name", name},
               {"pass", pass},
               {"checks", arr},
               {"config", to_json(rc)}};
        emit(rc, json_text(j));
    } else if (rc.format == "csv") {
        std::ostringstream os;
        os << "check,pass,value\n";
        for (const auto& c : checks) {
            os << c.name << "," << (c.pass ? "true" : "false") << "," << c.value
               << "\n";
        }
        emit(rc, os.str());
    } else {
        std::ostringstream os;
        os << (pass ? "PASS" : "FAIL") << " " << name << "\n";
        for (const auto& c : checks) {
            os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name << " = "
               << c.value << "\n";
        }
        emit(rc, os.str());
    }
    return pass ? 0 : 1;
}

int run_reproduce(const std::string& name, const run_config& rc) {
    std::vector<check_line> checks;

    if (name == "theorem_gcv_pmi") {
        const ms::hansen_density h = ms::theorem_counterexample();
        const std::vector<double> rs = {1.1, 1.5, 2.0, 3.0, 5.0, 10.0};
        double min_pmi = std::numeric_limits<double>::infinity();
        for (double r : rs) {
            for (double x : rc.grid.log_points()) {
                min_pmi = std::min(min_pmi, ms::pmi_integrand(h, std::exp(x), r));
            }
        }
        checks.push_back({"min_pmi_integrand", min_pmi >= -1e-10, min_pmi});

        double max_phi1 = 0.0;
        for (double r : rs) {
            max_phi1 = std::max(max_phi1, std::abs(ms::phi_eval(1.8, r, 1.0)));
        }
        checks.push_back({"max_abs_phi_at_1", max_phi1 <= 1e-12, max_phi1});

        const double gcv_small = ms::gcv_integrand(h, 1e-3);
        checks.push_back({"gcv_integrand_at_1e-3", gcv_small <= -0.03, gcv_small});
        const double gcv_large = ms::gcv_integrand(h, 100.0);
        checks.push_back({"gcv_integrand_at_100", gcv_large > 0.0, gcv_large});
    } else if (name == "section5_separation") {
        const ms::mean_function f = ms::mean_function::section5_example();
        const double slope = ms::derivative_at_one(f, rc.tol);
        checks.push_back(
            {"derivative_at_one", std::abs(slope - 1.0 / 3.0) <= 1e-6, slope});
        checks.push_back({"pmi_inf_holds",
                          ms::check_pmi_inf(f, rc.grid, rc.tol).holds(), 1.0});
        for (double r : {2.0, 3.0}) {
            const double t = 1e-10;
            const double ratio = f(std::pow(t, r)) / std::pow(f(t), r);
            const double target = std::exp2(1.0 - r);
            checks.push_back({"ratio_r" + std::to_string(static_cast<int>(r)),
                              std::abs(ratio - target) <= 1e-3, ratio});
        }
        const auto rep = ms::check_pmi_r(f, 2.0, rc.grid, rc.tol);
        checks.push_back({"pmi_r2_violated",
                          rep.result == ms::verdict::violated &&
                              rep.witness.has_value(),
                          rep.witness ? rep.witness->t : 0.0});
    } else if (name == "region_uab") {
        const auto values = ms::param_range(-2.0, 2.0, 0.25);
        const auto scan =
            ms::region_scan_uab(ms::property::gcv, values, values, rc.grid, rc.tol);
        checks.push_back({"admissible_points", !scan.rows.empty(),
                          static_cast<double>(scan.rows.size())});
        checks.push_back({"interior_mismatches", scan.interior_mismatches == 0,
                          static_cast<double>(scan.interior_mismatches)});
    } else if (name == "region_stolarsky") {
        const auto alphas = ms::param_range(-2.0, 2.0, 0.25);
        const auto gcv =
            ms::region_scan_stolarsky(ms::property::gcv, alphas, rc.grid, rc.tol);
        const auto gcc =
            ms::region_scan_stolarsky(ms::property::gcc, alphas, rc.grid, rc.tol);
        checks.push_back({"gcv_interior_mismatches", gcv.interior_mismatches == 0,
                          static_cast<double>(gcv.interior_mismatches)});
        checks.push_back({"gcc_interior_mismatches", gcc.interior_mismatches == 0,
                          static_cast<double>(gcc.interior_mismatches)});
    } else {
        throw std::invalid_argument("unknown experiment: " + name);
    }

    return emit_reproduce(name, checks, rc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"meanscope: numerical toolkit for Kubo-Ando operator means"};
    app.require_subcommand(1);

    // classify
    auto* classify = app.add_subcommand(
        "classify", "test membership properties of a mean function");
    function_spec cl_fs;
    add_function_flags(classify, cl_fs);
    std::vector<std::string> cl_props;
    classify->add_option("--props", cl_props, "gcv,gcc,pmi,pmd,pmi_r,pmi_inf")
        ->required()
        ->delimiter(',');
    double cl_r = 2.0;
    classify->add_option("--r", cl_r, "exponent for pmi_r");
    common_flags cl_cf;
    add_common_flags(classify, cl_cf, "table");

    // hansen
    auto* hansen = app.add_subcommand(
        "hansen", "evaluate a Hansen density or its criteria");
    std::string hn_density;
    hansen->add_option("--density", hn_density,
                       "density JSON file, or 'theorem'")
        ->required();
    std::string hn_criterion = "eval";
    hansen->add_option("--criterion", hn_criterion, "eval|pmi|gcv")
        ->check(CLI::IsMember({"eval", "pmi", "gcv"}));
    std::vector<double> hn_t, hn_r;
    hansen->add_option("--t", hn_t, "explicit t values (default: grid)")
        ->delimiter(',');
    hansen->add_option("--r", hn_r, "exponents for the pmi criterion")
        ->delimiter(',');
    std::string hn_method = "closed_form";
    hansen->add_option("--method", hn_method, "closed_form|quadrature")
        ->check(CLI::IsMember({"closed_form", "quadrature"}));
    common_flags hn_cf;
    add_common_flags(hansen, hn_cf, "csv");

    // fuzz
    auto* fuzz = app.add_subcommand(
        "fuzz", "search for violations of the power-inequality implication");
    function_spec fz_fs;
    add_function_flags(fuzz, fz_fs);
    double fz_p = 2.0;
    fuzz->add_option("--p", fz_p, "power exponent (> 1)")->required();
    int fz_trials = 10000;
    fuzz->add_option("--trials", fz_trials, "random trials");
    int fz_dim = 3;
    fuzz->add_option("--dim", fz_dim, "matrix dimension");
    common_flags fz_cf;
    add_common_flags(fuzz, fz_cf, "table");

    // scan
    auto* scan = app.add_subcommand(
        "scan", "sweep a parameter region against the analytic predicate");
    std::string sc_family;
    scan->add_option("--family", sc_family, "uab|stolarsky|binomial")->required();
    std::string sc_prop = "gcv";
    scan->add_option("--property", sc_prop, "gcv|gcc|pmi|pmd");
    double sc_step = 0.25;
    scan->add_option("--step", sc_step, "parameter grid step");
    common_flags sc_cf;
    add_common_flags(scan, sc_cf, "csv");

    // reproduce
    auto* reproduce =
        app.add_subcommand("reproduce", "re-run a named experiment");
    std::string rp_name;
    reproduce
        ->add_option("--name", rp_name,
                     "theorem_gcv_pmi|section5_separation|region_uab|"
                     "region_stolarsky")
        ->required();
    common_flags rp_cf;
    add_common_flags(reproduce, rp_cf, "table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (classify->parsed()) {
            return run_classify(cl_fs, cl_props, cl_r,
                                resolve_config(cl_cf, "table"));
        }
        if (hansen->parsed()) {
            return run_hansen(hn_density, hn_criterion, hn_t, hn_r, hn_method,
                              resolve_config(hn_cf, "csv"));
        }
        if (fuzz->parsed()) {
            return run_fuzz(fz_fs, fz_p, fz_trials, fz_dim,
                            resolve_config(fz_cf, "table"));
        }
        if (scan->parsed()) {
            return run_scan(sc_family, sc_prop, sc_step,
                            resolve_config(sc_cf, "csv"));
        }
        if (reproduce->parsed()) {
            return run_reproduce(rp_name, resolve_config(rp_cf, "table"));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
