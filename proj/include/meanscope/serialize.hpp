#pragma once

// JSON (de)serialization for the report/config types and the density
// literal format used by the CLI:
//   [{"from": number|"-inf", "to": number, "value": number}, ...]

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "meanscope/ando_hiai.hpp"
#include "meanscope/classify.hpp"
#include "meanscope/hansen.hpp"
#include "meanscope/matrix.hpp"

namespace meanscope {

using json = nlohmann::json;

// --- hansen densities -------------------------------------------------------

inline json to_json(const hansen_density& h) {
    json arr = json::array();
    for (const density_piece& p : h.pieces()) {
        json piece;
        if (std::isinf(p.from)) {
            piece["from"] = "-inf";
        } else {
            piece["from"] = p.from;
        }
        piece["to"] = p.to;
        piece["value"] = p.value;
        arr.push_back(piece);
    }
    return arr;
}

inline hansen_density density_from_json(const json& j) {
    if (!j.is_array()) {
        throw std::invalid_argument("density: expected a JSON array");
    }
    std::vector<density_piece> pieces;
    for (const json& piece : j) {
        density_piece p{};
        const json& from = piece.at("from");
        if (from.is_string()) {
            if (from.get<std::string>() != "-inf") {
                throw std::invalid_argument("density: bad 'from' string");
            }
            p.from = -std::numeric_limits<double>::infinity();
        } else {
            p.from = from.get<double>();
        }
        p.to = piece.at("to").get<double>();
        p.value = piece.at("value").get<double>();
        pieces.push_back(p);
    }
    return hansen_density(std::move(pieces));
}

// --- grids, tolerances, reports ---------------------------------------------

inline json to_json(const grid_spec& g) {
    return json{{"t_min", g.t_min},
                {"t_max", g.t_max},
                {"n_points", g.n_points},
                {"scale", "log"},
                {"r_values", g.r_values}};
}

inline grid_spec grid_from_json(const json& j) {
    grid_spec g;
    g.t_min = j.value("t_min", g.t_min);
    g.t_max = j.value("t_max", g.t_max);
    g.n_points = j.value("n_points", g.n_points);
    if (j.contains("r_values")) {
        g.r_values = j.at("r_values").get<std::vector<double>>();
    }
    g.validate();
    return g;
}

inline json to_json(const tolerance_config& t) {
    return json{{"rel_eval", t.rel_eval},
                {"criterion_slack", t.criterion_slack},
                {"fd_step", t.fd_step},
                {"derivative_tol", t.derivative_tol}};
}

inline tolerance_config tolerances_from_json(const json& j) {
    tolerance_config t;
    t.rel_eval = j.value("rel_eval", t.rel_eval);
    t.criterion_slack = j.value("criterion_slack", t.criterion_slack);
    t.fd_step = j.value("fd_step", t.fd_step);
    t.derivative_tol = j.value("derivative_tol", t.derivative_tol);
    t.validate();
    return t;
}

inline json to_json(const violation_witness& w) {
    json j;
    j["t"] = w.t;
    j["r"] = w.r ? json(*w.r) : json(nullptr);
    j["value"] = w.value;
    return j;
}

inline json to_json(const classification_report& rep) {
    json j;
    j["function"] = rep.function_name;
    j["property"] = to_string(rep.prop);
    j["r"] = rep.r_param ? json(*rep.r_param) : json(nullptr);
    j["verdict"] = to_string(rep.result);
    j["witness"] = rep.witness ? to_json(*rep.witness) : json(nullptr);
    j["grid"] = to_json(rep.grid);
    j["tolerances"] = to_json(rep.tolerances);
    return j;
}

inline json to_json(const integrand_report& rep) {
    json j;
    j["t"] = rep.t;
    j["r"] = rep.r ? json(*rep.r) : json(nullptr);
    j["value"] = rep.value;
    j["method"] = rep.method == integral_method::closed_form ? "closed_form"
                                                             : "quadrature";
    return j;
}

// --- matrices and witnesses ---------------------------------------------------

inline json to_json(const dense_matrix& m) {
    return json{{"dim", m.rows()}, {"entries", m.entries()}};
}

inline dense_matrix matrix_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const std::vector<double> entries =
        j.at("entries").get<std::vector<double>>();
    if (dim < 1 || entries.size() != static_cast<std::size_t>(dim) *
                                         static_cast<std::size_t>(dim)) {
        throw std::invalid_argument("matrix_from_json: bad shape");
    }
    dense_matrix m(dim, dim);
    m.entries() = entries;
    return m;
}

inline json to_json(const ando_hiai_witness& w) {
    json j;
    j["A"] = to_json(w.a);
    j["B"] = to_json(w.b);
    j["p"] = w.p;
    j["min_eig_before"] = w.min_eig_before;
    j["min_eig_after"] = w.min_eig_after;
    j["phase"] = w.phase;
    j["trial_index"] = w.trial_index;
    j["seed"] = w.seed;
    j["probe_t"] = w.probe_t ? json(*w.probe_t) : json(nullptr);
    return j;
}

// --- region scans -------------------------------------------------------------

inline json to_json(const region_scan_result& r) {
    json rows = json::array();
    for (const scan_row& row : r.rows) {
        rows.push_back(json{{"a", row.a},
                            {"b", row.b},
                            {"predicted", row.predicted},
                            {"observed", row.observed},
                            {"boundary", row.boundary}});
    }
    return json{{"family", to_string(r.family)},
                {"property", to_string(r.prop)},
                {"interior_mismatches", r.interior_mismatches},
                {"rows", rows}};
}

// Fixed column order (a,b,predicted,observed); single-parameter families
// leave b empty.
inline std::string region_scan_csv(const region_scan_result& r) {
    std::ostringstream os;
    os << "a,b,predicted,observed\n";
    const bool two_param = r.family == scan_family::uab;
    for (const scan_row& row : r.rows) {
        os << row.a << ",";
        if (two_param) os << row.b;
        os << "," << (row.predicted ? "true" : "false") << ","
           << (row.observed ? "true" : "false") << "\n";
    }
    return os.str();
}

}  // namespace meanscope
