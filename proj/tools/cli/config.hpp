#pragma once

// Run configurations: per-command default documents (which double as the schema),
// validation of user documents against them, --set overrides, and parsers into
// library types.

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

#include "hypharm/hypharm.hpp"

namespace hypharm::cli {

using nlohmann::json;

/// Failure that maps to a process exit code and an error document.
class CliError : public std::runtime_error {
public:
    CliError(int code, std::string kind, const std::string& message, json detail = json::object())
        : std::runtime_error(message), code_(code), kind_(std::move(kind)), detail_(std::move(detail)) {}
    int code() const { return code_; }
    const std::string& kind() const { return kind_; }
    const json& detail() const { return detail_; }

private:
    int code_;
    std::string kind_;
    json detail_;
};

inline CliError schema_error(const std::string& key, const std::string& why) {
    return {2, "schema", "config key '" + key + "': " + why, json{{"key", key}}};
}

namespace detail {

inline json phi_defaults() { return {{"family", "constant"}, {"alpha", -0.25}, {"coeffs", nullptr}, {"scale", 1.0}}; }
inline json grid_defaults() { return {{"x", {0.0, 1.0}}, {"y", {0.2, 2.0}}, {"nx", 65}, {"ny", 65}}; }
inline json solver_defaults() { return {{"tol", 1e-10}, {"max_iter", 50}, {"damping", 1.0}}; }
inline json boundary_defaults() {
    return {{"mode", "h-plus"}, {"value", nullptr}, {"closed_form", "parabolic"}};
}

}  // namespace detail

/// Default document of a command.  Every accepted key appears here; null marks an optional value.
inline json defaults_for(const std::string& command) {
    if (command == "solve")
        return {{"model", "half-plane"},
                {"phi", detail::phi_defaults()},
                {"grid", detail::grid_defaults()},
                {"boundary", detail::boundary_defaults()},
                {"solver", detail::solver_defaults()},
                {"plots", {{"isolines", 10}, {"leaves", 8}, {"leaf_step", 0.01}, {"leaf_steps", 400}}}};
    if (command == "closed-form")
        return {{"family", "parabolic"},
                {"beta", 0.5},
                {"alpha", 0.0},
                {"t", 0.5},
                {"steps", 4096},
                {"samples", {{"x", {-1.0, 1.0}}, {"y", {0.1, 3.0}}, {"nx", 9}, {"ny", 30}}},
                {"profile", {{"y", {0.05, 3.0}}, {"n", 60}}}};
    if (command == "foliation")
        return {{"model", "half-plane"},
                {"phi", detail::phi_defaults()},
                {"start", {0.5, 1.0}},
                {"kind", "horizontal"},
                {"step", 0.01},
                {"n", 200},
                {"metric", "poincare"},
                {"grid", detail::grid_defaults()},
                {"boundary", detail::boundary_defaults()},
                {"solver", detail::solver_defaults()},
                {"leaf_length", {{"beta", nullptr}, {"theta", nullptr}, {"u0", nullptr}}}};
    if (command == "boundary")
        return {{"model", "half-plane"},
                {"map", "power"},
                {"exponent", 2.0},
                {"coefficients", {1.0, 0.0, 0.0, 1.0}},
                {"sampling", {{"grid_points", 32}, {"random_quadruples", 200}}},
                {"quadruples", nullptr},
                {"seed", 20240101},
                {"graph", {{"x", {-3.0, 3.0}}, {"n", 121}}}};
    if (command == "verify") return {{"suite", "all"}, {"n", 33}, {"swap_dominance", false}};
    throw CliError(2, "usage", "unknown command '" + command + "'");
}

namespace detail {

inline bool is_complex_literal(const json& v) {
    return v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number();
}

}  // namespace detail

/// Rejects keys absent from `schema` and values whose JSON type differs from the default's.
/// Numeric defaults accept [re, im] pairs for keys named "alpha".
inline void validate(const json& given, const json& schema, const std::string& prefix = "") {
    if (!given.is_object()) throw schema_error(prefix.empty() ? "<root>" : prefix, "expected an object");
    for (const auto& [key, value] : given.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!schema.contains(key)) throw schema_error(path, "unknown key");
        const json& d = schema.at(key);
        if (d.is_null()) continue;
        if (d.is_object()) {
            validate(value, d, path);
            continue;
        }
        const bool ok = (d.is_number() && value.is_number()) || (d.is_string() && value.is_string()) ||
                        (d.is_boolean() && value.is_boolean()) || (d.is_array() && value.is_array()) ||
                        (key == "alpha" && d.is_number() && detail::is_complex_literal(value));
        if (!ok) throw schema_error(path, std::string("expected ") + d.type_name() + ", got " + value.type_name());
        if (d.is_number_integer() && !value.is_number_integer())
            throw schema_error(path, "expected an integer");
    }
}

/// Applies key=value with a dotted key; the value is parsed as JSON, or taken as a string.
inline void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw CliError(2, "usage", "--set expects key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    json* node = &doc;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
        if (!node->is_object()) throw schema_error(key, "path crosses a non-object value");
        node = &(*node)[parts[k]];
        if (node->is_null()) *node = json::object();
    }
    (*node)[parts.back()] = value;
}

inline json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError(2, "io", "cannot open config file '" + path + "'");
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw CliError(2, "schema", "config file '" + path + "' is not valid JSON");
    return doc;
}

/// Validated user document merged over the command defaults.
inline json resolve_config(const std::string& command, json user) {
    const json defaults = defaults_for(command);
    validate(user, defaults);
    json merged = defaults;
    merged.merge_patch(user);
    return merged;
}

inline Complex parse_complex(const json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (detail::is_complex_literal(v)) return {v[0].get<double>(), v[1].get<double>()};
    throw schema_error(key, "expected a number or [re, im]");
}

inline Model parse_model(const json& v) {
    try {
        return model_from_string(v.get<std::string>());
    } catch (const DomainError&) {
        throw schema_error("model", "expected disk, half-plane or strip");
    }
}

inline QuadDiff parse_phi(const json& j, Model model) {
    const std::string family = j.at("family").get<std::string>();
    QuadDiff base = QuadDiff::zero(model);
    if (family == "zero") {
    } else if (family == "constant") {
        base = QuadDiff::constant(model, parse_complex(j.at("alpha"), "phi.alpha"));
    } else if (family == "invariant-axis") {
        if (model != Model::HalfPlane) throw schema_error("phi.family", "invariant-axis needs the half-plane model");
        base = QuadDiff::invariant_axis(parse_complex(j.at("alpha"), "phi.alpha"));
    } else if (family == "polynomial") {
        const json& c = j.at("coeffs");
        if (!c.is_array() || c.empty()) throw schema_error("phi.coeffs", "polynomial needs a non-empty coefficient list");
        std::vector<Complex> coeffs;
        for (std::size_t k = 0; k < c.size(); ++k) coeffs.push_back(parse_complex(c[k], "phi.coeffs"));
        base = QuadDiff::polynomial(model, std::move(coeffs));
    } else {
        throw schema_error("phi.family", "expected zero, constant, invariant-axis or polynomial");
    }
    const double scale = j.at("scale").get<double>();
    return scale == 1.0 ? base : QuadDiff::scaled(scale, base);
}

inline Interval parse_interval(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw schema_error(key, "expected [lo, hi]");
    return {v[0].get<double>(), v[1].get<double>()};
}

inline Grid parse_grid(const json& j, Model model) {
    return Grid(model, parse_interval(j.at("x"), "grid.x"), parse_interval(j.at("y"), "grid.y"),
                j.at("nx").get<int>(), j.at("ny").get<int>());
}

inline SolverConfig parse_solver(const json& j) {
    SolverConfig c;
    c.tol = j.at("tol").get<double>();
    c.max_iter = j.at("max_iter").get<int>();
    c.damping = j.at("damping").get<double>();
    c.validate();
    return c;
}

/// Parabolic parameter beta of a real negative constant differential on U, if it is one.
inline std::optional<double> parabolic_beta(const QuadDiff& phi) {
    if (phi.model() != Model::HalfPlane) return std::nullopt;
    Complex alpha;
    if (const auto* c = std::get_if<QuadDiff::Constant>(&phi.form())) {
        alpha = c->alpha;
    } else if (const auto* s = std::get_if<QuadDiff::Scaled>(&phi.form())) {
        const auto* c2 = std::get_if<QuadDiff::Constant>(&s->base->form());
        if (!c2) return std::nullopt;
        alpha = s->t * c2->alpha;
    } else {
        return std::nullopt;
    }
    if (alpha.imag() != 0.0 || !(alpha.real() < 0.0)) return std::nullopt;
    return std::sqrt(-alpha.real());
}

inline BoundaryCondition parse_boundary(const json& j, const QuadDiff& phi) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "h-plus") return DirichletConstant{};
    if (mode == "constant") {
        if (!j.at("value").is_number()) throw schema_error("boundary.value", "constant mode needs a number");
        return DirichletConstant{j.at("value").get<double>()};
    }
    if (mode == "closed-form") {
        if (j.at("closed_form").get<std::string>() != "parabolic")
            throw schema_error("boundary.closed_form", "only 'parabolic' is available");
        const auto beta = parabolic_beta(phi);
        if (!beta) throw schema_error("boundary.closed_form", "parabolic data needs phi = -beta^2 dz^2 on the half-plane");
        const double b = *beta;
        return DirichletClosedForm{[b](Complex z) { return parabolic_h(b, z.imag()); }, "parabolic"};
    }
    throw schema_error("boundary.mode", "expected h-plus, constant or closed-form");
}

inline FoliationKind parse_kind(const json& v) {
    const std::string s = v.get<std::string>();
    if (s == "horizontal") return FoliationKind::Horizontal;
    if (s == "vertical") return FoliationKind::Vertical;
    throw schema_error("kind", "expected horizontal or vertical");
}

}  // namespace hypharm::cli
