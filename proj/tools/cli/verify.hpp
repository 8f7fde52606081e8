#pragma once

// Property suites behind `hypharm verify`.  Each property is a named numeric check
// with its tolerance; a suite passes when every property does.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypharm/hypharm.hpp"

namespace hypharm::cli {

struct Property {
    std::string id;
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string relation;  // how value is compared with tolerance

    nlohmann::json to_json() const {
        return {{"id", id}, {"pass", pass}, {"value", value}, {"tolerance", tolerance}, {"relation", relation}};
    }
};

inline Property at_most(std::string id, double value, double tol) {
    return {std::move(id), value <= tol, value, tol, "<="};
}
inline Property at_least(std::string id, double value, double tol) {
    return {std::move(id), value >= tol, value, tol, ">="};
}
inline Property within(std::string id, double value, double lo, double hi) {
    Property p{std::move(id), value >= lo && value <= hi, value, hi, "in [" + csv_number(lo) + "," + csv_number(hi) + "]"};
    return p;
}

namespace suites {

inline double max_abs(const RealField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

inline std::vector<Property> trivial(int n) {
    std::vector<Property> out;
    const Grid g(Model::Disk, {-0.7, 0.7}, {-0.7, 0.7}, n, n);
    const QuadDiff zero = QuadDiff::zero(Model::Disk);
    const HarmonicMetric hm = solve_h(zero, g, DirichletConstant{0.0});
    out.push_back(at_most("trivial.zero-solution", max_abs(hm.h), 1e-10));
    out.push_back(at_most("trivial.zero-residual", hm.report.final_residual, 1e-12));
    out.push_back(at_most("trivial.poincare-curvature", curvature_defect(hm), 1e-10));
    const auto [l1, l2] = dilatations(hm);
    double dev = 0.0;
    for (int k = 0; k < g.size(); ++k)
        dev = std::max({dev, std::abs(l1.values()[k] - 1.0), std::abs(l2.values()[k] - 1.0)});
    out.push_back(at_most("trivial.unit-dilatations", dev, 1e-12));
    const RealField u = distortion(hm);
    const double finite = double(std::count_if(u.values().begin(), u.values().end(), [](double v) { return std::isfinite(v); }));
    out.push_back(at_most("trivial.distortion-sentinel", finite, 0.0));
    const HarmonicMetric one = make_harmonic_metric(zero, RealField(g, 1.0));
    const RealField K = curvature(one);
    out.push_back(at_most("trivial.non-solution-curvature", std::abs(K(n / 2, n / 2) + std::exp(-1.0)), 1e-12));
    return out;
}

inline std::vector<Property> bounds(int n) {
    struct Case {
        std::string name;
        QuadDiff phi;
        Grid grid;
    };
    const QuadDiff psi = QuadDiff::constant(Model::HalfPlane, -0.25);
    const std::vector<Case> cases = {
        {"half-plane-constant", psi, Grid(Model::HalfPlane, {0, 1}, {0.2, 2}, n, n)},
        {"half-plane-scaled-16", QuadDiff::scaled(16.0, psi), Grid(Model::HalfPlane, {0, 1}, {0.5, 4}, n, n)},
        {"disk-constant", QuadDiff::constant(Model::Disk, 1.0), Grid(Model::Disk, {-0.6, 0.6}, {-0.6, 0.6}, n, n)},
        {"disk-polynomial", QuadDiff::polynomial(Model::Disk, {0.0, 0.0, Complex(1.0, 0.5)}),
         Grid(Model::Disk, {-0.6, 0.6}, {-0.6, 0.6}, n, n)},
        {"strip-constant", QuadDiff::constant(Model::Strip, Complex(0.3, 0.2)),
         Grid(Model::Strip, {0, 2}, {0.3, 2.8}, n, n)},
    };
    std::vector<Property> out;
    for (const Case& c : cases) {
        const HarmonicMetric hm = solve_h(c.phi, c.grid, DirichletConstant{});
        const double hp = hm.report.h_plus;
        out.push_back(at_least("bounds." + c.name + ".lower", hm.report.h_min, -1e-12));
        out.push_back(at_most("bounds." + c.name + ".upper", hm.report.h_max - hp, 1e-12));
        const RealField u = distortion(hm);
        double umin = std::numeric_limits<double>::infinity();
        for (double v : u.values()) umin = std::min(umin, v);
        out.push_back(at_least("bounds." + c.name + ".positivity", umin, 0.0));
        const InfDistortionReport r = inf_distortion_bound_check(hm);
        out.push_back(at_least("bounds." + c.name + ".inf-distortion", r.slack, -r.tolerance));
    }
    return out;
}

inline std::vector<Property> distortion_mp(int n, bool swap) {
    const QuadDiff psi = QuadDiff::constant(Model::HalfPlane, -0.25);
    const Grid g(Model::HalfPlane, {0, 1}, {0.2, 2}, n, n);
    std::vector<Property> out;
    if (swap) {
        // Deliberately violates the dominance precondition; throws PreconditionError.
        distortion_comparison(psi, QuadDiff::scaled(2.0, psi), g);
    }
    const DistortionComparison pair = distortion_comparison(QuadDiff::scaled(2.0, psi), psi, g);
    out.push_back(at_most("distortion-mp.pair", pair.max_difference, 1e-6));
    std::vector<RealField> us;
    for (double t : {1.0, 2.0, 4.0}) us.push_back(distortion(solve_h(QuadDiff::scaled(t, psi), g, DirichletConstant{})));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < us.size(); ++k)
        for (int i = 0; i < g.size(); ++i) worst = std::max(worst, us[k + 1].values()[i] - us[k].values()[i]);
    out.push_back(at_most("distortion-mp.t-family", worst, 1e-6));
    return out;
}

inline std::vector<Property> nested(int) {
    std::vector<Property> out;
    const Grid inner(Model::HalfPlane, {0, 1}, {0.4, 1.6}, 33, 33);
    const Grid outer(Model::HalfPlane, {-0.5, 1.5}, {0.25, 2.5}, 65, 61);
    const QuadDiff psi = QuadDiff::constant(Model::HalfPlane, -0.25);
    out.push_back(at_least("nested.parabolic", nested_domain_solve(psi, inner, outer).min_over_interior, -1e-6));
    out.push_back(at_least("nested.poincare",
                           nested_domain_solve(QuadDiff::zero(Model::HalfPlane), inner, outer, {}, 1.0).min_over_interior,
                           -1e-6));
    const NestedSolve same = nested_domain_solve(psi, inner, inner);
    double dev = 0.0;
    for (int j = 1; j < inner.ny() - 1; ++j)
        for (int i = 1; i < inner.nx() - 1; ++i) dev = std::max(dev, std::abs(same.min_eigenvalue(i, j)));
    out.push_back(at_most("nested.same-domain", dev, 1e-12));
    return out;
}

inline std::vector<Property> curvature(int n) {
    const QuadDiff psi = QuadDiff::constant(Model::HalfPlane, -0.25);
    const DirichletClosedForm bc{[](Complex z) { return parabolic_h(0.5, z.imag()); }, "parabolic"};
    double defect[2], error[2];
    for (int r = 0; r < 2; ++r) {
        const int m = r == 0 ? n : 2 * n - 1;
        const Grid g(Model::HalfPlane, {0, 1}, {0.2, 2}, m, m);
        const HarmonicMetric hm = solve_h(psi, g, bc);
        defect[r] = curvature_defect(hm);
        error[r] = 0.0;
        for (int j = 1; j < m - 1; ++j)
            for (int i = 1; i < m - 1; ++i) error[r] = std::max(error[r], std::abs(hm.h(i, j) - parabolic_h(0.5, g.y(j))));
    }
    return {at_most("curvature.defect", defect[1], 5e-3), within("curvature.refinement-ratio", defect[0] / defect[1], 3.0, 5.0),
            at_most("curvature.oracle-error", error[1], 1e-3), within("curvature.error-ratio", error[0] / error[1], 3.0, 5.0)};
}

inline std::vector<Property> bochner(int n) {
    const SmoothMap f = parabolic_smooth_map(0.4), g = parabolic_smooth_map(0.5);
    const Grid grid(Model::HalfPlane, {0, 1}, {0.2, 1.5}, n, n);
    const Grid tall(Model::HalfPlane, {0, 1}, {0.2, 2.0}, n, n);
    return {at_least("bochner.parabolic-pair", bochner_check(f, g, grid).min_margin, -1e-3),
            at_least("bochner.weighted-tall", bochner_check(f, g, tall).min_weighted_margin, -1e-3),
            at_most("bochner.identical", std::abs(bochner_check(f, f, grid).min_margin), 1e-12)};
}

inline std::vector<Property> closed_form() {
    std::vector<Property> out;
    double hopf = 0.0, tension = 0.0, quarter = 0.0, ode = 0.0;
    for (double beta : {0.25, 0.5, 1.0}) {
        const SmoothMap f = parabolic_smooth_map(beta);
        for (int k = 0; k < 20; ++k) {
            const Complex z(-1.0 + 0.1 * k, 0.1 + 0.15 * k);
            hopf = std::max(hopf, std::abs(hopf_differential(f, z) + beta * beta));
            tension = std::max(tension, std::abs(tension_field(f, z)));
        }
    }
    for (double y : {0.5, 1.0, 2.0}) ode = std::max(ode, std::abs(parabolic_wan_residual(0.5, y)));
    const SmoothMap q = quarter_plane_smooth_map();
    for (int k = 0; k < 20; ++k) quarter = std::max(quarter, std::abs(hopf_differential(q, Complex(-1.0 + 0.1 * k, 0.1 + 0.2 * k)) - 0.25));
    out.push_back(at_most("closed-form.parabolic-hopf", hopf, 1e-9));
    out.push_back(at_most("closed-form.parabolic-tension", tension, 1e-9));
    out.push_back(at_most("closed-form.parabolic-ode", ode, 1e-9));
    out.push_back(at_most("closed-form.quarter-plane-hopf", quarter, 1e-9));
    out.push_back(at_most("closed-form.strip-trivial", std::abs(strip_lambda(0.0, 0.0) - 1.0), 1e-10));
    const double lambda = strip_lambda(0.1, 0.1);
    out.push_back(at_most("closed-form.strip-normalization",
                          std::abs(strip_normalization_integral(0.1, 0.1, lambda) - std::numbers::pi), 1e-8));
    out.push_back(at_most("closed-form.strip-shooting", std::abs(StripSolution(0.1, 0.1).psi().back() - std::numbers::pi), 1e-6));
    out.push_back(at_least("closed-form.litam-dilatation", qc_dilatation(litam_smooth_map(0.5), Complex(0.0, 8.0)), 1e3));
    return out;
}

}  // namespace suites

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"trivial", "bounds", "distortion-mp", "nested",
                                                   "curvature", "bochner", "closed-form"};
    return names;
}

/// Runs one suite or "all".  Throws for unknown names and propagates PreconditionError.
inline std::vector<Property> run_suite(const std::string& name, int n, bool swap_dominance) {
    if (name == "all") {
        std::vector<Property> all;
        for (const std::string& s : suite_names()) {
            auto part = run_suite(s, n, swap_dominance);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    if (name == "trivial") return suites::trivial(n);
    if (name == "bounds") return suites::bounds(n);
    if (name == "distortion-mp") return suites::distortion_mp(n, swap_dominance);
    if (name == "nested") return suites::nested(n);
    if (name == "curvature") return suites::curvature(n);
    if (name == "bochner") return suites::bochner(n);
    if (name == "closed-form") return suites::closed_form();
    throw DomainError("unknown verify suite '" + name + "'");
}

}  // namespace hypharm::cli
