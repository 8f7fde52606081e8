#pragma once

// The five commands and the argument front end.  run_cli never exits the process,
// so tests can drive it directly.
//
// Exit codes: 0 success, 1 verify found failing properties, 2 invalid configuration
// or violated precondition, 3 numerical failure (non-convergence and the like).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypharm/hypharm.hpp"
#include "hypharm/svg.hpp"

#include "cli/config.hpp"
#include "cli/verify.hpp"

namespace hypharm::cli {

struct Context {
    json config;
    std::filesystem::path out_dir;
    bool plots = false;
    std::optional<std::uint64_t> seed;
    std::ostream* out = &std::cout;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw CliError(3, "io", "cannot write '" + path.string() + "'");
    os << text;
}

template <class F>
void write_with(const std::filesystem::path& path, F&& fill) {
    std::ostringstream os;
    fill(os);
    write_file(path, os.str());
}

inline void write_json(const std::filesystem::path& path, const json& doc) { write_file(path, doc.dump(2) + "\n"); }

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline std::vector<double> linspace(const json& range, int n) {
    const Interval r = parse_interval(range, "range");
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = n == 1 ? r.lo : r.lo + (r.hi - r.lo) * k / (n - 1);
    return v;
}

// Horizontal leaves from seeds spread over the grid, both directions, measured in `metric`.
inline std::vector<std::vector<Complex>> sample_leaves(const QuadDiff& phi, const Grid& g, int count, double step,
                                                       int steps, const std::optional<MetricField>& metric) {
    std::vector<std::vector<Complex>> leaves;
    if (phi.is_zero()) return leaves;
    for (int k = 0; k < count; ++k) {
        const double t = (k + 0.5) / count;
        const Complex seed(g.x_range().lo + t * g.x_range().length(), g.y_range().lo + t * g.y_range().length());
        if (poincare_norm(phi, seed) < kSingularNorm) continue;
        for (double s : {step, -step}) {
            // Leaves are clipped to the grid rectangle for plotting.
            Leaf leaf = trace_leaf(phi, Point(g.model(), seed), FoliationKind::Horizontal, s, steps, metric);
            std::vector<Complex> inside;
            for (Complex z : leaf.points) {
                if (!g.contains(z)) break;
                inside.push_back(z);
            }
            leaves.push_back(std::move(inside));
        }
    }
    return leaves;
}

}  // namespace detail

inline int cmd_solve(const Context& ctx) {
    const json& c = ctx.config;
    const Model model = parse_model(c.at("model"));
    const QuadDiff phi = parse_phi(c.at("phi"), model);
    const Grid grid = parse_grid(c.at("grid"), model);
    const BoundaryCondition bc = parse_boundary(c.at("boundary"), phi);
    const SolverConfig cfg = parse_solver(c.at("solver"));

    const HarmonicMetric hm = solve_h(phi, grid, bc, cfg);
    const RealField u = distortion(hm);
    const RealField K = curvature(hm);

    json report = {{"command", "solve"}, {"config", c}, {"solve", to_json(hm.report)}};
    report["curvature_defect"] = curvature_defect(hm);
    report["bounds"] = {{"h_min", hm.report.h_min},
                        {"h_max", hm.report.h_max},
                        {"h_plus", hm.report.h_plus},
                        {"within_h_plus", hm.report.h_min >= -1e-12 && hm.report.h_max <= hm.report.h_plus + 1e-12}};
    double umin = std::numeric_limits<double>::infinity();
    for (double v : u.values()) umin = std::min(umin, v);
    report["inf_u"] = std::isfinite(umin) ? json(umin) : json("inf");
    if (!phi.is_zero()) {
        const InfDistortionReport r = inf_distortion_bound_check(hm);
        report["inf_distortion_bound"] = {{"inf_u", r.inf_u}, {"bound", r.bound}, {"slack", r.slack}, {"holds", r.holds}};
    }
    if (std::holds_alternative<DirichletClosedForm>(bc)) {
        const double beta = *parabolic_beta(phi);
        double err = 0.0, ode = 0.0;
        for (int j = 1; j < grid.ny() - 1; ++j) {
            ode = std::max(ode, std::abs(parabolic_wan_residual(beta, grid.y(j))));
            for (int i = 1; i < grid.nx() - 1; ++i) err = std::max(err, std::abs(hm.h(i, j) - parabolic_h(beta, grid.y(j))));
        }
        report["oracle"] = {{"name", "parabolic"}, {"beta", beta}, {"max_error", err}, {"ode_residual", ode}};
    }

    detail::write_with(ctx.out_dir / "h.csv", [&](std::ostream& os) { write_field_csv(os, hm.h); });
    detail::write_with(ctx.out_dir / "u.csv", [&](std::ostream& os) { write_field_csv(os, u); });
    detail::write_json(ctx.out_dir / "report.json", report);
    if (ctx.plots) {
        const int levels = c.at("plots").at("isolines").get<int>();
        detail::write_file(ctx.out_dir / "h.svg", svg::heatmap(hm.h, "h", levels));
        detail::write_file(ctx.out_dir / "u.svg", svg::heatmap(u, "u", levels));
        const json& p = c.at("plots");
        const auto leaves = detail::sample_leaves(phi, grid, p.at("leaves").get<int>(), p.at("leaf_step").get<double>(),
                                                  p.at("leaf_steps").get<int>(), as_metric_field(hm));
        detail::write_file(ctx.out_dir / "foliation.svg", svg::polylines(leaves, "horizontal foliation"));
    }
    *ctx.out << json{{"status", "ok"},
                     {"iterations", hm.report.iterations},
                     {"final_residual", hm.report.final_residual},
                     {"out_dir", ctx.out_dir.string()}}
                    .dump()
             << "\n";
    return 0;
}

inline int cmd_closed_form(const Context& ctx) {
    const json& c = ctx.config;
    const std::string family = c.at("family").get<std::string>();
    const json& s = c.at("samples");
    const std::vector<double> xs = detail::linspace(s.at("x"), s.at("nx").get<int>());
    const std::vector<double> ys = detail::linspace(s.at("y"), s.at("ny").get<int>());
    json report = {{"command", "closed-form"}, {"family", family}, {"config", c}};

    if (family == "parabolic" || family == "litam") {
        const double beta = family == "parabolic" ? c.at("beta").get<double>() : c.at("t").get<double>();
        const SmoothMap f = family == "parabolic" ? ParabolicSolution(beta).smooth_map() : litam_smooth_map(beta);
        const double b = std::abs(beta);
        const json& pr = c.at("profile");
        const std::vector<double> py = detail::linspace(pr.at("y"), pr.at("n").get<int>());
        detail::write_with(ctx.out_dir / "profile.csv", [&](std::ostream& os) {
            os << "y,h,u,metric_coefficient\n";
            for (double y : py)
                os << csv_number(y) << ',' << csv_number(parabolic_h(b, y)) << ',' << csv_number(parabolic_u(b, y))
                   << ',' << csv_number(parabolic_metric_coefficient(b, y)) << '\n';
        });
        double hopf = 0.0, tension = 0.0, dmax = 0.0;
        detail::write_with(ctx.out_dir / "map.csv", [&](std::ostream& os) {
            os << "x,y,re,im,qc_dilatation\n";
            for (double y : ys)
                for (double x : xs) {
                    const Complex z(x, y), w = f(z);
                    const double k = qc_dilatation(f, z);
                    hopf = std::max(hopf, std::abs(hopf_differential(f, z) + b * b));
                    tension = std::max(tension, std::abs(tension_field(f, z)));
                    dmax = std::max(dmax, k);
                    os << csv_number(x) << ',' << csv_number(y) << ',' << csv_number(w.real()) << ','
                       << csv_number(w.imag()) << ',' << csv_number(k) << '\n';
                }
        });
        report["beta"] = b;
        report["hopf"] = -b * b;
        report["max_hopf_deviation"] = hopf;
        report["max_tension"] = tension;
        report["max_qc_dilatation"] = dmax;
        report["boundary_trace"] = "identity";
        report["ode_residual_at_1"] = parabolic_wan_residual(b, 1.0);
    } else if (family == "quarter-plane") {
        const SmoothMap f = quarter_plane_smooth_map();
        bool quadrant = true;
        double hopf = 0.0;
        detail::write_with(ctx.out_dir / "map.csv", [&](std::ostream& os) {
            os << "x,y,re,im\n";
            for (double y : ys)
                for (double x : xs) {
                    const Complex w = quarter_plane_map(Complex(x, y));
                    quadrant = quadrant && w.real() > 0.0 && w.imag() > 0.0;
                    hopf = std::max(hopf, std::abs(hopf_differential(f, Complex(x, y)) - 0.25));
                    os << csv_number(x) << ',' << csv_number(y) << ',' << csv_number(w.real()) << ','
                       << csv_number(w.imag()) << '\n';
                }
        });
        report["hopf"] = 0.25;
        report["max_hopf_deviation"] = hopf;
        report["all_in_first_quadrant"] = quadrant;
    } else if (family == "strip") {
        const double alpha = c.at("alpha").get<double>(), beta = c.at("beta").get<double>();
        const StripSolution sol(alpha, beta, c.at("steps").get<int>());
        detail::write_with(ctx.out_dir / "profile.csv", [&](std::ostream& os) { sol.write_profile_csv(os); });
        detail::write_with(ctx.out_dir / "map.csv", [&](std::ostream& os) {
            os << "x,y,re,im\n";
            for (double y : ys)
                for (double x : xs) {
                    if (!(y > 0.0 && y < std::numbers::pi)) throw schema_error("samples.y", "strip samples need 0 < y < pi");
                    const Complex w = sol.map(Complex(x, y));
                    os << csv_number(x) << ',' << csv_number(y) << ',' << csv_number(w.real()) << ','
                       << csv_number(w.imag()) << '\n';
                }
        });
        report["alpha"] = alpha;
        report["beta"] = beta;
        report["lambda"] = sol.lambda();
        report["K"] = sol.K();
        report["psi_pi_error"] = sol.psi().back() - std::numbers::pi;
        report["normalization_error"] = strip_normalization_integral(alpha, beta, sol.lambda()) - std::numbers::pi;
    } else {
        throw schema_error("family", "expected parabolic, litam, quarter-plane or strip");
    }
    detail::write_json(ctx.out_dir / "report.json", report);
    if (ctx.plots && std::filesystem::exists(ctx.out_dir / "profile.csv")) {
        std::vector<double> y, v;
        if (family == "strip") {
            const StripSolution sol(c.at("alpha").get<double>(), c.at("beta").get<double>(), c.at("steps").get<int>());
            y = sol.y();
            v = sol.psi();
        } else {
            const double b = std::abs(family == "parabolic" ? c.at("beta").get<double>() : c.at("t").get<double>());
            y = detail::linspace(c.at("profile").at("y"), c.at("profile").at("n").get<int>());
            for (double t : y) v.push_back(parabolic_h(b, t));
        }
        detail::write_file(ctx.out_dir / "profile.svg", svg::graph(y, v, family + " profile"));
    }
    *ctx.out << json{{"status", "ok"}, {"family", family}, {"out_dir", ctx.out_dir.string()}}.dump() << "\n";
    return 0;
}

inline int cmd_foliation(const Context& ctx) {
    const json& c = ctx.config;
    const Model model = parse_model(c.at("model"));
    const QuadDiff phi = parse_phi(c.at("phi"), model);
    const Complex start = parse_complex(c.at("start"), "start");
    const FoliationKind kind = parse_kind(c.at("kind"));
    const std::string metric_name = c.at("metric").get<std::string>();
    std::optional<MetricField> metric;
    json report = {{"command", "foliation"}, {"config", c}};
    if (metric_name == "harmonic") {
        const Grid grid = parse_grid(c.at("grid"), model);
        const HarmonicMetric hm = solve_h(phi, grid, parse_boundary(c.at("boundary"), phi), parse_solver(c.at("solver")));
        metric = as_metric_field(hm);
        report["solve"] = to_json(hm.report);
    } else if (metric_name != "poincare") {
        throw schema_error("metric", "expected poincare or harmonic");
    }
    const Leaf leaf = trace_leaf(phi, Point(model, start), kind, c.at("step").get<double>(), c.at("n").get<int>(), metric);
    report["leaf"] = {{"points", leaf.points.size()},
                      {"length", leaf.length()},
                      {"truncated", leaf.truncated},
                      {"stop_reason", leaf.stop_reason},
                      {"end", detail::complex_json(leaf.points.back())}};
    const json& ll = c.at("leaf_length");
    if (!ll.at("beta").is_null()) {
        if (!ll.at("theta").is_number() || !ll.at("u0").is_number())
            throw schema_error("leaf_length", "beta, theta and u0 must all be given");
        const double len = vertical_leaf_length_parabolic(ll.at("beta").get<double>(), ll.at("theta").get<double>(),
                                                          ll.at("u0").get<double>());
        report["vertical_leaf_length"] = std::isfinite(len) ? json(len) : json("inf");
    }
    detail::write_with(ctx.out_dir / "leaf.csv", [&](std::ostream& os) { write_leaf_csv(os, leaf); });
    detail::write_json(ctx.out_dir / "report.json", report);
    if (ctx.plots) detail::write_file(ctx.out_dir / "foliation.svg", svg::polylines({leaf.points}, std::string(to_string(kind)) + " leaf"));
    *ctx.out << json{{"status", "ok"}, {"length", leaf.length()}, {"out_dir", ctx.out_dir.string()}}.dump() << "\n";
    return 0;
}

inline int cmd_boundary(const Context& ctx) {
    const json& c = ctx.config;
    const Model model = parse_model(c.at("model"));
    const std::string kind = c.at("map").get<std::string>();
    BoundaryMap map;
    if (kind == "identity") {
        map = BoundaryMap::identity(model);
    } else if (kind == "homography") {
        if (model != Model::HalfPlane) throw schema_error("model", "homography boundary maps use the half-plane");
        const json& k = c.at("coefficients");
        if (k.size() != 4) throw schema_error("coefficients", "expected [a, b, c, d]");
        map = BoundaryMap::homography(MobiusMap(k[0].get<double>(), k[1].get<double>(), k[2].get<double>(), k[3].get<double>()));
    } else if (kind == "power") {
        const double p = c.at("exponent").get<double>();
        if (!(p > 0.0)) throw schema_error("exponent", "must be positive");
        map = {model, [p](double x) { return std::copysign(std::pow(std::abs(x), p), x); }, "power"};
    } else {
        throw schema_error("map", "expected identity, homography or power");
    }
    if (model == Model::Strip) throw schema_error("model", "boundary maps use the half-plane or the disk");

    QsEstimate est;
    const std::uint64_t seed = ctx.seed.value_or(c.at("seed").get<std::uint64_t>());
    if (c.at("quadruples").is_array()) {
        std::vector<std::array<double, 4>> quads;
        for (const json& q : c.at("quadruples")) {
            if (!q.is_array() || q.size() != 4) throw schema_error("quadruples", "each entry must have four numbers");
            quads.push_back({q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()});
        }
        est = qs_constant_estimate(map, quads);
    } else {
        const json& s = c.at("sampling");
        est = qs_constant_estimate(map, QsSampling{s.at("grid_points").get<int>(), s.at("random_quadruples").get<int>(), seed});
    }
    const std::vector<double> xs = detail::linspace(c.at("graph").at("x"), c.at("graph").at("n").get<int>());
    std::vector<double> fx;
    for (double x : xs) fx.push_back(map.f(x));
    detail::write_with(ctx.out_dir / "boundary.csv", [&](std::ostream& os) {
        os << "x,fx\n";
        for (std::size_t k = 0; k < xs.size(); ++k) os << csv_number(xs[k]) << ',' << csv_number(fx[k]) << '\n';
    });
    const json report = {{"command", "boundary"},
                         {"config", c},
                         {"seed", seed},
                         {"k_hat", est.k_hat},
                         {"worst_quadruple", est.worst},
                         {"quadruples", est.quadruples}};
    detail::write_json(ctx.out_dir / "report.json", report);
    if (ctx.plots) detail::write_file(ctx.out_dir / "boundary.svg", svg::graph(xs, fx, "boundary map"));
    *ctx.out << json{{"status", "ok"}, {"k_hat", est.k_hat}, {"out_dir", ctx.out_dir.string()}}.dump() << "\n";
    return 0;
}

inline int cmd_verify(const Context& ctx) {
    const json& c = ctx.config;
    const std::string suite = c.at("suite").get<std::string>();
    if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw schema_error("suite", "unknown suite '" + suite + "'");
    const int n = c.at("n").get<int>();
    if (n < 9) throw schema_error("n", "needs at least 9 nodes");
    const std::vector<Property> props = run_suite(suite, n, c.at("swap_dominance").get<bool>());
    json lines = json::array();
    std::vector<std::string> failing;
    for (const Property& p : props) {
        *ctx.out << p.to_json().dump() << "\n";
        lines.push_back(p.to_json());
        if (!p.pass) failing.push_back(p.id);
    }
    const json summary = {{"suite", suite}, {"pass", failing.empty()}, {"failing", failing}, {"count", props.size()}};
    *ctx.out << summary.dump() << "\n";
    detail::write_json(ctx.out_dir / "verify.json", {{"summary", summary}, {"properties", lines}});
    return failing.empty() ? 0 : 1;
}

/// Parses arguments, runs one command, and converts failures into exit codes plus an
/// error document on `out` (also written to <out-dir>/error.json when possible).
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Hyperbolic harmonic metrics: Wan-equation solver, closed forms, foliations, boundary maps"};
    app.require_subcommand(1);
    struct Flags {
        std::string config;
        std::vector<std::string> sets;
        std::string out_dir = "out";
        bool plots = false;
        std::optional<std::uint64_t> seed;
    } flags;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"solve", "Solve Wan's equation on a grid"},
        {"closed-form", "Evaluate a closed-form harmonic map or metric"},
        {"foliation", "Trace a leaf of the horizontal or vertical foliation"},
        {"boundary", "Estimate the quasisymmetry constant of a boundary map"},
        {"verify", "Run property suites"}};
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", flags.config, "JSON config file");
        sub->add_option("--set", flags.sets, "Override key=value (dotted key, JSON value)")->take_all();
        sub->add_option("--out-dir", flags.out_dir, "Output directory");
        sub->add_flag("--plots", flags.plots, "Also write SVG plots");
        sub->add_option("--seed", flags.seed, "Seed for random sampling");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    auto fail = [&](int code, const std::string& kind, const std::string& message, json detail) {
        json doc = {{"status", "error"}, {"command", command}, {"error", kind}, {"message", message}};
        if (!detail.empty()) doc["detail"] = std::move(detail);
        out << doc.dump() << "\n";
        err << "hypharm " << command << ": " << message << "\n";
        std::error_code ec;
        std::filesystem::create_directories(flags.out_dir, ec);
        if (!ec) {
            std::ofstream os(std::filesystem::path(flags.out_dir) / "error.json");
            if (os) os << doc.dump(2) << "\n";
        }
        return code;
    };

    try {
        json user = flags.config.empty() ? json::object() : load_config(flags.config);
        for (const std::string& s : flags.sets) apply_override(user, s);
        Context ctx{resolve_config(command, user), flags.out_dir, flags.plots, flags.seed, &out};
        std::filesystem::create_directories(ctx.out_dir);
        if (command == "solve") return cmd_solve(ctx);
        if (command == "closed-form") return cmd_closed_form(ctx);
        if (command == "foliation") return cmd_foliation(ctx);
        if (command == "boundary") return cmd_boundary(ctx);
        return cmd_verify(ctx);
    } catch (const CliError& e) {
        return fail(e.code(), e.kind(), e.what(), e.detail());
    } catch (const SolveFailure& e) {
        return fail(3, e.kind(), e.what(), to_json(e.report()));
    } catch (const PreconditionError& e) {
        return fail(2, e.kind(), e.what(), {});
    } catch (const DomainError& e) {
        return fail(2, e.kind(), e.what(), {});
    } catch (const hypharm::Error& e) {
        return fail(3, e.kind(), e.what(), {});
    } catch (const json::exception& e) {
        return fail(2, "schema", e.what(), {});
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(3, "io", e.what(), {});
    }
}

}  // namespace hypharm::cli
