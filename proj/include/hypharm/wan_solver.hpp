#pragma once

// Numerical solution of Wan's equation for hyperbolic harmonic metrics
//
//     (1/2) Delta_{g0} h = e^h - |phi|^2 e^{-h} - 1,     h > log|phi|,
//
// on a coordinate rectangle with Dirichlet data, and the quasiconformal data of
// the resulting metric g = phi dz^2 + (e^h + |phi|^2 e^{-h}) g0 + conj(phi dz^2).
//
// Discretization: Delta_{g0} = rho^{-2} (d_xx + d_yy) with the 5-point stencil.
// Newton's matrix J = (1/2) rho^{-2} L - diag(F'(h)) is scaled row-wise by
// -2 rho^2, giving the SPD matrix -L + 2 rho^2 diag(e^h + |phi|^2 e^{-h}).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "json.hpp"

#include "hypharm/error.hpp"
#include "hypharm/foliation.hpp"
#include "hypharm/grid.hpp"
#include "hypharm/hyperbolic.hpp"
#include "hypharm/quad_diff.hpp"
#include "hypharm/sym2.hpp"

namespace hypharm {

struct SolverConfig {
    double tol = 1e-10;  // max-norm residual threshold
    int max_iter = 50;
    double damping = 1.0;  // initial step length, halved until the residual decreases

    void validate() const {
        if (!(tol > 0.0)) throw DomainError("solver tol must be positive");
        if (max_iter < 1) throw DomainError("solver max_iter must be at least 1");
        if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("solver damping must lie in (0, 1]");
    }
};

/// Constant boundary value; h+ of the grid when no value is given.
struct DirichletConstant {
    std::optional<double> value;
};
/// Boundary values taken from an analytic h(z).
struct DirichletClosedForm {
    std::function<double(Complex)> h;
    std::string name = "closed-form";
};
/// Boundary values taken from the boundary nodes of a field on the same grid.
struct DirichletField {
    RealField values;
};
using BoundaryCondition = std::variant<DirichletConstant, DirichletClosedForm, DirichletField>;

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double final_residual = 0.0;
    std::vector<double> residual_history;  // residual before the first step, then after each accepted step
    std::vector<double> step_lengths;
    double sup_phi = 0.0;  // max Poincare norm over the nodes
    double h_plus = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double h_min = 0.0;
    double h_max = 0.0;
    std::string boundary_mode;
    SolverConfig config;
};

/// Thrown when the Newton iteration stops short of the tolerance; carries the full report.
class SolveFailure : public ConvergenceError {
public:
    SolveFailure(const std::string& what, SolveReport report) : ConvergenceError(what), report_(std::move(report)) {}
    const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

/// A pair (h, phi) sampled on a grid.  Derived fields are computed by the free functions below.
struct HarmonicMetric {
    QuadDiff phi;
    RealField h;
    SolveReport report;
};

inline HarmonicMetric make_harmonic_metric(QuadDiff phi, RealField h) {
    if (phi.model() != h.grid().model()) throw DomainError("make_harmonic_metric: model mismatch");
    return {std::move(phi), std::move(h), {}};
}

/// h+ = log((1 + sqrt(1 + 4 s^2)) / 2) for s = sup|phi|; constant supersolution.
inline double supersolution_bound(double sup_phi) {
    if (!(sup_phi >= 0.0) || !std::isfinite(sup_phi))
        throw PreconditionError("supersolution_bound: sup|phi| must be finite; restrict to a bounded region");
    // log((1 + sqrt(1+4s^2))/2) = log1p((sqrt(1+4s^2) - 1)/2) = log1p(2 s^2 / (1 + sqrt(1+4s^2)))
    const double root = std::sqrt(1.0 + 4.0 * sup_phi * sup_phi);
    return std::log1p(2.0 * sup_phi * sup_phi / (1.0 + root));
}

inline double supersolution_bound(const QuadDiff& phi) { return supersolution_bound(sup_norm(phi)); }

/// Max of the Poincare norm over the grid nodes.
inline double grid_sup_norm(const QuadDiff& phi, const Grid& grid) {
    if (phi.model() != grid.model()) throw DomainError("grid_sup_norm: model mismatch");
    double s = 0.0;
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) s = std::max(s, poincare_norm(phi, grid.z(i, j)));
    return s;
}

namespace detail {

// Node data that does not change across Newton iterations.
struct WanSystem {
    Grid grid;
    std::vector<double> inv_rho2;  // rho^-2
    std::vector<double> phi2;      // |phi|_{g0}^2
};

inline WanSystem make_system(const QuadDiff& phi, const Grid& grid) {
    WanSystem s{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size())};
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            const int k = grid.index(i, j);
            const double rho = density(grid.model(), grid.z(i, j));
            s.inv_rho2[k] = 1.0 / (rho * rho);
            const double n = poincare_norm(phi, grid.z(i, j));
            s.phi2[k] = n * n;
        }
    return s;
}

inline double laplacian5(const RealField& h, int i, int j) {
    const Grid& g = h.grid();
    const double dx2 = g.dx() * g.dx(), dy2 = g.dy() * g.dy();
    return (h(i + 1, j) - 2.0 * h(i, j) + h(i - 1, j)) / dx2 + (h(i, j + 1) - 2.0 * h(i, j) + h(i, j - 1)) / dy2;
}

inline double wan_residual(const WanSystem& s, const RealField& h, int i, int j) {
    const int k = s.grid.index(i, j);
    const double v = h(i, j);
    return 0.5 * s.inv_rho2[k] * laplacian5(h, i, j) - (std::exp(v) - s.phi2[k] * std::exp(-v) - 1.0);
}

inline double max_residual(const WanSystem& s, const RealField& h) {
    double r = 0.0;
    for (int j = 1; j < s.grid.ny() - 1; ++j)
        for (int i = 1; i < s.grid.nx() - 1; ++i) r = std::max(r, std::abs(wan_residual(s, h, i, j)));
    return r;
}

inline std::string boundary_mode_name(const BoundaryCondition& bc) {
    return std::visit(
        [](const auto& b) -> std::string {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, DirichletConstant>)
                return b.value ? "constant" : "h-plus";
            else if constexpr (std::is_same_v<T, DirichletClosedForm>)
                return "closed-form:" + b.name;
            else
                return "field";
        },
        bc);
}

}  // namespace detail

/// Discrete residual (1/2) rho^-2 L h - (e^h - |phi|^2 e^-h - 1) at interior nodes; zero on the boundary.
inline RealField wan_residual_field(const QuadDiff& phi, const RealField& h) {
    const detail::WanSystem s = detail::make_system(phi, h.grid());
    RealField r(h.grid(), 0.0);
    for (int j = 1; j < h.grid().ny() - 1; ++j)
        for (int i = 1; i < h.grid().nx() - 1; ++i) r(i, j) = detail::wan_residual(s, h, i, j);
    return r;
}

/// Damped Newton solve of Wan's equation on `grid`.
///
/// The iteration starts from the top of the bracket [lo, hi] with
/// lo = min(0, min boundary data) and hi = max(h+, max boundary data); both ends
/// are constant sub/supersolutions, and every iterate is clamped into the bracket.
/// A step is accepted only if it lowers the max-norm residual (halving up to 40
/// times).  Throws SolveFailure if the tolerance is not met within max_iter.
inline HarmonicMetric solve_h(const QuadDiff& phi, const Grid& grid, const BoundaryCondition& bc,
                              const SolverConfig& cfg = {}) {
    cfg.validate();
    if (phi.model() != grid.model()) throw DomainError("solve_h: differential and grid live in different models");
    // Re-check the rectangle against the model (the Grid constructor already did).
    Grid checked(grid.model(), grid.x_range(), grid.y_range(), grid.nx(), grid.ny());

    const detail::WanSystem sys = detail::make_system(phi, grid);
    SolveReport report;
    report.config = cfg;
    report.boundary_mode = detail::boundary_mode_name(bc);
    report.sup_phi = grid_sup_norm(phi, grid);
    report.h_plus = supersolution_bound(report.sup_phi);

    RealField h(grid, 0.0);
    const int nx = grid.nx(), ny = grid.ny();
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    if (!grid.on_boundary(i, j)) continue;
                    if constexpr (std::is_same_v<T, DirichletConstant>)
                        h(i, j) = b.value.value_or(report.h_plus);
                    else if constexpr (std::is_same_v<T, DirichletClosedForm>)
                        h(i, j) = b.h(grid.z(i, j));
                    else {
                        if (!(b.values.grid() == grid)) throw DomainError("DirichletField lives on a different grid");
                        h(i, j) = b.values(i, j);
                    }
                    if (!std::isfinite(h(i, j))) throw DomainError("boundary data is not finite");
                }
        },
        bc);

    double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (grid.on_boundary(i, j)) bmin = std::min(bmin, h(i, j)), bmax = std::max(bmax, h(i, j));
    report.bracket_lo = std::min(0.0, bmin);
    report.bracket_hi = std::max(report.h_plus, bmax);
    for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i) h(i, j) = report.bracket_hi;

    const int mx = nx - 2, my = ny - 2, n = mx * my;
    auto unknown = [mx](int i, int j) { return (j - 1) * mx + (i - 1); };
    const double idx2 = 1.0 / (grid.dx() * grid.dx()), idy2 = 1.0 / (grid.dy() * grid.dy());

    double residual = detail::max_residual(sys, h);
    report.residual_history.push_back(residual);

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    bool analyzed = false;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(std::size_t(5) * n);
    Eigen::VectorXd rhs(n);

    int iter = 0;
    while (residual > cfg.tol && iter < cfg.max_iter) {
        triplets.clear();
        for (int j = 1; j < ny - 1; ++j)
            for (int i = 1; i < nx - 1; ++i) {
                const int row = unknown(i, j), k = grid.index(i, j);
                const double v = h(i, j);
                const double dF = std::exp(v) + sys.phi2[k] * std::exp(-v);
                const double w = 2.0 / sys.inv_rho2[k];  // 2 rho^2
                triplets.emplace_back(row, row, 2.0 * idx2 + 2.0 * idy2 + w * dF);
                if (i > 1) triplets.emplace_back(row, unknown(i - 1, j), -idx2);
                if (i < nx - 2) triplets.emplace_back(row, unknown(i + 1, j), -idx2);
                if (j > 1) triplets.emplace_back(row, unknown(i, j - 1), -idy2);
                if (j < ny - 2) triplets.emplace_back(row, unknown(i, j + 1), -idy2);
                rhs[row] = w * detail::wan_residual(sys, h, i, j);
            }
        Eigen::SparseMatrix<double> A(n, n);
        A.setFromTriplets(triplets.begin(), triplets.end());
        if (!analyzed) {
            solver.analyzePattern(A);
            analyzed = true;
        }
        solver.factorize(A);
        if (solver.info() != Eigen::Success) {
            report.iterations = iter;
            report.final_residual = residual;
            throw SolveFailure("solve_h: Newton matrix factorization failed", report);
        }
        const Eigen::VectorXd delta = solver.solve(rhs);

        double step = cfg.damping;
        bool accepted = false;
        RealField trial = h;
        for (int halving = 0; halving <= 40; ++halving, step *= 0.5) {
            for (int j = 1; j < ny - 1; ++j)
                for (int i = 1; i < nx - 1; ++i)
                    trial(i, j) = std::clamp(h(i, j) + step * delta[unknown(i, j)], report.bracket_lo, report.bracket_hi);
            const double r = detail::max_residual(sys, trial);
            if (r < residual) {
                residual = r;
                accepted = true;
                break;
            }
        }
        ++iter;
        if (!accepted) {
            report.iterations = iter;
            report.final_residual = residual;
            std::ostringstream os;
            os << "solve_h: line search could not reduce the residual " << residual << " at iteration " << iter;
            throw SolveFailure(os.str(), report);
        }
        h = std::move(trial);
        report.residual_history.push_back(residual);
        report.step_lengths.push_back(step);
    }
    report.iterations = iter;
    report.final_residual = residual;
    report.converged = residual <= cfg.tol;
    const auto [lo, hi] = std::minmax_element(h.values().begin(), h.values().end());
    report.h_min = *lo;
    report.h_max = *hi;
    if (!report.converged) {
        std::ostringstream os;
        os << "solve_h: residual " << residual << " above tol " << cfg.tol << " after " << iter << " iterations";
        throw SolveFailure(os.str(), report);
    }
    return {phi, std::move(h), std::move(report)};
}

/// Poincare norms below this value mark a zero of phi (infinite distortion).
inline constexpr double kSentinelNorm = 1e-300;

/// u = h - log|phi|; +oo where phi vanishes.
inline RealField distortion(const HarmonicMetric& hm) {
    const Grid& g = hm.h.grid();
    RealField u(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double n = poincare_norm(hm.phi, g.z(i, j));
            u(i, j) = n < kSentinelNorm ? std::numeric_limits<double>::infinity() : hm.h(i, j) - std::log(n);
        }
    return u;
}

/// mu = e^{-u} conj(phi) / |phi|; zero where phi vanishes.
inline ComplexField beltrami(const HarmonicMetric& hm) {
    const Grid& g = hm.h.grid();
    const RealField u = distortion(hm);
    ComplexField mu(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (std::isinf(u(i, j))) continue;
            const Complex v = hm.phi(g.z(i, j));
            mu(i, j) = std::exp(-u(i, j)) * std::conj(v) / std::abs(v);
        }
    return mu;
}

/// lambda_1^2 = e^h (1 + e^-u)^2 and lambda_2^2 = e^h (1 - e^-u)^2.
inline std::pair<RealField, RealField> dilatations(const HarmonicMetric& hm) {
    const Grid& g = hm.h.grid();
    const RealField u = distortion(hm);
    RealField l1(g), l2(g);
    for (int k = 0; k < g.size(); ++k) {
        const double s = std::exp(0.5 * hm.h.values()[k]);
        const double q = std::isinf(u.values()[k]) ? 0.0 : std::exp(-u.values()[k]);
        l1.values()[k] = s * (1.0 + q);
        l2.values()[k] = s * std::abs(1.0 - q);
    }
    return {std::move(l1), std::move(l2)};
}

/// Real-coordinate matrix of phi dz^2 + e g0 + conj(phi dz^2) with e = e^h + |phi|^2 e^-h:
///   g11 = e rho^2 + 2 Re phi,  g22 = e rho^2 - 2 Re phi,  g12 = -2 Im phi.
inline Sym2 harmonic_metric_tensor(Model model, Complex z, double h, Complex phi_value) {
    const double rho = density(model, z);
    const double rho2 = rho * rho;
    const double norm = std::abs(phi_value) / rho2;
    const double e = std::exp(h) + norm * norm * std::exp(-h);
    return {e * rho2 + 2.0 * phi_value.real(), -2.0 * phi_value.imag(), e * rho2 - 2.0 * phi_value.real()};
}

inline Sym2 metric_tensor(const HarmonicMetric& hm, int i, int j) {
    const Complex z = hm.h.grid().z(i, j);
    return harmonic_metric_tensor(hm.phi.model(), z, hm.h(i, j), hm.phi(z));
}

/// At off-node points h is interpolated bilinearly; phi is evaluated exactly.
inline Sym2 metric_tensor(const HarmonicMetric& hm, const Point& p) {
    if (p.model() != hm.phi.model()) throw DomainError("metric_tensor: model mismatch");
    return harmonic_metric_tensor(p.model(), p.z(), interpolate(hm.h, p.z()), hm.phi(p.z()));
}

/// The harmonic metric as a MetricField for leaf tracing (DomainError outside the grid).
inline MetricField as_metric_field(const HarmonicMetric& hm) {
    return [hm](Complex z) {
        return harmonic_metric_tensor(hm.phi.model(), z, interpolate(hm.h, z), hm.phi(z));
    };
}

namespace detail {

// Fourth-order second difference along one line of samples v[0..n-1] at index k (1 <= k <= n-2),
// one-sided six-point formulas next to the ends; falls back to three points for n < 6.
template <class Get>
double second_difference4(const Get& v, int k, int n, double step) {
    const double s2 = step * step;
    if (n < 6) return (v(k + 1) - 2.0 * v(k) + v(k - 1)) / s2;
    if (k >= 2 && k <= n - 3)
        return (-v(k - 2) + 16.0 * v(k - 1) - 30.0 * v(k) + 16.0 * v(k + 1) - v(k + 2)) / (12.0 * s2);
    if (k == 1)
        return (10.0 * v(0) - 15.0 * v(1) - 4.0 * v(2) + 14.0 * v(3) - 6.0 * v(4) + v(5)) / (12.0 * s2);
    return (10.0 * v(n - 1) - 15.0 * v(n - 2) - 4.0 * v(n - 3) + 14.0 * v(n - 4) - 6.0 * v(n - 5) + v(n - 6)) /
           (12.0 * s2);
}

}  // namespace detail

/// Gaussian curvature K = (-(1/2) Delta_{g0} h - 1) / (e^h - |phi|^2 e^-h) at interior nodes,
/// NaN on the boundary ring.  Delta h uses fourth-order differences, deliberately not the
/// solver's 5-point stencil, so K + 1 measures the discretization error of a converged h.
inline RealField curvature(const HarmonicMetric& hm) {
    const Grid& g = hm.h.grid();
    RealField K(g, std::numeric_limits<double>::quiet_NaN());
    for (int j = 1; j < g.ny() - 1; ++j)
        for (int i = 1; i < g.nx() - 1; ++i) {
            const double hxx = detail::second_difference4([&](int a) { return hm.h(a, j); }, i, g.nx(), g.dx());
            const double hyy = detail::second_difference4([&](int b) { return hm.h(i, b); }, j, g.ny(), g.dy());
            const Complex z = g.z(i, j);
            const double rho = density(g.model(), z);
            const double lap = (hxx + hyy) / (rho * rho);
            const double n = poincare_norm(hm.phi, z);
            const double v = hm.h(i, j);
            K(i, j) = (-0.5 * lap - 1.0) / (std::exp(v) - n * n * std::exp(-v));
        }
    return K;
}

/// sup over interior nodes of |K + 1|.
inline double curvature_defect(const HarmonicMetric& hm) {
    const RealField K = curvature(hm);
    const Grid& g = K.grid();
    double worst = 0.0;
    for (int j = 1; j < g.ny() - 1; ++j)
        for (int i = 1; i < g.nx() - 1; ++i) worst = std::max(worst, std::abs(K(i, j) + 1.0));
    return worst;
}

struct NestedSolve {
    HarmonicMetric inner;
    HarmonicMetric outer;
    double boundary_value = 0.0;
    int offset_i = 0;  // inner node (i, j) is outer node (i + offset_i, j + offset_j)
    int offset_j = 0;
    RealField min_eigenvalue;  // of g^inner - g^outer on inner interior nodes; NaN on the inner boundary
    double min_over_interior = 0.0;
};

/// Solves on nested rectangles inner c outer (node-aligned grids with equal spacing) with
/// the same constant Dirichlet value on both boundaries, by default h+ of the outer
/// rectangle, and compares the metrics as quadratic forms on the inner interior.
inline NestedSolve nested_domain_solve(const QuadDiff& phi, const Grid& inner, const Grid& outer,
                                       const SolverConfig& cfg = {},
                                       std::optional<double> boundary_value = std::nullopt) {
    if (inner.model() != outer.model()) throw DomainError("nested_domain_solve: model mismatch");
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
    if (!close(inner.dx(), outer.dx()) || !close(inner.dy(), outer.dy()))
        throw DomainError("nested_domain_solve: grids must share their spacing");
    const double fi = (inner.x_range().lo - outer.x_range().lo) / outer.dx();
    const double fj = (inner.y_range().lo - outer.y_range().lo) / outer.dy();
    const int oi = int(std::lround(fi)), oj = int(std::lround(fj));
    if (std::abs(fi - oi) > 1e-6 || std::abs(fj - oj) > 1e-6)
        throw DomainError("nested_domain_solve: inner grid nodes are not outer grid nodes");
    if (oi < 0 || oj < 0 || oi + inner.nx() > outer.nx() || oj + inner.ny() > outer.ny())
        throw DomainError("nested_domain_solve: inner rectangle is not contained in the outer one");

    NestedSolve out{.inner = {phi, RealField(inner), {}},
                    .outer = {phi, RealField(outer), {}},
                    .min_eigenvalue = RealField(inner, std::numeric_limits<double>::quiet_NaN())};
    out.boundary_value = boundary_value.value_or(supersolution_bound(grid_sup_norm(phi, outer)));
    out.offset_i = oi;
    out.offset_j = oj;
    out.outer = solve_h(phi, outer, DirichletConstant{out.boundary_value}, cfg);
    out.inner = solve_h(phi, inner, DirichletConstant{out.boundary_value}, cfg);

    out.min_over_interior = std::numeric_limits<double>::infinity();
    for (int j = 1; j < inner.ny() - 1; ++j)
        for (int i = 1; i < inner.nx() - 1; ++i) {
            const Sym2 difference = metric_tensor(out.inner, i, j) - metric_tensor(out.outer, i + oi, j + oj);
            const double m = difference.min_eigenvalue();
            out.min_eigenvalue(i, j) = m;
            out.min_over_interior = std::min(out.min_over_interior, m);
        }
    return out;
}

struct DistortionComparison {
    HarmonicMetric first;
    HarmonicMetric second;
    RealField u1;
    RealField u2;
    double max_difference = 0.0;  // max over nodes where both are finite of u1 - u2
};

/// Solves for phi1 and phi2 (each with Dirichlet data h+ of its own sup) and compares the
/// distortions.  Requires |phi1| >= |phi2| at every node.
inline DistortionComparison distortion_comparison(const QuadDiff& phi1, const QuadDiff& phi2, const Grid& grid,
                                                  const SolverConfig& cfg = {}) {
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            const double a = poincare_norm(phi1, grid.z(i, j)), b = poincare_norm(phi2, grid.z(i, j));
            if (a < b * (1.0 - 1e-14)) {
                std::ostringstream os;
                os << "distortion_comparison: |phi1| < |phi2| at node (" << i << "," << j << "), " << a << " < " << b;
                throw PreconditionError(os.str());
            }
        }
    HarmonicMetric a = solve_h(phi1, grid, DirichletConstant{}, cfg);
    HarmonicMetric b = solve_h(phi2, grid, DirichletConstant{}, cfg);
    RealField u1 = distortion(a), u2 = distortion(b);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid.size(); ++k) {
        const double p = u1.values()[k], q = u2.values()[k];
        if (std::isfinite(p) && std::isfinite(q)) worst = std::max(worst, p - q);
    }
    return {std::move(a), std::move(b), std::move(u1), std::move(u2), worst};
}

struct InfDistortionReport {
    double inf_u = 0.0;
    double sup_phi = 0.0;
    double bound = 0.0;  // 1 / sup|phi|
    double slack = 0.0;  // bound - inf_u
    double tolerance = 0.0;
    bool holds = false;
};

/// Checks inf u <= 1 / sup|phi| + tolerance over the nodes of a solved metric.
inline InfDistortionReport inf_distortion_bound_check(const HarmonicMetric& hm, double tolerance = 1e-3) {
    const RealField u = distortion(hm);
    InfDistortionReport r;
    r.tolerance = tolerance;
    r.inf_u = *std::min_element(u.values().begin(), u.values().end());
    r.sup_phi = grid_sup_norm(hm.phi, hm.h.grid());
    r.bound = r.sup_phi > 0.0 ? 1.0 / r.sup_phi : std::numeric_limits<double>::infinity();
    r.slack = r.bound - r.inf_u;
    r.holds = r.inf_u <= r.bound + tolerance;
    return r;
}

inline nlohmann::json to_json(const SolverConfig& c) {
    return {{"tol", c.tol}, {"max_iter", c.max_iter}, {"damping", c.damping}};
}

inline nlohmann::json to_json(const SolveReport& r) {
    return {{"converged", r.converged},
            {"iterations", r.iterations},
            {"final_residual", r.final_residual},
            {"residual_history", r.residual_history},
            {"step_lengths", r.step_lengths},
            {"sup_phi", r.sup_phi},
            {"h_plus", r.h_plus},
            {"bracket", {r.bracket_lo, r.bracket_hi}},
            {"h_min", r.h_min},
            {"h_max", r.h_max},
            {"boundary_mode", r.boundary_mode},
            {"config", to_json(r.config)}};
}

}  // namespace hypharm
