#pragma once

// Differential geometry of smooth maps between hyperbolic models: pullback metric,
// Hopf differential, energy density, tension field, dilatations, and two global
// diagnostics (Bochner distance inequality, asymptotic quasi-harmonicity).
// Also the cross-ratio estimate of a boundary map's quasisymmetry constant.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hypharm/error.hpp"
#include "hypharm/grid.hpp"
#include "hypharm/hyperbolic.hpp"
#include "hypharm/sym2.hpp"

namespace hypharm {

/// Value and real partial derivatives of a map R^2 -> C up to order two.
struct Jet {
    Complex value;
    Complex fx, fy;
    Complex fxx, fxy, fyy;

    Complex fz() const { return 0.5 * (fx - kI * fy); }
    Complex fzbar() const { return 0.5 * (fx + kI * fy); }
    Complex fzzbar() const { return 0.25 * (fxx + fyy); }
};

/// Jet of a holomorphic map from its complex derivatives.
inline Jet holomorphic_jet(const HoloJet& h) {
    return {h.value, h.d1, kI * h.d1, h.d2, kI * h.d2, -h.d2};
}

class SmoothMap {
public:
    using Eval = std::function<Complex(Complex)>;
    using JetEval = std::function<Jet(Complex)>;

    SmoothMap(Model source, Model target, Eval f, std::optional<JetEval> jet = std::nullopt, std::string name = "map")
        : source_(source), target_(target), f_(std::move(f)), jet_(std::move(jet)), name_(std::move(name)) {}

    static SmoothMap identity(Model m) {
        return {m, m, [](Complex z) { return z; }, [](Complex z) { return Jet{z, 1.0, kI, 0.0, 0.0, 0.0}; }, "identity"};
    }

    /// The isometry m acting on `model` (conjugated through U when model != U).
    static SmoothMap mobius(const MobiusMap& m, Model model = Model::HalfPlane) {
        auto holo = [m, model](Complex z) {
            const HoloJet a = convert_jet(model, Model::HalfPlane, z);
            const HoloJet b = detail::chain(a, HoloJet{m(a.value), m.derivative(a.value), m.second_derivative(a.value)});
            return detail::chain(b, convert_jet(Model::HalfPlane, model, b.value));
        };
        return {model, model, [holo](Complex z) { return holo(z).value; },
                [holo](Complex z) { return holomorphic_jet(holo(z)); }, "mobius"};
    }

    Model source() const { return source_; }
    Model target() const { return target_; }
    const std::string& name() const { return name_; }
    bool has_analytic_jet() const { return jet_.has_value(); }

    /// f(z); DomainError when z is not in the source or f(z) escapes the target.
    Complex operator()(Complex z) const {
        if (!is_interior(source_, z)) throw DomainError("smooth map evaluated outside its source model");
        const Complex w = f_(z);
        if (!is_interior(target_, w)) {
            std::ostringstream os;
            os << "f(" << z << ") = " << w << " escapes the " << to_string(target_) << " interior";
            throw DomainError(os.str());
        }
        return w;
    }

    /// Central differences with first-derivative step s1 and second-derivative step s2.
    Jet fd_jet(Complex z, double s1, double s2) const {
        const Complex ex{s1, 0.0}, ey{0.0, s1};
        const Complex hx{s2, 0.0}, hy{0.0, s2};
        Jet j;
        j.value = (*this)(z);
        j.fx = ((*this)(z + ex) - (*this)(z - ex)) / (2.0 * s1);
        j.fy = ((*this)(z + ey) - (*this)(z - ey)) / (2.0 * s1);
        j.fxx = ((*this)(z + hx) - 2.0 * j.value + (*this)(z - hx)) / (s2 * s2);
        j.fyy = ((*this)(z + hy) - 2.0 * j.value + (*this)(z - hy)) / (s2 * s2);
        j.fxy = ((*this)(z + hx + hy) - (*this)(z + hx - hy) - (*this)(z - hx + hy) + (*this)(z - hx - hy)) /
                (4.0 * s2 * s2);
        return j;
    }

    /// Default steps 1e-5 (1+|z|) and 1e-4 (1+|z|).
    Jet fd_jet(Complex z) const {
        const double scale = 1.0 + std::abs(z);
        return fd_jet(z, 1e-5 * scale, 1e-4 * scale);
    }

    /// Analytic jet when available, finite differences otherwise.
    Jet jet(Complex z) const {
        if (!jet_) return fd_jet(z);
        if (!is_interior(source_, z)) throw DomainError("smooth map evaluated outside its source model");
        Jet j = (*jet_)(z);
        if (!is_interior(target_, j.value)) throw DomainError("f(p) escapes the target interior");
        return j;
    }

private:
    Model source_, target_;
    Eval f_;
    std::optional<JetEval> jet_;
    std::string name_;
};

/// J^T G_N(f) J with J the real Jacobian and G_N = rho_N^2 I.
inline Sym2 pullback_metric(const Model target, const Jet& j) {
    const double r = density(target, j.value);
    const double r2 = r * r;
    return {r2 * std::norm(j.fx), r2 * (j.fx.real() * j.fy.real() + j.fx.imag() * j.fy.imag()), r2 * std::norm(j.fy)};
}

inline Sym2 pullback_metric(const SmoothMap& f, Complex z) { return pullback_metric(f.target(), f.jet(z)); }
inline Sym2 pullback_metric(const SmoothMap& f, const Point& p) {
    if (p.model() != f.source()) throw DomainError("pullback_metric: point lives in another model");
    return pullback_metric(f, p.z());
}

/// rho_N^2(f) f_z conj(f_zbar).
inline Complex hopf_differential(Model target, const Jet& j) {
    const double r = density(target, j.value);
    return r * r * j.fz() * std::conj(j.fzbar());
}

inline Complex hopf_differential(const SmoothMap& f, Complex z) { return hopf_differential(f.target(), f.jet(z)); }
inline Complex hopf_differential(const SmoothMap& f, const Point& p) {
    if (p.model() != f.source()) throw DomainError("hopf_differential: point lives in another model");
    return hopf_differential(f, p.z());
}

/// (2,0)-part of a symmetric form in real coordinates.
inline Complex hopf_from_pullback(const Sym2& g) { return {(g.xx - g.yy) / 4.0, -g.xy / 2.0}; }

/// Half-trace of the pullback relative to g0.
inline double energy_density(const SmoothMap& f, Complex z) {
    const double r = density(f.source(), z);
    return pullback_metric(f, z).trace() / (2.0 * r * r);
}
inline double energy_density(const SmoothMap& f, const Point& p) {
    if (p.model() != f.source()) throw DomainError("energy_density: point lives in another model");
    return energy_density(f, p.z());
}

/// Tension field in target coordinates.  For target U
///     tau = (4 / rho_M^2) (f_{z zbar} + (i / Im f) f_z f_zbar);
/// other targets are composed with their conversion c to U and tau is pulled back by 1/c'(f).
inline Complex tension_field(Model source, Model target, Complex z, const Jet& j) {
    const double r = density(source, z);
    Complex fz = j.fz(), fzb = j.fzbar(), fzzb = j.fzzbar(), w = j.value;
    Complex scale = 1.0;
    if (target != Model::HalfPlane) {
        const HoloJet c = convert_jet(target, Model::HalfPlane, j.value);
        fzzb = c.d2 * fz * fzb + c.d1 * fzzb;
        fz *= c.d1;
        fzb *= c.d1;
        w = c.value;
        scale = 1.0 / c.d1;
    }
    return scale * (4.0 / (r * r)) * (fzzb + (kI / w.imag()) * fz * fzb);
}

inline Complex tension_field(const SmoothMap& f, Complex z) {
    return tension_field(f.source(), f.target(), z, f.jet(z));
}
inline Complex tension_field(const SmoothMap& f, const Point& p) {
    if (p.model() != f.source()) throw DomainError("tension_field: point lives in another model");
    return tension_field(f, p.z());
}

/// Length of the tension vector in the target metric.
inline double tension_norm(const SmoothMap& f, Complex z) {
    const Jet j = f.jet(z);
    return density(f.target(), j.value) * std::abs(tension_field(f.source(), f.target(), z, j));
}

/// (lambda_1, lambda_2): square roots of the eigenvalues of g0^{-1} f*g_N.
inline std::pair<double, double> dilatation_coefficients(const SmoothMap& f, Complex z) {
    const double r = density(f.source(), z);
    const Sym2 g = pullback_metric(f, z) * (1.0 / (r * r));
    return {std::sqrt(std::max(0.0, g.max_eigenvalue())), std::sqrt(std::max(0.0, g.min_eigenvalue()))};
}

/// lambda_1 / lambda_2; +oo where the differential is singular.
inline double qc_dilatation(const SmoothMap& f, Complex z) {
    const auto [l1, l2] = dilatation_coefficients(f, z);
    if (!(l2 > 1e-150 * l1) || l2 == 0.0) return std::numeric_limits<double>::infinity();
    return std::max(1.0, l1 / l2);
}
inline double qc_dilatation(const SmoothMap& f, const Point& p) {
    if (p.model() != f.source()) throw DomainError("qc_dilatation: point lives in another model");
    return qc_dilatation(f, p.z());
}

/// Boundary homeomorphism in the boundary coordinate of a model: x in R for U,
/// the angle for the disk.
struct BoundaryMap {
    Model model = Model::HalfPlane;
    std::function<double(double)> f;
    std::string name = "boundary-map";

    static BoundaryMap identity(Model m = Model::HalfPlane) { return {m, [](double x) { return x; }, "identity"}; }

    /// Boundary action of a homography of U (half-plane coordinate only; +-oo is not sampled).
    static BoundaryMap homography(const MobiusMap& m) {
        return {Model::HalfPlane,
                [m](double x) {
                    const ExtendedReal w = m(ExtendedReal{x, false});
                    if (w.infinite) throw DomainError("homography sends a sample point to infinity");
                    return w.x;
                },
                "homography"};
    }

    BoundaryPoint point(double x) const {
        switch (model) {
            case Model::HalfPlane: return BoundaryPoint::half_plane(x);
            case Model::Disk: return BoundaryPoint::disk(x);
            case Model::Strip: break;
        }
        throw DomainError("boundary maps are parametrized on the half-plane or the disk only");
    }
};

struct QsSampling {
    int grid_points = 32;
    int random_quadruples = 200;
    std::uint64_t seed = 20240101;
};

struct QsEstimate {
    double k_hat = 1.0;
    std::array<double, 4> worst{};  // the quadruple attaining k_hat
    int quadruples = 0;
};

namespace detail {

// Uniform double in [0,1) from the top 53 bits; identical across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

inline std::vector<double> boundary_sample(Model m, int n) {
    std::vector<double> out(n);
    for (int k = 0; k < n; ++k) {
        const double t = (k + 0.5) / n;
        out[k] = m == Model::Disk ? 2.0 * std::numbers::pi * t - std::numbers::pi
                                  : std::tan(std::numbers::pi * t - std::numbers::pi / 2.0);
    }
    return out;
}

inline double sample_parameter(Model m, double t) {
    return m == Model::Disk ? 2.0 * std::numbers::pi * t - std::numbers::pi
                            : std::tan(std::numbers::pi * t - std::numbers::pi / 2.0);
}

}  // namespace detail

/// Max over the quadruples (sorted, pairwise distinct) of max(r, 1/r), r the ratio of the
/// cross ratios of images and preimages.  A lower bound for the quasisymmetry constant.
/// Throws DomainError for data that do not preserve cyclic order.
inline QsEstimate qs_constant_estimate(const BoundaryMap& map, const std::vector<std::array<double, 4>>& quadruples) {
    QsEstimate est;
    for (std::array<double, 4> q : quadruples) {
        std::sort(q.begin(), q.end());
        if (q[0] == q[1] || q[1] == q[2] || q[2] == q[3])
            throw DomainError("qs_constant_estimate: quadruple entries must be pairwise distinct");
        std::array<double, 4> img{};
        for (int k = 0; k < 4; ++k) img[k] = map.f(q[k]);
        // A circle homeomorphism keeps cyclic order: the images, read cyclically, rise
        // everywhere but once (or fall everywhere but once).
        int rises = 0, falls = 0;
        for (int k = 0; k < 4; ++k) {
            const double a = img[k], b = img[(k + 1) % 4];
            if (b > a) ++rises;
            else if (b < a) ++falls;
        }
        if (!((rises == 3 && falls == 1) || (rises == 1 && falls == 3))) {
            std::ostringstream os;
            os << "qs_constant_estimate: boundary data do not preserve cyclic order near x = " << q[0];
            throw DomainError(os.str());
        }
        const double before = cross_ratio(map.point(q[0]), map.point(q[1]), map.point(q[2]), map.point(q[3]));
        const double after = cross_ratio(map.point(img[0]), map.point(img[1]), map.point(img[2]), map.point(img[3]));
        const double r = after / before;
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("qs_constant_estimate: degenerate cross ratio");
        const double k = std::max(r, 1.0 / r);
        if (k > est.k_hat) {
            est.k_hat = k;
            est.worst = q;
        }
        ++est.quadruples;
    }
    return est;
}

/// Default sampling: every 4-subset of a grid_points boundary sample plus random quadruples.
inline QsEstimate qs_constant_estimate(const BoundaryMap& map, const QsSampling& sampling = {}) {
    if (sampling.grid_points < 4 && sampling.random_quadruples < 1)
        throw DomainError("qs_constant_estimate: empty sampling specification");
    std::vector<std::array<double, 4>> quads;
    const std::vector<double> pts = detail::boundary_sample(map.model, sampling.grid_points);
    const int n = int(pts.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d) quads.push_back({pts[a], pts[b], pts[c], pts[d]});
    std::mt19937_64 rng(sampling.seed);
    for (int k = 0; k < sampling.random_quadruples;) {
        std::array<double, 4> q{};
        for (double& v : q) v = detail::sample_parameter(map.model, detail::unit_uniform(rng));
        std::array<double, 4> s = q;
        std::sort(s.begin(), s.end());
        if (s[0] == s[1] || s[1] == s[2] || s[2] == s[3]) continue;
        quads.push_back(q);
        ++k;
    }
    return qs_constant_estimate(map, quads);
}

struct BochnerReport {
    RealField distance;
    RealField margin;           // Delta d + |tau f| + |tau g| - tanh d; NaN on the boundary
    RealField weighted_margin;  // same with tanh d scaled by min(lambda_2(f)^2, lambda_2(g)^2)
    double min_margin = 0.0;
    double min_weighted_margin = 0.0;
    Complex argmin;  // node attaining min_margin
};

/// Hyperbolic distance between two points of a model (computed in U).
inline double model_distance(Model m, Complex a, Complex b) {
    return half_plane_distance(convert_jet(m, Model::HalfPlane, a).value, convert_jet(m, Model::HalfPlane, b).value);
}

/// Discrete check of  Delta d(f,g) >= -|tau(f)| - |tau(g)| + tanh d(f,g)  at interior nodes,
/// with Delta the source Laplace-Beltrami operator (5-point stencil on the nodal distance field).
inline BochnerReport bochner_check(const SmoothMap& f, const SmoothMap& g, const Grid& grid) {
    if (f.source() != g.source() || f.target() != g.target())
        throw DomainError("bochner_check: maps must share source and target");
    if (grid.model() != f.source()) throw DomainError("bochner_check: grid lives in another model");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    BochnerReport rep{RealField(grid), RealField(grid, nan), RealField(grid, nan), 0.0, 0.0, {}};
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i)
            rep.distance(i, j) = model_distance(f.target(), f(grid.z(i, j)), g(grid.z(i, j)));

    rep.min_margin = rep.min_weighted_margin = std::numeric_limits<double>::infinity();
    const double idx2 = 1.0 / (grid.dx() * grid.dx()), idy2 = 1.0 / (grid.dy() * grid.dy());
    for (int j = 1; j < grid.ny() - 1; ++j)
        for (int i = 1; i < grid.nx() - 1; ++i) {
            const Complex z = grid.z(i, j);
            const RealField& d = rep.distance;
            const double r = density(grid.model(), z);
            const double lap = ((d(i + 1, j) - 2.0 * d(i, j) + d(i - 1, j)) * idx2 +
                                (d(i, j + 1) - 2.0 * d(i, j) + d(i, j - 1)) * idy2) /
                               (r * r);
            const double tau = tension_norm(f, z) + tension_norm(g, z);
            const double th = std::tanh(d(i, j));
            const double l2f = dilatation_coefficients(f, z).second, l2g = dilatation_coefficients(g, z).second;
            const double weight = std::min(l2f * l2f, l2g * l2g);
            rep.margin(i, j) = lap + tau - th;
            rep.weighted_margin(i, j) = lap + tau - weight * th;
            if (rep.margin(i, j) < rep.min_margin) {
                rep.min_margin = rep.margin(i, j);
                rep.argmin = z;
            }
            rep.min_weighted_margin = std::min(rep.min_weighted_margin, rep.weighted_margin(i, j));
        }
    return rep;
}

/// lambda_2^2 - (1 + eps) |tau| - eps at every node.
inline RealField aqh_margin(const SmoothMap& f, const Grid& grid, double eps) {
    if (grid.model() != f.source()) throw DomainError("aqh_margin: grid lives in another model");
    if (!(eps > 0.0)) throw DomainError("aqh_margin: eps must be positive");
    RealField out(grid);
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            const Complex z = grid.z(i, j);
            const double l2 = dilatation_coefficients(f, z).second;
            out(i, j) = l2 * l2 - (1.0 + eps) * tension_norm(f, z) - eps;
        }
    return out;
}

}  // namespace hypharm
