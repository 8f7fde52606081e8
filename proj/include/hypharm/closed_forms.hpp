#pragma once

// Explicit harmonic metrics and maps for differentials invariant under a one-parameter
// isometry group: the parabolic family -beta^2 dz^2 on U (with its Li-Tam reparametrization),
// the quarter-plane map for dz^2/4, and the strip family (alpha + i beta) dz^2 on W, which
// reduces to a shooting problem for lambda.

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "hypharm/csv.hpp"
#include "hypharm/error.hpp"
#include "hypharm/harmonic_maps.hpp"
#include "hypharm/hyperbolic.hpp"
#include "hypharm/quad_diff.hpp"
#include "hypharm/quadrature.hpp"

namespace hypharm {

namespace detail {

inline void require_positive_y(double y, const char* who) {
    if (!(y > 0.0) || !std::isfinite(y)) {
        std::ostringstream os;
        os << who << ": y must be positive and finite, got " << y;
        throw DomainError(os.str());
    }
}

inline void require_beta(double beta, const char* who) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        std::ostringstream os;
        os << who << ": beta must be non-negative, got " << beta;
        throw DomainError(os.str());
    }
}

// sinh(t)/t without cancellation near 0.
inline double sinhc(double t) { return std::abs(t) < 1e-4 ? 1.0 + t * t / 6.0 : std::sinh(t) / t; }

}  // namespace detail

/// h(y) = 2 log(beta y coth(beta y)).
inline double parabolic_h(double beta, double y) {
    detail::require_beta(beta, "parabolic_h");
    detail::require_positive_y(y, "parabolic_h");
    const double x = beta * y;
    if (x < 1e-3) {
        const double x2 = x * x;
        return 2.0 * (x2 / 3.0 - 7.0 * x2 * x2 / 90.0);
    }
    return 2.0 * std::log(x / std::tanh(x));
}

/// (1/2) y^2 h'' - (e^h - beta^4 y^4 e^-h - 1) for h = parabolic_h, with h'' in closed form:
/// h''(y) = 2 beta^2 (4 cosh(2x) / sinh^2(2x) - 1 / x^2),  x = beta y.
inline double parabolic_wan_residual(double beta, double y) {
    detail::require_beta(beta, "parabolic_wan_residual");
    detail::require_positive_y(y, "parabolic_wan_residual");
    const double x = beta * y;
    double g2;
    if (x < 1e-2) {
        const double x2 = x * x;  // series of 4 cosh(2x)/sinh^2(2x) - 1/x^2
        g2 = 2.0 / 3.0 - 14.0 * x2 / 15.0 + 124.0 * x2 * x2 / 189.0 - 254.0 * x2 * x2 * x2 / 675.0;
    } else {
        const double s = std::sinh(2.0 * x);
        g2 = 4.0 * std::cosh(2.0 * x) / (s * s) - 1.0 / (x * x);
    }
    const double h = parabolic_h(beta, y);
    const double n = beta * beta * y * y;
    return 0.5 * y * y * 2.0 * beta * beta * g2 - (std::exp(h) - n * n * std::exp(-h) - 1.0);
}

/// u(y) = h - log|phi| = 2 log coth(beta y); +oo at beta = 0.
inline double parabolic_u(double beta, double y) {
    detail::require_beta(beta, "parabolic_u");
    detail::require_positive_y(y, "parabolic_u");
    if (beta == 0.0) return std::numeric_limits<double>::infinity();
    return -2.0 * std::log(std::tanh(beta * y));
}

/// Conformal coefficient of g - phi - conj(phi) relative to |dz|^2:
/// 2 beta^2 (1 + cosh^2(2 beta y)) / sinh^2(2 beta y) = beta^2 (coth^2 + tanh^2)(beta y).
inline double parabolic_metric_coefficient(double beta, double y) {
    detail::require_beta(beta, "parabolic_metric_coefficient");
    detail::require_positive_y(y, "parabolic_metric_coefficient");
    if (beta == 0.0) return 1.0 / (y * y);
    const double t = std::tanh(beta * y);
    return beta * beta * (1.0 / (t * t) + t * t);
}

/// x + i y |-> x + i sinh(2 beta y) / (2 beta); the identity at beta = 0.
inline Complex parabolic_map(double beta, Complex z) {
    return {z.real(), z.imag() * detail::sinhc(2.0 * beta * z.imag())};
}

inline Point parabolic_map(double beta, const Point& p) {
    if (p.model() != Model::HalfPlane) throw DomainError("parabolic_map acts on the half-plane");
    return Point(Model::HalfPlane, parabolic_map(beta, p.z()));
}

inline Jet parabolic_jet(double beta, Complex z) {
    const double t = 2.0 * beta * z.imag();
    return {parabolic_map(beta, z), 1.0, Complex(0.0, std::cosh(t)), 0.0, 0.0,
            Complex(0.0, 2.0 * beta * std::sinh(t))};
}

inline SmoothMap parabolic_smooth_map(double beta) {
    return {Model::HalfPlane, Model::HalfPlane, [beta](Complex z) { return parabolic_map(beta, z); },
            [beta](Complex z) { return parabolic_jet(beta, z); }, "parabolic"};
}

/// The harmonic map with Hopf differential -beta^2 dz^2 and its metric data.
struct ParabolicSolution {
    double beta;

    explicit ParabolicSolution(double b) : beta(b) {
        if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("ParabolicSolution: beta must be positive");
    }

    QuadDiff phi() const { return QuadDiff::constant(Model::HalfPlane, -beta * beta); }
    double h(double y) const { return parabolic_h(beta, y); }
    double u(double y) const { return parabolic_u(beta, y); }
    double metric_coefficient(double y) const { return parabolic_metric_coefficient(beta, y); }
    Complex map(Complex z) const { return parabolic_map(beta, z); }
    SmoothMap smooth_map() const { return parabolic_smooth_map(beta); }
    /// The boundary trace on R is the identity.
    double boundary_trace(double x) const { return x; }
};

/// Li-Tam family f_{oo,t}; the same maps as the parabolic family with beta = t.
inline Complex litam_map(double t, Complex z) {
    if (t == 0.0 || !std::isfinite(t)) throw DomainError("litam_map: t must be non-zero");
    return parabolic_map(t, z);
}

inline Point litam_map(double t, const Point& p) {
    if (t == 0.0 || !std::isfinite(t)) throw DomainError("litam_map: t must be non-zero");
    return parabolic_map(t, p);
}

inline SmoothMap litam_smooth_map(double t) {
    if (t == 0.0 || !std::isfinite(t)) throw DomainError("litam_map: t must be non-zero");
    SmoothMap f = parabolic_smooth_map(t);
    return {f.source(), f.target(), [t](Complex z) { return parabolic_map(t, z); },
            [t](Complex z) { return parabolic_jet(t, z); }, "litam"};
}

/// e^x (1 + i sinh y) / cosh y: harmonic U -> U with Hopf differential dz^2/4 and image
/// the open first quadrant.
inline Complex quarter_plane_map(Complex z) {
    const double ex = std::exp(z.real());
    const double y = z.imag();
    return {ex / std::cosh(y), ex * std::tanh(y)};
}

inline Point quarter_plane_map(const Point& p) {
    if (p.model() != Model::HalfPlane) throw DomainError("quarter_plane_map acts on the half-plane");
    return Point(Model::HalfPlane, quarter_plane_map(p.z()));
}

inline Jet quarter_plane_jet(Complex z) {
    const double ex = std::exp(z.real());
    const double y = z.imag();
    const double sech = 1.0 / std::cosh(y), th = std::tanh(y);
    const Complex f = quarter_plane_map(z);
    const Complex fy = ex * Complex(-sech * th, sech * sech);
    const Complex fyy = ex * Complex(-sech * (sech * sech - th * th), -2.0 * sech * sech * th);
    return {f, f, fy, f, fy, fyy};
}

inline SmoothMap quarter_plane_smooth_map() {
    return {Model::HalfPlane, Model::HalfPlane, [](Complex z) { return quarter_plane_map(z); },
            [](Complex z) { return quarter_plane_jet(z); }, "quarter-plane"};
}

namespace detail {

// lambda^2 - (4 beta^2 / lambda^2) sin^4 psi - 4 alpha sin^2 psi
inline double strip_radicand(double alpha, double beta, double lambda, double psi) {
    const double s = std::sin(psi);
    const double s2 = s * s;
    return lambda * lambda - 4.0 * beta * beta * s2 * s2 / (lambda * lambda) - 4.0 * alpha * s2;
}

}  // namespace detail

/// Smallest lambda >= 0 for which the radicand stays non-negative (it is tightest at psi = pi/2).
inline double strip_lambda_min(double alpha, double beta) {
    return std::sqrt(std::max(0.0, 2.0 * alpha + 2.0 * std::hypot(alpha, beta)));
}

/// int_0^pi dpsi / sqrt(radicand); the integrand is symmetric about pi/2, where it peaks.
inline double strip_normalization_integral(double alpha, double beta, double lambda) {
    if (!(lambda > strip_lambda_min(alpha, beta))) {
        std::ostringstream os;
        os << "strip normalization: lambda = " << lambda << " is not above the admissible minimum "
           << strip_lambda_min(alpha, beta);
        throw DomainError(os.str());
    }
    auto integrand = [&](double psi) {
        const double d = detail::strip_radicand(alpha, beta, lambda, psi);
        if (!(d > 0.0)) throw NumericalError("strip normalization: radicand is not positive");
        return 1.0 / std::sqrt(d);
    };
    return 2.0 * integrate(integrand, 0.0, std::numbers::pi / 2.0, 1e-15, 1e-14, 50000).value;
}

/// Root of the normalization integral = pi.  The integral decreases from +oo (at lambda_min)
/// to 0, so bisection on a bracket found by expansion is safe.
inline double strip_lambda(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw DomainError("strip_lambda: non-finite parameters");
    const double pi = std::numbers::pi;
    const double lmin = strip_lambda_min(alpha, beta);
    double lo = lmin > 0.0 ? lmin * (1.0 + 1e-4) : 1e-6;
    double hi = std::max(10.0, 2.0 * lo);
    auto I = [&](double l) { return strip_normalization_integral(alpha, beta, l); };

    int expand = 0;
    while (I(hi) > pi) {
        if (++expand > 60) {
            std::ostringstream os;
            os << "strip_lambda: no admissible lambda in [" << lo << ", " << hi << "]";
            throw ConvergenceError(os.str());
        }
        lo = hi;
        hi *= 2.0;
    }
    for (int k = 0; k < 40 && I(lo) < pi; ++k) lo = lmin + 0.1 * (lo - lmin);
    if (I(lo) < pi) {
        std::ostringstream os;
        os << "strip_lambda: no admissible lambda in [" << lo << ", " << hi << "]";
        throw ConvergenceError(os.str());
    }
    for (int k = 0; k < 200 && hi - lo > 2e-16 * hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double v = I(mid);
        if (v == pi) return mid;
        (v > pi ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// The strip solution: f(x + i y) = lambda x + phi~(y) + i psi(y) with
///     psi' = sqrt(radicand(psi)),   lambda phi~' = -2 beta sin^2 psi,   psi(0) = phi~(0) = 0,
/// tabulated by classical RK4 on [0, pi] and interpolated by cubic Hermite.
class StripSolution {
public:
    StripSolution(double alpha, double beta, int steps = 4096)
        : alpha_(alpha), beta_(beta), lambda_(strip_lambda(alpha, beta)) {
        if (steps < 8) throw DomainError("StripSolution: need at least 8 steps");
        const double h = std::numbers::pi / steps;
        y_.resize(steps + 1);
        psi_.resize(steps + 1);
        shift_.resize(steps + 1);
        psi_[0] = shift_[0] = 0.0;
        for (int k = 0; k <= steps; ++k) y_[k] = k == steps ? std::numbers::pi : k * h;
        for (int k = 0; k < steps; ++k) {
            const double p = psi_[k];
            const double k1 = dpsi(p), m1 = dshift(p);
            const double k2 = dpsi(p + 0.5 * h * k1), m2 = dshift(p + 0.5 * h * k1);
            const double k3 = dpsi(p + 0.5 * h * k2), m3 = dshift(p + 0.5 * h * k2);
            const double k4 = dpsi(p + h * k3), m4 = dshift(p + h * k3);
            psi_[k + 1] = p + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            shift_[k + 1] = shift_[k] + h / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
        }
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double lambda() const { return lambda_; }
    /// Boundary constant: the upper boundary line is sent to lambda x + K + i pi.
    double K() const { return shift_.back(); }
    QuadDiff phi() const { return QuadDiff::constant(Model::Strip, Complex(alpha_, beta_)); }

    const std::vector<double>& y() const { return y_; }
    const std::vector<double>& psi() const { return psi_; }
    const std::vector<double>& shift() const { return shift_; }

    double psi_at(double y) const { return hermite(psi_, y, [this](double p) { return dpsi(p); }); }
    double shift_at(double y) const { return hermite(shift_, y, [this](double p) { return dshift(p); }); }

    Complex map(Complex z) const {
        if (!is_interior(Model::Strip, z)) throw DomainError("strip map: point outside the strip");
        return {lambda_ * z.real() + shift_at(z.imag()), psi_at(z.imag())};
    }
    Point map(const Point& p) const {
        if (p.model() != Model::Strip) throw DomainError("strip map acts on the strip");
        return Point(Model::Strip, map(p.z()));
    }

    /// Image of the boundary point x + i pi side (side 0 or 1).
    Complex boundary_trace(double x, int side) const {
        if (side == 0) return {lambda_ * x, 0.0};
        if (side == 1) return {lambda_ * x + K(), std::numbers::pi};
        throw DomainError("strip boundary side must be 0 or 1");
    }

    /// CSV with header y,psi,phi.
    void write_profile_csv(std::ostream& os) const {
        os << "y,psi,phi\n";
        for (std::size_t k = 0; k < y_.size(); ++k)
            os << csv_number(y_[k]) << ',' << csv_number(psi_[k]) << ',' << csv_number(shift_[k]) << '\n';
    }

private:
    double dpsi(double p) const {
        const double d = detail::strip_radicand(alpha_, beta_, lambda_, p);
        if (!(d > 0.0)) throw NumericalError("strip ODE: radicand became non-positive (inconsistent lambda)");
        return std::sqrt(d);
    }
    double dshift(double p) const {
        const double s = std::sin(p);
        return -2.0 * beta_ * s * s / lambda_;
    }

    // Both profiles are functions of y whose derivative depends on psi only.
    template <class D>
    double hermite(const std::vector<double>& v, double y, const D& deriv) const {
        if (!(y >= 0.0 && y <= std::numbers::pi)) throw DomainError("strip profile: y outside [0, pi]");
        const int n = int(y_.size()) - 1;
        const double h = std::numbers::pi / n;
        const int k = std::min(n - 1, int(y / h));
        const double t = (y - y_[k]) / h;
        const double d0 = deriv(psi_[k]) * h, d1 = deriv(psi_[k + 1]) * h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * v[k] + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * v[k + 1] +
               (t3 - t2) * d1;
    }

    double alpha_, beta_, lambda_;
    std::vector<double> y_, psi_, shift_;
};

/// Image of z under the strip solution for (alpha, beta), together with the boundary constant K.
inline std::pair<Point, double> strip_map(double alpha, double beta, const Point& z) {
    const StripSolution s(alpha, beta);
    return {s.map(z), s.K()};
}

}  // namespace hypharm
