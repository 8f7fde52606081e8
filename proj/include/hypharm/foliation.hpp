#pragma once

// Leaves of the horizontal and vertical foliations of a quadratic differential,
// and the two leaf estimates used for the parabolic family on U.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hypharm/csv.hpp"
#include "hypharm/error.hpp"
#include "hypharm/hyperbolic.hpp"
#include "hypharm/quad_diff.hpp"
#include "hypharm/quadrature.hpp"
#include "hypharm/sym2.hpp"

namespace hypharm {

/// Metric tensor in model coordinates, as a function of the raw coordinate.
using MetricField = std::function<Sym2(Complex)>;

struct Leaf {
    Model model = Model::HalfPlane;
    FoliationKind kind = FoliationKind::Horizontal;
    std::vector<Complex> points;
    std::vector<double> cumulative_length;
    bool truncated = false;
    std::string stop_reason;  // "", "singularity", "boundary" or "metric-region"

    double length() const { return cumulative_length.empty() ? 0.0 : cumulative_length.back(); }
};

namespace detail {

// Length of the straight segment a -> b under g, three-point Gauss-Legendre.
inline double segment_length(const MetricField& g, Complex a, Complex b) {
    static constexpr double kNodes[3] = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
    static constexpr double kWeights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    const Complex v = b - a;
    double total = 0.0;
    for (int k = 0; k < 3; ++k) total += kWeights[k] * std::sqrt(g(a + kNodes[k] * v).quadratic(v));
    return total;
}

struct LeafStop {
    std::string reason;
};

}  // namespace detail

/// Integrates the foliation direction field with a fixed-step classical RK4 scheme.
/// The sign of the (sign-ambiguous) direction is chosen at every stage to agree
/// with the previous step, so a leaf never turns back on itself.  A negative step
/// traces the leaf the other way.  Arc length is accumulated under `metric`
/// (default: the Poincare metric of the model).  Tracing stops early, with the
/// leaf flagged as truncated, at a zero of phi, at the model boundary, or where
/// the supplied metric throws DomainError.
inline Leaf trace_leaf(const QuadDiff& phi, const Point& start, FoliationKind kind, double step, int n,
                       const std::optional<MetricField>& metric = std::nullopt) {
    if (start.model() != phi.model()) throw DomainError("trace_leaf: model mismatch");
    if (!(step != 0.0) || !std::isfinite(step)) throw DomainError("trace_leaf: step must be finite and non-zero");
    if (n < 0) throw DomainError("trace_leaf: negative step count");

    const Model model = phi.model();
    const MetricField g = metric.value_or(MetricField([model](Complex z) {
        const double r = density(model, z);
        return Sym2::scalar(r * r);
    }));

    Leaf leaf;
    leaf.model = model;
    leaf.kind = kind;
    leaf.points.push_back(start.z());
    leaf.cumulative_length.push_back(0.0);

    // Fails at the start point itself: the caller asked for a leaf through a singularity.
    Complex previous = foliation_direction(phi, start.z(), kind);

    auto direction = [&](Complex z, Complex reference) {
        if (!is_interior(model, z)) throw detail::LeafStop{"boundary"};
        Complex d;
        try {
            d = foliation_direction(phi, z, kind);
        } catch (const SingularityError&) {
            throw detail::LeafStop{"singularity"};
        }
        return (d.real() * reference.real() + d.imag() * reference.imag() < 0.0) ? -d : d;
    };

    const double s = std::abs(step);
    if (step < 0.0) previous = -previous;
    Complex z = start.z();
    for (int i = 0; i < n; ++i) {
        try {
            const Complex k1 = direction(z, previous);
            const Complex k2 = direction(z + 0.5 * s * k1, k1);
            const Complex k3 = direction(z + 0.5 * s * k2, k1);
            const Complex k4 = direction(z + s * k3, k1);
            const Complex next = z + (s / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!is_interior(model, next)) throw detail::LeafStop{"boundary"};
            double piece;
            try {
                piece = detail::segment_length(g, z, next);
            } catch (const DomainError&) {
                throw detail::LeafStop{"metric-region"};
            }
            leaf.points.push_back(next);
            leaf.cumulative_length.push_back(leaf.cumulative_length.back() + piece);
            previous = k1;
            z = next;
        } catch (const detail::LeafStop& stop) {
            leaf.truncated = true;
            leaf.stop_reason = stop.reason;
            break;
        }
    }
    return leaf;
}

/// CSV with header x,y,cumulative_length.
inline void write_leaf_csv(std::ostream& os, const Leaf& leaf) {
    os << "x,y,cumulative_length\n";
    for (std::size_t k = 0; k < leaf.points.size(); ++k)
        os << csv_number(leaf.points[k].real()) << ',' << csv_number(leaf.points[k].imag()) << ','
           << csv_number(leaf.cumulative_length[k]) << '\n';
}

/// Length of the end of a vertical leaf of phi = -beta^2 e^{2 i theta} dz^2 running to
/// y = oo, measured in the harmonic metric:
///     l = int_{u0}^oo 2 beta dt / sinh(2 beta t |sin(theta/2)|).
/// Infinite when theta = 0 mod 2 pi (the complete case alpha in R^-).
inline double vertical_leaf_length_parabolic(double beta, double theta, double u0) {
    if (!(beta > 0.0)) throw DomainError("vertical_leaf_length_parabolic: beta must be positive");
    if (!(u0 > 0.0)) throw DomainError("vertical_leaf_length_parabolic: u0 must be positive");
    const double c = 2.0 * beta * std::abs(std::sin(0.5 * theta));
    if (c < 1e-15) return std::numeric_limits<double>::infinity();
    auto integrand = [&](double t) { return 2.0 * beta / std::sinh(c * t); };
    return integrate_to_infinity(integrand, u0, 1e-14, 1e-13).value;
}

/// Upper bound (1/4) |du| / sqrt|phi| for the geodesic curvature of the horizontal
/// leaf through p, given a bound on |du| there.
inline double horizontal_leaf_curvature_bound(const QuadDiff& phi, double du_norm, const Point& p) {
    if (!(du_norm >= 0.0)) throw DomainError("horizontal_leaf_curvature_bound: |du| must be non-negative");
    const double norm = poincare_norm(phi, p);
    if (norm < kSingularNorm) throw SingularityError("horizontal_leaf_curvature_bound: phi vanishes at p");
    return 0.25 * du_norm / std::sqrt(norm);
}

}  // namespace hypharm
