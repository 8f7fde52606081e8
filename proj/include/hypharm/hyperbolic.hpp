#pragma once

// Models of the hyperbolic plane: the disk D = {|z| < 1}, the half-plane
// U = {Im z > 0} and the strip W = {0 < Im z < pi}, each carrying its complete
// conformal metric of curvature -1.  Isometries are handled as PSL(2,R) acting
// on U; the other models are reached through fixed conversions
//
//     D -> U :  z |-> i (1 - z) / (1 + z)
//     U -> W :  z |-> log z   (principal branch)

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "hypharm/error.hpp"

namespace hypharm {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

enum class Model { Disk, HalfPlane, Strip };

inline std::string_view to_string(Model m) {
    switch (m) {
        case Model::Disk: return "disk";
        case Model::HalfPlane: return "half-plane";
        case Model::Strip: return "strip";
    }
    return "?";
}

inline Model model_from_string(std::string_view name) {
    if (name == "disk") return Model::Disk;
    if (name == "half-plane") return Model::HalfPlane;
    if (name == "strip") return Model::Strip;
    throw DomainError("unknown model '" + std::string(name) + "'");
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline bool is_interior(Model m, Complex z) {
    if (!is_finite(z)) return false;
    switch (m) {
        case Model::Disk: return std::norm(z) < 1.0;
        case Model::HalfPlane: return z.imag() > 0.0;
        case Model::Strip: return z.imag() > 0.0 && z.imag() < std::numbers::pi;
    }
    return false;
}

/// Poincare density rho with g0 = rho^2 |dz|^2.  No domain check.
inline double density(Model m, Complex z) {
    switch (m) {
        case Model::Disk: return 2.0 / (1.0 - std::norm(z));
        case Model::HalfPlane: return 1.0 / z.imag();
        case Model::Strip: return 1.0 / std::sin(z.imag());
    }
    return 0.0;
}

/// A point strictly inside one of the models.
class Point {
public:
    Point(Model model, Complex z) : model_(model), z_(z) {
        if (!is_interior(model, z)) {
            std::ostringstream os;
            os << "point " << z << " is not inside the " << to_string(model) << " model";
            throw DomainError(os.str());
        }
    }

    Model model() const { return model_; }
    Complex z() const { return z_; }
    double x() const { return z_.real(); }
    double y() const { return z_.imag(); }

    friend bool operator==(const Point&, const Point&) = default;

private:
    Model model_;
    Complex z_;
};

inline double poincare_density(const Point& p) { return density(p.model(), p.z()); }

/// Value, first and second complex derivative of a holomorphic map at a point.
struct HoloJet {
    Complex value;
    Complex d1;
    Complex d2;
};

namespace detail {

inline HoloJet to_half_plane(Model from, Complex z) {
    switch (from) {
        case Model::HalfPlane: return {z, 1.0, 0.0};
        case Model::Disk: {
            const Complex s = 1.0 + z;
            return {kI * (1.0 - z) / s, -2.0 * kI / (s * s), 4.0 * kI / (s * s * s)};
        }
        case Model::Strip: {
            const Complex e = std::exp(z);
            return {e, e, e};
        }
    }
    return {};
}

inline HoloJet from_half_plane(Model to, Complex w) {
    switch (to) {
        case Model::HalfPlane: return {w, 1.0, 0.0};
        case Model::Disk: {
            const Complex s = kI + w;
            return {(kI - w) / s, -2.0 * kI / (s * s), 4.0 * kI / (s * s * s)};
        }
        case Model::Strip: return {std::log(w), 1.0 / w, -1.0 / (w * w)};
    }
    return {};
}

// (g o f)' = g'(f) f',  (g o f)'' = g''(f) f'^2 + g'(f) f''
inline HoloJet chain(const HoloJet& f, const HoloJet& g) {
    return {g.value, g.d1 * f.d1, g.d2 * f.d1 * f.d1 + g.d1 * f.d2};
}

}  // namespace detail

/// Conversion map between models together with its first two derivatives.
/// Throws NumericalError when the image is not a finite interior point.
inline HoloJet convert_jet(Model from, Model to, Complex z) {
    if (from == to) return {z, 1.0, 0.0};
    const HoloJet a = detail::to_half_plane(from, z);
    const HoloJet b = detail::from_half_plane(to, a.value);
    const HoloJet r = detail::chain(a, b);
    if (!is_interior(to, r.value) || !is_finite(r.d1) || !is_finite(r.d2)) {
        std::ostringstream os;
        os << "conversion of " << z << " from " << to_string(from) << " to " << to_string(to)
           << " left the model interior (got " << r.value << ")";
        throw NumericalError(os.str());
    }
    return r;
}

inline Point convert(const Point& p, Model to) {
    return Point(to, convert_jet(p.model(), to, p.z()).value);
}

/// Hyperbolic distance.  Both points must live in the same model.
inline double distance(const Point& p, const Point& q) {
    if (p.model() != q.model()) throw DomainError("distance: model mismatch");
    switch (p.model()) {
        case Model::HalfPlane:
            return 2.0 * std::asinh(std::abs(p.z() - q.z()) / (2.0 * std::sqrt(p.y() * q.y())));
        case Model::Disk:
            return 2.0 * std::asinh(std::abs(p.z() - q.z()) /
                                    std::sqrt((1.0 - std::norm(p.z())) * (1.0 - std::norm(q.z()))));
        case Model::Strip:
            return distance(convert(p, Model::HalfPlane), convert(q, Model::HalfPlane));
    }
    return 0.0;
}

/// Distance between raw coordinates in U (used in inner loops).
inline double half_plane_distance(Complex p, Complex q) {
    return 2.0 * std::asinh(std::abs(p - q) / (2.0 * std::sqrt(p.imag() * q.imag())));
}

/// A point of the extended real line R u {oo}, the ideal boundary of U.
struct ExtendedReal {
    double x = 0.0;
    bool infinite = false;

    static ExtendedReal infinity() { return {0.0, true}; }
    friend bool operator==(const ExtendedReal& p, const ExtendedReal& q) {
        return p.infinite == q.infinite && (p.infinite || p.x == q.x);
    }
};

/// Orientation-preserving isometry z |-> (az+b)/(cz+d) of U, normalized to ad - bc = 1.
class MobiusMap {
public:
    MobiusMap(double a, double b, double c, double d) {
        const double det = a * d - b * c;
        if (!(det > 0.0) || !std::isfinite(det))
            throw DomainError("Mobius coefficients must have ad - bc > 0");
        const double s = 1.0 / std::sqrt(det);
        a_ = a * s;
        b_ = b * s;
        c_ = c * s;
        d_ = d * s;
    }

    static MobiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static MobiusMap translation(double t) { return {1.0, t, 0.0, 1.0}; }
    /// z |-> e^s z, translation by |s| along the imaginary axis.
    static MobiusMap dilation(double s) { return {std::exp(s / 2.0), 0.0, 0.0, std::exp(-s / 2.0)}; }

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double d() const { return d_; }

    Complex operator()(Complex z) const { return (a_ * z + b_) / (c_ * z + d_); }
    Complex derivative(Complex z) const {
        const Complex s = c_ * z + d_;
        return 1.0 / (s * s);
    }
    Complex second_derivative(Complex z) const {
        const Complex s = c_ * z + d_;
        return -2.0 * c_ / (s * s * s);
    }

    ExtendedReal operator()(const ExtendedReal& x) const {
        if (x.infinite) {
            if (c_ == 0.0) return ExtendedReal::infinity();
            return {a_ / c_, false};
        }
        const double den = c_ * x.x + d_;
        if (den == 0.0) return ExtendedReal::infinity();
        return {(a_ * x.x + b_) / den, false};
    }

    MobiusMap inverse() const { return {d_, -b_, -c_, a_}; }

    /// (this o other)(z) = this(other(z)).
    MobiusMap compose(const MobiusMap& other) const {
        return {a_ * other.a_ + b_ * other.c_, a_ * other.b_ + b_ * other.d_,
                c_ * other.a_ + d_ * other.c_, c_ * other.b_ + d_ * other.d_};
    }

    bool is_affine() const { return c_ == 0.0; }

private:
    double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
};

/// A point of the ideal boundary of a model.
///   half-plane: x in R, or oo
///   disk:       angle theta, i.e. e^{i theta}
///   strip:      (x, side) with side 0 (Im = 0) or 1 (Im = pi), or one of the two ends Re -> -oo / +oo
class BoundaryPoint {
public:
    static BoundaryPoint half_plane(double x) { return {Model::HalfPlane, x, 0, false}; }
    static BoundaryPoint half_plane_infinity() { return {Model::HalfPlane, 0.0, 0, true}; }
    static BoundaryPoint disk(double angle) { return {Model::Disk, angle, 0, false}; }
    static BoundaryPoint strip(double x, int side) {
        if (side != 0 && side != 1) throw DomainError("strip boundary side must be 0 or 1");
        return {Model::Strip, x, side, false};
    }
    /// The end of the strip where Re z -> +oo (positive = true) or -oo.
    static BoundaryPoint strip_end(bool positive) { return {Model::Strip, positive ? 1.0 : -1.0, 0, true}; }

    Model model() const { return model_; }
    double coordinate() const { return x_; }
    int side() const { return side_; }
    bool at_infinity() const { return infinite_; }

    ExtendedReal to_half_plane() const {
        switch (model_) {
            case Model::HalfPlane: return infinite_ ? ExtendedReal::infinity() : ExtendedReal{x_, false};
            case Model::Disk: {
                // Angles within roundoff of pi are the point -1, which goes to infinity.
                const double off = std::remainder(x_ - std::numbers::pi, 2.0 * std::numbers::pi);
                if (std::abs(off) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x_)))
                    return ExtendedReal::infinity();
                return {std::sin(x_ / 2.0) / std::cos(x_ / 2.0), false};
            }
            case Model::Strip: {
                if (infinite_) return x_ > 0 ? ExtendedReal::infinity() : ExtendedReal{0.0, false};
                const double e = std::exp(x_);
                if (!std::isfinite(e)) throw NumericalError("strip boundary point overflows exp");
                return {side_ == 0 ? e : -e, false};
            }
        }
        return {};
    }

    static BoundaryPoint from_half_plane(const ExtendedReal& w, Model to) {
        switch (to) {
            case Model::HalfPlane: return w.infinite ? half_plane_infinity() : half_plane(w.x);
            case Model::Disk: return disk(w.infinite ? std::numbers::pi : 2.0 * std::atan(w.x));
            case Model::Strip:
                if (w.infinite) return strip_end(true);
                if (w.x == 0.0) return strip_end(false);
                return w.x > 0 ? strip(std::log(w.x), 0) : strip(std::log(-w.x), 1);
        }
        return half_plane(0.0);
    }

private:
    BoundaryPoint(Model m, double x, int side, bool inf) : model_(m), x_(x), side_(side), infinite_(inf) {}

    Model model_;
    double x_;
    int side_;
    bool infinite_;
};

/// MobiusMap acts in half-plane coordinates; points of other models are conjugated through U.
inline Point apply_mobius(const MobiusMap& m, const Point& p) {
    const Point u = convert(p, Model::HalfPlane);
    const Complex w = m(u.z());
    if (!is_interior(Model::HalfPlane, w)) throw NumericalError("Mobius image left the half-plane");
    return convert(Point(Model::HalfPlane, w), p.model());
}

inline BoundaryPoint apply_mobius(const MobiusMap& m, const BoundaryPoint& p) {
    return BoundaryPoint::from_half_plane(m(p.to_half_plane()), p.model());
}

/// [a,b,c,d] = (d-a)/(d-c) * (b-c)/(b-a): the image of d under the homography sending
/// (a,b,c) to (0,1,oo).  Returns +oo when d == c.
inline double cross_ratio(const ExtendedReal& a, const ExtendedReal& b, const ExtendedReal& c,
                          const ExtendedReal& d) {
    const int infinities = int(a.infinite) + int(b.infinite) + int(c.infinite);
    if (infinities > 1 || a == b || b == c || a == c)
        throw DomainError("cross_ratio: a, b, c must be pairwise distinct");
    if (d == c) return std::numeric_limits<double>::infinity();
    if (a.infinite) return d.infinite ? 1.0 : (b.x - c.x) / (d.x - c.x);
    if (b.infinite) return d.infinite ? 1.0 : (d.x - a.x) / (d.x - c.x);
    if (c.infinite) return d.infinite ? std::numeric_limits<double>::infinity() : (d.x - a.x) / (b.x - a.x);
    if (d.infinite) return (b.x - c.x) / (b.x - a.x);
    return (d.x - a.x) / (d.x - c.x) * ((b.x - c.x) / (b.x - a.x));
}

inline double cross_ratio(double a, double b, double c, double d) {
    return cross_ratio(ExtendedReal{a}, ExtendedReal{b}, ExtendedReal{c}, ExtendedReal{d});
}

inline double cross_ratio(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                          const BoundaryPoint& d) {
    return cross_ratio(a.to_half_plane(), b.to_half_plane(), c.to_half_plane(), d.to_half_plane());
}

}  // namespace hypharm
