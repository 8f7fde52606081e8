#pragma once

// Holomorphic quadratic differentials phi dz^2 on a model of H^2.
//
// Every norm |phi| in this library is the Poincare norm |phi(z)| / rho(z)^2,
// the only gauge in which Wan's equation and h > log|phi| are scale-consistent.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hypharm/error.hpp"
#include "hypharm/hyperbolic.hpp"

namespace hypharm {

enum class FoliationKind { Horizontal, Vertical };

inline std::string_view to_string(FoliationKind k) {
    return k == FoliationKind::Horizontal ? "horizontal" : "vertical";
}

/// Foliation singularity threshold on the Poincare norm.
inline constexpr double kSingularNorm = 1e-12;

class QuadDiff {
public:
    /// alpha dz^2
    struct Constant {
        Complex alpha;
    };
    /// sum_k c_k z^k dz^2 in the model's own coordinate
    struct Polynomial {
        std::vector<Complex> coeffs;
    };
    /// alpha dz^2 / z^2 on U, invariant under z -> e^s z
    struct InvariantAxis {
        Complex alpha;
    };
    /// t * base
    struct Scaled {
        double t;
        std::shared_ptr<const QuadDiff> base;
    };
    /// base(m(z)) m'(z)^2 for an isometry or model conversion m, evaluated on demand
    struct Pullback {
        std::shared_ptr<const QuadDiff> base;
        std::function<HoloJet(Complex)> map;
        std::string label;
    };
    using Form = std::variant<Constant, Polynomial, InvariantAxis, Scaled, Pullback>;

    static QuadDiff zero(Model m) { return {m, Constant{0.0}}; }
    static QuadDiff constant(Model m, Complex alpha) { return {m, Constant{alpha}}; }
    static QuadDiff polynomial(Model m, std::vector<Complex> coeffs) { return {m, Polynomial{std::move(coeffs)}}; }
    static QuadDiff invariant_axis(Complex alpha) { return {Model::HalfPlane, InvariantAxis{alpha}}; }
    static QuadDiff scaled(double t, QuadDiff base) {
        const Model m = base.model();
        return {m, Scaled{t, std::make_shared<const QuadDiff>(std::move(base))}};
    }
    static QuadDiff pullback(Model m, QuadDiff base, std::function<HoloJet(Complex)> map, std::string label) {
        return {m, Pullback{std::make_shared<const QuadDiff>(std::move(base)), std::move(map), std::move(label)}};
    }

    Model model() const { return model_; }
    const Form& form() const { return form_; }

    /// Coefficient of dz^2 at raw coordinate z (no domain check).
    Complex operator()(Complex z) const {
        return std::visit(
            [&](const auto& f) -> Complex {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Constant>) {
                    return f.alpha;
                } else if constexpr (std::is_same_v<T, Polynomial>) {
                    Complex acc = 0.0;
                    for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) acc = acc * z + *it;
                    return acc;
                } else if constexpr (std::is_same_v<T, InvariantAxis>) {
                    if (z == Complex(0.0)) throw DomainError("invariant-axis differential has a pole at 0");
                    return f.alpha / (z * z);
                } else if constexpr (std::is_same_v<T, Scaled>) {
                    return f.t * (*f.base)(z);
                } else {
                    const HoloJet j = f.map(z);
                    return (*f.base)(j.value) * j.d1 * j.d1;
                }
            },
            form_);
    }

    /// Identically zero in closed form.
    bool is_zero() const {
        if (const auto* c = std::get_if<Constant>(&form_)) return c->alpha == Complex(0.0);
        if (const auto* p = std::get_if<Polynomial>(&form_)) {
            for (const Complex& c : p->coeffs)
                if (c != Complex(0.0)) return false;
            return true;
        }
        if (const auto* s = std::get_if<Scaled>(&form_)) return s->t == 0.0 || s->base->is_zero();
        return false;
    }

    std::string describe() const;

private:
    QuadDiff(Model m, Form f) : model_(m), form_(std::move(f)) {
        if (std::holds_alternative<InvariantAxis>(form_) && m != Model::HalfPlane)
            throw DomainError("invariant-axis differential is defined on the half-plane only");
    }

    Model model_;
    Form form_;
};

inline std::string QuadDiff::describe() const {
    auto c = [](Complex z) { return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")"; };
    return std::visit(
        [&](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) return "constant" + c(f.alpha);
            else if constexpr (std::is_same_v<T, Polynomial>) {
                std::string s = "polynomial[";
                for (std::size_t k = 0; k < f.coeffs.size(); ++k) s += (k ? "," : "") + c(f.coeffs[k]);
                return s + "]";
            } else if constexpr (std::is_same_v<T, InvariantAxis>) return "invariant-axis" + c(f.alpha);
            else if constexpr (std::is_same_v<T, Scaled>) return std::to_string(f.t) + "*" + f.base->describe();
            else return "pullback(" + f.label + "," + f.base->describe() + ")";
        },
        form_);
}

inline Complex evaluate(const QuadDiff& phi, const Point& p) {
    if (p.model() != phi.model()) throw DomainError("evaluate: point and differential live in different models");
    return phi(p.z());
}

/// |phi(z)| / rho(z)^2 at raw coordinate z.
inline double poincare_norm(const QuadDiff& phi, Complex z) {
    const double rho = density(phi.model(), z);
    return std::abs(phi(z)) / (rho * rho);
}

inline double poincare_norm(const QuadDiff& phi, const Point& p) {
    if (p.model() != phi.model()) throw DomainError("poincare_norm: model mismatch");
    return poincare_norm(phi, p.z());
}

namespace detail {

// Supremum of |p(z)| (1-|z|^2)^2 / 4 over the disk: polar grid (r denser near 1)
// followed by six rounds of local zooming around the best sample.
inline double sampled_disk_sup(const QuadDiff& phi) {
    auto norm_at = [&](double r, double t) {
        r = std::clamp(r, 0.0, 1.0 - 1e-15);
        return poincare_norm(phi, std::polar(r, t));
    };
    constexpr int kRadial = 96;
    constexpr int kAngular = 256;
    double best = 0.0, best_r = 0.0, best_t = 0.0;
    for (int i = 0; i <= kRadial; ++i) {
        const double s = double(i) / kRadial;
        const double r = 1.0 - (1.0 - s) * (1.0 - s);
        for (int j = 0; j < kAngular; ++j) {
            const double t = 2.0 * std::numbers::pi * j / kAngular;
            const double v = norm_at(r, t);
            if (v > best) best = v, best_r = r, best_t = t;
        }
    }
    double half_r = 1.0 / kRadial, half_t = 2.0 * std::numbers::pi / kAngular;
    for (int round = 0; round < 6; ++round) {
        const double cr = best_r, ct = best_t;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                const double r = cr + half_r * i / 4.0;
                if (r < 0.0 || r >= 1.0) continue;
                const double t = ct + half_t * j / 4.0;
                const double v = norm_at(r, t);
                if (v > best) best = v, best_r = r, best_t = t;
            }
        half_r /= 4.0;
        half_t /= 4.0;
    }
    return best;
}

}  // namespace detail

/// sup over the whole model of the Poincare norm.  Closed form where one exists;
/// polynomials on the disk are sampled (see detail::sampled_disk_sup); may be +oo.
inline double sup_norm(const QuadDiff& phi) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, QuadDiff::Constant>) {
                const double a = std::abs(f.alpha);
                if (a == 0.0) return 0.0;
                switch (phi.model()) {
                    case Model::Disk: return a / 4.0;
                    case Model::HalfPlane: return inf;
                    case Model::Strip: return a;
                }
                return inf;
            } else if constexpr (std::is_same_v<T, QuadDiff::Polynomial>) {
                std::size_t degree = 0;
                for (std::size_t k = 0; k < f.coeffs.size(); ++k)
                    if (f.coeffs[k] != Complex(0.0)) degree = k + 1;
                if (degree == 0) return 0.0;
                if (degree == 1) return sup_norm(QuadDiff::constant(phi.model(), f.coeffs[0]));
                if (phi.model() == Model::Disk) return detail::sampled_disk_sup(phi);
                return inf;
            } else if constexpr (std::is_same_v<T, QuadDiff::InvariantAxis>) {
                // |alpha| y^2 / |z|^2 = |alpha| sin^2(arg z)
                return std::abs(f.alpha);
            } else if constexpr (std::is_same_v<T, QuadDiff::Scaled>) {
                if (f.t == 0.0) return 0.0;
                return std::abs(f.t) * sup_norm(*f.base);
            } else {
                // Pullbacks are only built from isometries and conversions, which preserve the norm.
                return sup_norm(*f.base);
            }
        },
        phi.form());
}

/// Pullback by an isometry of the model: (m*phi)(z) = phi(m(z)) m'(z)^2, where the
/// half-plane MobiusMap acts on other models by conjugation.
inline QuadDiff transform(const QuadDiff& phi, const MobiusMap& m) {
    if (const auto* s = std::get_if<QuadDiff::Scaled>(&phi.form()))
        return QuadDiff::scaled(s->t, transform(*s->base, m));
    if (phi.model() == Model::HalfPlane) {
        if (const auto* c = std::get_if<QuadDiff::Constant>(&phi.form()); c && m.is_affine()) {
            const double a2 = m.a() * m.a();
            return QuadDiff::constant(Model::HalfPlane, c->alpha * a2 * a2);
        }
        if (const auto* c = std::get_if<QuadDiff::InvariantAxis>(&phi.form());
            c && m.is_affine() && m.b() == 0.0)
            return QuadDiff::invariant_axis(c->alpha);
        return QuadDiff::pullback(Model::HalfPlane, phi,
                                  [m](Complex z) { return HoloJet{m(z), m.derivative(z), m.second_derivative(z)}; },
                                  "mobius");
    }
    const Model model = phi.model();
    auto conjugated = [m, model](Complex z) {
        const HoloJet to_u = convert_jet(model, Model::HalfPlane, z);
        const HoloJet mob{m(to_u.value), m.derivative(to_u.value), m.second_derivative(to_u.value)};
        const HoloJet back = convert_jet(Model::HalfPlane, model, mob.value);
        return detail::chain(detail::chain(to_u, mob), back);
    };
    return QuadDiff::pullback(model, phi, conjugated, "mobius");
}

/// Express phi in another model: phi_B(w) = phi_A(c^{-1}(w)) (c^{-1})'(w)^2 for the
/// fixed conversion c : A -> B, so that the Poincare norm is carried along.
inline QuadDiff transform(const QuadDiff& phi, Model to) {
    const Model from = phi.model();
    if (from == to) return phi;
    if (const auto* s = std::get_if<QuadDiff::Scaled>(&phi.form()))
        return QuadDiff::scaled(s->t, transform(*s->base, to));
    if (phi.is_zero()) return QuadDiff::zero(to);
    if (const auto* c = std::get_if<QuadDiff::InvariantAxis>(&phi.form()); c && to == Model::Strip)
        return QuadDiff::constant(Model::Strip, c->alpha);
    if (const auto* c = std::get_if<QuadDiff::Constant>(&phi.form());
        c && from == Model::Strip && to == Model::HalfPlane)
        return QuadDiff::invariant_axis(c->alpha);
    return QuadDiff::pullback(to, phi, [from, to](Complex w) { return convert_jet(to, from, w); },
                              "convert:" + std::string(to_string(from)));
}

/// Unit direction of the horizontal (phi(X,X) > 0) or vertical (phi(X,X) < 0) foliation
/// at raw coordinate z.  Defined up to sign.
inline Complex foliation_direction(const QuadDiff& phi, Complex z, FoliationKind kind) {
    const Complex value = phi(z);
    const double rho = density(phi.model(), z);
    if (std::abs(value) / (rho * rho) < kSingularNorm) throw SingularityError("foliation is singular at a zero of phi");
    const Complex horizontal = std::polar(1.0, -0.5 * std::arg(value));
    return kind == FoliationKind::Horizontal ? horizontal : kI * horizontal;
}

inline Complex foliation_direction(const QuadDiff& phi, const Point& p, FoliationKind kind) {
    if (p.model() != phi.model()) throw DomainError("foliation_direction: model mismatch");
    return foliation_direction(phi, p.z(), kind);
}

}  // namespace hypharm
