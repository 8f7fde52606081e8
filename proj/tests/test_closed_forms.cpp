#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "hypharm/closed_forms.hpp"
#include "hypharm/harmonic_maps.hpp"
#include "hypharm/wan_solver.hpp"

using namespace hypharm;
using std::numbers::pi;

namespace {

// Wan's ODE in the g0-gauge for y-only h: (1/2) y^2 h'' = e^h - (beta y)^4 e^-h - 1,
// with h'' from a seven-point central difference of the closed form.
double numeric_wan_residual(double beta, double y) {
    const double s = 1e-3 * y;
    auto h = [&](double t) { return parabolic_h(beta, t); };
    const double d2 = (2 * h(y - 3 * s) - 27 * h(y - 2 * s) + 270 * h(y - s) - 490 * h(y) + 270 * h(y + s) -
                       27 * h(y + 2 * s) + 2 * h(y + 3 * s)) /
                      (180 * s * s);
    const double n = beta * beta * y * y;
    return 0.5 * y * y * d2 - (std::exp(h(y)) - n * n * std::exp(-h(y)) - 1.0);
}

}  // namespace

TEST(Parabolic, ProfileValues) {
    EXPECT_NEAR(parabolic_h(0.5, std::log(3.0)), 2 * std::log(std::log(3.0)), 1e-14);
    EXPECT_NEAR(parabolic_h(0.5, std::log(3.0)), 0.1880, 1e-4);
    EXPECT_NEAR(parabolic_h(0.5, 1e-8), 0.0, 1e-16);
    // The series branch joins the closed form.
    EXPECT_NEAR(parabolic_h(1.0, 0.999e-3), 2 * std::log(0.999e-3 / std::tanh(0.999e-3)), 1e-15);
    EXPECT_NEAR(parabolic_h(1.0, 1.001e-3), 2 * (1.001e-3 * 1.001e-3) / 3, 1e-12);
    EXPECT_THROW(parabolic_h(0.5, 0.0), DomainError);
    EXPECT_THROW(parabolic_h(0.5, -1.0), DomainError);
    EXPECT_NEAR(parabolic_u(0.5, std::log(3.0)), 2 * std::log(2.0), 1e-14);
}

TEST(Parabolic, SolvesWanOde) {
    for (double beta : {0.25, 0.5, 1.0})
        for (double y : {0.5, 1.0, 2.0}) {
            EXPECT_LT(std::abs(numeric_wan_residual(beta, y)), 1e-9) << beta << " " << y;
            EXPECT_LT(std::abs(parabolic_wan_residual(beta, y)), 1e-12);
        }
    // Across the series switch of the analytic residual.
    for (double y : {0.005, 0.0199, 0.0201, 0.05}) EXPECT_LT(std::abs(parabolic_wan_residual(0.5, y)), 1e-12);
}

TEST(Parabolic, MapValues) {
    for (double y : {0.1, 1.0, 3.0})
        EXPECT_LT(std::abs(parabolic_map(0.5, Complex(0, y)) - Complex(0, std::sinh(y))), 1e-14 * std::cosh(y));
    EXPECT_LT(std::abs(parabolic_map(1.0, Complex(1, 1)) - Complex(1, std::sinh(2.0) / 2)), 1e-15);
    EXPECT_NEAR(parabolic_map(1.0, Complex(1, 1)).imag(), 1.8134, 1e-4);
    for (double beta : {1e-6, 1e-9, 0.0})
        EXPECT_LT(std::abs(parabolic_map(beta, Complex(0.3, 2.0)) - Complex(0.3, 2.0)), 1e-10);
    EXPECT_THROW(parabolic_map(0.5, Point(Model::Disk, 0.0)), DomainError);
    EXPECT_EQ(ParabolicSolution(0.5).boundary_trace(-2.5), -2.5);
    EXPECT_THROW(ParabolicSolution(0.0), DomainError);
}

TEST(Parabolic, MetricCoefficient) {
    // At beta = 1/2 the general form reduces to (1 + cosh^2 y) / (2 sinh^2 y).
    for (double y : {0.2, 1.0, 4.0}) {
        const double c = std::cosh(y), s = std::sinh(y);
        EXPECT_NEAR(parabolic_metric_coefficient(0.5, y), (1 + c * c) / (2 * s * s), 1e-13 * (1 + c * c) / (s * s));
    }
    // Large y: 2 beta^2.
    EXPECT_NEAR(parabolic_metric_coefficient(0.7, 40.0), 2 * 0.49, 1e-14);
    // Equals e(y) rho^2 with e = e^h + |phi|^2 e^-h.
    for (double beta : {0.3, 1.2})
        for (double y : {0.4, 1.5}) {
            const double h = parabolic_h(beta, y), n = beta * beta * y * y;
            EXPECT_NEAR(parabolic_metric_coefficient(beta, y), (std::exp(h) + n * n * std::exp(-h)) / (y * y), 1e-12);
        }
}

TEST(Parabolic, PullbackAgreesWithHarmonicMetric) {
    for (double beta : {0.5, 1.0})
        for (double y : {0.3, 1.0, 2.5}) {
            const Complex z(0.2, y);
            const Sym2 pb = pullback_metric(parabolic_smooth_map(beta), z);
            const Sym2 hm = harmonic_metric_tensor(Model::HalfPlane, z, parabolic_h(beta, y), Complex(-beta * beta));
            EXPECT_NEAR(pb.xx, hm.xx, 1e-10 * hm.xx);
            EXPECT_NEAR(pb.yy, hm.yy, 1e-10 * hm.yy);
            EXPECT_NEAR(pb.xy, hm.xy, 1e-12);
            // Half trace = conformal coefficient.
            EXPECT_NEAR(0.5 * pb.trace(), parabolic_metric_coefficient(beta, y), 1e-10 * pb.trace());
        }
}

TEST(Parabolic, HarmonicWithConstantHopf) {
    for (double beta : {0.25, 0.5, 1.0}) {
        const SmoothMap f = parabolic_smooth_map(beta);
        for (int k = 0; k < 20; ++k) {
            const Complex z(-1 + 0.1 * k, 0.1 + 0.15 * k);
            EXPECT_LT(std::abs(tension_field(f, z)), 1e-9);
            EXPECT_LT(std::abs(hopf_differential(f, z) + beta * beta), 1e-9);
            EXPECT_LT(std::abs(hopf_differential(Model::HalfPlane, f.fd_jet(z)) + beta * beta), 1e-4);
            EXPECT_NEAR(qc_dilatation(f, z), std::cosh(2 * beta * z.imag()), 1e-9 * std::cosh(2 * beta * z.imag()));
        }
    }
}

TEST(LiTam, SameAsParabolic) {
    for (double t : {0.5, 1.5})
        for (int i = 0; i < 10; ++i)
            for (int j = 1; j <= 10; ++j) {
                const Complex z(-2 + 0.4 * i, 0.3 * j);
                EXPECT_EQ(litam_map(t, z), parabolic_map(t, z));
            }
    EXPECT_LT(std::abs(litam_map(0.5, Complex(0, 2)) - Complex(0, std::sinh(2.0))), 1e-14);
    EXPECT_THROW(litam_map(0.0, Complex(0, 1)), DomainError);
    EXPECT_THROW(litam_smooth_map(0.0), DomainError);
    // Dilatation cosh(2 t y) is unbounded.
    const SmoothMap f = litam_smooth_map(0.5);
    EXPECT_NEAR(qc_dilatation(f, Complex(0.0, 8.0)), std::cosh(8.0), 1e-9 * std::cosh(8.0));
    EXPECT_GT(qc_dilatation(f, Complex(0.0, 8.0)), 1e3);
}

TEST(QuarterPlane, Values) {
    const Complex w = quarter_plane_map(Complex(0, std::asinh(1.0)));
    EXPECT_LT(std::abs(w - Complex(1, 1) / std::sqrt(2.0)), 1e-15);
    for (double x : {-1.0, 0.0, 2.0})
        for (double y : {0.1, 1.0, 5.0}) {
            const Complex v = quarter_plane_map(Complex(x, y));
            EXPECT_GT(v.real(), 0.0);
            EXPECT_GT(v.imag(), 0.0);
            EXPECT_NEAR(std::abs(v), std::exp(x), 1e-14 * std::exp(x));
        }
}

TEST(QuarterPlane, NotSurjective) {
    // -1 + i has argument 3 pi / 4; images have argument atan(sinh y) in (0, pi / 2).
    const double target = std::arg(Complex(-1, 1));
    for (double y = 0.01; y < 30; y *= 1.5) EXPECT_LT(std::arg(quarter_plane_map(Complex(0, y))), pi / 2);
    EXPECT_GT(target, pi / 2);
}

TEST(QuarterPlane, HopfAndTension) {
    const SmoothMap q = quarter_plane_smooth_map();
    for (int k = 0; k < 30; ++k) {
        const Complex z(-1 + 0.07 * k, 0.05 + 0.2 * k);
        EXPECT_LT(std::abs(hopf_differential(q, z) - 0.25), 1e-9);
        EXPECT_LT(std::abs(tension_field(q, z)), 1e-9);
        // Analytic jet against finite differences.
        const Jet a = q.jet(z), b = q.fd_jet(z);
        EXPECT_LT(std::abs(a.fx - b.fx), 1e-7 * (1 + std::abs(a.fx)));
        EXPECT_LT(std::abs(a.fyy - b.fyy), 1e-4 * (1 + std::abs(a.fyy)));
    }
}

TEST(Strip, Lambda) {
    EXPECT_NEAR(strip_lambda(0.0, 0.0), 1.0, 1e-12);
    const double l = strip_lambda(0.1, 0.1);
    EXPECT_GT(l, strip_lambda_min(0.1, 0.1));
    EXPECT_NEAR(strip_normalization_integral(0.1, 0.1, l), pi, 1e-8);
    // Independent oracle: tanh-sinh over [0, pi] of the original integrand.
    boost::math::quadrature::tanh_sinh<double> ts;
    const double oracle = ts.integrate(
        [&](double p) {
            const double s = std::sin(p);
            return 1.0 / std::sqrt(l * l - 4 * 0.01 / (l * l) * std::pow(s, 4) - 0.4 * s * s);
        },
        0.0, pi);
    EXPECT_NEAR(oracle, pi, 1e-8);
}

TEST(Strip, LambdaIncreasesWithAlpha) {
    double previous = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double l = strip_lambda(0.02 * k, 0.0);
        EXPECT_GT(l, previous);
        previous = l;
    }
}

TEST(Strip, TrivialCaseIsIdentity) {
    const StripSolution s(0.0, 0.0);
    EXPECT_NEAR(s.lambda(), 1.0, 1e-12);
    EXPECT_EQ(s.K(), 0.0);
    for (double y : {0.1, 1.0, 3.0}) {
        const Complex z(0.7, y);
        EXPECT_LT(std::abs(s.map(z) - z), 1e-10);
    }
}

TEST(Strip, RealAlphaHasNoShift) {
    const StripSolution s(0.15, 0.0);
    for (double v : s.shift()) EXPECT_EQ(v, 0.0);
    const Complex z(0.4, 1.2);
    EXPECT_LT(std::abs(s.map(z) - Complex(s.lambda() * 0.4, s.psi_at(1.2))), 1e-15);
}

TEST(Strip, ShootingConsistencyAndBoundaryTrace) {
    const StripSolution s(0.1, 0.1);
    EXPECT_NEAR(s.psi().front(), 0.0, 0.0);
    EXPECT_NEAR(s.psi().back(), pi, 1e-6);
    EXPECT_LT(s.K(), 0.0);
    EXPECT_EQ(s.boundary_trace(2.0, 0), Complex(2.0 * s.lambda(), 0.0));
    EXPECT_EQ(s.boundary_trace(2.0, 1), Complex(2.0 * s.lambda() + s.K(), pi));
    // The interior map approaches the trace at the edges.
    EXPECT_LT(std::abs(s.map(Complex(2.0, 1e-9)) - s.boundary_trace(2.0, 0)), 1e-8);
    EXPECT_LT(std::abs(s.map(Complex(2.0, pi - 1e-9)) - s.boundary_trace(2.0, 1)), 1e-8);
    const auto [image, K] = strip_map(0.1, 0.1, Point(Model::Strip, Complex(0.5, 1.0)));
    EXPECT_EQ(K, s.K());
    EXPECT_EQ(image.z(), s.map(Complex(0.5, 1.0)));
}

TEST(Strip, ProfileSatisfiesTheOdes) {
    const StripSolution s(0.1, 0.1);
    const double l = s.lambda();
    for (double y : {0.3, 1.3, 2.7}) {
        const double e = 1e-5;
        const double dpsi = (s.psi_at(y + e) - s.psi_at(y - e)) / (2 * e);
        const double p = s.psi_at(y), sn = std::sin(p);
        EXPECT_NEAR(dpsi, std::sqrt(l * l - 0.04 / (l * l) * std::pow(sn, 4) - 0.4 * sn * sn), 1e-7);
        const double dshift = (s.shift_at(y + e) - s.shift_at(y - e)) / (2 * e);
        EXPECT_NEAR(l * dshift, -0.2 * sn * sn, 1e-7);
    }
}

TEST(Strip, StepHalvingChangesKAtFourthOrder) {
    const double k1 = StripSolution(0.1, 0.1, 64).K();
    const double k2 = StripSolution(0.1, 0.1, 128).K();
    const double k3 = StripSolution(0.1, 0.1, 256).K();
    const double ref = StripSolution(0.1, 0.1, 4096).K();
    EXPECT_LT(std::abs(k3 - ref), 1e-9);
    const double ratio = std::abs(k1 - k2) / std::abs(k2 - k3);
    EXPECT_GT(ratio, 12.0);
    EXPECT_LT(ratio, 20.0);
}

TEST(Strip, ProfileCsv) {
    std::ostringstream os;
    StripSolution(0.0, 0.0, 8).write_profile_csv(os);
    const std::string text = os.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "y,psi,phi");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
}

TEST(Strip, RejectsOutsidePoints) {
    const StripSolution s(0.0, 0.0, 8);
    EXPECT_THROW(s.map(Complex(0, 4)), DomainError);
    EXPECT_THROW(s.boundary_trace(0.0, 2), DomainError);
}
