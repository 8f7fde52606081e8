#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hypharm/closed_forms.hpp"
#include "hypharm/harmonic_maps.hpp"

using namespace hypharm;

namespace {

std::vector<Complex> sample_points(Model m, int n) {
    std::vector<Complex> out;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (int(out.size()) < n) {
        Complex z;
        if (m == Model::Disk)
            z = std::polar(0.9 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
        else
            z = Complex(4 * u(rng) - 2, 0.1 + (m == Model::Strip ? 2.9 : 3.0) * u(rng));
        out.push_back(z);
    }
    return out;
}

// tr(nabla df) for a map into U, by finite differences of f and of the log-density of U
// in the Christoffel symbols of a conformal metric e^{2 lambda} |dw|^2:
//   Gamma^k_ij = delta^k_i d_j lambda + delta^k_j d_i lambda - delta_ij d_k lambda.
Complex fd_tension_oracle(const std::function<Complex(Complex)>& f, Complex z) {
    const double s = 1e-4;
    const Complex w = f(z);
    const Complex fx = (f(z + s) - f(z - s)) / (2 * s);
    const Complex fy = (f(z + Complex(0, s)) - f(z - Complex(0, s))) / (2 * s);
    const Complex fxx = (f(z + s) - 2.0 * w + f(z - s)) / (s * s);
    const Complex fyy = (f(z + Complex(0, s)) - 2.0 * w + f(z - Complex(0, s))) / (s * s);
    auto lambda = [](Complex p) { return std::log(density(Model::HalfPlane, p)); };
    const double dl[2] = {(lambda(w + s) - lambda(w - s)) / (2 * s),
                          (lambda(w + Complex(0, s)) - lambda(w - Complex(0, s))) / (2 * s)};
    double tau[2] = {0, 0};
    for (const Complex& d : {fx, fy}) {
        const double v[2] = {d.real(), d.imag()};
        for (int k = 0; k < 2; ++k) {
            double g = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const double gamma = (k == i ? dl[j] : 0.0) + (k == j ? dl[i] : 0.0) - (i == j ? dl[k] : 0.0);
                    g += gamma * v[i] * v[j];
                }
            tau[k] += g;
        }
    }
    const Complex lap = fxx + fyy;
    const double r = density(Model::HalfPlane, z);
    return Complex(lap.real() + tau[0], lap.imag() + tau[1]) / (r * r);
}

BoundaryMap power_map(double p) {
    return {Model::HalfPlane, [p](double x) { return std::copysign(std::pow(std::abs(x), p), x); }, "power"};
}

}  // namespace

TEST(Identity, AllDiagnostics) {
    for (Model m : {Model::Disk, Model::HalfPlane, Model::Strip}) {
        const SmoothMap f = SmoothMap::identity(m);
        for (Complex z : sample_points(m, 10)) {
            const Sym2 g = pullback_metric(f, z);
            const double r = density(m, z);
            EXPECT_NEAR(g.xx, r * r, 1e-12 * r * r);
            EXPECT_NEAR(g.yy, r * r, 1e-12 * r * r);
            EXPECT_EQ(g.xy, 0.0);
            EXPECT_NEAR(energy_density(f, z), 1.0, 1e-14);
            EXPECT_LT(std::abs(tension_field(f, z)), 1e-12);
            EXPECT_EQ(hopf_differential(f, z), Complex(0.0));
            EXPECT_NEAR(qc_dilatation(f, z), 1.0, 1e-12);
        }
    }
}

TEST(Mobius, IsometriesAreConformalHarmonic) {
    const MobiusMap m(1.0, 0.5, -0.3, 0.9);
    for (Model model : {Model::Disk, Model::HalfPlane, Model::Strip}) {
        const SmoothMap f = SmoothMap::mobius(m, model);
        for (Complex z : sample_points(model, 10)) {
            Complex w;
            try {
                w = f(z);
            } catch (const DomainError&) {
                continue;
            } catch (const NumericalError&) {
                continue;
            }
            const Sym2 g = pullback_metric(f, z);
            const double r = density(model, z);
            EXPECT_NEAR(g.xx / (r * r), 1.0, 1e-10);
            EXPECT_NEAR(g.yy / (r * r), 1.0, 1e-10);
            EXPECT_NEAR(g.xy / (r * r), 0.0, 1e-10);
            EXPECT_NEAR(energy_density(f, z), 1.0, 1e-10);
            EXPECT_LT(std::abs(hopf_differential(f, z)), 1e-10 * r * r);
            EXPECT_LT(std::abs(tension_field(f, z)) * density(model, w), 1e-8);
            EXPECT_NEAR(qc_dilatation(f, z), 1.0, 1e-6);
        }
    }
}

TEST(SmoothMap, DomainChecks) {
    const SmoothMap f(Model::HalfPlane, Model::HalfPlane, [](Complex z) { return z - Complex(0, 1); });
    EXPECT_THROW(f(Complex(0, 0.5)), DomainError);
    EXPECT_THROW(f(Complex(0, -1)), DomainError);
    EXPECT_NO_THROW(f(Complex(0, 2)));
    EXPECT_THROW(pullback_metric(f, Point(Model::Disk, 0.0)), DomainError);
}

TEST(Hopf, AgreesWithPullbackTracelessPart) {
    const std::vector<SmoothMap> maps = {parabolic_smooth_map(0.7), quarter_plane_smooth_map(),
                                         SmoothMap(Model::HalfPlane, Model::HalfPlane,
                                                   [](Complex z) { return Complex(z.real() + 0.3 * z.imag(), z.imag() * z.imag()); })};
    for (const SmoothMap& f : maps)
        for (Complex z : sample_points(Model::HalfPlane, 20)) {
            const Complex a = hopf_differential(f, z);
            const Complex b = hopf_from_pullback(pullback_metric(f, z));
            EXPECT_LT(std::abs(a - b), 1e-10 * (1 + std::abs(a)));
        }
}

TEST(Hopf, TraceDecompositionAndDeterminant) {
    const std::vector<SmoothMap> maps = {parabolic_smooth_map(0.7), quarter_plane_smooth_map(),
                                         SmoothMap(Model::HalfPlane, Model::HalfPlane,
                                                   [](Complex z) { return Complex(z.real() + 0.3 * z.imag(), z.imag() * z.imag()); })};
    for (const SmoothMap& f : maps)
        for (Complex z : sample_points(Model::HalfPlane, 20)) {
            const Sym2 g = pullback_metric(f, z);
            const Complex phi = hopf_differential(f, z);
            const double e = energy_density(f, z);
            const double r2 = std::pow(density(Model::HalfPlane, z), 2);
            const double scale = std::max({std::abs(g.xx), std::abs(g.yy), 1.0});
            EXPECT_NEAR(g.xx, e * r2 + 2 * phi.real(), 1e-10 * scale);
            EXPECT_NEAR(g.yy, e * r2 - 2 * phi.real(), 1e-10 * scale);
            EXPECT_NEAR(g.xy, -2 * phi.imag(), 1e-10 * scale);
            const double n = std::abs(phi) / r2;
            EXPECT_NEAR(g.det() / (r2 * r2), e * e - 4 * n * n, 1e-9 * std::max(1.0, e * e));
            EXPECT_GE(e * e - 4 * n * n, -1e-9);
        }
}

TEST(Energy, ParabolicClosedForm) {
    for (double beta : {0.3, 0.5, 1.0})
        for (double y : {0.2, 1.0, 3.0}) {
            const double c = std::cosh(2 * beta * y), s = std::sinh(2 * beta * y);
            const double expect = 2 * beta * beta * y * y * (1 + c * c) / (s * s);
            EXPECT_NEAR(energy_density(parabolic_smooth_map(beta), Complex(0.4, y)), expect, 1e-12 * expect);
            EXPECT_NEAR(expect, parabolic_metric_coefficient(beta, y) * y * y, 1e-12 * expect);
        }
}

TEST(Tension, NonHarmonicMapAgainstChristoffelOracle) {
    auto f = [](Complex z) { return Complex(z.real(), z.imag() * z.imag()); };
    const SmoothMap m(Model::HalfPlane, Model::HalfPlane, f);
    const Complex tau = tension_field(m, kI);
    EXPECT_LT(std::abs(tau - Complex(0, -1)), 1e-4);
    for (Complex z : {Complex(0.3, 0.7), Complex(-1, 2), Complex(0.1, 0.4)})
        EXPECT_LT(std::abs(tension_field(m, z) - fd_tension_oracle(f, z)), 1e-4 * (1 + std::abs(tension_field(m, z))));
    // Harmonic maps vanish under the oracle too.
    EXPECT_LT(std::abs(fd_tension_oracle([](Complex z) { return parabolic_map(0.5, z); }, Complex(0.2, 1.1))), 1e-4);
}

TEST(Tension, OtherTargetsConvertConsistently) {
    // The parabolic map read in strip coordinates on the target is still harmonic.
    const SmoothMap f(Model::HalfPlane, Model::Strip,
                      [](Complex z) { return convert_jet(Model::HalfPlane, Model::Strip, parabolic_map(0.5, z)).value; });
    for (Complex z : {Complex(0.3, 0.7), Complex(1.0, 1.5)}) EXPECT_LT(std::abs(tension_field(f, z)), 1e-4);
    const SmoothMap g(Model::HalfPlane, Model::Disk,
                      [](Complex z) { return convert_jet(Model::HalfPlane, Model::Disk, Complex(z.real(), z.imag() * z.imag())).value; });
    // Tension is a vector: in disk coordinates it is c'(w) tau_U.
    const Complex z(0.3, 0.7);
    const Complex w = Complex(z.real(), z.imag() * z.imag());
    const Complex expect = convert_jet(Model::HalfPlane, Model::Disk, w).d1 *
                           tension_field(SmoothMap(Model::HalfPlane, Model::HalfPlane,
                                                   [](Complex p) { return Complex(p.real(), p.imag() * p.imag()); }),
                                         z);
    EXPECT_LT(std::abs(tension_field(g, z) - expect), 1e-3 * std::abs(expect));
}

TEST(FiniteDifferences, SecondOrderInTheStep) {
    const SmoothMap q = quarter_plane_smooth_map();
    const Complex z(0.3, 0.8);
    const Jet exact = q.jet(z);
    auto err = [&](double s) {
        const Jet j = q.fd_jet(z, s, s);
        return std::make_pair(std::abs(j.fx - exact.fx) + std::abs(j.fy - exact.fy),
                              std::abs(j.fxx - exact.fxx) + std::abs(j.fxy - exact.fxy) + std::abs(j.fyy - exact.fyy));
    };
    const auto [a1, b1] = err(2e-2);
    const auto [a2, b2] = err(1e-2);
    EXPECT_NEAR(a1 / a2, 4.0, 0.3);
    EXPECT_NEAR(b1 / b2, 4.0, 0.3);
}

TEST(Dilatation, ParabolicAndQuarterPlane) {
    const SmoothMap f = parabolic_smooth_map(0.5);
    for (double y : {0.3, 1.0, 4.0}) EXPECT_NEAR(qc_dilatation(f, Complex(0.1, y)), std::cosh(y), 1e-9 * std::cosh(y));
    // Quarter plane: grows without bound along y.
    const SmoothMap q = quarter_plane_smooth_map();
    double previous = 1.0;
    for (double y : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double k = qc_dilatation(q, Complex(0.0, y));
        EXPECT_GT(k, previous);
        previous = k;
    }
    EXPECT_GT(previous, 1e3);
    // A degenerate differential is marked infinite.
    const SmoothMap flat(Model::HalfPlane, Model::HalfPlane, [](Complex z) { return Complex(0.0, 1.0 + 0.0 * z.real()); });
    EXPECT_TRUE(std::isinf(qc_dilatation(flat, Complex(0, 1))));
    const auto [l1, l2] = dilatation_coefficients(f, Complex(0, 1));
    EXPECT_GE(l1, l2);
}

TEST(Quasisymmetry, IdentityAndHomography) {
    EXPECT_EQ(qs_constant_estimate(BoundaryMap::identity()).k_hat, 1.0);
    const QsEstimate h = qs_constant_estimate(BoundaryMap::homography(MobiusMap(2.0, 1.0, 0.0, 0.5)));
    EXPECT_NEAR(h.k_hat, 1.0, 1e-9);
    EXPECT_EQ(h.quadruples, 35960 + 200);  // C(32, 4) + random ones
    EXPECT_NEAR(qs_constant_estimate(BoundaryMap::identity(Model::Disk)).k_hat, 1.0, 1e-12);
    // A pole at -1.5 inside the sample: the images wrap through infinity in cyclic order.
    EXPECT_NEAR(qs_constant_estimate(BoundaryMap::homography(MobiusMap(2.0, 1.0, 0.5, 0.75))).k_hat, 1.0, 1e-9);
}

TEST(Quasisymmetry, PowerMap) {
    const BoundaryMap p = power_map(2.0);
    // [a,b,c,d] = (d-a)/(d-c) (b-c)/(b-a):  [-1,0,1,2] = -3,  [-1,0,1,4] = -5/3.
    const double oracle = cross_ratio(-1.0, 0.0, 1.0, 2.0) / cross_ratio(-1.0, 0.0, 1.0, 4.0);
    EXPECT_NEAR(oracle, 1.8, 1e-15);
    const QsEstimate one = qs_constant_estimate(p, {{-1.0, 0.0, 1.0, 2.0}});
    EXPECT_NEAR(one.k_hat, 1.8, 1e-14);
    EXPECT_GE(qs_constant_estimate(p).k_hat, one.k_hat);
}

TEST(Quasisymmetry, InvariantUnderHomographies) {
    const MobiusMap outer(1.0, 0.0, 0.001, 1.0), inner(2.0, 1.0, 0.05, 1.0);
    const BoundaryMap f = power_map(1.5);
    const BoundaryMap g{Model::HalfPlane,
                        [&](double x) {
                            const double a = inner(ExtendedReal{x, false}).x;
                            return outer(ExtendedReal{f.f(a), false}).x;
                        },
                        "conjugated"};
    std::vector<std::array<double, 4>> qg, qf;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 500; ++k) {
        std::array<double, 4> q{u(rng), u(rng), u(rng), u(rng)};
        std::sort(q.begin(), q.end());
        qg.push_back(q);
        std::array<double, 4> m{};
        for (int i = 0; i < 4; ++i) m[i] = inner(ExtendedReal{q[i], false}).x;
        qf.push_back(m);
    }
    EXPECT_NEAR(qs_constant_estimate(g, qg).k_hat, qs_constant_estimate(f, qf).k_hat, 1e-9);
}

TEST(Quasisymmetry, RejectsBadData) {
    const BoundaryMap fold{Model::HalfPlane, [](double x) { return x * x; }, "fold"};
    EXPECT_THROW(qs_constant_estimate(fold, {{-1.0, 0.5, 1.0, 2.0}}), DomainError);
    EXPECT_THROW(qs_constant_estimate(BoundaryMap::identity(), {{0.0, 0.0, 1.0, 2.0}}), DomainError);
    // Orientation-reversing maps keep cyclic order and are allowed.
    const BoundaryMap flip{Model::HalfPlane, [](double x) { return -x; }, "flip"};
    EXPECT_NEAR(qs_constant_estimate(flip, {{-1.0, 0.5, 1.0, 2.0}}).k_hat, 1.0, 1e-12);
}

TEST(Quasisymmetry, DeterministicSampling) {
    const QsEstimate a = qs_constant_estimate(power_map(3.0), QsSampling{8, 50, 99});
    const QsEstimate b = qs_constant_estimate(power_map(3.0), QsSampling{8, 50, 99});
    EXPECT_EQ(a.k_hat, b.k_hat);
    EXPECT_EQ(a.worst, b.worst);
}

TEST(Bochner, IdenticalMapsHaveZeroMargin) {
    const Grid g(Model::HalfPlane, {0, 1}, {0.2, 1.5}, 17, 17);
    const BochnerReport r = bochner_check(parabolic_smooth_map(0.5), parabolic_smooth_map(0.5), g);
    EXPECT_NEAR(r.min_margin, 0.0, 1e-12);
    for (double d : r.distance.values()) EXPECT_EQ(d, 0.0);
}

TEST(Bochner, ParabolicPair) {
    const Grid g(Model::HalfPlane, {0, 1}, {0.2, 1.5}, 65, 65);
    const BochnerReport r = bochner_check(parabolic_smooth_map(0.4), parabolic_smooth_map(0.5), g);
    EXPECT_GE(r.min_margin, -1e-3);
    EXPECT_GE(r.min_weighted_margin, r.min_margin - 1e-15);
}

TEST(Bochner, TranslatedCopy) {
    const SmoothMap f = parabolic_smooth_map(0.5);
    const SmoothMap g(Model::HalfPlane, Model::HalfPlane, [](Complex z) { return parabolic_map(0.5, z) + 0.1; },
                      [](Complex z) {
                          Jet j = parabolic_jet(0.5, z);
                          j.value += 0.1;
                          return j;
                      });
    const Grid grid(Model::HalfPlane, {0, 1}, {0.2, 1.5}, 33, 33);
    const BochnerReport r = bochner_check(f, g, grid);
    EXPECT_GE(r.min_margin, -1e-3);
    for (double d : r.distance.values()) EXPECT_GT(d, 0.0);
    EXPECT_THROW(bochner_check(f, SmoothMap::identity(Model::Disk), grid), DomainError);
}

TEST(Aqh, Margins) {
    const Grid g(Model::HalfPlane, {0, 1}, {0.5, 2}, 5, 5);
    const RealField identity = aqh_margin(SmoothMap::identity(Model::HalfPlane), g, 0.5);
    for (double v : identity.values()) EXPECT_NEAR(v, 0.5, 1e-12);
    const SmoothMap constant(Model::HalfPlane, Model::HalfPlane, [](Complex) { return kI; });
    const RealField flat = aqh_margin(constant, g, 0.25);
    for (double v : flat.values()) EXPECT_NEAR(v, -0.25, 1e-12);
    const RealField m = aqh_margin(parabolic_smooth_map(0.5), g, 0.1);
    for (int j = 0; j < 5; ++j) {
        const double y = g.y(j);
        const double h = parabolic_h(0.5, y), u = parabolic_u(0.5, y);
        const double l2sq = std::exp(h) * std::pow(1 - std::exp(-u), 2);
        EXPECT_NEAR(m(2, j), l2sq - 0.1, 1e-9);
        EXPECT_GT(m(2, j), 0.0);
    }
    EXPECT_THROW(aqh_margin(constant, g, 0.0), DomainError);
}
