#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.  The interval with the
// largest error estimate is bisected until the summed estimate falls below
// max(abs_tol, rel_tol * |I|).  Nodes never touch the endpoints, so
// integrable endpoint singularities only cost extra subdivisions.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "hypharm/error.hpp"

namespace hypharm {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error, abs_value;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<double, 15> v{};
    v[14] = f(c);
    for (int k = 0; k < 7; ++k) {
        const double dx = h * kKronrodNodes[k];
        v[2 * k] = f(c - dx);
        v[2 * k + 1] = f(c + dx);
    }
    double kronrod = v[14] * kKronrodWeights[7];
    double gauss = v[14] * kGaussWeights[3];
    double resabs = std::abs(v[14]) * kKronrodWeights[7];
    for (int k = 0; k < 7; ++k) {
        const double s = v[2 * k] + v[2 * k + 1];
        kronrod += kKronrodWeights[k] * s;
        resabs += kKronrodWeights[k] * (std::abs(v[2 * k]) + std::abs(v[2 * k + 1]));
        if (k % 2 == 1) gauss += kGaussWeights[k / 2] * s;
    }
    // QUADPACK error scaling: sharpen |K - G| relative to the spread of f, floored at roundoff.
    const double mean = 0.5 * kronrod;
    double resasc = kKronrodWeights[7] * std::abs(v[14] - mean);
    for (int k = 0; k < 7; ++k)
        resasc += kKronrodWeights[k] * (std::abs(v[2 * k] - mean) + std::abs(v[2 * k + 1] - mean));
    double err = std::abs((kronrod - gauss) * h);
    resasc *= std::abs(h);
    resabs *= std::abs(h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs);
    return {a, b, kronrod * h, err, resabs};
}

}  // namespace detail

/// Integral of f over [a, b].  Throws ConvergenceError if the budget is exhausted
/// or f produces a non-finite value.
template <class F>
QuadratureResult integrate(const F& f, double a, double b, double abs_tol = 1e-13, double rel_tol = 1e-13,
                           int max_intervals = 20000) {
    std::priority_queue<detail::Segment> queue;
    detail::Segment first = detail::kronrod15(f, a, b);
    double value = first.value;
    double error = first.error;
    double abs_value = first.abs_value;
    queue.push(first);
    int intervals = 1;
    // Never ask for more than the roundoff floor of the sum itself.
    auto target = [&] {
        return std::max({abs_tol, rel_tol * std::abs(value), 100.0 * std::numeric_limits<double>::epsilon() * abs_value});
    };
    while (error > target()) {
        if (!std::isfinite(value)) throw ConvergenceError("integrate: non-finite integrand");
        if (intervals >= max_intervals) throw ConvergenceError("integrate: interval budget exhausted");
        const detail::Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval can no longer be split in double precision; keep its estimate.
            break;
        }
        const detail::Segment left = detail::kronrod15(f, worst.a, mid);
        const detail::Segment right = detail::kronrod15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_value += left.abs_value + right.abs_value - worst.abs_value;
        queue.push(left);
        queue.push(right);
        ++intervals;
    }
    // Re-sum to shed the drift accumulated by the incremental updates.
    double total = 0.0, total_error = 0.0;
    while (!queue.empty()) {
        total += queue.top().value;
        total_error += queue.top().error;
        queue.pop();
    }
    if (!std::isfinite(total)) throw ConvergenceError("integrate: non-finite integrand");
    return {total, total_error, intervals};
}

/// Integral of f over [a, oo) through t = a + s / (1 - s), s in [0, 1).
template <class F>
QuadratureResult integrate_to_infinity(const F& f, double a, double abs_tol = 1e-13, double rel_tol = 1e-13) {
    auto mapped = [&](double s) {
        const double one_minus = 1.0 - s;
        const double t = a + s / one_minus;
        if (!std::isfinite(t)) return 0.0;
        const double v = f(t) / (one_minus * one_minus);
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(mapped, 0.0, 1.0, abs_tol, rel_tol);
}

}  // namespace hypharm
