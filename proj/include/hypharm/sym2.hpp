#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace hypharm {

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]] in real coordinates (x, y).
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    static Sym2 scalar(double s) { return {s, 0.0, s}; }

    double trace() const { return xx + yy; }
    double det() const { return xx * yy - xy * xy; }

    double max_eigenvalue() const { return 0.5 * trace() + half_gap(); }
    double min_eigenvalue() const {
        // Product form avoids cancellation when the eigenvalues are far apart.
        const double big = max_eigenvalue();
        if (big == 0.0) return 0.5 * trace() - half_gap();
        return det() / big;
    }

    /// Unit eigenvector direction (as a complex number) for the larger eigenvalue.
    std::complex<double> principal_direction() const {
        const double angle = 0.5 * std::atan2(2.0 * xy, xx - yy);
        return std::polar(1.0, angle);
    }

    double quadratic(std::complex<double> v) const {
        return xx * v.real() * v.real() + 2.0 * xy * v.real() * v.imag() + yy * v.imag() * v.imag();
    }

    Sym2 operator-(const Sym2& o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
    Sym2 operator+(const Sym2& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
    Sym2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }

private:
    double half_gap() const { return std::hypot(0.5 * (xx - yy), xy); }
};

}  // namespace hypharm
