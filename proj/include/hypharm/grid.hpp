#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <sstream>
#include <vector>

#include "hypharm/csv.hpp"
#include "hypharm/error.hpp"
#include "hypharm/hyperbolic.hpp"

namespace hypharm {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Uniform nx-by-ny lattice on a coordinate rectangle lying strictly inside a model.
/// Node (i, j) sits at x_i + i y_j; storage is row-major with i fastest.
class Grid {
public:
    Grid(Model model, Interval x, Interval y, int nx, int ny) : model_(model), x_(x), y_(y), nx_(nx), ny_(ny) {
        if (nx < 3 || ny < 3) throw DomainError("grid needs at least 3 nodes per direction");
        if (!(x.lo < x.hi) || !(y.lo < y.hi) || !std::isfinite(x.length()) || !std::isfinite(y.length()))
            throw DomainError("grid intervals must be finite with lo < hi");
        const Complex corners[4] = {{x.lo, y.lo}, {x.hi, y.lo}, {x.lo, y.hi}, {x.hi, y.hi}};
        for (const Complex& c : corners) {
            // Each model is convex in these coordinates, so the corners decide.
            if (!is_interior(model, c)) {
                std::ostringstream os;
                os << "grid rectangle touches or crosses the boundary of the " << to_string(model)
                   << " model at corner " << c;
                throw DomainError(os.str());
            }
        }
    }

    Model model() const { return model_; }
    Interval x_range() const { return x_; }
    Interval y_range() const { return y_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int size() const { return nx_ * ny_; }
    double dx() const { return x_.length() / (nx_ - 1); }
    double dy() const { return y_.length() / (ny_ - 1); }

    double x(int i) const { return i == nx_ - 1 ? x_.hi : x_.lo + x_.length() * i / (nx_ - 1); }
    double y(int j) const { return j == ny_ - 1 ? y_.hi : y_.lo + y_.length() * j / (ny_ - 1); }
    Complex z(int i, int j) const { return {x(i), y(j)}; }
    int index(int i, int j) const { return j * nx_ + i; }
    bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1; }

    bool contains(Complex z) const {
        return z.real() >= x_.lo && z.real() <= x_.hi && z.imag() >= y_.lo && z.imag() <= y_.hi;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    Model model_;
    Interval x_, y_;
    int nx_, ny_;
};

template <class T>
class Field {
public:
    explicit Field(Grid grid, T fill = T{}) : grid_(std::move(grid)), values_(grid_.size(), fill) {}
    Field(Grid grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
        if (int(values_.size()) != grid_.size()) throw DomainError("field size does not match its grid");
    }

    const Grid& grid() const { return grid_; }
    const std::vector<T>& values() const { return values_; }
    std::vector<T>& values() { return values_; }

    T& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
    const T& operator()(int i, int j) const { return values_[grid_.index(i, j)]; }

    template <class F>
    static Field sample(const Grid& grid, F&& f) {
        Field out(grid);
        for (int j = 0; j < grid.ny(); ++j)
            for (int i = 0; i < grid.nx(); ++i) out(i, j) = f(grid.z(i, j));
        return out;
    }

private:
    Grid grid_;
    std::vector<T> values_;
};

using RealField = Field<double>;
using ComplexField = Field<Complex>;

/// Bilinear interpolation of a real field; throws DomainError outside the rectangle.
inline double interpolate(const RealField& f, Complex z) {
    const Grid& g = f.grid();
    if (!g.contains(z)) throw DomainError("interpolate: point outside the grid rectangle");
    const double s = (z.real() - g.x_range().lo) / g.dx();
    const double t = (z.imag() - g.y_range().lo) / g.dy();
    const int i = std::clamp(int(std::floor(s)), 0, g.nx() - 2);
    const int j = std::clamp(int(std::floor(t)), 0, g.ny() - 2);
    const double a = s - i, b = t - j;
    return (1 - a) * (1 - b) * f(i, j) + a * (1 - b) * f(i + 1, j) + (1 - a) * b * f(i, j + 1) +
           a * b * f(i + 1, j + 1);
}

/// CSV with header x,y,value, one row per node, i fastest.
inline void write_field_csv(std::ostream& os, const RealField& f) {
    const Grid& g = f.grid();
    os << "x,y,value\n";
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            os << csv_number(g.x(i)) << ',' << csv_number(g.y(j)) << ',' << csv_number(f(i, j)) << '\n';
}

/// CSV with header x,y,re,im.
inline void write_field_csv(std::ostream& os, const ComplexField& f) {
    const Grid& g = f.grid();
    os << "x,y,re,im\n";
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            os << csv_number(g.x(i)) << ',' << csv_number(g.y(j)) << ',' << csv_number(f(i, j).real()) << ','
               << csv_number(f(i, j).imag()) << '\n';
}

}  // namespace hypharm
