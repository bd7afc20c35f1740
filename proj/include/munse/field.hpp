#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "munse/grid.hpp"

namespace munse {

/// Real samples on an n*n periodic grid, row-major: value(i,j) lives at
/// x = (i*h, j*h).
struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

    double& operator()(int i, int j) { return v[static_cast<size_t>(i) * grid.n + j]; }
    double operator()(int i, int j) const { return v[static_cast<size_t>(i) * grid.n + j]; }

    /// Wrapped access for stencil code.
    double at_wrapped(int i, int j) const {
        const int n = grid.n;
        i = ((i % n) + n) % n;
        j = ((j % n) + n) % n;
        return (*this)(i, j);
    }

    double mean() const {
        double s = 0.0;
        for (double x : v) s += x;
        return s / grid.size();
    }
    double min() const { return *std::min_element(v.begin(), v.end()); }
    double max() const { return *std::max_element(v.begin(), v.end()); }

    bool finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }

    ScalarField& operator+=(const ScalarField& o) {
        check_same_grid(o);
        for (size_t k = 0; k < v.size(); ++k) v[k] += o.v[k];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        check_same_grid(o);
        for (size_t k = 0; k < v.size(); ++k) v[k] -= o.v[k];
        return *this;
    }
    ScalarField& operator*=(double c) {
        for (double& x : v) x *= c;
        return *this;
    }

    void check_same_grid(const ScalarField& o) const {
        if (grid != o.grid) throw std::invalid_argument("ScalarField: grid mismatch");
    }
};

inline ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
inline ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
inline ScalarField operator*(double c, ScalarField a) { return a *= c; }

/// Pointwise product (no dealiasing; spectral callers mask afterwards).
inline ScalarField pointwise(const ScalarField& a, const ScalarField& b) {
    a.check_same_grid(b);
    ScalarField r(a.grid);
    for (size_t k = 0; k < r.v.size(); ++k) r.v[k] = a.v[k] * b.v[k];
    return r;
}

/// Fill from a function of (x1, x2).
inline ScalarField sample(const Grid& g, const std::function<double(double, double)>& f) {
    ScalarField r(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) r(i, j) = f(g.x1(i), g.x2(j));
    return r;
}

/// Complex coefficients in the standard full n*n FFT layout; represents a
/// real field, so conjugate symmetry holds. Coefficients are unnormalized
/// (a constant field c transforms to c*n^2 at the zero mode).
struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> c;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), c(g.size()) {}

    std::complex<double>& operator()(int i, int j) {
        return c[static_cast<size_t>(i) * grid.n + j];
    }
    std::complex<double> operator()(int i, int j) const {
        return c[static_cast<size_t>(i) * grid.n + j];
    }

    std::complex<double> zero_mode() const { return c[0]; }

    SpectralField& operator+=(const SpectralField& o) {
        if (grid != o.grid) throw std::invalid_argument("SpectralField: grid mismatch");
        for (size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        if (grid != o.grid) throw std::invalid_argument("SpectralField: grid mismatch");
        for (size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (auto& z : c) z *= s;
        return *this;
    }
};

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
inline SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }

/// Two-component field; both components share one grid.
struct VectorField {
    ScalarField x, y;

    VectorField() = default;
    explicit VectorField(const Grid& g) : x(g), y(g) {}
    VectorField(ScalarField fx, ScalarField fy) : x(std::move(fx)), y(std::move(fy)) {
        if (x.grid != y.grid) throw std::invalid_argument("VectorField: components on different grids");
    }

    const Grid& grid() const { return x.grid; }

    double norm_at(int i, int j) const { return std::hypot(x(i, j), y(i, j)); }

    bool finite() const { return x.finite() && y.finite(); }
};

/// Symmetric 2x2 strain field; s22 = -s11 for divergence-free velocity.
struct StrainField {
    ScalarField s11, s12, s22;
    const Grid& grid() const { return s11.grid; }
};

}  // namespace munse
