#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "munse/fft.hpp"

namespace munse {

namespace detail {

/// Apply a real multiplier sym(k1, k2) mode-by-mode; zero mode handling is
/// the multiplier's business (pass sym(0,0) = 0 for Riesz-type symbols).
template <class Sym>
SpectralField apply_real_symbol(const SpectralField& f, Sym&& sym) {
    SpectralField out(f.grid);
    const int n = f.grid.n;
    for (int i = 0; i < n; ++i) {
        const double k1 = f.grid.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = f.grid.wavenumber(j);
            out(i, j) = sym(k1, k2) * f(i, j);
        }
    }
    return out;
}

inline double mean_tolerance(const ScalarField& f) {
    double rms = 0.0;
    for (double x : f.v) rms += x * x;
    rms = std::sqrt(rms / f.grid.size());
    return 1e-12 * std::max(1.0, rms);
}

inline void require_mean_zero(const ScalarField& f, const char* who) {
    if (std::abs(f.mean()) > mean_tolerance(f))
        throw std::invalid_argument(std::string(who) + ": input must be mean-zero");
}

}  // namespace detail

/// Riesz transform R_j (multiplier k_j/|k|, zero mode -> 0). The symbol is
/// odd, so a single application of R_j to a real field is imaginary-valued;
/// only the double compositions below return to real fields.
inline SpectralField riesz(int j, const SpectralField& f) {
    if (j != 1 && j != 2) throw std::invalid_argument("riesz: axis must be 1 or 2");
    return detail::apply_real_symbol(f, [j](double k1, double k2) {
        const double kk = k1 * k1 + k2 * k2;
        if (kk == 0.0) return 0.0;
        return (j == 1 ? k1 : k2) / std::sqrt(kk);
    });
}

/// Double Riesz transform R_i R_j (multiplier k_i k_j / |k|^2).
inline SpectralField riesz2(int i, int j, const SpectralField& f) {
    return riesz(i, riesz(j, f));
}

inline ScalarField riesz2(int i, int j, const ScalarField& f) {
    return inverse_transform(riesz2(i, j, transform(f)));
}

/// d/dx_j; the Nyquist mode is zeroed so the output of the odd symbol
/// stays a real field.
inline SpectralField derivative(int j, const SpectralField& f) {
    if (j != 1 && j != 2) throw std::invalid_argument("derivative: axis must be 1 or 2");
    SpectralField out(f.grid);
    const int n = f.grid.n;
    for (int i = 0; i < n; ++i) {
        for (int jj = 0; jj < n; ++jj) {
            const int m = (j == 1) ? f.grid.mode(i) : f.grid.mode(jj);
            if (std::abs(m) == n / 2) {
                out(i, jj) = 0.0;
                continue;
            }
            const double k = kTwoPi / f.grid.l * m;
            out(i, jj) = std::complex<double>(0.0, k) * f(i, jj);
        }
    }
    return out;
}

inline ScalarField derivative(int j, const ScalarField& f) {
    return inverse_transform(derivative(j, transform(f)));
}

/// Inverse Laplacian with zero mode pinned to zero; rejects inputs with a
/// mean above tolerance (the problem is ill-posed for them).
inline SpectralField inverse_laplacian(const SpectralField& f) {
    const double mean = std::abs(f.zero_mode()) / f.grid.size();
    if (mean > 1e-12)
        throw std::invalid_argument("inverse_laplacian: input has nonzero mean");
    return detail::apply_real_symbol(f, [](double k1, double k2) {
        const double kk = k1 * k1 + k2 * k2;
        return kk == 0.0 ? 0.0 : -1.0 / kk;
    });
}

inline ScalarField inverse_laplacian(const ScalarField& f) {
    detail::require_mean_zero(f, "inverse_laplacian");
    return inverse_transform(inverse_laplacian(transform(f)));
}

inline SpectralField laplacian(const SpectralField& f) {
    return detail::apply_real_symbol(f, [](double k1, double k2) { return -(k1 * k1 + k2 * k2); });
}

/// Gradient of a spectral scalar, returned in physical space.
inline VectorField gradient(const SpectralField& f) {
    return {inverse_transform(derivative(1, f)), inverse_transform(derivative(2, f))};
}

inline VectorField gradient(const ScalarField& f) { return gradient(transform(f)); }

/// u = grad^perp Delta^{-1} omega (Biot-Savart); omega must be mean-zero.
inline VectorField biot_savart(const SpectralField& om) {
    SpectralField psi = inverse_laplacian(om);
    SpectralField u1(om.grid), u2(om.grid);
    const int n = om.grid.n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int m1 = om.grid.mode(i), m2 = om.grid.mode(j);
            const double k1 = (std::abs(m1) == n / 2) ? 0.0 : kTwoPi / om.grid.l * m1;
            const double k2 = (std::abs(m2) == n / 2) ? 0.0 : kTwoPi / om.grid.l * m2;
            const std::complex<double> I(0.0, 1.0);
            u1(i, j) = -I * k2 * psi(i, j);
            u2(i, j) = I * k1 * psi(i, j);
        }
    }
    return {inverse_transform(u1), inverse_transform(u2)};
}

inline VectorField biot_savart(const ScalarField& om) {
    detail::require_mean_zero(om, "biot_savart");
    return biot_savart(transform(om));
}

/// Scalar vorticity of u: curl u = d1 u2 - d2 u1.
inline ScalarField curl(const VectorField& u) {
    SpectralField w = derivative(1, transform(u.y));
    w -= derivative(2, transform(u.x));
    return inverse_transform(w);
}

inline ScalarField divergence(const VectorField& u) {
    SpectralField d = derivative(1, transform(u.x));
    d += derivative(2, transform(u.y));
    return inverse_transform(d);
}

/// Su = grad u + (grad u)^T, twice the symmetric velocity gradient.
inline StrainField strain(const VectorField& u) {
    SpectralField ux = transform(u.x), uy = transform(u.y);
    StrainField s;
    SpectralField s11 = derivative(1, ux);
    s11 *= 2.0;
    s.s11 = inverse_transform(s11);
    SpectralField s12 = derivative(1, uy);
    s12 += derivative(2, ux);
    s.s12 = inverse_transform(s12);
    SpectralField s22 = derivative(2, uy);
    s22 *= 2.0;
    s.s22 = inverse_transform(s22);
    return s;
}

// ---------------------------------------------------------------------------
// Norms. L^p uses the equispaced-node sum times cell area (spectrally
// accurate for smooth integrands); homogeneous Sobolev norms use the
// Plancherel sum over nonzero modes.

inline double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double s = 0.0;
    for (double x : f.v) s += std::pow(std::abs(x), p);
    return std::pow(s * f.grid.cell_area(), 1.0 / p);
}

inline double linf_norm(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

inline double l2_norm(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s * f.grid.cell_area());
}

inline double sobolev_norm(const SpectralField& f, double s) {
    if (s < 0.0 && std::abs(f.zero_mode()) / f.grid.size() > 1e-12)
        throw std::invalid_argument("sobolev_norm: negative order needs a mean-zero field");
    const int n = f.grid.n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k1 = f.grid.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = f.grid.wavenumber(j);
            const double kk = k1 * k1 + k2 * k2;
            if (kk == 0.0) continue;
            acc += std::pow(kk, s) * std::norm(f(i, j));
        }
    }
    return f.grid.l / f.grid.size() * std::sqrt(acc);
}

inline double sobolev_norm(const ScalarField& f, double s) {
    if (s < 0.0) detail::require_mean_zero(f, "sobolev_norm");
    return sobolev_norm(transform(f), s);
}

// Vector versions (pointwise Euclidean magnitude).
inline double lp_norm(const VectorField& u, double p) {
    double s = 0.0;
    for (size_t k = 0; k < u.x.v.size(); ++k)
        s += std::pow(std::hypot(u.x.v[k], u.y.v[k]), p);
    return std::pow(s * u.grid().cell_area(), 1.0 / p);
}
inline double linf_norm(const VectorField& u) {
    double m = 0.0;
    for (size_t k = 0; k < u.x.v.size(); ++k) m = std::max(m, std::hypot(u.x.v[k], u.y.v[k]));
    return m;
}
inline double l2_norm(const VectorField& u) {
    double s = 0.0;
    for (size_t k = 0; k < u.x.v.size(); ++k)
        s += u.x.v[k] * u.x.v[k] + u.y.v[k] * u.y.v[k];
    return std::sqrt(s * u.grid().cell_area());
}
inline double sobolev_norm(const VectorField& u, double s) {
    const double a = sobolev_norm(u.x, s), b = sobolev_norm(u.y, s);
    return std::sqrt(a * a + b * b);
}

/// L^2 inner product by the node sum.
inline double inner(const ScalarField& a, const ScalarField& b) {
    a.check_same_grid(b);
    double s = 0.0;
    for (size_t k = 0; k < a.v.size(); ++k) s += a.v[k] * b.v[k];
    return s * a.grid.cell_area();
}

/// Strictly enforce a zero mean (kills roundoff drift of the zero mode).
inline void project_mean_zero(ScalarField& f) {
    const double m = f.mean();
    for (double& x : f.v) x -= m;
}

}  // namespace munse
