#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "munse/spectral.hpp"

namespace munse {

enum class AdvectionKind { semi_lagrangian_spectral, pseudo_spectral_rk };
enum class Interpolation { fourier, cubic };

/// Semi-Lagrangian with monotonized cubic interpolation is the only scheme
/// that preserves pointwise bounds, hence the only one admissible for
/// mollified-jump viscosity fields; the solver enforces that pairing.
struct AdvectionScheme {
    AdvectionKind kind = AdvectionKind::semi_lagrangian_spectral;
    Interpolation interpolation = Interpolation::cubic;
};

/// Forward Lagrangian map X(t, xi) sampled on grid nodes; identity at t=0.
struct FlowMap {
    Grid grid;
    std::vector<double> px, py;  // unwrapped positions, row-major like ScalarField
    double t = 0.0;

    FlowMap() = default;
    explicit FlowMap(const Grid& g) : grid(g), px(g.size()), py(g.size()) {
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                px[static_cast<size_t>(i) * g.n + j] = g.x1(i);
                py[static_cast<size_t>(i) * g.n + j] = g.x2(j);
            }
    }

    bool finite() const {
        for (double x : px)
            if (!std::isfinite(x)) return false;
        for (double y : py)
            if (!std::isfinite(y)) return false;
        return true;
    }
};

namespace detail {

// Monotonized-central slope; zero at extrema keeps the Hermite interpolant
// inside the local data bracket.
inline double mc_slope(double fm, double f0, double fp) {
    const double dm = f0 - fm, dp = fp - f0;
    if (dm * dp <= 0.0) return 0.0;
    const double c = 0.5 * (fp - fm);
    const double lim = 2.0 * std::min(std::abs(dm), std::abs(dp));
    return std::copysign(std::min(std::abs(c), lim), c);
}

inline double hermite(double f0, double f1, double d0, double d1, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * f1 +
           (t3 - t2) * d1;
}

inline double monotone_cubic_1d(double fmm, double fm, double fp, double fpp, double t) {
    const double d0 = mc_slope(fmm, fm, fp);
    const double d1 = mc_slope(fm, fp, fpp);
    return hermite(fm, fp, d0, d1, t);
}

inline double catmull_rom_1d(double fmm, double fm, double fp, double fpp, double t) {
    const double d0 = 0.5 * (fp - fmm);
    const double d1 = 0.5 * (fpp - fm);
    return hermite(fm, fp, d0, d1, t);
}

/// Tensor-product cubic interpolation of grid samples at physical (x, y),
/// periodic wrap, unit-spaced local coordinates.
template <bool Monotone>
double cubic_at(const ScalarField& f, double x, double y) {
    const Grid& g = f.grid;
    const double hx = g.h();
    double gx = x / hx, gy = y / hx;
    const int i0 = static_cast<int>(std::floor(gx));
    const int j0 = static_cast<int>(std::floor(gy));
    const double tx = gx - i0, ty = gy - j0;
    double col[4];
    for (int a = -1; a <= 2; ++a) {
        const int i = i0 + a;
        const double fmm = f.at_wrapped(i, j0 - 1);
        const double fm = f.at_wrapped(i, j0);
        const double fp = f.at_wrapped(i, j0 + 1);
        const double fpp = f.at_wrapped(i, j0 + 2);
        col[a + 1] = Monotone ? monotone_cubic_1d(fmm, fm, fp, fpp, ty)
                              : catmull_rom_1d(fmm, fm, fp, fpp, ty);
    }
    return Monotone ? monotone_cubic_1d(col[0], col[1], col[2], col[3], tx)
                    : catmull_rom_1d(col[0], col[1], col[2], col[3], tx);
}

constexpr int kFourierUpsample = 8;

/// Zero-padded spectral upsampling; the result carries the fine grid.
inline ScalarField spectral_upsample(const ScalarField& f, int factor) {
    const int n = f.grid.n, nf = n * factor;
    SpectralField w = transform(f);
    Grid fine(nf, f.grid.l, DealiasRule::none);
    SpectralField wf(fine);
    const double scale = static_cast<double>(factor) * factor;
    for (int i = 0; i < n; ++i) {
        const int m1 = f.grid.mode(i);
        const int ii = m1 >= 0 ? m1 : nf + m1;
        for (int j = 0; j < n; ++j) {
            const int m2 = f.grid.mode(j);
            const int jj = m2 >= 0 ? m2 : nf + m2;
            wf(ii, jj) = w(i, j) * scale;
        }
    }
    return inverse_transform(wf);
}

}  // namespace detail

/// Samples of f at arbitrary points. The fourier flavor evaluates the
/// trigonometric interpolant via 8x zero-padded upsampling plus local
/// cubic; the cubic flavor is monotonized (bound-preserving) on the
/// original grid.
class Interpolant {
  public:
    Interpolant(const ScalarField& f, Interpolation kind) : kind_(kind) {
        if (kind_ == Interpolation::fourier)
            fine_ = detail::spectral_upsample(f, detail::kFourierUpsample);
        else
            fine_ = f;
    }

    double operator()(double x, double y) const {
        if (kind_ == Interpolation::fourier) return detail::cubic_at<false>(fine_, x, y);
        return detail::cubic_at<true>(fine_, x, y);
    }

  private:
    Interpolation kind_;
    ScalarField fine_;
};

namespace detail {

struct DeparturePoints {
    std::vector<double> x, y;
};

/// RK2 midpoint backtracking of grid nodes through the (frozen) velocity.
inline DeparturePoints departure_points(const VectorField& u, double dt, Interpolation interp) {
    const Grid& g = u.grid();
    Interpolant ux(u.x, interp), uy(u.y, interp);
    DeparturePoints d;
    d.x.resize(g.size());
    d.y.resize(g.size());
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            const size_t k = static_cast<size_t>(i) * g.n + j;
            const double x = g.x1(i), y = g.x2(j);
            const double mx = x - 0.5 * dt * u.x(i, j);
            const double my = y - 0.5 * dt * u.y(i, j);
            d.x[k] = x - dt * ux(mx, my);
            d.y[k] = y - dt * uy(mx, my);
        }
    }
    return d;
}

inline ScalarField interpolate_at(const ScalarField& f, const DeparturePoints& d,
                                  Interpolation interp) {
    Interpolant fi(f, interp);
    ScalarField out(f.grid);
    for (size_t k = 0; k < out.v.size(); ++k) out.v[k] = fi(d.x[k], d.y[k]);
    return out;
}

inline void require_cfl(const VectorField& u, double dt, const char* who) {
    const double umax = std::max(linf_norm(u), 1e-8);
    if (dt * umax > u.grid().h() * (1.0 + 1e-9))
        throw std::invalid_argument(std::string(who) + ": dt violates the advective CFL bound");
}

/// -u . grad f with dealiased products (frozen u).
inline ScalarField advection_rhs(const ScalarField& f, const VectorField& u) {
    VectorField gf = gradient(f);
    SpectralField s = product_spectrum(u.x, gf.x);
    s += product_spectrum(u.y, gf.y);
    ScalarField out = inverse_transform(s);
    out *= -1.0;
    return out;
}

}  // namespace detail

/// One advection step of a passive scalar by a divergence-free velocity.
/// Semi-Lagrangian: characteristics backtracked with RK2 midpoint, values
/// interpolated. Pseudo-spectral: Heun step of -u.grad f with the velocity
/// frozen over the step (the solver owns the full coupling).
inline ScalarField advect_scalar(const ScalarField& f, const VectorField& u, double dt,
                                 const AdvectionScheme& scheme) {
    detail::require_cfl(u, dt, "advect_scalar");
    if (dt == 0.0) return f;
    if (scheme.kind == AdvectionKind::semi_lagrangian_spectral) {
        auto dep = detail::departure_points(u, dt, scheme.interpolation);
        return detail::interpolate_at(f, dep, scheme.interpolation);
    }
    ScalarField r0 = detail::advection_rhs(f, u);
    ScalarField f1 = f;
    for (size_t k = 0; k < f1.v.size(); ++k) f1.v[k] += dt * r0.v[k];
    ScalarField r1 = detail::advection_rhs(f1, u);
    ScalarField out = f;
    for (size_t k = 0; k < out.v.size(); ++k) out.v[k] += 0.5 * dt * (r0.v[k] + r1.v[k]);
    return out;
}

/// All four entries of grad u, spectrally computed. Entry dij = d_i u_j.
struct VelocityGradient {
    ScalarField d11, d12, d21, d22;  // d11 = d1 u1, d12 = d1 u2, d21 = d2 u1, d22 = d2 u2

    static VelocityGradient of(const VectorField& u) {
        SpectralField ux = transform(u.x), uy = transform(u.y);
        return {inverse_transform(derivative(1, ux)), inverse_transform(derivative(1, uy)),
                inverse_transform(derivative(2, ux)), inverse_transform(derivative(2, uy))};
    }

    /// tau (x) tau : grad u  =  sum_ij tau_i tau_j d_i u_j
    ScalarField contract(const VectorField& tau) const {
        ScalarField s(d11.grid);
        for (size_t k = 0; k < s.v.size(); ++k) {
            const double t1 = tau.x.v[k], t2 = tau.y.v[k];
            s.v[k] = t1 * t1 * d11.v[k] + t1 * t2 * (d12.v[k] + d21.v[k]) + t2 * t2 * d22.v[k];
        }
        return s;
    }
};

/// Transport with stretching: d_t tau + u.grad tau = tau.grad u.
/// Strang split: half source, advect both components, half source.
inline VectorField step_tau(const VectorField& tau, const VectorField& u, double dt,
                            const AdvectionScheme& scheme) {
    detail::require_cfl(u, dt, "step_tau");
    VelocityGradient gu = VelocityGradient::of(u);
    auto half_source = [&](VectorField& t) {
        for (size_t k = 0; k < t.x.v.size(); ++k) {
            const double t1 = t.x.v[k], t2 = t.y.v[k];
            t.x.v[k] += 0.5 * dt * (t1 * gu.d11.v[k] + t2 * gu.d21.v[k]);
            t.y.v[k] += 0.5 * dt * (t1 * gu.d12.v[k] + t2 * gu.d22.v[k]);
        }
    };
    VectorField out = tau;
    half_source(out);
    out.x = advect_scalar(out.x, u, dt, scheme);
    out.y = advect_scalar(out.y, u, dt, scheme);
    half_source(out);
    return out;
}

/// Unit-tangent evolution d_t taub + u.grad taub = d_taub u - taub (taub(x)taub : grad u),
/// followed by renormalization. Aborts if the field degenerates to |taub| < 1/2
/// before the projection.
inline VectorField step_unit_tau(const VectorField& taub, const VectorField& u, double dt,
                                 const AdvectionScheme& scheme) {
    detail::require_cfl(u, dt, "step_unit_tau");
    for (size_t k = 0; k < taub.x.v.size(); ++k) {
        const double m = std::hypot(taub.x.v[k], taub.y.v[k]);
        if (std::abs(m - 1.0) > 1e-8)
            throw std::invalid_argument("step_unit_tau: input is not unit length");
    }
    VelocityGradient gu = VelocityGradient::of(u);
    auto half_source = [&](VectorField& t) {
        for (size_t k = 0; k < t.x.v.size(); ++k) {
            const double t1 = t.x.v[k], t2 = t.y.v[k];
            const double s = t1 * t1 * gu.d11.v[k] + t1 * t2 * (gu.d12.v[k] + gu.d21.v[k]) +
                             t2 * t2 * gu.d22.v[k];
            const double f1 = t1 * gu.d11.v[k] + t2 * gu.d21.v[k] - t1 * s;
            const double f2 = t1 * gu.d12.v[k] + t2 * gu.d22.v[k] - t2 * s;
            t.x.v[k] += 0.5 * dt * f1;
            t.y.v[k] += 0.5 * dt * f2;
        }
    };
    VectorField out = taub;
    half_source(out);
    out.x = advect_scalar(out.x, u, dt, scheme);
    out.y = advect_scalar(out.y, u, dt, scheme);
    half_source(out);
    for (size_t k = 0; k < out.x.v.size(); ++k) {
        const double m = std::hypot(out.x.v[k], out.y.v[k]);
        if (m < 0.5)
            throw std::runtime_error("step_unit_tau: tangent field degenerated (|tau| < 1/2)");
        out.x.v[k] /= m;
        out.y.v[k] /= m;
    }
    return out;
}

/// Tangential viscosity derivative: d_t g + u.grad g = -g (taub . d_taub u).
/// The multiplicative source is applied exactly (exponential halves around
/// the advection), which preserves sign and the exp(dt |grad u|_inf) bound.
inline ScalarField step_dtau_mu(const ScalarField& gf, const VectorField& taub,
                                const VectorField& u, double dt, const AdvectionScheme& scheme) {
    detail::require_cfl(u, dt, "step_dtau_mu");
    VelocityGradient gu = VelocityGradient::of(u);
    ScalarField s = gu.contract(taub);  // taub . d_taub u = taub(x)taub : grad u
    ScalarField out = gf;
    for (size_t k = 0; k < out.v.size(); ++k) out.v[k] *= std::exp(-0.5 * dt * s.v[k]);
    out = advect_scalar(out, u, dt, scheme);
    for (size_t k = 0; k < out.v.size(); ++k) out.v[k] *= std::exp(-0.5 * dt * s.v[k]);
    return out;
}

/// RK2 update of the forward flow map by the (frozen) velocity.
inline FlowMap update_flow_map(const FlowMap& X, const VectorField& u, double dt,
                               Interpolation interp = Interpolation::cubic) {
    Interpolant ux(u.x, interp), uy(u.y, interp);
    FlowMap out = X;
    for (size_t k = 0; k < out.px.size(); ++k) {
        const double x = X.px[k], y = X.py[k];
        const double mx = x + 0.5 * dt * ux(x, y);
        const double my = y + 0.5 * dt * uy(x, y);
        out.px[k] = x + dt * ux(mx, my);
        out.py[k] = y + dt * uy(mx, my);
    }
    out.t = X.t + dt;
    return out;
}

}  // namespace munse
