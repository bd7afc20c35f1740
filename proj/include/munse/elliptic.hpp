#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "munse/spectral.hpp"

namespace munse {

/// Declared pointwise bounds 0 < mu_lo <= mu(x) <= mu_hi.
struct ViscosityBounds {
    double mu_lo = 1.0;
    double mu_hi = 1.0;

    ViscosityBounds() = default;
    ViscosityBounds(double lo, double hi) : mu_lo(lo), mu_hi(hi) {
        if (!(lo > 0.0) || !(hi >= lo))
            throw std::invalid_argument("ViscosityBounds: need 0 < mu_lo <= mu_hi");
    }

    static ViscosityBounds of(const ScalarField& mu) {
        return ViscosityBounds(mu.min(), mu.max());
    }

    double contrast() const { return mu_hi / mu_lo; }
    double midpoint() const { return 0.5 * (mu_lo + mu_hi); }

    void check(const ScalarField& mu) const {
        const double slack = 1e-10 * mu_hi;
        if (mu.min() < mu_lo - slack || mu.max() > mu_hi + slack)
            throw std::invalid_argument(
                "viscosity field violates declared bounds [" + std::to_string(mu_lo) + ", " +
                std::to_string(mu_hi) + "]: range [" + std::to_string(mu.min()) + ", " +
                std::to_string(mu.max()) + "]");
    }
};

struct KrylovReport {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

// ---------------------------------------------------------------------------
// Pure double-Riesz factors P1 = R2R2 - R1R1 and P2 = 2 R1R2. These satisfy
// P1^2 + P2^2 = Id on mean-zero fields and are self-adjoint.

inline SpectralField apply_p1(const SpectralField& f) {
    return detail::apply_real_symbol(f, [](double k1, double k2) {
        const double kk = k1 * k1 + k2 * k2;
        return kk == 0.0 ? 0.0 : (k2 * k2 - k1 * k1) / kk;
    });
}

inline SpectralField apply_p2(const SpectralField& f) {
    return detail::apply_real_symbol(f, [](double k1, double k2) {
        const double kk = k1 * k1 + k2 * k2;
        return kk == 0.0 ? 0.0 : 2.0 * k1 * k2 / kk;
    });
}

inline ScalarField apply_p1(const ScalarField& om) {
    detail::require_mean_zero(om, "apply_p1");
    return inverse_transform(apply_p1(transform(om)));
}

inline ScalarField apply_p2(const ScalarField& om) {
    detail::require_mean_zero(om, "apply_p2");
    return inverse_transform(apply_p2(transform(om)));
}

namespace detail {

/// Both Riesz factors of a spectrum in physical space.
inline std::pair<ScalarField, ScalarField> riesz_factors(const SpectralField& w) {
    return {inverse_transform(apply_p1(w)), inverse_transform(apply_p2(w))};
}

/// a = P1(mu P1 w) + P2(mu P2 w), products dealiased per the grid rule.
/// Operates on the dealiased spectrum, i.e. the Galerkin truncation of the
/// continuum operator; on band-limited fields the positivity bracket and
/// the constant-coefficient collapse are exact.
inline SpectralField rmu_spectrum(const ScalarField& mu, const SpectralField& w) {
    auto [p1, p2] = riesz_factors(w);
    SpectralField m1 = product_spectrum(mu, p1);
    SpectralField m2 = product_spectrum(mu, p2);
    SpectralField a = apply_p1(m1);
    a += apply_p2(m2);
    return a;
}

/// b = P1(mu P2 w) - P2(mu P1 w).
inline SpectralField qmu_spectrum(const ScalarField& mu, const SpectralField& w) {
    auto [p1, p2] = riesz_factors(w);
    SpectralField m1 = product_spectrum(mu, p1);
    SpectralField m2 = product_spectrum(mu, p2);
    SpectralField b = apply_p1(m2);
    b -= apply_p2(m1);
    return b;
}

inline SpectralField masked_transform(const ScalarField& f) {
    SpectralField w = transform(f);
    dealias(w);
    return w;
}

}  // namespace detail

/// Good unknown a = R_mu omega (divergence-free stress potential).
inline ScalarField apply_rmu(const ScalarField& mu, const ScalarField& omega,
                             const ViscosityBounds& bounds) {
    detail::require_mean_zero(omega, "apply_rmu");
    bounds.check(mu);
    return inverse_transform(detail::rmu_spectrum(mu, detail::masked_transform(omega)));
}

/// Good unknown b = Q_mu omega (curl-free stress potential).
inline ScalarField apply_qmu(const ScalarField& mu, const ScalarField& omega,
                             const ViscosityBounds& bounds) {
    detail::require_mean_zero(omega, "apply_qmu");
    bounds.check(mu);
    return inverse_transform(detail::qmu_spectrum(mu, detail::masked_transform(omega)));
}

namespace detail {

// Second-order factors (d22 - d11) and (2 d12) as real symbols.
inline SpectralField apply_d1(const SpectralField& f) {
    return apply_real_symbol(f, [](double k1, double k2) { return k1 * k1 - k2 * k2; });
}
inline SpectralField apply_d2(const SpectralField& f) {
    return apply_real_symbol(f, [](double k1, double k2) { return -2.0 * k1 * k2; });
}

}  // namespace detail

/// Fourth-order operator L_mu phi = (d22-d11) mu (d22-d11) phi + (2d12) mu (2d12) phi.
/// Satisfies L_mu phi = Delta(R_mu Delta phi) up to dealiasing.
inline ScalarField apply_lmu(const ScalarField& mu, const ScalarField& phi) {
    detail::require_mean_zero(phi, "apply_lmu");
    SpectralField w = detail::masked_transform(phi);
    ScalarField d1 = inverse_transform(detail::apply_d1(w));
    ScalarField d2 = inverse_transform(detail::apply_d2(w));
    SpectralField out = detail::apply_d1(product_spectrum(mu, d1));
    out += detail::apply_d2(product_spectrum(mu, d2));
    return inverse_transform(out);
}

/// Companion operator A_mu phi = (d22-d11) mu (2d12) phi - (2d12) mu (d22-d11) phi;
/// satisfies A_mu phi = Delta(Q_mu Delta phi) up to dealiasing.
inline ScalarField apply_amu(const ScalarField& mu, const ScalarField& phi) {
    detail::require_mean_zero(phi, "apply_amu");
    SpectralField w = detail::masked_transform(phi);
    ScalarField d1 = inverse_transform(detail::apply_d1(w));
    ScalarField d2 = inverse_transform(detail::apply_d2(w));
    SpectralField out = detail::apply_d1(product_spectrum(mu, d2));
    out -= detail::apply_d2(product_spectrum(mu, d1));
    return inverse_transform(out);
}

// ---------------------------------------------------------------------------
// Stress decomposition div(mu Su) = grad^perp a + grad b.

struct StressDecomposition {
    ScalarField a;
    ScalarField b;
    double residual = 0.0;  // relative L2 gap between the two assembly routes
};

inline StressDecomposition stress_decompose(const ScalarField& mu, const VectorField& u,
                                            const ViscosityBounds& bounds) {
    bounds.check(mu);
    ScalarField dv = divergence(u);
    const double gu = sobolev_norm(u.x, 1.0) + sobolev_norm(u.y, 1.0);
    if (gu > 0.0 && l2_norm(dv) > 1e-8 * gu)
        throw std::invalid_argument("stress_decompose: velocity is not divergence-free");

    ScalarField omega = curl(u);
    project_mean_zero(omega);
    SpectralField w = detail::masked_transform(omega);

    StressDecomposition out;
    SpectralField ah = detail::rmu_spectrum(mu, w);
    SpectralField bh = detail::qmu_spectrum(mu, w);
    out.a = inverse_transform(ah);
    out.b = inverse_transform(bh);

    // Route 1: pointwise mu*Su, then divergence.
    StrainField s = strain(u);
    SpectralField m11 = product_spectrum(mu, s.s11);
    SpectralField m12 = product_spectrum(mu, s.s12);
    SpectralField m22 = product_spectrum(mu, s.s22);
    SpectralField f1 = derivative(1, m11);
    f1 += derivative(2, m12);
    SpectralField f2 = derivative(1, m12);
    f2 += derivative(2, m22);

    // Route 2: grad^perp a + grad b.
    SpectralField g1 = derivative(1, bh);
    g1 -= derivative(2, ah);
    SpectralField g2 = derivative(2, bh);
    g2 += derivative(1, ah);

    VectorField f(inverse_transform(f1), inverse_transform(f2));
    VectorField g(inverse_transform(g1), inverse_transform(g2));
    const double fn = l2_norm(f);
    VectorField diff(f.x - g.x, f.y - g.y);
    out.residual = fn > 0.0 ? l2_norm(diff) / fn : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Conjugate-gradient inversion of R_mu. The operator is self-adjoint with
// Rayleigh quotients in [mu_lo, mu_hi]; the preconditioner divides by the
// mean viscosity (exact for constant mu).

inline int invert_rmu_max_iterations(const ViscosityBounds& b, double tol) {
    return static_cast<int>(std::ceil(10.0 * std::sqrt(b.contrast()) * std::log(1.0 / tol)));
}

inline std::pair<ScalarField, KrylovReport> invert_rmu(const ScalarField& mu,
                                                       const ScalarField& a, double tol,
                                                       const ViscosityBounds& bounds) {
    if (!(tol > 0.0) || tol > 1e-4)
        throw std::invalid_argument("invert_rmu: tol must lie in (0, 1e-4]");
    detail::require_mean_zero(a, "invert_rmu");
    bounds.check(mu);

    const Grid& g = a.grid;
    ScalarField rhs = inverse_transform(detail::masked_transform(a));
    project_mean_zero(rhs);
    const double rhs_norm = l2_norm(rhs);

    ScalarField x(g);
    KrylovReport rep;
    if (rhs_norm == 0.0) {
        rep.converged = true;
        return {x, rep};
    }

    const double inv_mean = 1.0 / mu.mean();
    const int max_it = invert_rmu_max_iterations(bounds, tol);

    ScalarField r = rhs;
    ScalarField z = inv_mean * r;
    ScalarField p = z;
    double rz = inner(r, z);
    for (int it = 1; it <= max_it; ++it) {
        ScalarField ap = inverse_transform(detail::rmu_spectrum(mu, detail::masked_transform(p)));
        const double pap = inner(p, ap);
        if (!(pap > 0.0)) throw std::runtime_error("invert_rmu: operator lost positivity");
        const double alpha = rz / pap;
        for (size_t k = 0; k < x.v.size(); ++k) {
            x.v[k] += alpha * p.v[k];
            r.v[k] -= alpha * ap.v[k];
        }
        rep.iterations = it;
        rep.residual = l2_norm(r) / rhs_norm;
        if (rep.residual <= tol) {
            rep.converged = true;
            return {x, rep};
        }
        z = inv_mean * r;
        const double rz_new = inner(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (size_t k = 0; k < p.v.size(); ++k) p.v[k] = z.v[k] + beta * p.v[k];
    }
    throw std::runtime_error("invert_rmu: no convergence in " + std::to_string(max_it) +
                             " iterations (residual " + std::to_string(rep.residual) +
                             "); input is ill-conditioned for the declared bounds");
}

// ---------------------------------------------------------------------------
// Randomized probes.

/// Random mean-zero field, band-limited to the grid's dealias cutoff.
/// decay = 0 gives white-in-band noise; decay > 0 damps mode m by
/// (1+|m|^2)^(-decay/2).
inline ScalarField random_mean_zero_field(const Grid& g, std::mt19937_64& rng,
                                          double decay = 0.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ScalarField noise(g);
    for (double& x : noise.v) x = gauss(rng);
    SpectralField w = transform(noise);
    const int n = g.n;
    const int cut = g.dealias == DealiasRule::two_thirds ? g.dealias_cutoff() : n / 2 - 1;
    for (int i = 0; i < n; ++i) {
        const int m1 = g.mode(i);
        for (int j = 0; j < n; ++j) {
            const int m2 = g.mode(j);
            if ((m1 == 0 && m2 == 0) || std::abs(m1) > cut || std::abs(m2) > cut) {
                w(i, j) = 0.0;
            } else if (decay > 0.0) {
                w(i, j) *= std::pow(1.0 + m1 * m1 + m2 * m2, -0.5 * decay);
            }
        }
    }
    ScalarField f = inverse_transform(w);
    project_mean_zero(f);
    const double nrm = l2_norm(f);
    if (nrm > 0.0) f *= 1.0 / nrm;
    return f;
}

/// Localized mean-zero bump of random center and width (a few cells).
inline ScalarField random_bump_field(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double cx = unif(rng) * g.l, cy = unif(rng) * g.l;
    const double w = (1.5 + 2.5 * unif(rng)) * g.h();
    ScalarField f = sample(g, [&](double x, double y) {
        double dx = std::remainder(x - cx, g.l);
        double dy = std::remainder(y - cy, g.l);
        return std::exp(-(dx * dx + dy * dy) / (2.0 * w * w));
    });
    SpectralField s = transform(f);
    dealias(s);
    f = inverse_transform(s);
    project_mean_zero(f);
    const double nrm = l2_norm(f);
    if (nrm > 0.0) f *= 1.0 / nrm;
    return f;
}

/// Min/max of the Rayleigh quotient <R_mu w, w>/|w|^2 over random mean-zero
/// fields; both ends must land in [mu_lo, mu_hi].
inline std::pair<double, double> rayleigh_bounds(const ScalarField& mu, int sample_count,
                                                 const ViscosityBounds& bounds,
                                                 unsigned long long seed = 12345) {
    if (sample_count < 1) throw std::invalid_argument("rayleigh_bounds: sample_count >= 1");
    bounds.check(mu);
    std::mt19937_64 rng(seed);
    double qmin = std::numeric_limits<double>::infinity();
    double qmax = -qmin;
    for (int s = 0; s < sample_count; ++s) {
        ScalarField w = random_mean_zero_field(mu.grid, rng, s % 2 == 0 ? 0.0 : 2.0);
        auto [p1, p2] = detail::riesz_factors(transform(w));
        double num = 0.0, den = 0.0;
        for (size_t k = 0; k < w.v.size(); ++k) {
            num += mu.v[k] * (p1.v[k] * p1.v[k] + p2.v[k] * p2.v[k]);
            den += w.v[k] * w.v[k];
        }
        const double q = num / den;
        qmin = std::min(qmin, q);
        qmax = std::max(qmax, q);
    }
    return {qmin, qmax};
}

/// Randomized lower-bound estimate of |R_mu^{-1}|_{L^p -> L^p}: the max of
/// |invert_rmu(mu, g)|_p / |g|_p over an ensemble of smooth fields and
/// localized bumps. A lower bound on the true operator norm, nothing more.
inline double lp_norm_probe(const ScalarField& mu, double p, int ensemble_size,
                            const ViscosityBounds& bounds, unsigned long long seed = 777,
                            double inner_tol = 1e-8) {
    if (!(p >= 2.0) || p > 8.0) throw std::invalid_argument("lp_norm_probe: p must be in [2, 8]");
    if (ensemble_size < 16) throw std::invalid_argument("lp_norm_probe: ensemble_size >= 16");
    bounds.check(mu);
    std::mt19937_64 rng(seed);
    double best = 0.0;
    for (int s = 0; s < ensemble_size; ++s) {
        ScalarField gfield = (s % 2 == 0) ? random_mean_zero_field(mu.grid, rng, 1.0)
                                          : random_bump_field(mu.grid, rng);
        auto [om, rep] = invert_rmu(mu, gfield, inner_tol, bounds);
        (void)rep;
        best = std::max(best, lp_norm(om, p) / lp_norm(gfield, p));
    }
    return best;
}

struct EpsilonProbeResult {
    std::vector<std::pair<double, double>> sweep;  // (p, estimate)
    double onset = 2.0;  // largest probed p whose estimate stayed below threshold
};

/// Sweep lp_norm_probe over an ascending p grid (all entries > 2) and report
/// the largest p whose estimate stays at or below the threshold. Empirical
/// thresholding only; no claim about the true isomorphism range.
inline EpsilonProbeResult epsilon_probe(const ScalarField& mu, const std::vector<double>& p_grid,
                                        double blowup_threshold, const ViscosityBounds& bounds,
                                        int ensemble_size = 16, unsigned long long seed = 777) {
    if (p_grid.empty()) throw std::invalid_argument("epsilon_probe: empty p grid");
    for (size_t i = 0; i < p_grid.size(); ++i) {
        if (!(p_grid[i] > 2.0)) throw std::invalid_argument("epsilon_probe: p grid must be > 2");
        if (i > 0 && !(p_grid[i] > p_grid[i - 1]))
            throw std::invalid_argument("epsilon_probe: p grid must ascend");
    }
    EpsilonProbeResult res;
    for (double p : p_grid) {
        const double est = lp_norm_probe(mu, p, ensemble_size, bounds, seed);
        res.sweep.emplace_back(p, est);
        if (est <= blowup_threshold) res.onset = p;
    }
    return res;
}

}  // namespace munse
