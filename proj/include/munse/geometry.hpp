#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "munse/transport.hpp"

namespace munse {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

/// Declarative viscosity patch: disc of radius `radius` at `center` carrying
/// mu_in, embedded in mu_out, with a mollified transition of physical width
/// mollify_width across the circle. Optional radial profiles replace the
/// constant values (profile argument is r/radius).
struct PatchSpec {
    Vec2 center;
    double radius = 1.0;
    double mu_in = 2.0;
    double mu_out = 1.0;
    double mollify_width = 0.0;  // physical units; >= 2 grid cells
    std::optional<std::function<double(double)>> mu_in_profile;
    std::optional<std::function<double(double)>> mu_out_profile;
};

/// Concentric viscosity layers: values[j] on the annulus (radii[j-1], radii[j])
/// (radii[0] innermost), 1 outside radii.back(); jumps mollified.
struct LayerSpec {
    Vec2 center;
    std::vector<double> radii;
    std::vector<double> values;
    double mollify_width = 0.0;
};

namespace detail {

inline double quintic_smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

/// Shortest displacement on the torus.
inline Vec2 torus_delta(double x, double y, const Vec2& c, double l) {
    return {std::remainder(x - c.x, l), std::remainder(y - c.y, l)};
}

inline void check_patch_fit(const Grid& g, double radius, double reach, const char* who) {
    if (!(radius > 0.0)) throw std::invalid_argument(std::string(who) + ": radius must be positive");
    if (reach > 0.5 * g.l)
        throw std::invalid_argument(std::string(who) +
                                    ": construction does not fit inside the torus half-period");
}

inline void check_mollify(const Grid& g, double w, const char* who) {
    if (w < 2.0 * g.h() - 1e-12)
        throw std::invalid_argument(std::string(who) + ": mollify_width must be >= 2 grid cells");
}

/// Two-sided mollified indicator blend across r = R (1 inside, 0 outside).
inline double radial_blend(double r, double R, double w) {
    return quintic_smoothstep((R + 0.5 * w - r) / w);
}

}  // namespace detail

/// Mollified patch viscosity; exact mu_in/mu_out away from the collar,
/// monotone radial transition inside it.
inline ScalarField make_patch_mu(const Grid& g, const PatchSpec& spec) {
    detail::check_patch_fit(g, spec.radius, 3.0 * spec.radius, "make_patch_mu");
    detail::check_mollify(g, spec.mollify_width, "make_patch_mu");
    return sample(g, [&](double x, double y) {
        const Vec2 d = detail::torus_delta(x, y, spec.center, g.l);
        const double r = std::hypot(d.x, d.y);
        const double rho = r / spec.radius;
        const double vin = spec.mu_in_profile ? (*spec.mu_in_profile)(rho) : spec.mu_in;
        const double vout = spec.mu_out_profile ? (*spec.mu_out_profile)(rho) : spec.mu_out;
        const double b = detail::radial_blend(r, spec.radius, spec.mollify_width);
        return vout + (vin - vout) * b;
    });
}

/// Mollified concentric-layer viscosity; far-field value 1.
inline ScalarField make_layer_mu(const Grid& g, const LayerSpec& spec) {
    if (spec.radii.empty() || spec.radii.size() != spec.values.size())
        throw std::invalid_argument("make_layer_mu: radii/values size mismatch");
    for (size_t j = 1; j < spec.radii.size(); ++j)
        if (!(spec.radii[j] > spec.radii[j - 1]))
            throw std::invalid_argument("make_layer_mu: radii must strictly increase");
    detail::check_patch_fit(g, spec.radii.front(), 15.0 / 8.0 * spec.radii.back(),
                            "make_layer_mu");
    detail::check_mollify(g, spec.mollify_width, "make_layer_mu");
    return sample(g, [&](double x, double y) {
        const Vec2 d = detail::torus_delta(x, y, spec.center, g.l);
        const double r = std::hypot(d.x, d.y);
        double mu = 1.0;  // outside everything
        for (size_t j = spec.radii.size(); j-- > 0;) {
            const double b = detail::radial_blend(r, spec.radii[j], spec.mollify_width);
            mu = mu + (spec.values[j] - mu) * b;
        }
        return mu;
    });
}

/// Mollified two-value checkerboard in {1/K, K} with `cells` periods per
/// dimension; the classic stress-concentration pattern for the L^p probes.
inline ScalarField make_checkerboard_mu(const Grid& g, double contrast, int cells,
                                        double width_cells = 2.0) {
    if (!(contrast >= 1.0)) throw std::invalid_argument("make_checkerboard_mu: K >= 1");
    const double w = width_cells * g.h();
    const double scale = g.l / (cells * kTwoPi);
    return sample(g, [&](double x, double y) {
        const double sx = std::tanh(scale * std::sin(cells * kTwoPi * x / g.l) / w);
        const double sy = std::tanh(scale * std::sin(cells * kTwoPi * y / g.l) / w);
        const double lo = 1.0 / contrast, hi = contrast;
        return 0.5 * (hi + lo) + 0.5 * (hi - lo) * sx * sy;
    });
}

namespace detail {

/// Collar angle interpolation shared by the disc and layer constructions.
/// Inner collars sweep from e1 (s=0) to e_theta (s=1) via
/// tau = (sin A, cos A), A = -(3pi/2)(1-s) - theta s; outer collars return
/// via tau = (-sin A, cos A), A = (3pi/2)s + theta(1-s). The direction field
/// is exact e_theta / e1 outside the collars.
struct CollarBands {
    double e1_inner_end;     // e1 for r <= this
    double collar_in_end;    // inner collar on [e1_inner_end, collar_in_end]
    double etheta_end;       // e_theta on [collar_in_end, etheta_end]
    double collar_out_end;   // outer collar on [etheta_end, collar_out_end]; e1 beyond
};

inline Vec2 collar_tau(double r, double theta, const CollarBands& b) {
    if (r <= b.e1_inner_end || r >= b.collar_out_end) return {1.0, 0.0};
    if (r < b.collar_in_end) {
        const double s = (r - b.e1_inner_end) / (b.collar_in_end - b.e1_inner_end);
        const double A = -1.5 * std::numbers::pi * (1.0 - s) - theta * s;
        return {std::sin(A), std::cos(A)};
    }
    if (r <= b.etheta_end) return {-std::sin(theta), std::cos(theta)};
    const double s = (r - b.etheta_end) / (b.collar_out_end - b.etheta_end);
    const double A = 1.5 * std::numbers::pi * s + theta * (1.0 - s);
    return {-std::sin(A), std::cos(A)};
}

inline VectorField sample_unit_tau(const Grid& g, const Vec2& center, const CollarBands& b) {
    VectorField tau(g);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            const Vec2 d = torus_delta(g.x1(i), g.x2(j), center, g.l);
            const double r = std::hypot(d.x, d.y);
            const double theta = (r == 0.0) ? 0.0 : std::atan2(d.y, d.x);
            Vec2 t = collar_tau(r, theta, b);
            const double m = std::hypot(t.x, t.y);
            tau.x(i, j) = t.x / m;
            tau.y(i, j) = t.y / m;
        }
    }
    return tau;
}

}  // namespace detail

/// Unit tangential field for a disc patch: e_theta on the annulus
/// r/radius in [3/4, 5/4], e1 inside r/radius <= 1/4 and outside >= 7/4,
/// angle-interpolated collars in between. Tangent to the patch circle.
inline VectorField make_disc_tau(const Grid& g, const PatchSpec& spec) {
    detail::check_patch_fit(g, spec.radius, 3.0 * spec.radius, "make_disc_tau");
    const double R = spec.radius;
    detail::CollarBands b{0.25 * R, 0.75 * R, 1.25 * R, 1.75 * R};
    return detail::sample_unit_tau(g, spec.center, b);
}

/// Unit tangential field for concentric layers: e_theta across the whole
/// annulus [r1, rN], smooth collars inward of r1 and outward of rN.
inline VectorField make_layer_tau(const Grid& g, const LayerSpec& spec) {
    if (spec.radii.empty()) throw std::invalid_argument("make_layer_tau: no radii");
    const double r1 = spec.radii.front(), rN = spec.radii.back();
    detail::check_patch_fit(g, r1, 15.0 / 8.0 * rN, "make_layer_tau");
    detail::CollarBands b{r1 / 8.0, r1, rN, 15.0 / 8.0 * rN};
    return detail::sample_unit_tau(g, spec.center, b);
}

// ---------------------------------------------------------------------------
// Interface curves.

struct InterfaceCurve {
    std::vector<Vec2> points;  // ordered, closed (last connects to first)
    double t = 0.0;
};

inline InterfaceCurve circle_curve(const Vec2& center, double radius, int npoints,
                                   double t = 0.0) {
    InterfaceCurve c;
    c.t = t;
    c.points.reserve(npoints);
    for (int k = 0; k < npoints; ++k) {
        const double a = kTwoPi * k / npoints;
        c.points.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    return c;
}

namespace detail {

inline double segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto clamp01 = [](double t) { return std::clamp(t, 0.0, 1.0); };
    auto point_seg = [&](const Vec2& p, const Vec2& s0, const Vec2& s1) {
        const double vx = s1.x - s0.x, vy = s1.y - s0.y;
        const double L2 = vx * vx + vy * vy;
        double t = L2 > 0 ? clamp01(((p.x - s0.x) * vx + (p.y - s0.y) * vy) / L2) : 0.0;
        return std::hypot(p.x - (s0.x + t * vx), p.y - (s0.y + t * vy));
    };
    // proper intersection check
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return 0.0;
    return std::min(std::min(point_seg(c, a, b), point_seg(d, a, b)),
                    std::min(point_seg(a, c, d), point_seg(b, c, d)));
}

}  // namespace detail

/// True when no two non-adjacent segments come within tol of each other.
inline bool curve_is_simple(const InterfaceCurve& c, double tol) {
    const int m = static_cast<int>(c.points.size());
    if (m < 3) return false;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 2; j < m; ++j) {
            if (i == 0 && j == m - 1) continue;  // adjacent around the wrap
            const double d = detail::segment_distance(c.points[i], c.points[(i + 1) % m],
                                                      c.points[j], c.points[(j + 1) % m]);
            if (d < tol) return false;
        }
    }
    return true;
}

inline double curve_arclength(const InterfaceCurve& c) {
    double s = 0.0;
    const int m = static_cast<int>(c.points.size());
    for (int i = 0; i < m; ++i) {
        const Vec2& p = c.points[i];
        const Vec2& q = c.points[(i + 1) % m];
        s += std::hypot(q.x - p.x, q.y - p.y);
    }
    return s;
}

/// Shoelace area of the closed polyline.
inline double curve_area(const InterfaceCurve& c) {
    double a = 0.0;
    const int m = static_cast<int>(c.points.size());
    for (int i = 0; i < m; ++i) {
        const Vec2& p = c.points[i];
        const Vec2& q = c.points[(i + 1) % m];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * std::abs(a);
}

/// Resample a closed polyline to `count` quasi-uniform arclength stations.
inline InterfaceCurve resample_uniform(const InterfaceCurve& c, int count) {
    const int m = static_cast<int>(c.points.size());
    std::vector<double> cum(m + 1, 0.0);
    for (int i = 0; i < m; ++i) {
        const Vec2& p = c.points[i];
        const Vec2& q = c.points[(i + 1) % m];
        cum[i + 1] = cum[i] + std::hypot(q.x - p.x, q.y - p.y);
    }
    const double total = cum[m];
    InterfaceCurve out;
    out.t = c.t;
    out.points.reserve(count);
    int seg = 0;
    for (int k = 0; k < count; ++k) {
        const double target = total * k / count;
        while (seg + 1 < m && cum[seg + 1] < target) ++seg;
        const double len = cum[seg + 1] - cum[seg];
        const double f = len > 0 ? (target - cum[seg]) / len : 0.0;
        const Vec2& p = c.points[seg];
        const Vec2& q = c.points[(seg + 1) % m];
        out.points.push_back({p.x + f * (q.x - p.x), p.y + f * (q.y - p.y)});
    }
    return out;
}

/// Push the initial polyline forward by the flow map (displacement field
/// interpolated bicubically) and resample to quasi-uniform arclength.
/// Aborts if the transported curve self-intersects within h/2.
inline InterfaceCurve interface_points(const FlowMap& flow, const InterfaceCurve& initial) {
    const Grid& g = flow.grid;
    ScalarField dx(g), dy(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const size_t k = static_cast<size_t>(i) * g.n + j;
            dx(i, j) = flow.px[k] - g.x1(i);
            dy(i, j) = flow.py[k] - g.x2(j);
        }
    Interpolant ix(dx, Interpolation::cubic), iy(dy, Interpolation::cubic);
    InterfaceCurve out;
    out.t = flow.t;
    out.points.reserve(initial.points.size());
    for (const Vec2& p : initial.points)
        out.points.push_back({p.x + ix(p.x, p.y), p.y + iy(p.x, p.y)});
    out = resample_uniform(out, static_cast<int>(out.points.size()));
    if (!curve_is_simple(out, 0.5 * g.h()))
        throw std::runtime_error(
            "interface_points: transported interface self-intersects (under-resolved)");
    return out;
}

struct BoundaryRegularity {
    double arclength = 0.0;
    double curvature_lp = 0.0;  // L^{2+eps} norm of curvature along arclength
    double max_curvature = 0.0;
};

/// Discrete curvature by the three-point circumcircle on the resampled
/// polyline, integrated in arclength.
inline BoundaryRegularity boundary_regularity(const InterfaceCurve& curve, double eps) {
    const int m = static_cast<int>(curve.points.size());
    if (m < 16) throw std::invalid_argument("boundary_regularity: need at least 16 points");
    InterfaceCurve c = resample_uniform(curve, m);
    BoundaryRegularity out;
    double acc = 0.0;
    bool any_noncollinear = false;
    const double p = 2.0 + eps;
    for (int i = 0; i < m; ++i) {
        const Vec2& a = c.points[(i + m - 1) % m];
        const Vec2& b = c.points[i];
        const Vec2& d = c.points[(i + 1) % m];
        const double ab = std::hypot(b.x - a.x, b.y - a.y);
        const double bd = std::hypot(d.x - b.x, d.y - b.y);
        const double ad = std::hypot(d.x - a.x, d.y - a.y);
        const double cross = (b.x - a.x) * (d.y - a.y) - (b.y - a.y) * (d.x - a.x);
        const double kappa = (ab * bd * ad) > 0 ? 2.0 * std::abs(cross) / (ab * bd * ad) : 0.0;
        if (std::abs(cross) > 1e-14 * ab * bd) any_noncollinear = true;
        const double ds = 0.5 * (ab + bd);
        acc += std::pow(kappa, p) * ds;
        out.max_curvature = std::max(out.max_curvature, kappa);
        out.arclength += bd;
    }
    if (!any_noncollinear)
        throw std::invalid_argument("boundary_regularity: degenerate (collinear) polyline");
    out.curvature_lp = std::pow(acc, 1.0 / p);
    return out;
}

}  // namespace munse
