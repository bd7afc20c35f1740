#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace munse {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class DealiasRule { two_thirds, none };

/// Square periodic grid on [0,l)^2 with n points per dimension.
/// Wavenumbers are integer multiples of 2*pi/l; the zero mode sits at
/// index (0,0) and mode indices follow the standard FFT layout.
struct Grid {
    int n = 0;
    double l = kTwoPi;
    DealiasRule dealias = DealiasRule::two_thirds;

    Grid() = default;
    Grid(int n_, double l_ = kTwoPi, DealiasRule rule = DealiasRule::two_thirds)
        : n(n_), l(l_), dealias(rule) {
        if (n < 16 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: n must be a power of two >= 16, got " +
                                        std::to_string(n));
        if (!(l > 0.0)) throw std::invalid_argument("Grid: period length must be positive");
    }

    int size() const { return n * n; }
    double h() const { return l / n; }
    double cell_area() const { return h() * h(); }

    /// Signed integer mode for FFT index i in [0,n). The Nyquist index n/2
    /// maps to +n/2; derivative symbols zero it explicitly.
    int mode(int i) const { return i <= n / 2 ? i : i - n; }
    double wavenumber(int i) const { return kTwoPi / l * mode(i); }

    /// Largest retained |mode| under the two-thirds rule.
    int dealias_cutoff() const { return n / 3; }
    bool keeps_mode(int m1, int m2) const {
        if (dealias != DealiasRule::two_thirds) return true;
        const int c = dealias_cutoff();
        return std::abs(m1) <= c && std::abs(m2) <= c;
    }

    double x1(int i) const { return i * h(); }
    double x2(int j) const { return j * h(); }

    bool operator==(const Grid& o) const {
        return n == o.n && l == o.l && dealias == o.dealias;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

}  // namespace munse
