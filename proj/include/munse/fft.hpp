#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "munse/field.hpp"

namespace munse {
namespace detail {

/// Cached FFTW c2c plans per grid size. Plans are created with
/// FFTW_UNALIGNED so they can execute on any caller buffer; the cache
/// itself is guarded for concurrent lookup.
class FftPlans {
  public:
    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    void forward(int n, std::complex<double>* in, std::complex<double>* out) {
        fftw_execute_dft(get(n).fwd, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    }
    void backward(int n, std::complex<double>* in, std::complex<double>* out) {
        fftw_execute_dft(get(n).bwd, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    }

  private:
    struct Pair {
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
    };

    Pair& get(int n) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> buf(static_cast<size_t>(n) * n);
        auto* b = reinterpret_cast<fftw_complex*>(buf.data());
        Pair p;
        p.fwd = fftw_plan_dft_2d(n, n, b, b, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.bwd = fftw_plan_dft_2d(n, n, b, b, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p.fwd || !p.bwd) throw std::runtime_error("FFTW plan creation failed");
        return plans_.emplace(n, p).first->second;
    }

    std::mutex mu_;
    std::map<int, Pair> plans_;
};

}  // namespace detail

/// Forward transform of real samples; unnormalized FFTW convention
/// (constant c maps to c*n^2 at the zero mode).
inline SpectralField transform(const ScalarField& f) {
    if (!f.finite()) throw std::invalid_argument("transform: field has non-finite values");
    SpectralField out(f.grid);
    std::vector<std::complex<double>> in(f.v.size());
    for (size_t k = 0; k < f.v.size(); ++k) in[k] = f.v[k];
    detail::FftPlans::instance().forward(f.grid.n, in.data(), out.c.data());
    return out;
}

/// Inverse transform back to real samples (normalizes by n^2, drops the
/// roundoff-level imaginary part of a conjugate-symmetric input).
inline ScalarField inverse_transform(const SpectralField& f) {
    ScalarField out(f.grid);
    std::vector<std::complex<double>> buf(f.c.size());
    std::vector<std::complex<double>> in(f.c);
    detail::FftPlans::instance().backward(f.grid.n, in.data(), buf.data());
    const double scale = 1.0 / f.grid.size();
    for (size_t k = 0; k < buf.size(); ++k) out.v[k] = buf[k].real() * scale;
    return out;
}

/// Zero every mode with |m_1| or |m_2| above the grid's dealias cutoff.
/// No-op when the rule is DealiasRule::none.
inline void dealias(SpectralField& f) {
    if (f.grid.dealias != DealiasRule::two_thirds) return;
    const int n = f.grid.n;
    const int c = f.grid.dealias_cutoff();
    for (int i = 0; i < n; ++i) {
        const int m1 = f.grid.mode(i);
        for (int j = 0; j < n; ++j) {
            const int m2 = f.grid.mode(j);
            if (std::abs(m1) > c || std::abs(m2) > c) f(i, j) = 0.0;
        }
    }
}

/// Pointwise product of two fields followed by the grid's dealias mask;
/// returns spectral coefficients of the masked product.
inline SpectralField product_spectrum(const ScalarField& a, const ScalarField& b) {
    SpectralField p = transform(pointwise(a, b));
    dealias(p);
    return p;
}

}  // namespace munse
