#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ippg/time_series.hpp"

namespace ippg {

/// Morlet center frequency (rad); fixes the scale <-> frequency mapping.
inline constexpr double kMorletOmega0 = 6.0;

/// Geometric analysis frequency grid, 32 voices per octave by default.
struct ScaleGrid {
    std::vector<double> frequencies_hz;  // strictly ascending

    /// 0.325 .. 25 Hz with ratio 2^(1/32); covers the 0.65-4 Hz pulse band.
    static ScaleGrid make_default();
    static ScaleGrid geometric(double f_lo_hz, double f_hi_hz, double voices_per_octave = 32.0);

    std::size_t size() const { return frequencies_hz.size(); }
    /// Wavelet scale in seconds for frequency index j.
    double scale_s(std::size_t j) const;
};

/// Complex Morlet wavelet coefficients, scales x time.
struct Scalogram {
    std::vector<std::complex<double>> coeff;  // row-major, n_scales rows
    ScaleGrid grid;
    double rate_hz = 0.0;
    double t0_s = 0.0;
    std::size_t n_scales = 0;
    std::size_t n_times = 0;

    std::complex<double>& at(std::size_t scale, std::size_t t) { return coeff[scale * n_times + t]; }
    const std::complex<double>& at(std::size_t scale, std::size_t t) const {
        return coeff[scale * n_times + t];
    }

    /// True when (scale, t) lies inside the cone of influence, i.e. closer to
    /// either signal edge than the wavelet e-folding time sqrt(2)*s.
    bool edge_affected(std::size_t scale, std::size_t t) const;
};

/// FFT-based analytic Morlet transform with circular boundary handling.
Scalogram cwt_forward(const TimeSeries& x, const ScaleGrid& grid = ScaleGrid::make_default());

/// Single-integral reconstruction: sum over scales of Re(W)/sqrt(s) times the
/// grid's reconstruction constant. Band-limited signals round-trip within 2%.
TimeSeries cwt_inverse(const Scalogram& s);

struct WaveletFilterParams {
    double ridge_window_s = 15.0;       // temporal averaging for ridge selection
    double select_sigma_voices = 16.0;  // wide Gaussian around the ridge scale
    double smooth_sigma_voices = 4.0;   // Gaussian smoothing along the scale axis
};

/// Two-step adaptive band-pass: keeps wavelet coefficients near the dominant
/// pulse ridge, smooths the coefficient field across scales, reconstructs.
IppgSignal wavelet_filter(const IppgSignal& x, const WaveletFilterParams& params = {},
                          const ScaleGrid& grid = ScaleGrid::make_default());

}  // namespace ippg
