#pragma once

#include <vector>

#include "ippg/time_series.hpp"

namespace ippg {

/// Heart-rate pass band, 40-240 BPM.
struct BandSpec {
    double low_hz = 0.65;
    double high_hz = 4.0;
};

enum class Detrend { none, mcas, spa };
enum class Bandpass { none, fir255_hamming, iir_butter5 };

/// One pre- or post-processing configuration: detrend -> MA -> band-pass.
struct FilterChoice {
    Detrend detrend = Detrend::none;
    int ma_points = 0;  // 0 disables; must stay below rate/4
    Bandpass bandpass = Bandpass::none;
    BandSpec band{};
};

/// Trailing L-point running mean; for t < L-1 averages the available prefix.
TimeSeries running_mean(const TimeSeries& x, int window);

/// Mean-centering and scaling: (x - m) / m with m the 1 s running mean.
TimeSeries mcas(const TimeSeries& x, double window_s = 1.0);

/// Smoothness-priors detrending: subtracts the trend solving
/// (I + lambda^2 D2' D2) trend = x with D2 the second-difference operator.
TimeSeries spa_detrend(const TimeSeries& x, double lambda = 300.0);

/// Trailing M-point moving average with prefix warm-up.
TimeSeries moving_average_filter(const TimeSeries& x, int points);

/// 256-tap Hamming-window band-pass taps for the given rate.
std::vector<double> fir_bandpass_taps(const BandSpec& band, double rate_hz);

/// Order-255 Hamming FIR band-pass; the 127.5-sample group delay is removed
/// by spline-shifting the filtered signal back into alignment.
TimeSeries fir_bandpass(const TimeSeries& x, const BandSpec& band = {});

/// 5th-order Butterworth band-pass applied forward-backward (zero phase).
TimeSeries iir_bandpass(const TimeSeries& x, const BandSpec& band = {});

TimeSeries apply_filter_chain(const TimeSeries& x, const FilterChoice& choice);
ColorSignal apply_filter_chain(const ColorSignal& c, const FilterChoice& choice);
IppgSignal apply_filter_chain(const IppgSignal& s, const FilterChoice& choice);

}  // namespace ippg
