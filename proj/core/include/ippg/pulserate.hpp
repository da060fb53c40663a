#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ippg/cwt.hpp"
#include "ippg/time_series.hpp"

namespace ippg {

enum class ExtremaKind { systolic_peak, diastolic_minimum };

/// Detected beat landmarks, strictly increasing, spaced at least 0.25 s apart.
struct ExtremaList {
    std::vector<std::size_t> indices;
    ExtremaKind kind = ExtremaKind::systolic_peak;
    double rate_hz = 0.0;
    double t0_s = 0.0;

    double time_at(std::size_t i) const { return t0_s + indices[i] / rate_hz; }
};

/// Two-moving-average beat detector parameters. w1/w2/beta follow the original
/// method; the offset level is a 7 s running mean rather than a global mean.
struct ElgendiParams {
    double w1_s = 0.111;  // event window
    double w2_s = 0.667;  // beat window
    double beta = 0.02;
    double offset_window_s = 7.0;
};

/// Momentary pulse rate samples; weight carries the averaging weight
/// (interbeat duration for IBI, 1 for uniformly sampled estimates).
struct RateSeries {
    std::vector<double> times_s;
    std::vector<double> bpm;
    std::vector<double> weights;
    std::string method;
};

/// Timing-based false-positive rejection: drops extrema squeezed between
/// neighbours closer than 2/3 of the reference interval (the smaller of the
/// preceding double interval and 2.3x the mean interbeat interval).
std::vector<std::size_t> reject_false_extrema(const std::vector<std::size_t>& indices,
                                              double rate_hz);

/// Detects systolic peaks (or diastolic minima, by negation) with the
/// two-moving-average scheme and the timing rejection rule. The input must be
/// band-limited to the pulse band and at least 10 s long.
ExtremaList detect_extrema(const TimeSeries& x, const ElgendiParams& params, ExtremaKind kind);

/// 60 / interbeat interval, placed at interval midpoints. Intervals mapping
/// outside 40-240 BPM are dropped.
RateSeries ibi_momentary_rate(const ExtremaList& extrema);

/// Highest-power DFT bin within 40-240 BPM, on the 60*k*rate/N grid.
/// Epochs shorter than n_dft are zero-padded.
double rate_dft(const TimeSeries& epoch, std::size_t n_dft = 1024);

/// Burg autoregressive spectral peak over the pulse band (0.01 Hz grid).
double rate_ar_burg(const TimeSeries& epoch, int order);

/// Momentary rate from the scalogram ridge, smoothed by a 1 s moving average.
RateSeries rate_cwt(const TimeSeries& x, const ScaleGrid& grid = ScaleGrid::make_default());

/// Weighted per-epoch means of a momentary rate series over the epoch windows
/// of a signal spanning [t0_s, t0_s + duration_s]. Epochs without samples
/// come back empty.
std::vector<std::optional<double>> epoch_average_rate(const RateSeries& rates, double t0_s,
                                                      double duration_s, const EpochSpec& spec);

/// Reference per-epoch rate from contact PPG: band-pass, diastolic minima,
/// interbeat intervals, epoch averaging.
std::vector<std::optional<double>> reference_rate_from_ppg(const TimeSeries& ppg,
                                                           const ElgendiParams& params,
                                                           const EpochSpec& spec);

}  // namespace ippg
