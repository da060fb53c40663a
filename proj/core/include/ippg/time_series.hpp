#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ippg {

/// Uniformly sampled real-valued signal.
struct TimeSeries {
    std::vector<double> samples;
    double rate_hz = 0.0;
    double t0_s = 0.0;

    TimeSeries() = default;
    TimeSeries(std::vector<double> s, double rate, double t0 = 0.0);

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double duration_s() const { return rate_hz > 0.0 ? samples.size() / rate_hz : 0.0; }
    double time_at(std::size_t i) const { return t0_s + static_cast<double>(i) / rate_hz; }

    double& operator[](std::size_t i) { return samples[i]; }
    double operator[](std::size_t i) const { return samples[i]; }
};

/// Three time-aligned color channel traces sharing rate and length.
struct ColorSignal {
    TimeSeries r, g, b;

    std::size_t size() const { return g.size(); }
    double rate_hz() const { return g.rate_hz; }

    /// Throws if the channels disagree in rate or length, or are empty.
    void check() const;
};

/// Single-channel photoplethysmogram extracted from a ColorSignal.
struct IppgSignal {
    TimeSeries series;
    std::string provenance;  // method tag, e.g. "pos" or "chrom+ma9+fir"
};

/// Analysis epoch layout: 20.48 s windows with 9.88 s overlap, five per trial.
struct EpochSpec {
    double length_s = 20.48;
    double overlap_s = 9.88;
    int count_per_trial = 5;

    double hop_s() const { return length_s - overlap_s; }
};

/// Start indices of the epoch windows for a signal of n samples.
///
/// Windows are placed every hop samples; a window that would run past the
/// signal end is shifted left to end exactly at the last sample, and
/// placement stops there (a shifted window is always the final one).
std::vector<std::size_t> epoch_start_indices(std::size_t n, double rate_hz, const EpochSpec& spec);

/// Window length in samples for a given rate.
std::size_t epoch_length_samples(double rate_hz, const EpochSpec& spec);

std::vector<TimeSeries> segment_epochs(const TimeSeries& x, const EpochSpec& spec);

/// Natural cubic spline through values at uniform unit-spaced knots 0..n-1.
class CubicSpline {
public:
    explicit CubicSpline(const std::vector<double>& y);

    /// Evaluates the spline; x is clamped to [0, n-1].
    double operator()(double x) const;

private:
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at knots
};

/// Resamples x onto a uniform grid at new_rate_hz spanning the same interval,
/// interpolating with a natural cubic spline through the original samples.
TimeSeries resample_cubic_spline(const TimeSeries& x, double new_rate_hz);

}  // namespace ippg
