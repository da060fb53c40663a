#pragma once

#include <cstdint>
#include <vector>

#include "ippg/pipeline.hpp"

namespace ippg {

/// Synthetic trial generator. The skin-colored frames carry an additive
/// pulsatile component (strongest in green), a multiplicative slow intensity
/// trend, an optional multiplicative in-band flicker identical across
/// channels, and per-pixel Gaussian noise. The contact-PPG trace shares the
/// exact beat times.
struct SynthParams {
    double duration_s = 63.0;
    double fps = 50.0;
    int width = 64;
    int height = 64;
    double bpm_start = 72.0;
    double bpm_end = 72.0;     // != bpm_start gives a linear ramp
    double pulse_amp = 1.6;    // green amplitude, intensity units
    double noise_sigma = 2.0;  // per-pixel, intensity units
    double trend_rel = 0.03;   // slow common-mode drift, relative
    double artifact_rel = 0.0; // in-band common-mode flicker, relative
    double ppg_rate_hz = 128.0;
    std::uint64_t seed = 1;
};

struct SynthTrial {
    TrialData trial;
    std::vector<double> beat_times_s;
};

SynthTrial synthesize_trial(const SynthParams& params);

/// Bump-train contact-PPG-style signal with optional per-beat amplitude
/// modulation, for exercising the beat detector.
struct PpgTrainParams {
    double duration_s = 60.0;
    double rate_hz = 128.0;
    double bpm = 75.0;
    double amp_mod_depth = 0.0;  // 0.5 halves the smallest beats
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
};

struct PpgTrain {
    TimeSeries signal;
    std::vector<double> beat_times_s;
};

PpgTrain synthesize_ppg_train(const PpgTrainParams& params);

}  // namespace ippg
