#include "ippg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ippg {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Beat shape: u^2 (1-u)^6 over one cycle, unit peak (at u = 1/4), zero value
// and slope at both cycle boundaries, so boundaries act as diastolic minima.
double beat_bump(double u) {
    const double v = 1.0 - u;
    const double v2 = v * v;
    return u * u * v2 * v2 * v2 / 0.011123657226562500;
}

// Cycle phase of a linear BPM ramp, in beats.
double ramp_phase(double t, double f0, double f1, double duration) {
    return f0 * t + (f1 - f0) * t * t / (2.0 * duration);
}

std::vector<double> ramp_beat_times(double f0, double f1, double duration) {
    std::vector<double> beats;
    for (std::size_t k = 0;; ++k) {
        double t;
        if (f0 == f1) {
            t = static_cast<double>(k) / f0;
        } else {
            const double a = (f1 - f0) / duration;
            t = (-f0 + std::sqrt(f0 * f0 + 2.0 * a * static_cast<double>(k))) / a;
        }
        if (t > duration) break;
        beats.push_back(t);
    }
    return beats;
}

}  // namespace

SynthTrial synthesize_trial(const SynthParams& p) {
    if (p.duration_s <= 0.0 || p.fps <= 0.0 || p.width <= 0 || p.height <= 0)
        throw std::invalid_argument("synthesize_trial: bad geometry");
    if (p.bpm_start <= 0.0 || p.bpm_end <= 0.0)
        throw std::invalid_argument("synthesize_trial: bad rate profile");

    const double f0 = p.bpm_start / 60.0;
    const double f1 = p.bpm_end / 60.0;
    const double base[3] = {180.0, 120.0, 100.0};
    const double amp[3] = {0.5 * p.pulse_amp, p.pulse_amp, 0.3 * p.pulse_amp};

    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    SynthTrial out;
    out.trial.participant_id = "SYN";
    out.trial.trial_id = "SYN_T" + std::to_string(p.seed);
    out.trial.fps = p.fps;
    out.beat_times_s = ramp_beat_times(f0, f1, p.duration_s);

    const auto n_frames = static_cast<std::size_t>(std::llround(p.duration_s * p.fps));
    const std::size_t n_px = static_cast<std::size_t>(p.width) * p.height;
    out.trial.frames.reserve(n_frames);
    out.trial.faces.assign(n_frames, FaceRect{0, 0, p.width, p.height});

    for (std::size_t i = 0; i < n_frames; ++i) {
        const double t = static_cast<double>(i) / p.fps;
        const double pulse = std::sin(kTwoPi * ramp_phase(t, f0, f1, p.duration_s));
        const double mult = 1.0 + p.trend_rel * std::sin(kTwoPi * 0.07 * t + 1.1) +
                            p.artifact_rel * (std::sin(kTwoPi * 2.1 * t + 0.7) +
                                              0.7 * std::sin(kTwoPi * 3.3 * t + 2.3));
        double mean_val[3];
        for (int c = 0; c < 3; ++c) mean_val[c] = base[c] * mult + amp[c] * pulse;

        FrameRGB frame;
        frame.width = p.width;
        frame.height = p.height;
        frame.data.resize(3 * n_px);
        for (std::size_t px = 0; px < n_px; ++px) {
            for (int c = 0; c < 3; ++c) {
                double v = mean_val[c];
                if (p.noise_sigma > 0.0) v += p.noise_sigma * noise(rng);
                frame.data[3 * px + c] =
                    static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
        }
        out.trial.frames.push_back(std::move(frame));
    }

    // contact PPG sharing the beat times: bump train over the same phase
    const auto n_ppg = static_cast<std::size_t>(std::llround(p.duration_s * p.ppg_rate_hz));
    std::vector<double> ppg(n_ppg);
    for (std::size_t i = 0; i < n_ppg; ++i) {
        const double t = static_cast<double>(i) / p.ppg_rate_hz;
        const double phase = ramp_phase(t, f0, f1, p.duration_s);
        ppg[i] = 500.0 + 100.0 * beat_bump(phase - std::floor(phase));
    }
    out.trial.ppg = TimeSeries(std::move(ppg), p.ppg_rate_hz);
    return out;
}

PpgTrain synthesize_ppg_train(const PpgTrainParams& p) {
    if (p.duration_s <= 0.0 || p.rate_hz <= 0.0 || p.bpm <= 0.0)
        throw std::invalid_argument("synthesize_ppg_train: bad parameters");

    const double ibi = 60.0 / p.bpm;
    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    const auto n = static_cast<std::size_t>(std::llround(p.duration_s * p.rate_hz));
    std::vector<double> x(n, 0.0);
    PpgTrain out;
    for (std::size_t k = 0;; ++k) {
        const double beat_start = static_cast<double>(k) * ibi;
        if (beat_start >= p.duration_s) break;
        // slowly varying beat amplitude; depth 0 keeps every beat at 1
        const double a =
            1.0 - p.amp_mod_depth * (0.5 + 0.5 * std::sin(kTwoPi * static_cast<double>(k) / 7.0));
        const std::size_t lo = static_cast<std::size_t>(std::ceil(beat_start * p.rate_hz));
        const std::size_t hi =
            std::min(n, static_cast<std::size_t>(std::ceil((beat_start + ibi) * p.rate_hz)));
        for (std::size_t i = lo; i < hi; ++i) {
            const double u = (static_cast<double>(i) / p.rate_hz - beat_start) / ibi;
            x[i] = a * beat_bump(u);
        }
        const double peak_time = beat_start + 0.25 * ibi;  // bump maximum
        if (peak_time < p.duration_s) out.beat_times_s.push_back(peak_time);
    }
    if (p.noise_sigma > 0.0)
        for (double& v : x) v += p.noise_sigma * noise(rng);
    out.signal = TimeSeries(std::move(x), p.rate_hz);
    return out;
}

}  // namespace ippg
