#include "ippg/pulserate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "ippg/filters.hpp"
#include "fft.hpp"

namespace ippg {
namespace {

constexpr double kMinBpm = 40.0;
constexpr double kMaxBpm = 240.0;
constexpr double kMinBeatGap_s = 0.25;  // 240 BPM cap

std::vector<double> centered_mean(const std::vector<double>& x, std::size_t window) {
    const std::size_t n = x.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t t = 0; t < n; ++t) prefix[t + 1] = prefix[t] + x[t];
    std::vector<double> y(n);
    const std::size_t half = window / 2;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t lo = t > half ? t - half : 0;
        const std::size_t hi = std::min(n - 1, t + half);
        y[t] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return y;
}

}  // namespace

std::vector<std::size_t> reject_false_extrema(const std::vector<std::size_t>& indices,
                                              double rate_hz) {
    const std::size_t n = indices.size();
    if (n < 4) return indices;

    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = indices[i] / rate_hz;
    const double mean_term = 2.3 * (t[n - 1] - t[0]) / static_cast<double>(n - 1);

    std::vector<bool> keep(n, true);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double ref = mean_term;
        if (i >= 3) ref = std::min(t[i - 1] - t[i - 3], ref);
        if (t[i + 1] - t[i - 1] < (2.0 / 3.0) * ref) keep[i] = false;
    }

    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(indices[i]);
    return out;
}

ExtremaList detect_extrema(const TimeSeries& x, const ElgendiParams& params, ExtremaKind kind) {
    const std::size_t n = x.size();
    const double rate = x.rate_hz;
    if (n < static_cast<std::size_t>(10.0 * rate))
        throw std::invalid_argument("detect_extrema: need at least 10 s of signal");

    std::vector<double> sig(x.samples);
    if (kind == ExtremaKind::diastolic_minimum)
        for (double& v : sig) v = -v;

    // squared-clipped signal drives both moving averages and the offset level
    std::vector<double> z(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double c = std::max(sig[t], 0.0);
        z[t] = c * c;
    }
    const std::size_t w1 = std::max<std::size_t>(1, std::lround(params.w1_s * rate));
    const std::size_t w2 = std::max<std::size_t>(w1 + 1, std::lround(params.w2_s * rate));
    const std::size_t w3 = std::max<std::size_t>(w2, std::lround(params.offset_window_s * rate));
    const auto ma_event = centered_mean(z, w1);
    const auto ma_beat = centered_mean(z, w2);
    const auto offset = centered_mean(z, w3);

    // blocks of interest: event average above the dynamic threshold
    std::vector<std::size_t> peaks;
    std::size_t block_start = 0;
    bool in_block = false;
    for (std::size_t t = 0; t <= n; ++t) {
        const bool active = t < n && ma_event[t] > ma_beat[t] + params.beta * offset[t];
        if (active && !in_block) {
            in_block = true;
            block_start = t;
        } else if (!active && in_block) {
            in_block = false;
            if (t - block_start >= w1) {
                std::size_t best = block_start;
                for (std::size_t u = block_start + 1; u < t; ++u)
                    if (sig[u] > sig[best]) best = u;
                peaks.push_back(best);
            }
        }
    }

    // enforce the 240 BPM spacing cap, keeping the stronger extremum
    const std::size_t min_gap = static_cast<std::size_t>(std::lround(kMinBeatGap_s * rate));
    std::vector<std::size_t> spaced;
    for (std::size_t idx : peaks) {
        if (!spaced.empty() && idx - spaced.back() < min_gap) {
            if (sig[idx] > sig[spaced.back()]) spaced.back() = idx;
        } else {
            spaced.push_back(idx);
        }
    }

    if (spaced.size() < 4) throw std::runtime_error("too few beats");
    return ExtremaList{reject_false_extrema(spaced, rate), kind, rate, x.t0_s};
}

RateSeries ibi_momentary_rate(const ExtremaList& extrema) {
    if (extrema.indices.size() < 2) throw std::runtime_error("too few beats");
    RateSeries r;
    r.method = "ibi";
    for (std::size_t k = 0; k + 1 < extrema.indices.size(); ++k) {
        const double dt = (extrema.indices[k + 1] - extrema.indices[k]) / extrema.rate_hz;
        const double bpm = 60.0 / dt;
        if (bpm < kMinBpm || bpm > kMaxBpm) continue;
        r.times_s.push_back(extrema.t0_s +
                            (extrema.indices[k] + extrema.indices[k + 1]) / (2.0 * extrema.rate_hz));
        r.bpm.push_back(bpm);
        r.weights.push_back(dt);
    }
    return r;
}

double rate_dft(const TimeSeries& epoch, std::size_t n_dft) {
    if (epoch.empty()) throw std::invalid_argument("rate_dft: empty epoch");
    if (epoch.size() > n_dft) throw std::invalid_argument("rate_dft: epoch longer than DFT length");

    std::vector<double> buf(epoch.samples);
    buf.resize(n_dft, 0.0);
    const auto mag = detail::magnitude_spectrum(buf);

    const double bin_bpm = 60.0 * epoch.rate_hz / static_cast<double>(n_dft);
    const auto k_lo = static_cast<std::size_t>(std::ceil(kMinBpm / bin_bpm - 1e-9));
    const auto k_hi = std::min(mag.size() - 1,
                               static_cast<std::size_t>(std::floor(kMaxBpm / bin_bpm + 1e-9)));

    std::size_t best = k_lo;
    double best_p = -1.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double p = mag[k] * mag[k];
        if (p > best_p) {
            best_p = p;
            best = k;
        }
    }
    if (best_p <= 0.0) throw std::runtime_error("no spectral content");
    return static_cast<double>(best) * bin_bpm;
}

double rate_ar_burg(const TimeSeries& epoch, int order) {
    if (order < 1) throw std::invalid_argument("rate_ar_burg: order must be >= 1");
    const std::size_t n = epoch.size();
    if (n <= 2 * static_cast<std::size_t>(order))
        throw std::invalid_argument("rate_ar_burg: epoch shorter than 2*order");

    std::vector<double> f(epoch.samples), b(epoch.samples);
    std::vector<double> a{1.0};
    for (int m = 1; m <= order; ++m) {
        double num = 0.0, den = 0.0;
        for (std::size_t t = m; t < n; ++t) {
            num += f[t] * b[t - 1];
            den += f[t] * f[t] + b[t - 1] * b[t - 1];
        }
        if (den == 0.0) throw std::runtime_error("rate_ar_burg: degenerate signal");
        const double k = -2.0 * num / den;

        std::vector<double> prev(a);
        a.push_back(0.0);
        for (int i = 1; i <= m; ++i) {
            const double tail = (m - i) < static_cast<int>(prev.size()) ? prev[m - i] : 0.0;
            a[i] = (i < static_cast<int>(prev.size()) ? prev[i] : 0.0) + k * tail;
        }
        for (std::size_t t = n - 1; t >= static_cast<std::size_t>(m); --t) {
            const double ft = f[t], bt = b[t - 1];
            f[t] = ft + k * bt;
            b[t] = bt + k * ft;
        }
    }

    // spectral peak on a 0.01 Hz grid across the pulse band
    const double w_scale = 2.0 * std::numbers::pi / epoch.rate_hz;
    double best_f = -1.0, best_p = -1.0;
    for (double fr = 0.65; fr <= 4.0 + 1e-9; fr += 0.01) {
        if (60.0 * fr < kMinBpm - 1e-9) continue;
        std::complex<double> h(0.0, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            h += a[i] * std::exp(std::complex<double>(0.0, -w_scale * fr * static_cast<double>(i)));
        const double p = 1.0 / std::norm(h);
        if (p > best_p) {
            best_p = p;
            best_f = fr;
        }
    }
    return 60.0 * best_f;
}

RateSeries rate_cwt(const TimeSeries& x, const ScaleGrid& grid) {
    const double rate = x.rate_hz;
    if (x.size() < static_cast<std::size_t>(std::lround(15.0 * rate)))
        throw std::invalid_argument("rate_cwt: need at least 15 s of signal");

    const Scalogram s = cwt_forward(x, grid);
    std::vector<std::size_t> band_scales;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double bpm = 60.0 * grid.frequencies_hz[j];
        if (bpm >= kMinBpm - 1e-9 && bpm <= kMaxBpm + 1e-9) band_scales.push_back(j);
    }
    if (band_scales.empty()) throw std::invalid_argument("rate_cwt: grid misses the pulse band");

    std::vector<double> bpm(s.n_times);
    double global_max = 0.0;
    for (std::size_t t = 0; t < s.n_times; ++t) {
        std::size_t best = band_scales.front();
        double best_p = -1.0;
        for (std::size_t j : band_scales) {
            const double p = std::norm(s.at(j, t));
            if (p > best_p) {
                best_p = p;
                best = j;
            }
        }
        global_max = std::max(global_max, best_p);
        bpm[t] = 60.0 * grid.frequencies_hz[best];
    }
    if (global_max <= 0.0) throw std::runtime_error("no spectral content");

    const auto smoothed =
        running_mean(TimeSeries(std::move(bpm), rate, x.t0_s),
                     std::max(1, static_cast<int>(std::lround(rate))));

    RateSeries r;
    r.method = "cwt";
    r.times_s.resize(s.n_times);
    r.weights.assign(s.n_times, 1.0);
    r.bpm = smoothed.samples;
    for (std::size_t t = 0; t < s.n_times; ++t) r.times_s[t] = x.time_at(t);
    return r;
}

std::vector<std::optional<double>> epoch_average_rate(const RateSeries& rates, double t0_s,
                                                      double duration_s, const EpochSpec& spec) {
    if (duration_s + 1e-9 < spec.length_s) throw std::runtime_error("signal too short");

    std::vector<double> starts;
    for (int k = 0; k < spec.count_per_trial; ++k) {
        const double nominal = k * spec.hop_s();
        if (nominal + spec.length_s >= duration_s - 1e-9) {
            starts.push_back(duration_s - spec.length_s);
            break;
        }
        starts.push_back(nominal);
    }

    std::vector<std::optional<double>> out;
    out.reserve(starts.size());
    for (double s : starts) {
        const double lo = t0_s + s;
        const double hi = lo + spec.length_s;
        double acc = 0.0, wsum = 0.0;
        for (std::size_t i = 0; i < rates.bpm.size(); ++i) {
            if (rates.times_s[i] < lo - 1e-9 || rates.times_s[i] > hi + 1e-9) continue;
            acc += rates.bpm[i] * rates.weights[i];
            wsum += rates.weights[i];
        }
        if (wsum > 0.0)
            out.emplace_back(acc / wsum);
        else
            out.emplace_back(std::nullopt);
    }
    return out;
}

std::vector<std::optional<double>> reference_rate_from_ppg(const TimeSeries& ppg,
                                                           const ElgendiParams& params,
                                                           const EpochSpec& spec) {
    // band-limit first so the detector sees a zero-baseline pulse signal
    const TimeSeries filtered = iir_bandpass(ppg);
    const ExtremaList minima = detect_extrema(filtered, params, ExtremaKind::diastolic_minimum);
    const RateSeries rates = ibi_momentary_rate(minima);
    return epoch_average_rate(rates, ppg.t0_s, ppg.duration_s(), spec);
}

}  // namespace ippg
