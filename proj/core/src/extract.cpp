#include "ippg/extract.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "fft.hpp"
#include "jade.hpp"

namespace ippg {
namespace {

int stat_window(double window_s, double rate_hz) {
    const int win = static_cast<int>(std::lround(window_s * rate_hz));
    if (win < 2) throw std::invalid_argument("running statistics window shorter than 2 samples");
    return win;
}

// CHROM/POS share the sigma-ratio combination of two projections.
TimeSeries sigma_ratio_combine(const TimeSeries& x1, const TimeSeries& x2, int window, double sign) {
    const TimeSeries s1 = running_std(x1, window);
    const TimeSeries s2 = running_std(x2, window);
    std::vector<double> out(x1.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        const double ratio = s2[t] > 0.0 ? s1[t] / s2[t] : 0.0;
        out[t] = x1[t] + sign * ratio * x2[t];
    }
    return TimeSeries(std::move(out), x1.rate_hz, x1.t0_s);
}

TimeSeries combine(const ColorSignal& c, double wr, double wg, double wb) {
    std::vector<double> out(c.size());
    for (std::size_t t = 0; t < out.size(); ++t)
        out[t] = wr * c.r[t] + wg * c.g[t] + wb * c.b[t];
    return TimeSeries(std::move(out), c.rate_hz(), c.g.t0_s);
}

}  // namespace

const char* to_string(ExtractionKind kind) {
    switch (kind) {
        case ExtractionKind::g: return "g";
        case ExtractionKind::grd: return "grd";
        case ExtractionKind::agrd: return "agrd";
        case ExtractionKind::ica: return "ica";
        case ExtractionKind::chrom: return "chrom";
        case ExtractionKind::pos: return "pos";
    }
    return "?";
}

TimeSeries running_std(const TimeSeries& x, int window) {
    if (window < 2) throw std::invalid_argument("running_std: window must be >= 2");
    const std::size_t n = x.size();
    std::vector<double> y(n, 0.0);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        sum += x[t];
        sumsq += x[t] * x[t];
        if (t >= static_cast<std::size_t>(window)) {
            sum -= x[t - window];
            sumsq -= x[t - window] * x[t - window];
        }
        const double len = std::min<std::size_t>(t + 1, window);
        if (len < 2) continue;  // no variance from a single sample
        const double var = sumsq / (len - 1.0) - sum * sum / (len * (len - 1.0));
        y[t] = std::sqrt(std::max(0.0, var));
    }
    return TimeSeries(std::move(y), x.rate_hz, x.t0_s);
}

IppgSignal extract_g(const ColorSignal& c) {
    c.check();
    return IppgSignal{c.g, "g"};
}

IppgSignal extract_grd(const ColorSignal& c) {
    c.check();
    return IppgSignal{combine(c, -1.0, 1.0, 0.0), "grd"};
}

IppgSignal extract_agrd(const ColorSignal& c, const ColorSignal& c0) {
    c.check();
    c0.check();
    if (c.size() != c0.size()) throw std::invalid_argument("extract_agrd: filtered/raw length mismatch");
    std::vector<double> out(c.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        const double r0 = c0.r[t], g0 = c0.g[t], b0 = c0.b[t];
        if (g0 == 0.0 || r0 == 0.0) throw std::runtime_error("extract_agrd: zero raw channel");
        const double norm = std::sqrt(r0 * r0 + g0 * g0 + b0 * b0);
        out[t] = norm * (c.g[t] / g0 - c.r[t] / r0);
    }
    return IppgSignal{TimeSeries(std::move(out), c.rate_hz(), c.g.t0_s), "agrd"};
}

IppgSignal extract_ica(const ColorSignal& c, const BandSpec& band) {
    c.check();
    const std::size_t n = c.size();
    const double rate = c.rate_hz();
    if (n < static_cast<std::size_t>(3.0 * rate))
        throw std::invalid_argument("extract_ica: need at least 3 s of signal");

    // z-score each channel
    Eigen::MatrixXd x(3, static_cast<Eigen::Index>(n));
    const TimeSeries* chans[3] = {&c.r, &c.g, &c.b};
    for (int ch = 0; ch < 3; ++ch) {
        const auto& v = chans[ch]->samples;
        double mean = 0.0;
        for (double s : v) mean += s;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double s : v) var += (s - mean) * (s - mean);
        var /= static_cast<double>(n - 1);
        if (var <= 0.0) throw std::runtime_error("degenerate channels");
        const double inv_sd = 1.0 / std::sqrt(var);
        for (std::size_t t = 0; t < n; ++t)
            x(ch, static_cast<Eigen::Index>(t)) = (v[t] - mean) * inv_sd;
    }

    const Eigen::MatrixXd unmix = detail::jade_unmixing(x);
    const Eigen::MatrixXd sources = unmix * x;

    // pick the component with the most prominent in-band spectral peak
    int best = 0;
    double best_score = -1.0;
    std::vector<double> row(n);
    for (int comp = 0; comp < 3; ++comp) {
        for (std::size_t t = 0; t < n; ++t) row[t] = sources(comp, static_cast<Eigen::Index>(t));
        const auto mag = detail::magnitude_spectrum(row);
        double total = 0.0, peak = 0.0;
        for (std::size_t k = 1; k < mag.size(); ++k) {
            const double p = mag[k] * mag[k];
            total += p;
            const double f = static_cast<double>(k) * rate / static_cast<double>(n);
            if (f >= band.low_hz && f <= band.high_hz) peak = std::max(peak, p);
        }
        const double score = total > 0.0 ? peak / total : 0.0;
        if (score > best_score) {
            best_score = score;
            best = comp;
        }
    }

    // undo any ICA sign flip: align with the z-scored green channel
    double dot = 0.0;
    for (std::size_t t = 0; t < n; ++t)
        dot += sources(best, static_cast<Eigen::Index>(t)) * x(1, static_cast<Eigen::Index>(t));
    const double sign = dot < 0.0 ? -1.0 : 1.0;

    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = sign * sources(best, static_cast<Eigen::Index>(t));
    return IppgSignal{TimeSeries(std::move(out), rate, c.g.t0_s), "ica"};
}

IppgSignal extract_chrom(const ColorSignal& c, double window_s) {
    c.check();
    const int win = stat_window(window_s, c.rate_hz());
    const TimeSeries x1 = combine(c, 0.77, -0.51, 0.0);
    const TimeSeries x2 = combine(c, 0.77, 0.51, -0.77);
    return IppgSignal{sigma_ratio_combine(x1, x2, win, -1.0), "chrom"};
}

IppgSignal extract_pos(const ColorSignal& c, double window_s) {
    c.check();
    const int win = stat_window(window_s, c.rate_hz());
    const TimeSeries x1 = combine(c, 0.0, 1.0, -1.0);
    const TimeSeries x2 = combine(c, -2.0, 1.0, 1.0);
    return IppgSignal{sigma_ratio_combine(x1, x2, win, +1.0), "pos"};
}

IppgSignal extract(const ColorSignal& c, const ColorSignal& c0, const ExtractionMethod& method) {
    switch (method.kind) {
        case ExtractionKind::g: return extract_g(c);
        case ExtractionKind::grd: return extract_grd(c);
        case ExtractionKind::agrd: return extract_agrd(c, c0);
        case ExtractionKind::ica: return extract_ica(c);
        case ExtractionKind::chrom: return extract_chrom(c, method.window_s);
        case ExtractionKind::pos: return extract_pos(c, method.window_s);
    }
    throw std::invalid_argument("extract: unknown method");
}

}  // namespace ippg
