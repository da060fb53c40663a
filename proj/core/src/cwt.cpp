#include "ippg/cwt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace ippg {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinCwtLength = 64;

// Sum of the scale-grid Gaussian responses at angular frequency w; the
// plateau value fixes the single-integral reconstruction constant.
double grid_response(const ScaleGrid& grid, double w) {
    double s = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double arg = grid.scale_s(j) * w - kMorletOmega0;
        s += std::exp(-0.5 * arg * arg);
    }
    return s;
}

}  // namespace

ScaleGrid ScaleGrid::make_default() { return geometric(0.325, 25.0, 32.0); }

ScaleGrid ScaleGrid::geometric(double f_lo_hz, double f_hi_hz, double voices_per_octave) {
    if (!(f_lo_hz > 0.0 && f_lo_hz < f_hi_hz && voices_per_octave > 0.0))
        throw std::invalid_argument("ScaleGrid: need 0 < f_lo < f_hi and voices > 0");
    ScaleGrid g;
    const double ratio = std::exp2(1.0 / voices_per_octave);
    for (double f = f_lo_hz; f <= f_hi_hz * (1.0 + 1e-12); f *= ratio) g.frequencies_hz.push_back(f);
    return g;
}

double ScaleGrid::scale_s(std::size_t j) const {
    return kMorletOmega0 / (2.0 * kPi * frequencies_hz[j]);
}

bool Scalogram::edge_affected(std::size_t scale, std::size_t t) const {
    const double efold_s = std::numbers::sqrt2 * grid.scale_s(scale);
    const double margin = std::min<double>(t, n_times - 1 - t) / rate_hz;
    return margin < efold_s;
}

Scalogram cwt_forward(const TimeSeries& x, const ScaleGrid& grid) {
    const std::size_t n = x.size();
    if (n < kMinCwtLength) throw std::invalid_argument("cwt_forward: signal too short");
    if (grid.size() == 0) throw std::invalid_argument("cwt_forward: empty scale grid");

    const auto spectrum = detail::fft_real(x.samples);

    Scalogram s;
    s.grid = grid;
    s.rate_hz = x.rate_hz;
    s.t0_s = x.t0_s;
    s.n_scales = grid.size();
    s.n_times = n;
    s.coeff.resize(s.n_scales * n);

    const double norm_base = std::pow(kPi, -0.25);
    std::vector<std::complex<double>> filtered(n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double scale = grid.scale_s(j);
        const double norm = norm_base * std::sqrt(2.0 * kPi * scale * x.rate_hz);
        std::fill(filtered.begin(), filtered.end(), std::complex<double>(0.0, 0.0));
        // analytic wavelet: positive frequencies only
        for (std::size_t k = 1; k <= n / 2; ++k) {
            const double w = 2.0 * kPi * static_cast<double>(k) * x.rate_hz / static_cast<double>(n);
            const double arg = scale * w - kMorletOmega0;
            filtered[k] = spectrum[k] * (norm * std::exp(-0.5 * arg * arg));
        }
        const auto row = detail::ifft(filtered);
        std::copy(row.begin(), row.end(), s.coeff.begin() + static_cast<std::ptrdiff_t>(j * n));
    }
    return s;
}

TimeSeries cwt_inverse(const Scalogram& s) {
    if (s.n_scales == 0 || s.n_times == 0) throw std::invalid_argument("cwt_inverse: empty scalogram");

    const double f_ref = s.grid.frequencies_hz[s.grid.size() / 2];
    const double plateau = grid_response(s.grid, 2.0 * kPi * f_ref);
    const double gain = 0.5 * std::pow(kPi, -0.25) * std::sqrt(2.0 * kPi * s.rate_hz) * plateau;

    std::vector<double> out(s.n_times, 0.0);
    for (std::size_t j = 0; j < s.n_scales; ++j) {
        const double w = 1.0 / std::sqrt(s.grid.scale_s(j));
        const auto* row = s.coeff.data() + j * s.n_times;
        for (std::size_t t = 0; t < s.n_times; ++t) out[t] += w * row[t].real();
    }
    const double inv_gain = 1.0 / gain;
    for (double& v : out) v *= inv_gain;
    return TimeSeries(std::move(out), s.rate_hz, s.t0_s);
}

IppgSignal wavelet_filter(const IppgSignal& x, const WaveletFilterParams& params,
                          const ScaleGrid& grid) {
    const std::size_t n = x.series.size();
    const std::size_t ridge_win =
        static_cast<std::size_t>(std::lround(params.ridge_window_s * x.series.rate_hz));
    if (n < ridge_win) throw std::invalid_argument("wavelet_filter: signal shorter than ridge window");

    Scalogram s = cwt_forward(x.series, grid);
    const std::size_t ns = s.n_scales;

    // 15 s centered running mean of |W|^2 per scale, via prefix sums.
    std::vector<double> ridge_power(ns * n);
    {
        std::vector<double> prefix(n + 1);
        const std::size_t half = ridge_win / 2;
        for (std::size_t j = 0; j < ns; ++j) {
            prefix[0] = 0.0;
            for (std::size_t t = 0; t < n; ++t) prefix[t + 1] = prefix[t] + std::norm(s.at(j, t));
            for (std::size_t t = 0; t < n; ++t) {
                const std::size_t lo = t > half ? t - half : 0;
                const std::size_t hi = std::min(n - 1, t + half);
                ridge_power[j * n + t] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
            }
        }
    }

    // Wide Gaussian window centered on the per-time dominant scale.
    const double sel_var = params.select_sigma_voices * params.select_sigma_voices;
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t best = 0;
        double best_p = ridge_power[t];
        for (std::size_t j = 1; j < ns; ++j) {
            const double p = ridge_power[j * n + t];
            if (p > best_p) {
                best_p = p;
                best = j;
            }
        }
        for (std::size_t j = 0; j < ns; ++j) {
            const double d = static_cast<double>(j) - static_cast<double>(best);
            s.at(j, t) *= std::exp(-0.5 * d * d / sel_var);
        }
    }

    // Gaussian smoothing of the coefficient field along the scale axis.
    const double sm_sigma = params.smooth_sigma_voices;
    const int radius = static_cast<int>(std::ceil(3.0 * sm_sigma));
    std::vector<double> kernel(2 * radius + 1);
    for (int k = -radius; k <= radius; ++k)
        kernel[static_cast<std::size_t>(k + radius)] = std::exp(-0.5 * k * k / (sm_sigma * sm_sigma));

    std::vector<std::complex<double>> column(ns);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t j = 0; j < ns; ++j) column[j] = s.at(j, t);
        for (std::size_t j = 0; j < ns; ++j) {
            std::complex<double> acc(0.0, 0.0);
            double wsum = 0.0;
            const int lo = std::max<int>(0, static_cast<int>(j) - radius);
            const int hi = std::min<int>(static_cast<int>(ns) - 1, static_cast<int>(j) + radius);
            for (int m = lo; m <= hi; ++m) {
                const double w = kernel[static_cast<std::size_t>(m - static_cast<int>(j) + radius)];
                acc += w * column[static_cast<std::size_t>(m)];
                wsum += w;
            }
            s.at(j, t) = acc / wsum;
        }
    }

    return IppgSignal{cwt_inverse(s), x.provenance.empty() ? "wf" : x.provenance + "+wf"};
}

}  // namespace ippg
