#include "ippg/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ippg {

TimeSeries::TimeSeries(std::vector<double> s, double rate, double t0)
    : samples(std::move(s)), rate_hz(rate), t0_s(t0) {
    if (rate_hz <= 0.0) throw std::invalid_argument("TimeSeries: rate_hz must be positive");
}

void ColorSignal::check() const {
    if (r.size() != g.size() || g.size() != b.size())
        throw std::invalid_argument("ColorSignal: channel lengths differ");
    if (r.rate_hz != g.rate_hz || g.rate_hz != b.rate_hz)
        throw std::invalid_argument("ColorSignal: channel rates differ");
    if (g.empty()) throw std::invalid_argument("ColorSignal: empty channels");
}

std::size_t epoch_length_samples(double rate_hz, const EpochSpec& spec) {
    return static_cast<std::size_t>(std::lround(spec.length_s * rate_hz));
}

std::vector<std::size_t> epoch_start_indices(std::size_t n, double rate_hz, const EpochSpec& spec) {
    if (rate_hz <= 0.0) throw std::invalid_argument("epoch_start_indices: rate_hz must be positive");
    if (spec.overlap_s < 0.0 || spec.overlap_s >= spec.length_s)
        throw std::invalid_argument("epoch_start_indices: need 0 <= overlap < length");
    const std::size_t win = epoch_length_samples(rate_hz, spec);
    if (win == 0 || n < win) throw std::runtime_error("signal too short");
    const std::size_t hop = static_cast<std::size_t>(std::lround(spec.hop_s() * rate_hz));
    const std::size_t last_start = n - win;

    std::vector<std::size_t> starts;
    for (int k = 0; k < spec.count_per_trial; ++k) {
        const std::size_t nominal = static_cast<std::size_t>(k) * hop;
        if (nominal >= last_start) {
            starts.push_back(last_start);  // shifted to end at the signal end
            break;
        }
        starts.push_back(nominal);
    }
    return starts;
}

std::vector<TimeSeries> segment_epochs(const TimeSeries& x, const EpochSpec& spec) {
    const auto starts = epoch_start_indices(x.size(), x.rate_hz, spec);
    const std::size_t win = epoch_length_samples(x.rate_hz, spec);
    std::vector<TimeSeries> out;
    out.reserve(starts.size());
    for (std::size_t s : starts) {
        std::vector<double> w(x.samples.begin() + static_cast<std::ptrdiff_t>(s),
                              x.samples.begin() + static_cast<std::ptrdiff_t>(s + win));
        out.emplace_back(std::move(w), x.rate_hz, x.t0_s + static_cast<double>(s) / x.rate_hz);
    }
    return out;
}

CubicSpline::CubicSpline(const std::vector<double>& y) : y_(y), m_(y.size(), 0.0) {
    const std::size_t n = y_.size();
    if (n < 2) throw std::invalid_argument("CubicSpline: need at least 2 knots");
    if (n == 2) return;  // linear, second derivatives stay zero

    // Natural boundary: m[0] = m[n-1] = 0. Thomas algorithm on the interior
    // tridiagonal system m[i-1] + 4 m[i] + m[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]).
    const std::size_t k = n - 2;
    std::vector<double> c(k, 0.0), d(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double rhs = 6.0 * (y_[i + 2] - 2.0 * y_[i + 1] + y_[i]);
        const double denom = 4.0 - (i > 0 ? c[i - 1] : 0.0);
        c[i] = 1.0 / denom;
        d[i] = (rhs - (i > 0 ? d[i - 1] : 0.0)) / denom;
    }
    for (std::size_t i = k; i-- > 0;) {
        m_[i + 1] = d[i] - c[i] * (i + 2 < n ? m_[i + 2] : 0.0);
    }
}

double CubicSpline::operator()(double x) const {
    const std::size_t n = y_.size();
    const double xmax = static_cast<double>(n - 1);
    x = std::clamp(x, 0.0, xmax);
    std::size_t i = static_cast<std::size_t>(x);
    if (i >= n - 1) i = n - 2;
    const double u = x - static_cast<double>(i);   // in [0,1]
    const double v = 1.0 - u;
    return m_[i] / 6.0 * (v * v * v - v) + m_[i + 1] / 6.0 * (u * u * u - u) + y_[i] * v +
           y_[i + 1] * u;
}

TimeSeries resample_cubic_spline(const TimeSeries& x, double new_rate_hz) {
    if (new_rate_hz <= 0.0) throw std::invalid_argument("resample_cubic_spline: rate must be positive");
    if (x.size() < 4) throw std::invalid_argument("resample_cubic_spline: need at least 4 samples");

    const CubicSpline spline(x.samples);
    const std::size_t n_in = x.size();
    const double span = static_cast<double>(n_in - 1) / x.rate_hz;
    const std::size_t n_out = static_cast<std::size_t>(std::floor(span * new_rate_hz + 1e-9)) + 1;

    std::vector<double> out(n_out);
    const double step = x.rate_hz / new_rate_hz;  // output step in input-sample units
    for (std::size_t j = 0; j < n_out; ++j) out[j] = spline(static_cast<double>(j) * step);
    return TimeSeries(std::move(out), new_rate_hz, x.t0_s);
}

}  // namespace ippg
