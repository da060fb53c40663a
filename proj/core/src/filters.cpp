#include "ippg/filters.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Sparse>

namespace ippg {
namespace {

constexpr double kPi = std::numbers::pi;

void check_band(const BandSpec& band, double rate_hz) {
    if (!(band.low_hz > 0.0 && band.low_hz < band.high_hz && band.high_hz < rate_hz / 2.0))
        throw std::invalid_argument("band-pass: need 0 < low < high < rate/2");
}

std::vector<double> trailing_mean(const std::vector<double>& x, int window) {
    const std::size_t n = x.size();
    std::vector<double> y(n);
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        acc += x[t];
        if (t >= static_cast<std::size_t>(window)) acc -= x[t - window];
        const double len = std::min<std::size_t>(t + 1, window);
        y[t] = acc / len;
    }
    return y;
}

struct Biquad {
    double b0, b1, b2;  // numerator; a0 == 1
    double a1, a2;
};

// Bilinear-transform Butterworth band-pass as second-order sections.
std::vector<Biquad> design_butter_bandpass(const BandSpec& band, double rate_hz, int order) {
    check_band(band, rate_hz);
    using cd = std::complex<double>;

    const double fs2 = 2.0 * rate_hz;
    const double w1 = fs2 * std::tan(kPi * band.low_hz / rate_hz);
    const double w2 = fs2 * std::tan(kPi * band.high_hz / rate_hz);
    const double bw = w2 - w1;
    const double w0sq = w1 * w2;

    // Analog prototype poles on the unit circle, left half-plane.
    std::vector<cd> analog;
    for (int k = 0; k < order; ++k) {
        const double ang = kPi * (2.0 * k + order + 1.0) / (2.0 * order);
        const cd p(std::cos(ang), std::sin(ang));
        if (p.imag() < -1e-12) continue;  // conjugates handled below
        const cd t = p * (bw / 2.0);
        const cd disc = std::sqrt(t * t - w0sq);
        analog.push_back(t + disc);
        analog.push_back(t - disc);
    }

    std::vector<Biquad> sos;
    std::vector<cd> reals;
    for (const cd& s : analog) {
        const cd z = (fs2 + s) / (fs2 - s);
        if (std::abs(z) >= 1.0)
            throw std::runtime_error("iir_bandpass: unstable design (band too close to Nyquist)");
        if (std::abs(z.imag()) > 1e-12) {
            // pair with its conjugate
            sos.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
        } else {
            reals.push_back(z);
        }
    }
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
        const double za = reals[i].real(), zb = reals[i + 1].real();
        sos.push_back({1.0, 0.0, -1.0, -(za + zb), za * zb});
    }

    // Unit gain at the geometric band center.
    const double f0 = std::sqrt(band.low_hz * band.high_hz);
    const cd zi = std::exp(cd(0.0, -2.0 * kPi * f0 / rate_hz));
    cd h(1.0, 0.0);
    for (const Biquad& s : sos)
        h *= (s.b0 + s.b1 * zi + s.b2 * zi * zi) / (1.0 + s.a1 * zi + s.a2 * zi * zi);
    const double scale = std::pow(1.0 / std::abs(h), 1.0 / static_cast<double>(sos.size()));
    for (Biquad& s : sos) {
        s.b0 *= scale;
        s.b1 *= scale;
        s.b2 *= scale;
    }
    return sos;
}

// Direct form II transposed, zero initial state.
void sos_forward(const std::vector<Biquad>& sos, std::vector<double>& x) {
    for (const Biquad& s : sos) {
        double z1 = 0.0, z2 = 0.0;
        for (double& v : x) {
            const double in = v;
            const double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
}

}  // namespace

TimeSeries running_mean(const TimeSeries& x, int window) {
    if (window < 1) throw std::invalid_argument("running_mean: window must be >= 1");
    return TimeSeries(trailing_mean(x.samples, window), x.rate_hz, x.t0_s);
}

TimeSeries mcas(const TimeSeries& x, double window_s) {
    const int win = std::max(1, static_cast<int>(std::lround(window_s * x.rate_hz)));
    const auto m = trailing_mean(x.samples, win);
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (m[t] == 0.0) throw std::runtime_error("mcas: zero baseline");
        y[t] = (x.samples[t] - m[t]) / m[t];
    }
    return TimeSeries(std::move(y), x.rate_hz, x.t0_s);
}

TimeSeries spa_detrend(const TimeSeries& x, double lambda) {
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("spa_detrend: need at least 3 samples");

    using Sp = Eigen::SparseMatrix<double>;
    Sp d2(static_cast<Eigen::Index>(n - 2), static_cast<Eigen::Index>(n));
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(3 * (n - 2));
    for (std::size_t i = 0; i + 2 < n; ++i) {
        trip.emplace_back(i, i, 1.0);
        trip.emplace_back(i, i + 1, -2.0);
        trip.emplace_back(i, i + 2, 1.0);
    }
    d2.setFromTriplets(trip.begin(), trip.end());

    Sp a = Sp(d2.transpose()) * d2 * (lambda * lambda);
    for (std::size_t i = 0; i < n; ++i) a.coeffRef(i, i) += 1.0;

    Eigen::SimplicialLDLT<Sp> solver(a);
    if (solver.info() != Eigen::Success) throw std::runtime_error("spa_detrend: factorization failed");
    const Eigen::Map<const Eigen::VectorXd> xv(x.samples.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd trend = solver.solve(xv);

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x.samples[i] - trend[static_cast<Eigen::Index>(i)];
    return TimeSeries(std::move(y), x.rate_hz, x.t0_s);
}

TimeSeries moving_average_filter(const TimeSeries& x, int points) {
    if (points < 1) throw std::invalid_argument("moving_average_filter: need M >= 1");
    return TimeSeries(trailing_mean(x.samples, points), x.rate_hz, x.t0_s);
}

std::vector<double> fir_bandpass_taps(const BandSpec& band, double rate_hz) {
    check_band(band, rate_hz);
    constexpr int kOrder = 255;
    constexpr int kTaps = kOrder + 1;
    const double center = kOrder / 2.0;  // 127.5, never at a tap
    const double w1 = 2.0 * kPi * band.low_hz / rate_hz;
    const double w2 = 2.0 * kPi * band.high_hz / rate_hz;

    std::vector<double> h(kTaps);
    for (int k = 0; k < kTaps; ++k) {
        const double d = k - center;
        const double ideal = (std::sin(w2 * d) - std::sin(w1 * d)) / (kPi * d);
        const double ham = 0.54 - 0.46 * std::cos(2.0 * kPi * k / kOrder);
        h[k] = ideal * ham;
    }

    // Unit gain at the arithmetic band center.
    const double wm = 2.0 * kPi * 0.5 * (band.low_hz + band.high_hz) / rate_hz;
    std::complex<double> resp(0.0, 0.0);
    for (int k = 0; k < kTaps; ++k) resp += h[k] * std::exp(std::complex<double>(0.0, -wm * k));
    const double scale = 1.0 / std::abs(resp);
    for (double& v : h) v *= scale;
    return h;
}

TimeSeries fir_bandpass(const TimeSeries& x, const BandSpec& band) {
    const auto h = fir_bandpass_taps(band, x.rate_hz);
    const std::size_t n = x.size();
    if (n <= h.size()) throw std::runtime_error("fir_bandpass: signal shorter than filter");

    std::vector<double> y(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t kmax = std::min(h.size() - 1, t);
        double acc = 0.0;
        for (std::size_t k = 0; k <= kmax; ++k) acc += h[k] * x.samples[t - k];
        y[t] = acc;
    }

    // Remove the 127.5-sample group delay; half-sample shift needs interpolation.
    const CubicSpline spline(y);
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = spline(static_cast<double>(t) + 127.5);
    return TimeSeries(std::move(out), x.rate_hz, x.t0_s);
}

TimeSeries iir_bandpass(const TimeSeries& x, const BandSpec& band) {
    const std::size_t n = x.size();
    if (n <= 100) throw std::invalid_argument("iir_bandpass: need more than 100 samples");
    const auto sos = design_butter_bandpass(band, x.rate_hz, 5);

    const std::size_t pad =
        std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::lround(3.0 * x.rate_hz / band.low_hz)));
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x.samples[0] - x.samples[i]);
    ext.insert(ext.end(), x.samples.begin(), x.samples.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x.samples[n - 1] - x.samples[n - 1 - i]);

    sos_forward(sos, ext);
    std::reverse(ext.begin(), ext.end());
    sos_forward(sos, ext);
    std::reverse(ext.begin(), ext.end());

    std::vector<double> y(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                          ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
    return TimeSeries(std::move(y), x.rate_hz, x.t0_s);
}

TimeSeries apply_filter_chain(const TimeSeries& x, const FilterChoice& choice) {
    TimeSeries y = x;
    switch (choice.detrend) {
        case Detrend::none: break;
        case Detrend::mcas: y = mcas(y); break;
        case Detrend::spa: y = spa_detrend(y); break;
    }
    if (choice.ma_points != 0) {
        if (choice.ma_points < 1 || choice.ma_points >= y.rate_hz / 4.0)
            throw std::invalid_argument("filter chain: MA length must stay below rate/4");
        y = moving_average_filter(y, choice.ma_points);
    }
    switch (choice.bandpass) {
        case Bandpass::none: break;
        case Bandpass::fir255_hamming: y = fir_bandpass(y, choice.band); break;
        case Bandpass::iir_butter5: y = iir_bandpass(y, choice.band); break;
    }
    return y;
}

ColorSignal apply_filter_chain(const ColorSignal& c, const FilterChoice& choice) {
    c.check();
    return ColorSignal{apply_filter_chain(c.r, choice), apply_filter_chain(c.g, choice),
                       apply_filter_chain(c.b, choice)};
}

IppgSignal apply_filter_chain(const IppgSignal& s, const FilterChoice& choice) {
    return IppgSignal{apply_filter_chain(s.series, choice), s.provenance};
}

}  // namespace ippg
