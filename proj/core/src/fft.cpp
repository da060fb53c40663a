#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace ippg::detail {
namespace {

class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<std::complex<double>> a(n), b(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n),
                                       reinterpret_cast<fftw_complex*>(a.data()),
                                       reinterpret_cast<fftw_complex*>(b.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw std::runtime_error("fft: planner failed");
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

std::vector<std::complex<double>> transform(const std::vector<std::complex<double>>& in, int sign) {
    if (in.empty()) throw std::invalid_argument("fft: empty input");
    std::vector<std::complex<double>> src(in);  // fftw wants non-const buffers
    std::vector<std::complex<double>> out(in.size());
    fftw_plan p = cache().get(in.size(), sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(src.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& in) {
    return transform(in, FFTW_FORWARD);
}

std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& in) {
    auto out = transform(in, FFTW_BACKWARD);
    const double inv = 1.0 / static_cast<double>(in.size());
    for (auto& v : out) v *= inv;
    return out;
}

std::vector<std::complex<double>> fft_real(const std::vector<double>& in) {
    std::vector<std::complex<double>> c(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) c[i] = in[i];
    return fft(c);
}

std::vector<double> magnitude_spectrum(const std::vector<double>& in) {
    const auto spec = fft_real(in);
    std::vector<double> mag(in.size() / 2 + 1);
    for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(spec[k]);
    return mag;
}

}  // namespace ippg::detail
