#pragma once

#include <complex>
#include <vector>

namespace ippg::detail {

// Complex FFT helpers backed by FFTW; plans are cached per length behind a mutex
// so transforms can run concurrently from worker threads.
std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& in);
std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& in);  // scaled by 1/N
std::vector<std::complex<double>> fft_real(const std::vector<double>& in);

// |X_k| for k = 0..N/2 of a real signal.
std::vector<double> magnitude_spectrum(const std::vector<double>& in);

}  // namespace ippg::detail
