#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace eog::dsp {

using Complex = std::complex<double>;

/// Forward real FFT; returns n/2 + 1 bins, unnormalised.
[[nodiscard]] std::vector<Complex> rfft(std::span<const double> x);

/// Inverse of rfft for a length-n signal; includes the 1/n factor.
[[nodiscard]] std::vector<double> irfft(std::span<const Complex> bins, std::size_t n);

/// Complex DFT in either direction. The inverse includes the 1/n factor.
[[nodiscard]] std::vector<Complex> fft(std::span<const Complex> x);
[[nodiscard]] std::vector<Complex> ifft(std::span<const Complex> x);

}  // namespace eog::dsp
