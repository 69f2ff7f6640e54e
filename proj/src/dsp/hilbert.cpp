#include <cmath>

#include "eog/dsp/fft.hpp"
#include "eog/dsp/ops.hpp"
#include "eog/error.hpp"

namespace eog::dsp {

std::vector<double> hilbert_envelope(const SignalTrace& trace) {
    const std::size_t n = trace.size();
    if (n < 4) throw InvalidParameter("Hilbert envelope needs at least 4 samples");
    const auto half = rfft(trace.samples);

    // Analytic spectrum: keep DC (and Nyquist for even n), double positive frequencies.
    std::vector<Complex> analytic(n);
    analytic[0] = half[0];
    const std::size_t positive_end = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
    for (std::size_t k = 1; k < positive_end; ++k) analytic[k] = 2.0 * half[k];
    if (n % 2 == 0) analytic[n / 2] = half[n / 2];

    const auto z = ifft(analytic);
    std::vector<double> env(n);
    for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(z[i]);
    return env;
}

}  // namespace eog::dsp
