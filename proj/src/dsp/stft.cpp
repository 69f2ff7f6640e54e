#include "eog/dsp/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eog/dsp/fft.hpp"
#include "eog/error.hpp"

namespace eog::dsp {

std::string_view to_string(WindowKind kind) noexcept {
    switch (kind) {
        case WindowKind::hann: return "hann";
        case WindowKind::rectangular: return "rectangular";
    }
    return "hann";
}

WindowKind window_kind_from_string(std::string_view name) {
    if (name == "hann") return WindowKind::hann;
    if (name == "rectangular" || name == "rect" || name == "boxcar") return WindowKind::rectangular;
    throw InvalidParameter("unknown window kind: " + std::string(name));
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
    std::vector<double> w(length, 1.0);
    if (kind == WindowKind::hann) {
        for (std::size_t i = 0; i < length; ++i) {
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(length));
        }
    }
    return w;
}

void StftParams::validate() const {
    if (window_len < 2) throw InvalidParameter("STFT window must hold at least 2 samples");
    if (hop == 0) throw InvalidParameter("STFT hop must be positive");
    if (hop > window_len) throw InvalidParameter("STFT hop must not exceed the window length");
    // Every output sample needs a non-vanishing sum of squared windows.
    const auto w = make_window(window, window_len);
    for (std::size_t r = 0; r < hop; ++r) {
        double acc = 0.0;
        for (std::size_t i = r; i < window_len; i += hop) acc += w[i] * w[i];
        if (acc < 1e-10) throw InvalidParameter("window/hop pair violates the overlap-add condition");
    }
}

Spectrogram::Spectrogram(std::size_t n_bins, std::size_t n_frames, StftParams params, double fs,
                         std::size_t signal_length, std::size_t left_pad)
    : n_bins_(n_bins),
      n_frames_(n_frames),
      params_(params),
      fs_(fs),
      signal_length_(signal_length),
      left_pad_(left_pad),
      data_(n_bins * n_frames) {}

double Spectrogram::energy() const {
    double e = 0.0;
    for (const auto& v : data_) e += std::norm(v);
    return e;
}

Spectrogram Spectrogram::zeros_like() const {
    return Spectrogram(n_bins_, n_frames_, params_, fs_, signal_length_, left_pad_);
}

Spectrogram stft(const SignalTrace& trace, const StftParams& params) {
    params.validate();
    trace.validate();
    const std::size_t n = trace.size();
    const std::size_t win = params.window_len;
    const std::size_t pad = win / 2;
    const std::size_t needed = std::max(n + 2 * pad, win);
    const std::size_t frames = 1 + (needed - win + params.hop - 1) / params.hop;
    const std::size_t right = (frames - 1) * params.hop + win - n - pad;

    std::vector<double> padded(n + pad + right, 0.0);
    std::copy(trace.samples.begin(), trace.samples.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));
    if (n > std::max(pad, right)) {
        for (std::size_t i = 0; i < pad; ++i) padded[pad - 1 - i] = trace.samples[i + 1];
        for (std::size_t i = 0; i < right; ++i) padded[pad + n + i] = trace.samples[n - 2 - i];
    }

    const auto w = make_window(params.window, win);
    Spectrogram spec(win / 2 + 1, frames, params, trace.fs, n, pad);
    std::vector<double> frame(win);
    for (std::size_t f = 0; f < frames; ++f) {
        const std::size_t start = f * params.hop;
        for (std::size_t i = 0; i < win; ++i) frame[i] = padded[start + i] * w[i];
        const auto bins = rfft(frame);
        std::copy(bins.begin(), bins.end(), spec.data().begin() + static_cast<std::ptrdiff_t>(f * spec.n_bins()));
    }
    return spec;
}

SignalTrace istft(const Spectrogram& spec) {
    const std::size_t win = spec.window_len();
    const std::size_t hop = spec.hop();
    if (hop > win) throw InvalidParameter("STFT hop must not exceed the window length");
    const std::size_t total = (spec.n_frames() == 0) ? 0 : (spec.n_frames() - 1) * hop + win;
    std::vector<double> acc(total, 0.0);
    std::vector<double> norm(total, 0.0);
    const auto w = make_window(spec.params().window, win);

    for (std::size_t f = 0; f < spec.n_frames(); ++f) {
        const std::span<const std::complex<double>> bins(spec.data().data() + f * spec.n_bins(), spec.n_bins());
        const auto frame = irfft(bins, win);
        const std::size_t start = f * hop;
        for (std::size_t i = 0; i < win; ++i) {
            acc[start + i] += frame[i] * w[i];
            norm[start + i] += w[i] * w[i];
        }
    }

    std::vector<double> out(spec.signal_length(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t j = i + spec.left_pad();
        if (j < total && norm[j] > 1e-10) out[i] = acc[j] / norm[j];
    }
    return SignalTrace(std::move(out), spec.fs());
}

}  // namespace eog::dsp
