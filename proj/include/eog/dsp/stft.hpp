#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "eog/signal.hpp"

namespace eog::dsp {

enum class WindowKind { hann, rectangular };

[[nodiscard]] std::string_view to_string(WindowKind kind) noexcept;
[[nodiscard]] WindowKind window_kind_from_string(std::string_view name);

/// Analysis window of the given kind; Hann is the periodic variant.
[[nodiscard]] std::vector<double> make_window(WindowKind kind, std::size_t length);

struct StftParams {
    std::size_t window_len = 256;  // 512 ms at 500 Hz
    std::size_t hop = 64;          // 75 % overlap
    WindowKind window = WindowKind::hann;

    /// Throws InvalidParameter when hop is zero, exceeds the window, or breaks the
    /// weighted overlap-add condition for the window kind.
    void validate() const;
};

/**
 * @brief Complex short-time spectrum, bins x frames.
 *
 * Frames are centred: the source trace is padded by window_len/2 on the left so frame f
 * covers padded samples [f*hop, f*hop + window_len). Storage is frame-major.
 */
class Spectrogram {
public:
    Spectrogram() = default;
    Spectrogram(std::size_t n_bins, std::size_t n_frames, StftParams params, double fs, std::size_t signal_length,
                std::size_t left_pad);

    [[nodiscard]] std::size_t n_bins() const noexcept { return n_bins_; }
    [[nodiscard]] std::size_t n_frames() const noexcept { return n_frames_; }
    [[nodiscard]] const StftParams& params() const noexcept { return params_; }
    [[nodiscard]] std::size_t window_len() const noexcept { return params_.window_len; }
    [[nodiscard]] std::size_t hop() const noexcept { return params_.hop; }
    [[nodiscard]] double fs() const noexcept { return fs_; }
    [[nodiscard]] std::size_t signal_length() const noexcept { return signal_length_; }
    [[nodiscard]] std::size_t left_pad() const noexcept { return left_pad_; }

    [[nodiscard]] std::complex<double>& at(std::size_t bin, std::size_t frame) {
        return data_[frame * n_bins_ + bin];
    }
    [[nodiscard]] const std::complex<double>& at(std::size_t bin, std::size_t frame) const {
        return data_[frame * n_bins_ + bin];
    }
    [[nodiscard]] std::vector<std::complex<double>>& data() noexcept { return data_; }
    [[nodiscard]] const std::vector<std::complex<double>>& data() const noexcept { return data_; }

    /// Sum of |S|^2 over all bins and frames.
    [[nodiscard]] double energy() const;

    /// Same geometry, all bins zero.
    [[nodiscard]] Spectrogram zeros_like() const;

private:
    std::size_t n_bins_ = 0;
    std::size_t n_frames_ = 0;
    StftParams params_{};
    double fs_ = 0.0;
    std::size_t signal_length_ = 0;
    std::size_t left_pad_ = 0;
    std::vector<std::complex<double>> data_;
};

/// Centred STFT. Uses reflect padding when the trace is long enough, zeros otherwise.
[[nodiscard]] Spectrogram stft(const SignalTrace& trace, const StftParams& params = {});

/// Weighted overlap-add inverse; returns a trace of the original length.
[[nodiscard]] SignalTrace istft(const Spectrogram& spec);

}  // namespace eog::dsp
