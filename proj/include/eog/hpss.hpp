#pragma once

#include <cstddef>
#include <vector>

#include "eog/dsp/stft.hpp"
#include "eog/signal.hpp"

namespace eog::hpss {

enum class MaskKind { hard, soft };

/**
 * @brief Directional median-filter lengths and mask policy.
 *
 * l_harm runs along the time axis (frames) and l_perc along the frequency axis (bins).
 * The 17/17 defaults give the harmonic filter about 2 s of context at the default STFT
 * geometry (hop 64 @ 500 Hz).
 */
struct HpssParams {
    std::size_t l_harm = 17;
    std::size_t l_perc = 17;
    MaskKind mask = MaskKind::soft;
    double soft_power = 2.0;

    /// Both lengths odd and >= 3, soft_power >= 1.
    void validate() const;
};

struct HpssResult {
    dsp::Spectrogram harmonic;
    dsp::Spectrogram percussive;
    // Per-bin masks in the spectrogram's frame-major layout.
    std::vector<double> mask_harmonic;
    std::vector<double> mask_percussive;
};

/**
 * @brief Split a spectrogram into harmonic and percussive parts.
 *
 * H is the median of |S| along time (per bin), P the median of |S| along frequency (per frame),
 * both with replicated edges. Hard masks send each bin entirely to the larger of H, P (ties to
 * the harmonic side); soft masks use H^p / (H^p + P^p) with an even split where both vanish.
 * The masks multiply the complex bins, so the original phase is kept.
 */
[[nodiscard]] HpssResult hpss_separate(const dsp::Spectrogram& spec, const HpssParams& params);

/// STFT -> harmonic part -> ISTFT. Output has the input's length, rate and metadata.
[[nodiscard]] SignalTrace harmonic_filter_time(const SignalTrace& trace, const HpssParams& params = {},
                                               const dsp::StftParams& stft_params = {});

}  // namespace eog::hpss
