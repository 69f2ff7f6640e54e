#include "eog/hpss.hpp"

#include <cmath>

#include "eog/dsp/ops.hpp"
#include "eog/error.hpp"

namespace eog::hpss {

void HpssParams::validate() const {
    if (l_harm < 3 || l_harm % 2 == 0) throw InvalidParameter("l_harm must be odd and >= 3");
    if (l_perc < 3 || l_perc % 2 == 0) throw InvalidParameter("l_perc must be odd and >= 3");
    if (!(soft_power >= 1.0)) throw InvalidParameter("soft mask power must be >= 1");
}

HpssResult hpss_separate(const dsp::Spectrogram& spec, const HpssParams& params) {
    params.validate();
    const std::size_t bins = spec.n_bins();
    const std::size_t frames = spec.n_frames();
    if (bins == 0 || frames == 0) throw InvalidParameter("empty spectrogram");
    if (frames < params.l_harm) throw InvalidParameter("fewer frames than the harmonic median length");
    if (bins < params.l_perc) throw InvalidParameter("fewer bins than the percussive median length");

    const std::size_t total = bins * frames;
    std::vector<double> mag(total);
    for (std::size_t i = 0; i < total; ++i) mag[i] = std::abs(spec.data()[i]);

    std::vector<double> harm(total);
    std::vector<double> perc(total);
    std::vector<double> line(frames);
    for (std::size_t k = 0; k < bins; ++k) {
        for (std::size_t f = 0; f < frames; ++f) line[f] = mag[f * bins + k];
        const auto filtered = dsp::median_filter_1d(line, params.l_harm);
        for (std::size_t f = 0; f < frames; ++f) harm[f * bins + k] = filtered[f];
    }
    for (std::size_t f = 0; f < frames; ++f) {
        const std::span<const double> column(mag.data() + f * bins, bins);
        const auto filtered = dsp::median_filter_1d(column, params.l_perc);
        std::copy(filtered.begin(), filtered.end(), perc.begin() + static_cast<std::ptrdiff_t>(f * bins));
    }

    HpssResult result{spec.zeros_like(), spec.zeros_like(), std::vector<double>(total), std::vector<double>(total)};
    for (std::size_t i = 0; i < total; ++i) {
        double mh = 0.0;
        double mp = 0.0;
        if (params.mask == MaskKind::hard) {
            mh = harm[i] >= perc[i] ? 1.0 : 0.0;
            mp = 1.0 - mh;
        } else {
            // Normalise by the larger value before raising to the power; keeps the ratio
            // scale-free and avoids overflow.
            const double ref = std::max(harm[i], perc[i]);
            if (ref > 0.0) {
                const double h = std::pow(harm[i] / ref, params.soft_power);
                const double p = std::pow(perc[i] / ref, params.soft_power);
                mh = h / (h + p);
                mp = p / (h + p);
            } else {
                mh = 0.5;
                mp = 0.5;
            }
        }
        result.mask_harmonic[i] = mh;
        result.mask_percussive[i] = mp;
        result.harmonic.data()[i] = spec.data()[i] * mh;
        result.percussive.data()[i] = spec.data()[i] * mp;
    }
    return result;
}

SignalTrace harmonic_filter_time(const SignalTrace& trace, const HpssParams& params,
                                 const dsp::StftParams& stft_params) {
    if (trace.size() < stft_params.window_len) {
        throw InvalidParameter("trace shorter than one STFT window");
    }
    const auto spec = dsp::stft(trace, stft_params);
    const auto parts = hpss_separate(spec, params);
    auto out = dsp::istft(parts.harmonic);
    out.meta = trace.meta;
    return out;
}

}  // namespace eog::hpss
