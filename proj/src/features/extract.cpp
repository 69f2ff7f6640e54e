#include <algorithm>

#include "eog/error.hpp"
#include "eog/features.hpp"

namespace eog::features {

namespace {

std::vector<std::string> make_window_names() {
    std::vector<std::string> names{"zcr", "ste", "energy_entropy", "spectral_entropy", "spectral_centroid",
                                   "spectral_bandwidth", "spectral_rolloff"};
    for (std::size_t b = 0; b < kContrastBands; ++b) names.push_back("spectral_contrast_" + std::to_string(b));
    for (int j = 0; j <= kPolyOrder; ++j) names.push_back("poly_" + std::to_string(j));
    for (const char* n : {"pav", "vav", "auc", "kurtosis", "skewness", "mean", "median", "std", "cv",
                          "wavelet_mean", "wavelet_std", "wavelet_energy", "wavelet_entropy"}) {
        names.emplace_back(n);
    }
    return names;
}

}  // namespace

const std::vector<std::string>& window_feature_names() {
    static const std::vector<std::string> names = make_window_names();
    return names;
}

const std::vector<std::string>& stacked_feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (std::size_t r = 0; r < kContextWindows; ++r) {
            for (const auto& n : window_feature_names()) out.push_back("w" + std::to_string(r) + "_" + n);
        }
        return out;
    }();
    return names;
}

FeatureVector extract_window_features(std::span<const double> w, double fs) {
    if (w.size() < 16) throw InvalidParameter("feature window must hold at least 16 samples");
    FeatureVector fv;
    auto out = fv.values.begin();
    *out++ = zcr(w);
    *out++ = short_term_energy(w);
    *out++ = energy_entropy(w);
    const auto spec = magnitude_spectrum(w, fs);
    *out++ = spectral_entropy(spec);
    *out++ = spectral_centroid(spec);
    *out++ = spectral_bandwidth(spec);
    *out++ = spectral_rolloff(spec);
    for (double c : spectral_contrast(spec)) *out++ = c;
    for (double c : poly_features(spec)) *out++ = c;
    const auto amp = amplitude_features(w);
    *out++ = amp.pav;
    *out++ = amp.vav;
    *out++ = amp.auc;
    const auto st = statistical_features(w);
    for (double v : {st.kurtosis, st.skewness, st.mean, st.median, st.std, st.cv}) *out++ = v;
    const auto wav = wavelet_features(w);
    for (double v : {wav.mean, wav.std, wav.energy, wav.entropy}) *out++ = v;
    return fv;
}

FeatureVector extract_window_features(const WindowSegment& seg, double fs) {
    auto fv = extract_window_features(seg.samples, fs);
    fv.window_start = seg.start_index;
    return fv;
}

std::vector<StackedFeature> stack_context(std::span<const LabeledWindow> windows) {
    if (windows.size() < kContextWindows) throw InvalidParameter("context stacking needs at least 3 windows");
    for (const auto& w : windows) {
        if (w.session != windows.front().session || w.recording != windows.front().recording) {
            throw InvalidParameter("context stacking must not cross session or recording boundaries");
        }
    }
    std::vector<StackedFeature> out;
    out.reserve(windows.size() - kContextWindows + 1);
    for (std::size_t i = 0; i + kContextWindows <= windows.size(); ++i) {
        StackedFeature sf;
        for (std::size_t r = 0; r < kContextWindows; ++r) {
            const auto& v = windows[i + r].features.values;
            std::copy(v.begin(), v.end(), sf.flat.begin() + static_cast<std::ptrdiff_t>(r * kWindowFeatureCount));
        }
        sf.label = windows[i + kContextWindows / 2].label;
        sf.session = windows[i].session;
        out.push_back(std::move(sf));
    }
    return out;
}

}  // namespace eog::features
