#include "eog/pipeline.hpp"

#include <cmath>

#include "eog/dsp/filters.hpp"
#include "eog/dsp/ops.hpp"
#include "eog/error.hpp"

namespace eog::pipeline {

namespace {

std::string flag(bool v) { return v ? "true" : "false"; }

std::string meta_or(const Meta& meta, const std::string& key, const std::string& fallback) {
    const auto it = meta.find(key);
    return it == meta.end() ? fallback : it->second;
}

}  // namespace

void PipelineConfig::validate(double fs) const {
    if (!(fs > 0.0)) throw InvalidParameter("sampling rate must be positive");
    if (!(window_s > 0.0) || !(hop_s > 0.0)) throw InvalidParameter("window and hop must be positive");
    if (hop_s > window_s) throw InvalidParameter("hop must not exceed the window");
    (void)dsp::seconds_to_samples(window_s, fs);
    (void)dsp::seconds_to_samples(hop_s, fs);
    (void)dsp::design_notch(notch_hz, notch_q, fs);
    (void)dsp::design_butterworth_highpass(highpass_hz, highpass_order, fs);
    hpss.validate();
    stft.validate();
    if (!(blink_threshold > 0.0)) throw InvalidParameter("blink threshold must be positive");
    (void)blink_params(fs);
}

blink::BlinkParams PipelineConfig::blink_params(double fs) const {
    auto p = blink::BlinkParams::for_rate(fs, blink_threshold, blink_min_distance_ms);
    p.bounds = blink_bounds;
    return p;
}

SignalTrace condition(const SignalTrace& raw, const PipelineConfig& config) {
    raw.validate();
    const auto notched = dsp::notch_filter(raw, config.notch_hz, config.notch_q);
    const auto high = dsp::highpass_filter(notched, config.highpass_hz, config.highpass_order);
    return dsp::robust_zscore(high);
}

SignalTrace preprocess(const SignalTrace& raw, const PipelineConfig& config, StageOutputs* stages) {
    raw.validate();
    config.validate(raw.fs);
    StageOutputs local;
    StageOutputs& s = stages ? *stages : local;
    s.notched = dsp::notch_filter(raw, config.notch_hz, config.notch_q);
    s.highpassed = dsp::highpass_filter(s.notched, config.highpass_hz, config.highpass_order);
    s.zscored = dsp::robust_zscore(s.highpassed);
    s.harmonic = config.skip_hpss ? s.zscored : hpss::harmonic_filter_time(s.zscored, config.hpss, config.stft);
    if (config.skip_blink) {
        s.regions.clear();
        s.corrected = s.harmonic;
    } else {
        const auto params = config.blink_params(raw.fs);
        s.regions = blink::detect_blink_artifacts(s.harmonic, params);
        s.corrected = blink::correct_blink_artifacts(s.harmonic, params);
    }
    SignalTrace out = s.corrected;
    out.meta["stage_notch"] = flag(true);
    out.meta["stage_highpass"] = flag(true);
    out.meta["stage_robust_z"] = flag(true);
    out.meta["stage_hpss"] = flag(!config.skip_hpss);
    out.meta["stage_blink"] = flag(!config.skip_blink);
    out.meta["blink_regions"] = std::to_string(s.regions.size());
    return out;
}

std::vector<features::LabeledWindow> window_features(const SignalTrace& processed, const PipelineConfig& config) {
    const auto segments = dsp::segment_windows(processed, config.window_s, config.hop_s);
    const std::string label = meta_or(processed.meta, "activity", "");
    const std::string session = meta_or(processed.meta, "session", "");
    const std::string recording = meta_or(processed.meta, "recording", session + "/" + label);
    std::vector<features::LabeledWindow> out;
    out.reserve(segments.size());
    for (const auto& seg : segments) {
        out.push_back({features::extract_window_features(seg, processed.fs), label, session, recording});
    }
    return out;
}

std::vector<features::StackedFeature> featurize(const SignalTrace& processed, const PipelineConfig& config) {
    const auto windows = window_features(processed, config);
    if (windows.size() < features::kContextWindows) return {};
    return features::stack_context(windows);
}

learn::LabeledDataset to_dataset(const std::vector<features::StackedFeature>& rows) {
    learn::LabeledDataset data;
    data.feature_names = features::stacked_feature_names();
    data.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(features::kStackedFeatureCount));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < features::kStackedFeatureCount; ++j) {
            data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i].flat[j];
        }
        data.y.push_back(learn::activity_index(rows[i].label));
        data.session.push_back(rows[i].session);
    }
    data.validate();
    return data;
}

learn::LabeledDataset benchmark_dataset(const SimulateConfig& sim, const PipelineConfig& config) {
    std::vector<features::StackedFeature> rows;
    for (const auto& rec : simulate_dataset(sim)) {
        auto stacked = featurize(preprocess(rec, config), config);
        rows.insert(rows.end(), stacked.begin(), stacked.end());
    }
    return to_dataset(rows);
}

}  // namespace eog::pipeline
