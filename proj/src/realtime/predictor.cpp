#include <chrono>

#include "eog/blink.hpp"
#include "eog/dsp/ops.hpp"
#include "eog/error.hpp"
#include "eog/hpss.hpp"
#include "eog/realtime.hpp"

namespace eog::realtime {

ModelClassifier::ModelClassifier(learn::TrainedModel model, pipeline::PipelineConfig config)
    : model_(std::move(model)), config_(config) {
    if (!model_.classifier) throw InvalidParameter("model has no fitted classifier");
}

Classification ModelClassifier::classify(std::span<const double> processed, double fs) const {
    const SignalTrace trace(std::vector<double>(processed.begin(), processed.end()), fs);
    const auto rows = pipeline::featurize(trace, config_);
    if (rows.empty()) throw InvalidParameter("span too short for one stacked feature row");
    Eigen::MatrixXd x(1, static_cast<Eigen::Index>(features::kStackedFeatureCount));
    for (std::size_t j = 0; j < features::kStackedFeatureCount; ++j) x(0, static_cast<Eigen::Index>(j)) = rows.back().flat[j];
    Classification c;
    const Eigen::MatrixXd scores = model_.predict_scores(x);
    for (int k = 0; k < learn::kNumClasses; ++k) c.scores[static_cast<std::size_t>(k)] = scores(0, k);
    c.label = model_.predict(x).front();
    return c;
}

ActivityPrediction rule_based_predict(std::span<const double> context, double fs, const WindowClassifier& classifier,
                                      const PredictorConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t span = dsp::seconds_to_samples(config.span_s, fs);
    if (context.size() < span) throw InvalidParameter("context shorter than the classified span");

    const SignalTrace raw(std::vector<double>(context.begin(), context.end()), fs);
    const auto conditioned = pipeline::condition(raw, config.pipeline);
    const auto harmonic = config.pipeline.skip_hpss
                              ? conditioned
                              : hpss::harmonic_filter_time(conditioned, config.pipeline.hpss, config.pipeline.stft);
    auto tail = [&](const SignalTrace& t) {
        return std::span<const double>(t.samples.data() + (t.size() - span), span);
    };

    const auto blink_params = config.pipeline.blink_params(fs);
    ActivityPrediction p;
    p.peak_detected = blink::count_threshold_peaks(tail(harmonic), config.peak_threshold, blink_params.min_distance) > 0;
    if (!p.peak_detected) {
        const auto c = classifier.classify(tail(harmonic), fs);
        p.activity = c.label;
        p.scores = c.scores;
    } else {
        const auto corrected = blink::correct_blink_artifacts(harmonic, blink_params);
        const auto before = classifier.classify(tail(harmonic), fs);
        const auto after = classifier.classify(tail(corrected), fs);
        p.voluntary_blink = before.label == learn::kBlinkLabel && after.label == learn::kBlinkLabel;
        p.activity = after.label;
        p.scores = after.scores;
    }
    p.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return p;
}

}  // namespace eog::realtime
