#include "eog/blink.hpp"

#include <algorithm>
#include <cmath>

#include "eog/dsp/ops.hpp"
#include "eog/error.hpp"

namespace eog::blink {

namespace {

std::vector<double> negated(std::span<const double> x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return -v; });
    return out;
}

template <typename Pred>
ArtifactRegion grow(std::span<const double> x, std::size_t peak, Polarity polarity, Pred exceeds) {
    std::size_t left = 0;
    while (peak >= left && exceeds(x[peak - left])) {
        if (peak == left) break;
        ++left;
    }
    std::size_t right = 0;
    while (peak + right < x.size() && exceeds(x[peak + right])) ++right;
    return ArtifactRegion{peak, peak - left, peak + std::max<std::size_t>(right, 1) - 1, polarity};
}

}  // namespace

BlinkParams BlinkParams::for_rate(double fs, double threshold, double min_distance_ms) {
    if (!(fs > 0.0)) throw InvalidParameter("sampling rate must be positive");
    if (!(min_distance_ms > 0.0)) throw InvalidParameter("blink minimum distance must be positive");
    BlinkParams p;
    p.threshold = threshold;
    p.min_distance = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(min_distance_ms * fs / 1000.0)));
    auto window = static_cast<std::size_t>(std::lround(fs));
    if (window % 2 == 0) ++window;
    p.envelope_window = std::max<std::size_t>(window, 5);
    return p;
}

QuartileBounds inlier_bounds(std::span<const double> samples, BoundsMode mode) {
    const double lo = mode == BoundsMode::quartile ? 25.0 : 1.0;
    const double hi = mode == BoundsMode::quartile ? 75.0 : 3.0;
    return QuartileBounds{dsp::percentile(samples, lo), dsp::percentile(samples, hi)};
}

std::vector<ArtifactRegion> detect_blink_artifacts(const SignalTrace& trace, const BlinkParams& params) {
    trace.validate();
    const std::span<const double> x(trace.samples);
    const auto bounds = inlier_bounds(x, params.bounds);

    std::vector<ArtifactRegion> regions;
    for (std::size_t p : dsp::find_peaks(x, params.threshold, params.min_distance)) {
        regions.push_back(grow(x, p, Polarity::positive, [&](double v) { return v > bounds.q3; }));
    }
    const auto flipped = negated(x);
    for (std::size_t p : dsp::find_peaks(flipped, params.threshold, params.min_distance)) {
        regions.push_back(grow(x, p, Polarity::negative, [&](double v) { return v < bounds.q1; }));
    }

    std::sort(regions.begin(), regions.end(),
              [](const ArtifactRegion& a, const ArtifactRegion& b) { return a.begin_index < b.begin_index; });
    std::vector<ArtifactRegion> merged;
    for (const auto& r : regions) {
        if (!merged.empty() && r.begin_index <= merged.back().end_index) {
            auto& m = merged.back();
            m.end_index = std::max(m.end_index, r.end_index);
            if (std::abs(x[r.peak_index]) > std::abs(x[m.peak_index])) {
                m.peak_index = r.peak_index;
                m.polarity = r.polarity;
            }
        } else {
            merged.push_back(r);
        }
    }
    return merged;
}

std::vector<double> log_envelope(std::span<const double> samples, const BlinkParams& params) {
    std::vector<double> logged(samples.size());
    std::transform(samples.begin(), samples.end(), logged.begin(),
                   [&](double v) { return std::log10(std::max(std::abs(v), params.log_floor)); });
    std::size_t window = std::min(params.envelope_window, samples.size());
    if (window % 2 == 0) --window;
    const int order = std::min<int>(params.envelope_order, static_cast<int>(window) - 1);
    if (window < 1) return logged;
    return dsp::savgol_smooth(logged, window, std::max(order, 0));
}

SignalTrace correct_blink_artifacts(const SignalTrace& trace, const BlinkParams& params) {
    const auto regions = detect_blink_artifacts(trace, params);
    if (regions.empty()) return trace;
    const auto envelope = log_envelope(trace.samples, params);
    SignalTrace out = trace;
    for (const auto& r : regions) {
        for (std::size_t i = r.begin_index; i <= r.end_index; ++i) {
            const double sign = trace.samples[i] < 0.0 ? -1.0 : 1.0;
            out.samples[i] = sign * std::pow(10.0, envelope[i]);
        }
    }
    return out;
}

std::size_t count_threshold_peaks(std::span<const double> samples, double threshold, std::size_t min_distance) {
    const auto flipped = negated(samples);
    return dsp::find_peaks(samples, threshold, min_distance).size() +
           dsp::find_peaks(flipped, threshold, min_distance).size();
}

}  // namespace eog::blink
