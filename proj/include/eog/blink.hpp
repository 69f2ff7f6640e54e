#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eog/signal.hpp"

namespace eog::blink {

enum class Polarity { positive, negative };

/// Samples [begin_index, end_index] (inclusive) attributed to one blink peak.
struct ArtifactRegion {
    std::size_t peak_index = 0;
    std::size_t begin_index = 0;
    std::size_t end_index = 0;
    Polarity polarity = Polarity::positive;

    friend bool operator==(const ArtifactRegion&, const ArtifactRegion&) = default;
};

struct QuartileBounds {
    double q1 = 0.0;
    double q3 = 0.0;
};

/// quartile: 25th/75th percentiles. percentile: the literal 1st/3rd percentiles.
enum class BoundsMode { quartile, percentile };

struct BlinkParams {
    double threshold = 4.0;           // robust-z units
    std::size_t min_distance = 50;    // samples (100 ms @ 500 Hz)
    std::size_t envelope_window = 501;  // Savitzky-Golay window, odd
    int envelope_order = 2;
    BoundsMode bounds = BoundsMode::quartile;
    double log_floor = 1e-8;

    /// Defaults scaled to a sampling rate: 100 ms peak spacing, ~1 s envelope window.
    [[nodiscard]] static BlinkParams for_rate(double fs, double threshold = 4.0, double min_distance_ms = 100.0);
};

[[nodiscard]] QuartileBounds inlier_bounds(std::span<const double> samples, BoundsMode mode);

/**
 * @brief Locate blink artifacts in a robust-z-scored trace.
 *
 * Positive peaks of x and of -x at or above the threshold (spaced by min_distance) seed the
 * regions. A positive region extends left from the peak while x > q3 and includes the first
 * sample that fails; it extends right while x > q3 and stops before the first sample that fails.
 * Negative regions use x < q1. Overlapping regions are merged; the merged region keeps the
 * larger-magnitude peak.
 */
[[nodiscard]] std::vector<ArtifactRegion> detect_blink_artifacts(const SignalTrace& trace, const BlinkParams& params);

/**
 * @brief Envelope-insertion correction.
 *
 * The envelope is a Savitzky-Golay smoothing of log10(max(|x|, floor)). Inside each detected
 * region the sample becomes sign(x) * 10^envelope; every other sample is copied unchanged.
 */
[[nodiscard]] SignalTrace correct_blink_artifacts(const SignalTrace& trace, const BlinkParams& params);

/// The log-domain envelope used by the correction.
[[nodiscard]] std::vector<double> log_envelope(std::span<const double> samples, const BlinkParams& params);

/// Number of positive or negative peaks reaching the threshold (same spacing rule as detection).
[[nodiscard]] std::size_t count_threshold_peaks(std::span<const double> samples, double threshold,
                                                std::size_t min_distance);

}  // namespace eog::blink
