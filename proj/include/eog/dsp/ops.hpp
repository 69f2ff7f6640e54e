#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eog/signal.hpp"

namespace eog::dsp {

/**
 * @brief Running median of odd length l with replicated boundary samples.
 *
 * y[n] = median(x[n-k .. n+k]), k = (l-1)/2, where indices outside the sequence take the
 * nearest boundary value. Throws InvalidParameter for even or zero l.
 */
[[nodiscard]] std::vector<double> median_filter_1d(std::span<const double> seq, std::size_t l);

/// Median of a sequence (mean of the two central values for even lengths). Empty -> 0.
[[nodiscard]] double median(std::span<const double> seq);

/// Linear-interpolation percentile (inclusive method), q in [0, 100].
[[nodiscard]] double percentile(std::span<const double> seq, double q);

/// Magnitude of the analytic signal, computed with a full-length FFT.
/// Throws InvalidParameter for traces shorter than 4 samples.
[[nodiscard]] std::vector<double> hilbert_envelope(const SignalTrace& trace);

/**
 * @brief Savitzky-Golay smoothing.
 *
 * Interior samples use the centred least-squares kernel; the first and last window/2 samples
 * are evaluated from the polynomial fitted to the first/last full window, so any polynomial of
 * degree <= poly_order is reproduced everywhere.
 */
[[nodiscard]] std::vector<double> savgol_smooth(std::span<const double> seq, std::size_t window, int poly_order);

/**
 * @brief Local maxima with height and distance constraints.
 *
 * Flat-topped maxima report the (lower) middle index of the plateau. Peaks lower than
 * min_height are discarded; of any two peaks closer than min_distance the higher one is kept
 * (earlier index on ties). Result is strictly increasing.
 */
[[nodiscard]] std::vector<std::size_t> find_peaks(std::span<const double> seq, double min_height,
                                                  std::size_t min_distance = 1);

/// Scale factor turning a MAD into a consistent estimate of the normal standard deviation.
inline constexpr double kMadToSigma = 1.4826;

/// (x - median) / (1.4826 * MAD). Throws DegenerateInput when the MAD is zero.
[[nodiscard]] SignalTrace robust_zscore(const SignalTrace& trace);

/**
 * @brief Cut a trace into windows of window_s seconds every hop_s seconds.
 *
 * Both durations must correspond to whole sample counts. Traces shorter than one window give
 * an empty list.
 */
[[nodiscard]] std::vector<WindowSegment> segment_windows(const SignalTrace& trace, double window_s, double hop_s);

/// Converts a duration to a sample count, rejecting non-integral products.
[[nodiscard]] std::size_t seconds_to_samples(double seconds, double fs);

}  // namespace eog::dsp
