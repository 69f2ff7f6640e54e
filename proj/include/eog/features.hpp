#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eog/signal.hpp"

namespace eog::features {

inline constexpr std::size_t kWindowFeatureCount = 29;
inline constexpr std::size_t kContextWindows = 3;
inline constexpr std::size_t kStackedFeatureCount = kWindowFeatureCount * kContextWindows;
inline constexpr const char* kSchemaVersion = "eog-features-v1";

/// Canonical order of the per-window features.
[[nodiscard]] const std::vector<std::string>& window_feature_names();
/// "w0_<name>", "w1_<name>", "w2_<name>" in row-major grid order.
[[nodiscard]] const std::vector<std::string>& stacked_feature_names();

// ---- temporal -------------------------------------------------------------

/// Fraction of consecutive pairs going from >= 0 to < 0, over T - 1 pairs.
[[nodiscard]] double zcr(std::span<const double> w);
/// Mean of squared samples.
[[nodiscard]] double short_term_energy(std::span<const double> w);
/// Natural-log entropy of K sub-frame energy fractions. Samples past K * floor(N / K) are dropped.
[[nodiscard]] double energy_entropy(std::span<const double> w, std::size_t k = 10);

struct AmplitudeFeatures {
    double pav = 0.0;  // max
    double vav = 0.0;  // min
    double auc = 0.0;  // sum |x|
};
[[nodiscard]] AmplitudeFeatures amplitude_features(std::span<const double> w);

struct StatisticalFeatures {
    double kurtosis = 0.0;  // adjusted excess (G2)
    double skewness = 0.0;  // adjusted Fisher-Pearson (G1)
    double mean = 0.0;
    double median = 0.0;
    double std = 0.0;  // n - 1 denominator
    double cv = 0.0;   // std / mean, 0 when the mean is 0
};
[[nodiscard]] StatisticalFeatures statistical_features(std::span<const double> w);

// ---- spectral -------------------------------------------------------------

/// |rfft(w)| without tapering; bin k sits at k * fs / N.
struct Spectrum {
    std::vector<double> magnitude;
    std::vector<double> freqs;
    double fs = 0.0;
};
[[nodiscard]] Spectrum magnitude_spectrum(std::span<const double> w, double fs);

/// Base-2 entropy of the normalised power spectrum.
[[nodiscard]] double spectral_entropy(const Spectrum& s);
/// Magnitude-weighted mean frequency.
[[nodiscard]] double spectral_centroid(const Spectrum& s);
/// (sum_k m_k |f_k - centroid|^p / sum_k m_k)^(1/p).
[[nodiscard]] double spectral_bandwidth(const Spectrum& s, double p = 2.0);
/// Lowest frequency whose cumulative power reaches `fraction` of the total.
[[nodiscard]] double spectral_rolloff(const Spectrum& s, double fraction = 0.85);

inline constexpr std::size_t kContrastBands = 5;
/**
 * @brief Octave-band peak/valley contrast.
 *
 * Bands are [0, fs/32], (fs/32, fs/16], (fs/16, fs/8], (fs/8, fs/4], (fs/4, fs/2]. In each band
 * the top and bottom max(1, round(a * n_band)) magnitudes are averaged; the contrast is
 * ln(peak + eps) - ln(valley + eps) with eps tied to the spectrum's peak. Empty bands give 0.
 */
[[nodiscard]] std::array<double, kContrastBands> spectral_contrast(const Spectrum& s, double a = 0.02);

inline constexpr int kPolyOrder = 3;
/// Least-squares polynomial of magnitude against frequency (Hz), highest degree first.
[[nodiscard]] std::array<double, kPolyOrder + 1> poly_features(const Spectrum& s);

// ---- wavelet --------------------------------------------------------------

struct WaveletDecomposition {
    std::vector<double> approximation;
    std::vector<std::vector<double>> details;  // details[0] is level 1 (finest)
};

/// Daubechies-4 analysis filter (decomposition low-pass).
[[nodiscard]] const std::vector<double>& db4_lowpass();
/// Haar analysis filter.
[[nodiscard]] const std::vector<double>& haar_lowpass();

/// Periodised DWT. Throws InvalidParameter when the window is shorter than 2^levels or when
/// any level has an odd length.
[[nodiscard]] WaveletDecomposition dwt(std::span<const double> w, std::span<const double> lowpass, int levels);

struct WaveletStats {
    double mean = 0.0;
    double std = 0.0;  // population
    double energy = 0.0;
    double entropy = 0.0;  // natural log of c^2 / energy
};
[[nodiscard]] WaveletStats coefficient_stats(std::span<const double> coeffs);

/// Statistics of the level-1 db4 approximation and detail coefficients taken together.
[[nodiscard]] WaveletStats wavelet_features(std::span<const double> w);

// ---- vectors --------------------------------------------------------------

struct FeatureVector {
    std::array<double, kWindowFeatureCount> values{};
    std::size_t window_start = 0;
};

[[nodiscard]] FeatureVector extract_window_features(std::span<const double> w, double fs);
[[nodiscard]] FeatureVector extract_window_features(const WindowSegment& seg, double fs);

struct StackedFeature {
    std::array<double, kStackedFeatureCount> flat{};
    std::string label;
    std::string session;

    [[nodiscard]] double grid(std::size_t row, std::size_t col) const { return flat[row * kWindowFeatureCount + col]; }
};

/// Per-window features tagged with the label/session of their source segment.
struct LabeledWindow {
    FeatureVector features;
    std::string label;
    std::string session;
    std::string recording;
};

/**
 * @brief Concatenate each run of three consecutive windows.
 *
 * Sample i holds windows i, i+1, i+2 and takes the centre window's label. All windows must share
 * one session and recording; throws InvalidParameter otherwise or when fewer than 3 are given.
 */
[[nodiscard]] std::vector<StackedFeature> stack_context(std::span<const LabeledWindow> windows);

// ---- normalization --------------------------------------------------------

struct NormalizationStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;               // population standard deviation
    std::vector<bool> zero_variance;   // dimensions passed through as 0

    /// (x - mean) / std per column; zero-variance columns become 0.
    [[nodiscard]] Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
    /// mean + z * std per column; zero-variance columns become the mean.
    [[nodiscard]] Eigen::MatrixXd inverse(const Eigen::MatrixXd& z) const;
};

/// Column statistics over at least 2 rows.
[[nodiscard]] NormalizationStats fit_normalization(const Eigen::MatrixXd& train);

}  // namespace eog::features
