#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eog/signal.hpp"

namespace eog::stats {

struct TestReport {
    std::string test;
    double statistic = 0.0;
    double p_value = 1.0;
    std::map<std::string, double> detail;
};

struct EnvelopeSequences {
    std::vector<double> avg_seq;  // log10 mean Hilbert envelope per 1 s window
    std::vector<double> std_seq;  // log10 envelope standard deviation per 1 s window
};

inline constexpr double kLogFloor = 1e-8;

/// Hilbert envelope of the whole trace cut into non-overlapping 1 s windows. Needs >= 2 s.
[[nodiscard]] EnvelopeSequences envelope_sequences(const SignalTrace& trace);

/// Means of consecutive blocks of `factor` values; a partial trailing block is dropped.
[[nodiscard]] std::vector<double> decimate_by_mean(std::span<const double> seq, std::size_t factor = 5);

/// Default maximum ADF lag: floor(12 * (n / 100)^(1/4)).
[[nodiscard]] std::size_t adf_default_max_lag(std::size_t n);

/// Left-tail p-value of an ADF tau statistic (constant-only regression), MacKinnon (1994/2010)
/// response surface.
[[nodiscard]] double mackinnon_p_value(double tau);

/// 1 %, 5 % and 10 % critical values for a regression with nobs observations.
[[nodiscard]] std::array<double, 3> mackinnon_critical_values(std::size_t nobs);

/**
 * @brief Augmented Dickey-Fuller unit-root test with a constant and no trend.
 *
 * dy_t = a + g * y_{t-1} + sum_{j=1..p} b_j dy_{t-j} + e_t; the statistic is the t-ratio of g.
 * With autolag the lag p minimises AIC over 0..max_lag on a common sample, then the regression
 * is refitted on all usable observations. detail: lags, nobs, max_lag, crit_1, crit_5, crit_10, aic.
 * Throws InvalidParameter for fewer than 15 values and DegenerateInput for constant input.
 */
[[nodiscard]] TestReport adf_test(std::span<const double> seq, std::optional<std::size_t> max_lag = std::nullopt,
                                  bool autolag = true);

/**
 * @brief One-way repeated-measures ANOVA on a subjects x conditions matrix with the
 * Greenhouse-Geisser correction always applied.
 *
 * detail: ss_conditions, ss_subjects, ss_error, df1, df2, epsilon, df1_gg, df2_gg, p_uncorrected.
 */
[[nodiscard]] TestReport rm_anova_gg(const Eigen::MatrixXd& data);

/// Greenhouse-Geisser epsilon from the double-centred condition covariance.
[[nodiscard]] double greenhouse_geisser_epsilon(const Eigen::MatrixXd& data);

/// Pearson r with a two-tailed t-test on n - 2 degrees of freedom.
[[nodiscard]] TestReport pearson_test(std::span<const double> x, std::span<const double> y);

struct Summary {
    double mean = 0.0;
    double sample_std = 0.0;
};
[[nodiscard]] Summary summary_stats(std::span<const double> x);

}  // namespace eog::stats
