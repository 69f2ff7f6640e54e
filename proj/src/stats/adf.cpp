#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "eog/error.hpp"
#include "eog/stats.hpp"

namespace eog::stats {

namespace {

// MacKinnon (2010) response-surface coefficients, one unit-root regressor, constant only.
constexpr double kTauMax = 2.74;
constexpr double kTauMin = -18.83;
constexpr double kTauStar = -1.61;
constexpr std::array<double, 3> kSmallP{2.1659, 1.4412, 0.038269};
constexpr std::array<double, 4> kLargeP{1.7339, 0.93202, -0.12745, -0.010368};
constexpr std::array<std::array<double, 4>, 3> kCrit{{
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
}};

template <std::size_t N>
double polyval_ascending(const std::array<double, N>& c, double x) {
    double acc = 0.0;
    for (std::size_t i = N; i-- > 0;) acc = acc * x + c[i];
    return acc;
}

struct OlsFit {
    double tau = 0.0;
    double aic = 0.0;
};

// Regression of dy[t] on [y[t], 1, dy[t-1..t-lag]] for t in [first, dy.size()).
OlsFit fit_adf(const std::vector<double>& y, const std::vector<double>& dy, std::size_t lag, std::size_t first) {
    const auto nobs = static_cast<Eigen::Index>(dy.size() - first);
    const auto k = static_cast<Eigen::Index>(2 + lag);
    Eigen::MatrixXd x(nobs, k);
    Eigen::VectorXd target(nobs);
    for (Eigen::Index r = 0; r < nobs; ++r) {
        const std::size_t t = first + static_cast<std::size_t>(r);
        target(r) = dy[t];
        x(r, 0) = y[t];
        x(r, 1) = 1.0;
        for (std::size_t j = 1; j <= lag; ++j) x(r, static_cast<Eigen::Index>(1 + j)) = dy[t - j];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < k) throw DegenerateInput("ADF regression is rank deficient");
    const Eigen::VectorXd beta = qr.solve(target);
    const double ssr = (target - x * beta).squaredNorm();
    const double n = static_cast<double>(nobs);
    const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
    const double sigma2 = ssr / (n - static_cast<double>(k));
    OlsFit fit;
    fit.tau = beta(0) / std::sqrt(sigma2 * xtx_inv(0, 0));
    const double llf = -n / 2.0 * (std::log(2.0 * std::numbers::pi) + std::log(ssr / n) + 1.0);
    fit.aic = -2.0 * llf + 2.0 * static_cast<double>(k);
    return fit;
}

}  // namespace

std::size_t adf_default_max_lag(std::size_t n) {
    return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

double mackinnon_p_value(double tau) {
    if (tau > kTauMax) return 1.0;
    if (tau < kTauMin) return 0.0;
    const double z = tau <= kTauStar ? polyval_ascending(kSmallP, tau) : polyval_ascending(kLargeP, tau);
    return boost::math::cdf(boost::math::normal_distribution<double>(), z);
}

std::array<double, 3> mackinnon_critical_values(std::size_t nobs) {
    std::array<double, 3> out{};
    const double inv = 1.0 / static_cast<double>(nobs);
    for (std::size_t i = 0; i < 3; ++i) out[i] = polyval_ascending(kCrit[i], inv);
    return out;
}

TestReport adf_test(std::span<const double> seq, std::optional<std::size_t> max_lag, bool autolag) {
    const std::size_t n = seq.size();
    if (n < 15) throw InvalidParameter("ADF test needs at least 15 observations");
    for (double v : seq) {
        if (!std::isfinite(v)) throw InvalidParameter("ADF input contains non-finite values");
    }
    bool constant = true;
    for (double v : seq) constant = constant && v == seq[0];
    if (constant) throw DegenerateInput("ADF test of a constant sequence");

    std::size_t maxlag = max_lag.value_or(adf_default_max_lag(n));
    // Keep enough observations for the regression to have residual degrees of freedom.
    maxlag = std::min(maxlag, n / 2 - 3);

    const std::vector<double> y(seq.begin(), seq.end());
    std::vector<double> dy(n - 1);
    for (std::size_t t = 0; t + 1 < n; ++t) dy[t] = y[t + 1] - y[t];

    std::size_t lag = maxlag;
    double best_aic = std::numeric_limits<double>::infinity();
    if (autolag) {
        for (std::size_t p = 0; p <= maxlag; ++p) {
            const double aic = fit_adf(y, dy, p, maxlag).aic;
            if (aic < best_aic) {
                best_aic = aic;
                lag = p;
            }
        }
    }
    const OlsFit fit = fit_adf(y, dy, lag, lag);
    const std::size_t nobs = dy.size() - lag;
    const auto crit = mackinnon_critical_values(nobs);

    TestReport r;
    r.test = "adf";
    r.statistic = fit.tau;
    r.p_value = mackinnon_p_value(fit.tau);
    r.detail = {{"lags", static_cast<double>(lag)},
                {"nobs", static_cast<double>(nobs)},
                {"max_lag", static_cast<double>(maxlag)},
                {"crit_1", crit[0]},
                {"crit_5", crit[1]},
                {"crit_10", crit[2]},
                {"aic", fit.aic}};
    return r;
}

}  // namespace eog::stats
