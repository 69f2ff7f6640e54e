#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "eog/error.hpp"
#include "eog/stats.hpp"

namespace eog::stats {

TestReport pearson_test(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatch("pearson_test needs sequences of equal length");
    if (x.size() < 3) throw InvalidParameter("pearson_test needs at least 3 pairs");
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateInput("pearson_test of a constant sequence");
    const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = n - 2.0;

    TestReport out;
    out.test = "pearson";
    out.statistic = r;
    if (1.0 - std::abs(r) < 1e-15) {
        out.p_value = 0.0;
        out.detail = {{"n", n}, {"df", df}, {"t", std::copysign(std::numeric_limits<double>::infinity(), r)}};
        return out;
    }
    const double t = r * std::sqrt(df) / std::sqrt(1.0 - r * r);
    const boost::math::students_t_distribution<double> dist(df);
    out.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
    out.detail = {{"n", n}, {"df", df}, {"t", t}};
    return out;
}

Summary summary_stats(std::span<const double> x) {
    if (x.size() < 2) throw InvalidParameter("summary statistics need at least 2 values");
    const auto n = static_cast<double>(x.size());
    Summary s;
    s.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.sample_std = std::sqrt(ss / (n - 1.0));
    return s;
}

}  // namespace eog::stats
