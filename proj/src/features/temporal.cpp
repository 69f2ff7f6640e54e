#include <algorithm>
#include <cmath>
#include <numeric>

#include "eog/dsp/ops.hpp"
#include "eog/error.hpp"
#include "eog/features.hpp"

namespace eog::features {

double zcr(std::span<const double> w) {
    if (w.size() < 2) throw InvalidParameter("zero-crossing rate needs at least 2 samples");
    std::size_t count = 0;
    for (std::size_t t = 1; t < w.size(); ++t) {
        if (w[t - 1] >= 0.0 && w[t] < 0.0) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(w.size() - 1);
}

double short_term_energy(std::span<const double> w) {
    if (w.empty()) throw InvalidParameter("short-term energy of an empty window");
    double acc = 0.0;
    for (double v : w) acc += v * v;
    return acc / static_cast<double>(w.size());
}

double energy_entropy(std::span<const double> w, std::size_t k) {
    if (k == 0) throw InvalidParameter("sub-frame count must be positive");
    const std::size_t len = w.size() / k;
    if (len == 0) throw InvalidParameter("window shorter than the sub-frame count");
    std::vector<double> e(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = j * len; i < (j + 1) * len; ++i) e[j] += w[i] * w[i];
    }
    const double total = std::accumulate(e.begin(), e.end(), 0.0);
    if (!(total > 0.0)) return 0.0;
    double h = 0.0;
    for (double v : e) {
        const double p = v / total;
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

AmplitudeFeatures amplitude_features(std::span<const double> w) {
    if (w.empty()) throw InvalidParameter("amplitude features of an empty window");
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    double auc = 0.0;
    for (double v : w) auc += std::abs(v);
    return {*hi, *lo, auc};
}

StatisticalFeatures statistical_features(std::span<const double> w) {
    if (w.size() < 2) throw InvalidParameter("statistical features need at least 2 samples");
    const auto n = static_cast<double>(w.size());
    StatisticalFeatures f;
    f.mean = std::accumulate(w.begin(), w.end(), 0.0) / n;
    f.median = dsp::median(w);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0, scale = 0.0;
    for (double v : w) {
        const double d = v - f.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
        scale = std::max(scale, std::abs(v));
    }
    f.std = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    // Rounding noise on a constant window must not turn into huge shape statistics.
    const double floor = 1e-14 * scale;
    if (m2 <= floor * floor) {
        f.std = 0.0;
        return f;
    }
    if (f.mean != 0.0) f.cv = f.std / f.mean;
    if (n >= 3) {
        const double g1 = m3 / std::pow(m2, 1.5);
        f.skewness = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
    }
    if (n >= 4) {
        const double g2 = m4 / (m2 * m2) - 3.0;
        f.kurtosis = ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
    }
    return f;
}

}  // namespace eog::features
