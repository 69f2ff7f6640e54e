#include <cmath>
#include <numbers>
#include <numeric>

#include "eog/error.hpp"
#include "eog/features.hpp"

namespace eog::features {

const std::vector<double>& db4_lowpass() {
    static const std::vector<double> h{-0.010597401784997278, 0.032883011666982945, 0.030841381835986965,
                                       -0.18703481171888114,  -0.02798376941698385, 0.6308807679295904,
                                       0.7148465705525415,    0.23037781330885523};
    return h;
}

const std::vector<double>& haar_lowpass() {
    static const std::vector<double> h{std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
    return h;
}

WaveletDecomposition dwt(std::span<const double> w, std::span<const double> lowpass, int levels) {
    if (levels < 1) throw InvalidParameter("wavelet level must be >= 1");
    if (lowpass.size() < 2 || lowpass.size() % 2 != 0) throw InvalidParameter("wavelet filter length must be even");
    if (w.size() < (std::size_t{1} << levels)) throw InvalidParameter("window too short for the wavelet level");

    const std::size_t taps = lowpass.size();
    std::vector<double> highpass(taps);
    for (std::size_t j = 0; j < taps; ++j) {
        highpass[j] = ((j % 2 == 0) ? -1.0 : 1.0) * lowpass[taps - 1 - j];
    }

    WaveletDecomposition out;
    std::vector<double> current(w.begin(), w.end());
    for (int level = 0; level < levels; ++level) {
        const std::size_t n = current.size();
        if (n % 2 != 0) throw InvalidParameter("periodised wavelet transform needs even lengths at every level");
        std::vector<double> approx(n / 2, 0.0);
        std::vector<double> detail(n / 2, 0.0);
        for (std::size_t k = 0; k < n / 2; ++k) {
            for (std::size_t j = 0; j < taps; ++j) {
                // index (2k + 1 - j) mod n
                const std::size_t idx = (2 * k + 1 + n * taps - j) % n;
                approx[k] += lowpass[j] * current[idx];
                detail[k] += highpass[j] * current[idx];
            }
        }
        out.details.push_back(std::move(detail));
        current = std::move(approx);
    }
    out.approximation = std::move(current);
    return out;
}

WaveletStats coefficient_stats(std::span<const double> coeffs) {
    WaveletStats st;
    if (coeffs.empty()) return st;
    const auto n = static_cast<double>(coeffs.size());
    st.mean = std::accumulate(coeffs.begin(), coeffs.end(), 0.0) / n;
    double var = 0.0;
    for (double c : coeffs) {
        var += (c - st.mean) * (c - st.mean);
        st.energy += c * c;
    }
    st.std = std::sqrt(var / n);
    if (st.energy > 0.0) {
        for (double c : coeffs) {
            const double p = c * c / st.energy;
            if (p > 0.0) st.entropy -= p * std::log(p);
        }
    }
    return st;
}

WaveletStats wavelet_features(std::span<const double> w) {
    const auto dec = dwt(w, db4_lowpass(), 1);
    std::vector<double> all = dec.approximation;
    all.insert(all.end(), dec.details[0].begin(), dec.details[0].end());
    return coefficient_stats(all);
}

}  // namespace eog::features
