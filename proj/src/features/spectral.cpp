#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Dense>

#include "eog/dsp/fft.hpp"
#include "eog/error.hpp"
#include "eog/features.hpp"

namespace eog::features {

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

Spectrum magnitude_spectrum(std::span<const double> w, double fs) {
    if (w.size() < 2) throw InvalidParameter("spectrum needs at least 2 samples");
    if (!(fs > 0.0)) throw InvalidParameter("sampling rate must be positive");
    const auto bins = dsp::rfft(w);
    Spectrum s;
    s.magnitude.resize(bins.size());
    s.freqs.resize(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) {
        s.magnitude[k] = std::abs(bins[k]);
        s.freqs[k] = static_cast<double>(k) * fs / static_cast<double>(w.size());
    }
    s.fs = fs;
    return s;
}

double spectral_entropy(const Spectrum& s) {
    double total = 0.0;
    for (double m : s.magnitude) total += m * m;
    if (!(total > 0.0)) return 0.0;
    double h = 0.0;
    for (double m : s.magnitude) {
        const double p = m * m / total;
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

double spectral_centroid(const Spectrum& s) {
    const double total = sum(s.magnitude);
    if (!(total > 0.0)) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < s.magnitude.size(); ++k) acc += s.magnitude[k] * s.freqs[k];
    return acc / total;
}

double spectral_bandwidth(const Spectrum& s, double p) {
    if (!(p >= 1.0)) throw InvalidParameter("bandwidth order must be >= 1");
    const double total = sum(s.magnitude);
    if (!(total > 0.0)) return 0.0;
    const double c = spectral_centroid(s);
    double acc = 0.0;
    for (std::size_t k = 0; k < s.magnitude.size(); ++k) {
        acc += s.magnitude[k] * std::pow(std::abs(s.freqs[k] - c), p);
    }
    return std::pow(acc / total, 1.0 / p);
}

double spectral_rolloff(const Spectrum& s, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidParameter("roll-off fraction must lie in (0, 1)");
    double total = 0.0;
    for (double m : s.magnitude) total += m * m;
    if (!(total > 0.0)) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < s.magnitude.size(); ++k) {
        acc += s.magnitude[k] * s.magnitude[k];
        if (acc >= fraction * total) return s.freqs[k];
    }
    return s.freqs.back();
}

std::array<double, kContrastBands> spectral_contrast(const Spectrum& s, double a) {
    if (!(a > 0.0 && a <= 0.5)) throw InvalidParameter("contrast quantile must lie in (0, 0.5]");
    std::array<double, kContrastBands> out{};
    if (s.freqs.size() < 2) return out;
    if (!(s.fs > 0.0)) throw InvalidParameter("spectrum carries no sampling rate");
    const double fs = s.fs;
    const double peak = *std::max_element(s.magnitude.begin(), s.magnitude.end());
    if (!(peak > 0.0)) return out;
    const double eps = 1e-12 * peak;

    double lo = -1.0;
    for (std::size_t b = 0; b < kContrastBands; ++b) {
        const double hi = fs / std::pow(2.0, static_cast<double>(kContrastBands - b));
        std::vector<double> band;
        for (std::size_t k = 0; k < s.freqs.size(); ++k) {
            if (s.freqs[k] > lo && s.freqs[k] <= hi) band.push_back(s.magnitude[k]);
        }
        lo = hi;
        if (band.empty()) continue;
        std::sort(band.begin(), band.end());
        const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(a * static_cast<double>(band.size()))));
        const double valley = std::accumulate(band.begin(), band.begin() + static_cast<std::ptrdiff_t>(m), 0.0) /
                              static_cast<double>(m);
        const double top = std::accumulate(band.end() - static_cast<std::ptrdiff_t>(m), band.end(), 0.0) /
                           static_cast<double>(m);
        out[b] = std::log(top + eps) - std::log(valley + eps);
    }
    return out;
}

std::array<double, kPolyOrder + 1> poly_features(const Spectrum& s) {
    const std::size_t n = s.magnitude.size();
    if (n < kPolyOrder + 1) throw InvalidParameter("polynomial fit needs at least 4 spectrum bins");
    const double scale = std::max(s.freqs.back(), 1e-300);
    Eigen::MatrixXd v(static_cast<Eigen::Index>(n), kPolyOrder + 1);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double u = s.freqs[k] / scale;
        for (int j = 0; j <= kPolyOrder; ++j) v(static_cast<Eigen::Index>(k), j) = std::pow(u, kPolyOrder - j);
        y(static_cast<Eigen::Index>(k)) = s.magnitude[k];
    }
    const Eigen::VectorXd c = v.colPivHouseholderQr().solve(y);
    std::array<double, kPolyOrder + 1> out{};
    for (int j = 0; j <= kPolyOrder; ++j) out[static_cast<std::size_t>(j)] = c(j) / std::pow(scale, kPolyOrder - j);
    return out;
}

}  // namespace eog::features
