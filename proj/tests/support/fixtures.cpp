#include "fixtures.hpp"

#include <numbers>
#include <random>

namespace fixture {

eog::SignalTrace spiked_trace(std::uint64_t seed, double seconds, double height, double period_s, bool alternate,
                              double fs) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.5);
    const auto n = static_cast<std::size_t>(seconds * fs);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        x[i] = std::sin(2.0 * std::numbers::pi * 7.0 * t) + noise(rng);
    }
    const double sigma = 0.02 * fs;
    int sign = 1;
    for (double c = period_s / 2; c < seconds; c += period_s) {
        const double centre = c * fs;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = (static_cast<double>(i) - centre) / sigma;
            if (std::abs(d) < 6.0) x[i] += sign * height * std::exp(-0.5 * d * d);
        }
        if (alternate) sign = -sign;
    }
    return {std::move(x), fs, {{"activity", "normal_glance"}, {"session", "s1"}, {"recording", "spiked"}}};
}

eog::SignalTrace tones(const std::vector<double>& freqs, double seconds, double fs) {
    const auto n = static_cast<std::size_t>(seconds * fs);
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (double f : freqs) x[i] += std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs);
    }
    return {std::move(x), fs};
}

eog::SignalTrace impulses(std::size_t n, std::size_t period, double fs) {
    std::vector<double> x(n, 0.0);
    for (std::size_t i = period / 2; i < n; i += period) x[i] = 1.0;
    return {std::move(x), fs};
}

std::vector<double> white_noise(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return x;
}

std::vector<double> random_walk(std::uint64_t seed, std::size_t n) {
    auto x = white_noise(seed, n);
    for (std::size_t i = 1; i < n; ++i) x[i] += x[i - 1];
    return x;
}

std::vector<double> ar1(std::uint64_t seed, std::size_t n, double phi) {
    auto e = white_noise(seed, n);
    std::vector<double> x(n, 0.0);
    x[0] = e[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = phi * x[i - 1] + e[i];
    return x;
}

}  // namespace fixture
