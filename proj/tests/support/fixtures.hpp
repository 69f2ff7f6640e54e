#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "eog/signal.hpp"

namespace fixture {

/// Noisy low-amplitude baseline (robust-z scale) with Gaussian spikes of the given height
/// every `period_s`, alternating in sign when `alternate` is set.
eog::SignalTrace spiked_trace(std::uint64_t seed, double seconds = 10.0, double height = 10.0,
                              double period_s = 1.3, bool alternate = false, double fs = 500.0);

/// Sum of steady sinusoids.
eog::SignalTrace tones(const std::vector<double>& freqs, double seconds, double fs = 500.0);

/// Unit impulses every `period` samples.
eog::SignalTrace impulses(std::size_t n, std::size_t period, double fs = 500.0);

/// Cumulative sum of standard normal steps.
std::vector<double> random_walk(std::uint64_t seed, std::size_t n);
std::vector<double> white_noise(std::uint64_t seed, std::size_t n);
std::vector<double> ar1(std::uint64_t seed, std::size_t n, double phi);

}  // namespace fixture
