#pragma once

#include <span>
#include <vector>

#include "eog/signal.hpp"

namespace eog::dsp {

/// Second-order section with a0 normalised to 1 (direct form II transposed).
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;

    /// DC gain H(z = 1).
    [[nodiscard]] double dc_gain() const noexcept { return (b0 + b1 + b2) / (1.0 + a1 + a2); }
};

/// Second-order IIR notch centred on f0 with quality factor q.
[[nodiscard]] Biquad design_notch(double f0, double q, double fs);

/// Butterworth high-pass as a cascade of sections (bilinear transform, prewarped at the cutoff).
/// Odd orders carry one first-order section with b2 = a2 = 0.
[[nodiscard]] std::vector<Biquad> design_butterworth_highpass(double cutoff, int order, double fs);

/// Run the cascade once over x. The initial state is the steady state for a constant input of
/// `initial_level` (0 means a zero initial state).
[[nodiscard]] std::vector<double> sosfilt(std::span<const Biquad> sections, std::span<const double> x,
                                          double initial_level = 0.0);

/// Zero-phase forward-backward filtering with odd-extension padding and steady-state initial
/// conditions at both ends.
[[nodiscard]] std::vector<double> sosfiltfilt(std::span<const Biquad> sections, std::span<const double> x);

/// Causal 2nd-order notch (default q = 30). Throws InvalidParameter unless 0 < f0 < fs/2 and q > 0.
[[nodiscard]] SignalTrace notch_filter(const SignalTrace& trace, double f0, double q = 30.0);

/// Zero-phase Butterworth high-pass. Throws InvalidParameter unless 0 < cutoff < fs/2, order >= 1.
[[nodiscard]] SignalTrace highpass_filter(const SignalTrace& trace, double cutoff, int order = 4);

}  // namespace eog::dsp
