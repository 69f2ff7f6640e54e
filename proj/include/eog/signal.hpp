#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eog {

using Meta = std::map<std::string, std::string>;

/**
 * @brief Uniformly sampled single-channel recording.
 *
 * Invariants (checked by validate()): fs > 0, at least one sample, all samples finite.
 * Provenance keys used across the toolkit: "subject", "session", "activity", "recording".
 */
struct SignalTrace {
    std::vector<double> samples;
    double fs = 500.0;
    Meta meta;

    SignalTrace() = default;
    SignalTrace(std::vector<double> s, double rate, Meta m = {})
        : samples(std::move(s)), fs(rate), meta(std::move(m)) {}

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] double duration() const noexcept { return static_cast<double>(samples.size()) / fs; }

    /// Throws InvalidParameter when an invariant is violated.
    void validate() const;

    /// Copy of this trace's metadata and rate with new samples.
    [[nodiscard]] SignalTrace with_samples(std::vector<double> s) const { return {std::move(s), fs, meta}; }
};

/// Fixed-length slice of a trace; carries the source trace's metadata.
struct WindowSegment {
    std::vector<double> samples;
    std::size_t start_index = 0;
    std::optional<std::string> label;
    Meta meta;
};

}  // namespace eog
