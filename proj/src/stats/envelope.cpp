#include <algorithm>
#include <cmath>
#include <numeric>

#include "eog/dsp/ops.hpp"
#include "eog/error.hpp"
#include "eog/stats.hpp"

namespace eog::stats {

EnvelopeSequences envelope_sequences(const SignalTrace& trace) {
    trace.validate();
    const std::size_t per_window = dsp::seconds_to_samples(1.0, trace.fs);
    const std::size_t count = trace.size() / per_window;
    if (count < 2) throw InvalidParameter("envelope sequences need at least 2 s of signal");
    const auto env = dsp::hilbert_envelope(trace);

    EnvelopeSequences out;
    for (std::size_t w = 0; w < count; ++w) {
        const auto first = env.begin() + static_cast<std::ptrdiff_t>(w * per_window);
        const auto last = first + static_cast<std::ptrdiff_t>(per_window);
        const double mean = std::accumulate(first, last, 0.0) / static_cast<double>(per_window);
        double var = 0.0;
        for (auto it = first; it != last; ++it) var += (*it - mean) * (*it - mean);
        const double sd = std::sqrt(var / static_cast<double>(per_window));
        out.avg_seq.push_back(std::log10(std::max(mean, kLogFloor)));
        out.std_seq.push_back(std::log10(std::max(sd, kLogFloor)));
    }
    return out;
}

std::vector<double> decimate_by_mean(std::span<const double> seq, std::size_t factor) {
    if (factor == 0) throw InvalidParameter("decimation factor must be positive");
    std::vector<double> out;
    for (std::size_t i = 0; i + factor <= seq.size(); i += factor) {
        out.push_back(std::accumulate(seq.begin() + static_cast<std::ptrdiff_t>(i),
                                      seq.begin() + static_cast<std::ptrdiff_t>(i + factor), 0.0) /
                      static_cast<double>(factor));
    }
    return out;
}

}  // namespace eog::stats
