#include <cmath>

#include "eog/dsp/ops.hpp"
#include "eog/error.hpp"

namespace eog {

void SignalTrace::validate() const {
    if (!(fs > 0.0) || !std::isfinite(fs)) throw InvalidParameter("sampling rate must be positive");
    if (samples.empty()) throw InvalidParameter("trace must hold at least one sample");
    for (double v : samples) {
        if (!std::isfinite(v)) throw InvalidParameter("trace contains non-finite samples");
    }
}

namespace dsp {

SignalTrace robust_zscore(const SignalTrace& trace) {
    trace.validate();
    const double centre = median(trace.samples);
    std::vector<double> dev(trace.size());
    for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(trace.samples[i] - centre);
    const double mad = median(dev);
    if (!(mad > 0.0)) throw DegenerateInput("robust z-score undefined: median absolute deviation is zero");
    const double scale = kMadToSigma * mad;
    std::vector<double> out(trace.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (trace.samples[i] - centre) / scale;
    return trace.with_samples(std::move(out));
}

std::size_t seconds_to_samples(double seconds, double fs) {
    const double exact = seconds * fs;
    const double rounded = std::round(exact);
    if (!(rounded >= 1.0) || std::abs(exact - rounded) > 1e-6) {
        throw InvalidParameter("duration does not correspond to a whole, positive number of samples");
    }
    return static_cast<std::size_t>(rounded);
}

std::vector<WindowSegment> segment_windows(const SignalTrace& trace, double window_s, double hop_s) {
    const std::size_t win = seconds_to_samples(window_s, trace.fs);
    const std::size_t hop = seconds_to_samples(hop_s, trace.fs);
    std::vector<WindowSegment> out;
    if (trace.size() < win) return out;
    std::optional<std::string> label;
    if (auto it = trace.meta.find("activity"); it != trace.meta.end()) label = it->second;
    for (std::size_t start = 0; start + win <= trace.size(); start += hop) {
        WindowSegment seg;
        seg.samples.assign(trace.samples.begin() + static_cast<std::ptrdiff_t>(start),
                           trace.samples.begin() + static_cast<std::ptrdiff_t>(start + win));
        seg.start_index = start;
        seg.label = label;
        seg.meta = trace.meta;
        out.push_back(std::move(seg));
    }
    return out;
}

}  // namespace dsp
}  // namespace eog
