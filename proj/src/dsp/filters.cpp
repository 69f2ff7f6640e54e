#include "eog/dsp/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eog/error.hpp"

namespace eog::dsp {

namespace {

void check_frequency(double f, double fs, const char* what) {
    if (!(fs > 0.0)) throw InvalidParameter("sampling rate must be positive");
    if (!(f > 0.0) || !(f < fs / 2.0)) {
        throw InvalidParameter(std::string(what) + " must lie strictly between 0 and Nyquist");
    }
}

struct SectionState {
    double z1 = 0.0;
    double z2 = 0.0;
};

SectionState steady_state(const Biquad& s, double level) {
    const double y = level * s.dc_gain();
    SectionState st;
    st.z2 = s.b2 * level - s.a2 * y;
    st.z1 = s.b1 * level - s.a1 * y + st.z2;
    return st;
}

}  // namespace

Biquad design_notch(double f0, double q, double fs) {
    check_frequency(f0, fs, "notch frequency");
    if (!(q > 0.0)) throw InvalidParameter("notch quality factor must be positive");
    const double w0 = 2.0 * std::numbers::pi * f0 / fs;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double c = std::cos(w0);
    const double a0 = 1.0 + alpha;
    return Biquad{1.0 / a0, -2.0 * c / a0, 1.0 / a0, -2.0 * c / a0, (1.0 - alpha) / a0};
}

std::vector<Biquad> design_butterworth_highpass(double cutoff, int order, double fs) {
    check_frequency(cutoff, fs, "high-pass cutoff");
    if (order < 1) throw InvalidParameter("filter order must be >= 1");
    std::vector<Biquad> sections;
    const double w0 = 2.0 * std::numbers::pi * cutoff / fs;
    const double c = std::cos(w0);
    // Conjugate pole pairs of the analog prototype map to sections with these Q values.
    for (int k = 0; k < order / 2; ++k) {
        const double q = 1.0 / (2.0 * std::sin(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * order)));
        const double alpha = std::sin(w0) / (2.0 * q);
        const double a0 = 1.0 + alpha;
        sections.push_back(Biquad{(1.0 + c) / 2.0 / a0, -(1.0 + c) / a0, (1.0 + c) / 2.0 / a0, -2.0 * c / a0,
                                  (1.0 - alpha) / a0});
    }
    if (order % 2 == 1) {
        const double k = std::tan(w0 / 2.0);
        sections.push_back(Biquad{1.0 / (1.0 + k), -1.0 / (1.0 + k), 0.0, (k - 1.0) / (k + 1.0), 0.0});
    }
    return sections;
}

std::vector<double> sosfilt(std::span<const Biquad> sections, std::span<const double> x, double initial_level) {
    std::vector<double> y(x.begin(), x.end());
    double level = initial_level;
    for (const Biquad& s : sections) {
        SectionState st = steady_state(s, level);
        for (double& v : y) {
            const double in = v;
            const double out = s.b0 * in + st.z1;
            st.z1 = s.b1 * in - s.a1 * out + st.z2;
            st.z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
        level *= s.dc_gain();
    }
    return y;
}

std::vector<double> sosfiltfilt(std::span<const Biquad> sections, std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const std::size_t taps = 2 * sections.size() + 1;
    const std::size_t pad = std::min<std::size_t>(3 * taps, n - 1);

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    auto forward = sosfilt(sections, ext, ext.front());
    std::reverse(forward.begin(), forward.end());
    auto backward = sosfilt(sections, forward, forward.front());
    std::reverse(backward.begin(), backward.end());
    return {backward.begin() + static_cast<std::ptrdiff_t>(pad),
            backward.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

SignalTrace notch_filter(const SignalTrace& trace, double f0, double q) {
    const Biquad section = design_notch(f0, q, trace.fs);
    return trace.with_samples(sosfilt(std::span(&section, 1), trace.samples));
}

SignalTrace highpass_filter(const SignalTrace& trace, double cutoff, int order) {
    const auto sections = design_butterworth_highpass(cutoff, order, trace.fs);
    return trace.with_samples(sosfiltfilt(sections, trace.samples));
}

}  // namespace eog::dsp
