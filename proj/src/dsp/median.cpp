#include <algorithm>
#include <cmath>

#include "eog/dsp/ops.hpp"
#include "eog/error.hpp"

namespace eog::dsp {

std::vector<double> median_filter_1d(std::span<const double> seq, std::size_t l) {
    if (l == 0 || l % 2 == 0) throw InvalidParameter("median filter length must be odd and >= 1");
    const std::size_t n = seq.size();
    if (l == 1 || n == 0) return {seq.begin(), seq.end()};

    const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(l / 2);
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(n) - 1;
    std::vector<double> out(n);
    std::vector<double> buf(l);
    for (std::ptrdiff_t i = 0; i <= last; ++i) {
        for (std::ptrdiff_t j = -k; j <= k; ++j) {
            buf[static_cast<std::size_t>(j + k)] = seq[static_cast<std::size_t>(std::clamp(i + j, std::ptrdiff_t{0}, last))];
        }
        auto mid = buf.begin() + k;
        std::nth_element(buf.begin(), mid, buf.end());
        out[static_cast<std::size_t>(i)] = *mid;
    }
    return out;
}

double median(std::span<const double> seq) {
    if (seq.empty()) return 0.0;
    std::vector<double> v(seq.begin(), seq.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double percentile(std::span<const double> seq, double q) {
    if (seq.empty()) throw InvalidParameter("percentile of an empty sequence");
    if (!(q >= 0.0 && q <= 100.0)) throw InvalidParameter("percentile must lie in [0, 100]");
    std::vector<double> v(seq.begin(), seq.end());
    std::sort(v.begin(), v.end());
    const double pos = q / 100.0 * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + (v[hi] - v[lo]) * frac;
}

}  // namespace eog::dsp
