#include <algorithm>
#include <numeric>

#include "eog/dsp/ops.hpp"

namespace eog::dsp {

std::vector<std::size_t> find_peaks(std::span<const double> seq, double min_height, std::size_t min_distance) {
    const std::size_t n = seq.size();
    std::vector<std::size_t> candidates;
    if (n < 3) return candidates;

    std::size_t i = 1;
    while (i + 1 < n) {
        if (seq[i - 1] < seq[i]) {
            std::size_t ahead = i + 1;
            while (ahead + 1 < n && seq[ahead] == seq[i]) ++ahead;
            if (seq[ahead] < seq[i]) {
                candidates.push_back((i + ahead - 1) / 2);
                i = ahead;
                continue;
            }
        }
        ++i;
    }

    std::erase_if(candidates, [&](std::size_t p) { return seq[p] < min_height; });
    if (min_distance <= 1 || candidates.size() < 2) return candidates;

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return seq[candidates[a]] > seq[candidates[b]]; });

    std::vector<bool> keep(candidates.size(), true);
    for (std::size_t j : order) {
        if (!keep[j]) continue;
        for (std::size_t k = j; k-- > 0 && candidates[j] - candidates[k] < min_distance;) keep[k] = false;
        for (std::size_t k = j + 1; k < candidates.size() && candidates[k] - candidates[j] < min_distance; ++k) {
            keep[k] = false;
        }
    }
    std::vector<std::size_t> peaks;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (keep[j]) peaks.push_back(candidates[j]);
    }
    return peaks;
}

}  // namespace eog::dsp
