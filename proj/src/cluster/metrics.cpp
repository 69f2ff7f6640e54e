#include <algorithm>
#include <cmath>
#include <map>

#include "eog/cluster.hpp"
#include "eog/error.hpp"

namespace eog::cluster {

namespace {

double entropy(const std::map<int, double>& counts, double n) {
    double h = 0.0;
    for (const auto& [label, c] : counts) {
        if (c > 0.0) h -= c / n * std::log(c / n);
    }
    return h;
}

}  // namespace

ExternalMetrics external_metrics(const std::vector<int>& labels_true, const std::vector<int>& labels_pred) {
    if (labels_true.size() != labels_pred.size()) throw DimensionMismatch("labelings differ in length");
    ExternalMetrics m{1.0, 1.0, 1.0};
    if (labels_true.empty()) return m;
    const auto n = static_cast<double>(labels_true.size());
    std::map<int, double> ct, cp;
    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < labels_true.size(); ++i) {
        ct[labels_true[i]] += 1.0;
        cp[labels_pred[i]] += 1.0;
        joint[{labels_true[i], labels_pred[i]}] += 1.0;
    }
    const double h_true = entropy(ct, n);
    const double h_pred = entropy(cp, n);
    // H(true | pred) and H(pred | true)
    double h_t_given_p = 0.0;
    double h_p_given_t = 0.0;
    for (const auto& [key, c] : joint) {
        h_t_given_p -= c / n * std::log(c / cp[key.second]);
        h_p_given_t -= c / n * std::log(c / ct[key.first]);
    }
    m.homogeneity = h_true > 0.0 ? 1.0 - h_t_given_p / h_true : 1.0;
    m.completeness = h_pred > 0.0 ? 1.0 - h_p_given_t / h_pred : 1.0;
    m.homogeneity = std::clamp(m.homogeneity, 0.0, 1.0);
    m.completeness = std::clamp(m.completeness, 0.0, 1.0);
    const double s = m.homogeneity + m.completeness;
    m.v_measure = s > 0.0 ? 2.0 * m.homogeneity * m.completeness / s : 0.0;
    return m;
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = (x.row(i) - x.row(j)).norm();
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return d;
}

SilhouetteResult silhouette_from_distances(const Eigen::MatrixXd& dist, const std::vector<int>& labels) {
    const auto n = labels.size();
    if (static_cast<std::size_t>(dist.rows()) != n || dist.rows() != dist.cols()) {
        throw DimensionMismatch("distance matrix does not match the labels");
    }
    std::map<int, std::size_t> index;
    for (int l : labels) index.emplace(l, 0);
    if (index.size() < 2) throw InvalidParameter("silhouette needs at least 2 clusters");
    std::size_t next = 0;
    for (auto& [label, i] : index) i = next++;
    const std::size_t k = index.size();
    std::vector<std::size_t> cluster(n);
    std::vector<double> size(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cluster[i] = index[labels[i]];
        size[cluster[i]] += 1.0;
    }

    SilhouetteResult r;
    r.samples.assign(n, 0.0);
    std::vector<double> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) sums[cluster[j]] += dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const std::size_t own = cluster[i];
        if (size[own] <= 1.0) {
            ++r.singletons;
            continue;
        }
        const double a = sums[own] / (size[own] - 1.0);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own) b = std::min(b, sums[c] / size[c]);
        }
        const double denom = std::max(a, b);
        r.samples[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    std::vector<double> cluster_sum(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        r.mean += r.samples[i] / static_cast<double>(n);
        cluster_sum[cluster[i]] += r.samples[i];
    }
    for (std::size_t c = 0; c < k; ++c) r.asw += cluster_sum[c] / size[c] / static_cast<double>(k);
    return r;
}

SilhouetteResult silhouette(const Eigen::MatrixXd& x, const std::vector<int>& labels) {
    if (static_cast<std::size_t>(x.rows()) != labels.size()) throw DimensionMismatch("rows and labels differ");
    return silhouette_from_distances(pairwise_distances(x), labels);
}

std::string_view to_string(Algorithm algo) noexcept { return algo == Algorithm::kmeans ? "kmeans" : "fcm"; }

Algorithm algorithm_from_string(std::string_view name) {
    if (name == "kmeans") return Algorithm::kmeans;
    if (name == "fcm" || name == "fuzzy_cmeans") return Algorithm::fcm;
    throw InvalidParameter("unknown clustering algorithm: " + std::string(name));
}

SweepResult asw_sweep(const Eigen::MatrixXd& x, Algorithm algo, std::size_t k_min, std::size_t k_max,
                      std::uint64_t seed) {
    if (k_min < 2 || k_max < k_min) throw InvalidParameter("k range must satisfy 2 <= k_min <= k_max");
    if (k_max >= static_cast<std::size_t>(x.rows())) throw InvalidParameter("k range exceeds the number of points");
    const Eigen::MatrixXd dist = pairwise_distances(x);
    SweepResult out;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = k_min; k <= k_max; ++k) {
        const auto assignment = algo == Algorithm::kmeans ? kmeans(x, k, seed) : fuzzy_cmeans(x, k, seed);
        std::vector<int> used = assignment.labels;
        std::sort(used.begin(), used.end());
        used.erase(std::unique(used.begin(), used.end()), used.end());
        double asw = -1.0;
        double flat = -1.0;
        if (used.size() >= 2) {
            const auto s = silhouette_from_distances(dist, assignment.labels);
            asw = s.asw;
            flat = s.mean;
        }
        out.ks.push_back(k);
        out.asw.push_back(asw);
        out.mean_silhouette.push_back(flat);
        if (asw > best) {
            best = asw;
            out.best_k = k;
        }
    }
    return out;
}

}  // namespace eog::cluster
