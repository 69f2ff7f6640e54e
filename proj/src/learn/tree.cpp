#include <algorithm>
#include <cmath>
#include <numeric>

#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::learn {

namespace {

using Counts = std::array<double, kNumClasses>;

double gini(const Counts& c, double n) {
    if (n <= 0.0) return 0.0;
    double s = 0.0;
    for (double v : c) s += v * v;
    return 1.0 - s / (n * n);
}

// Presorted CART growth. Positions p index the (possibly repeated) training rows; every feature
// keeps the node's positions contiguous and sorted by that feature's value.
class Builder {
public:
    Builder(const Eigen::MatrixXd& x, const std::vector<int>& y, const std::vector<std::size_t>& rows,
            const ColumnOrder& order, const std::vector<std::size_t>& columns, const ModelParams& params,
            std::vector<TreeNode>& nodes, std::vector<double>& importance)
        : x_(x), columns_(columns), params_(params), nodes_(nodes), importance_(importance),
          rng_(seeded_engine(params.seed, 1)) {
        m_ = rows.size();
        d_ = columns.size();
        row_of_ = rows;
        label_.resize(m_);
        for (std::size_t p = 0; p < m_; ++p) label_[p] = y[rows[p]];

        // Positions grouped by source row so each sorted column expands in O(n + m).
        const auto n = static_cast<std::size_t>(x.rows());
        std::vector<std::uint32_t> start(n + 1, 0);
        for (std::size_t r : rows) ++start[r + 1];
        for (std::size_t r = 0; r < n; ++r) start[r + 1] += start[r];
        std::vector<std::uint32_t> grouped(m_);
        std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
        for (std::size_t p = 0; p < m_; ++p) grouped[fill[rows[p]]++] = static_cast<std::uint32_t>(p);

        sorted_.resize(d_ * m_);
        for (std::size_t f = 0; f < d_; ++f) {
            auto* out = sorted_.data() + f * m_;
            for (std::uint32_t r : order[columns[f]]) {
                for (std::uint32_t i = start[r]; i < start[r + 1]; ++i) *out++ = grouped[i];
            }
        }
        goes_left_.assign(m_, 0);
        scratch_.resize(m_);
        perm_.resize(d_);
        max_features_ = params.max_features ? std::clamp<std::size_t>(*params.max_features, 1, std::max<std::size_t>(d_, 1))
                                            : d_;
    }

    void run() {
        nodes_.clear();
        importance_.assign(d_, 0.0);
        if (m_ == 0) throw InvalidParameter("cannot fit a tree on zero rows");
        grow(0, m_, 0);
        const double total = std::accumulate(importance_.begin(), importance_.end(), 0.0);
        if (total > 0.0) {
            for (double& v : importance_) v /= total;
        }
    }

private:
    double value(std::size_t p, std::size_t f) const {
        return x_(static_cast<Eigen::Index>(row_of_[p]), static_cast<Eigen::Index>(columns_[f]));
    }

    int grow(std::size_t begin, std::size_t end, std::size_t depth) {
        const auto index = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        const double n = static_cast<double>(end - begin);
        Counts counts{};
        const std::uint32_t* seg0 = d_ > 0 ? sorted_.data() : nullptr;
        if (seg0) {
            for (std::size_t i = begin; i < end; ++i) counts[static_cast<std::size_t>(label_[seg0[i]])] += 1.0;
        } else {
            for (std::size_t p = begin; p < end; ++p) counts[static_cast<std::size_t>(label_[p])] += 1.0;
        }
        const double impurity = gini(counts, n);
        {
            TreeNode& node = nodes_[static_cast<std::size_t>(index)];
            node.n_samples = end - begin;
            node.impurity = impurity;
            for (std::size_t c = 0; c < kNumClasses; ++c) node.value[c] = counts[c] / n;
        }

        const bool depth_limited = params_.max_depth && depth >= *params_.max_depth;
        if (depth_limited || end - begin < std::max<std::size_t>(params_.min_samples_split, 2) || impurity <= 0.0 ||
            d_ == 0) {
            return index;
        }

        std::iota(perm_.begin(), perm_.end(), 0);
        if (max_features_ < d_) std::shuffle(perm_.begin(), perm_.end(), rng_);

        double parent_sq = 0.0;
        for (double c : counts) parent_sq += c * c;

        double best_score = parent_sq / n;  // a split must beat the unsplit node
        std::size_t best_feature = d_;
        std::size_t best_split = 0;  // number of positions going left
        double best_threshold = 0.0;
        std::size_t visited = 0;
        for (std::size_t fi = 0; fi < d_ && visited < max_features_; ++fi) {
            const std::size_t f = perm_[fi];
            const std::uint32_t* seg = sorted_.data() + f * m_;
            if (value(seg[begin], f) == value(seg[end - 1], f)) continue;
            ++visited;
            Counts left{};
            double left_sq = 0.0;
            double right_sq = parent_sq;
            Counts right = counts;
            for (std::size_t i = begin; i + 1 < end; ++i) {
                const auto c = static_cast<std::size_t>(label_[seg[i]]);
                left_sq += 2.0 * left[c] + 1.0;
                left[c] += 1.0;
                right_sq -= 2.0 * right[c] - 1.0;
                right[c] -= 1.0;
                const double v = value(seg[i], f);
                const double next = value(seg[i + 1], f);
                if (!(v < next)) continue;
                const double nl = static_cast<double>(i + 1 - begin);
                const double score = left_sq / nl + right_sq / (n - nl);
                if (score > best_score + 1e-12 * n) {
                    best_score = score;
                    best_feature = f;
                    best_split = i + 1 - begin;
                    best_threshold = 0.5 * (v + next);
                    if (best_threshold >= next) best_threshold = v;
                }
            }
        }
        if (best_feature == d_) return index;

        const std::uint32_t* best_seg = sorted_.data() + best_feature * m_;
        Counts left{};
        for (std::size_t i = begin; i < end; ++i) {
            goes_left_[best_seg[i]] = i < begin + best_split ? 1 : 0;
            if (i < begin + best_split) left[static_cast<std::size_t>(label_[best_seg[i]])] += 1.0;
        }
        Counts right{};
        for (std::size_t c = 0; c < kNumClasses; ++c) right[c] = counts[c] - left[c];
        const double nl = static_cast<double>(best_split);
        const double nr = n - nl;
        importance_[best_feature] += n * impurity - nl * gini(left, nl) - nr * gini(right, nr);

        for (std::size_t f = 0; f < d_; ++f) {
            if (f == best_feature) continue;
            std::uint32_t* seg = sorted_.data() + f * m_;
            std::size_t l = begin;
            std::size_t r = 0;
            for (std::size_t i = begin; i < end; ++i) {
                if (goes_left_[seg[i]]) {
                    seg[l++] = seg[i];
                } else {
                    scratch_[r++] = seg[i];
                }
            }
            std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(r), seg + l);
        }

        const std::size_t mid = begin + best_split;
        const int left_child = grow(begin, mid, depth + 1);
        const int right_child = grow(mid, end, depth + 1);
        TreeNode& node = nodes_[static_cast<std::size_t>(index)];
        node.feature = static_cast<int>(best_feature);
        node.threshold = best_threshold;
        node.left = left_child;
        node.right = right_child;
        return index;
    }

    const Eigen::MatrixXd& x_;
    const std::vector<std::size_t>& columns_;
    const ModelParams& params_;
    std::vector<TreeNode>& nodes_;
    std::vector<double>& importance_;
    std::mt19937_64 rng_;
    std::size_t m_ = 0;
    std::size_t d_ = 0;
    std::size_t max_features_ = 0;
    std::vector<std::size_t> row_of_;
    std::vector<int> label_;
    std::vector<std::uint32_t> sorted_;
    std::vector<char> goes_left_;
    std::vector<std::uint32_t> scratch_;
    std::vector<std::size_t> perm_;
};

}  // namespace

ColumnOrder presort_columns(const Eigen::MatrixXd& x) {
    ColumnOrder order(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
        auto& o = order[static_cast<std::size_t>(f)];
        o.resize(static_cast<std::size_t>(x.rows()));
        std::iota(o.begin(), o.end(), 0U);
        std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) { return x(a, f) < x(b, f); });
    }
    return order;
}

bool operator==(const TreeNode& a, const TreeNode& b) {
    return a.feature == b.feature && a.threshold == b.threshold && a.left == b.left && a.right == b.right &&
           a.value == b.value && a.n_samples == b.n_samples && a.impurity == b.impurity;
}

bool operator==(const DecisionTree& a, const DecisionTree& b) {
    return a.n_features_ == b.n_features_ && a.nodes_ == b.nodes_;
}

DecisionTree::DecisionTree(ModelParams params) : params_(params) {}

void DecisionTree::fit(const Eigen::MatrixXd& x, const std::vector<int>& y) {
    std::vector<std::size_t> rows(y.size());
    std::iota(rows.begin(), rows.end(), 0);
    fit_rows(x, y, rows);
}

void DecisionTree::fit_rows(const Eigen::MatrixXd& x, const std::vector<int>& y,
                            const std::vector<std::size_t>& rows) {
    std::vector<std::size_t> columns(static_cast<std::size_t>(x.cols()));
    std::iota(columns.begin(), columns.end(), 0);
    fit_presorted(x, y, rows, presort_columns(x), columns);
}

void DecisionTree::fit_presorted(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                 const std::vector<std::size_t>& rows, const ColumnOrder& order,
                                 const std::vector<std::size_t>& columns) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw DimensionMismatch("rows and labels differ");
    for (int label : y) {
        if (label < 0 || label >= kNumClasses) throw InvalidParameter("class label out of range");
    }
    Builder builder(x, y, rows, order, columns, params_, nodes_, importance_);
    builder.run();
    n_features_ = columns.size();
}

void DecisionTree::restore(std::vector<TreeNode> nodes, std::size_t n_features) {
    nodes_ = std::move(nodes);
    n_features_ = n_features;
    importance_.assign(n_features, 0.0);
}

std::size_t DecisionTree::depth() const {
    if (nodes_.empty()) return 0;
    std::size_t best = 0;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [i, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        const auto& node = nodes_[static_cast<std::size_t>(i)];
        if (node.feature >= 0) {
            stack.emplace_back(node.left, d + 1);
            stack.emplace_back(node.right, d + 1);
        }
    }
    return best;
}

Eigen::MatrixXd DecisionTree::predict_scores(const Eigen::MatrixXd& x) const {
    if (nodes_.empty()) throw InvalidParameter("classifier is not fitted");
    if (x.rows() > 0 && static_cast<std::size_t>(x.cols()) != n_features_) {
        throw DimensionMismatch("feature count differs from training");
    }
    Eigen::MatrixXd scores(x.rows(), kNumClasses);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        std::size_t i = 0;
        while (nodes_[i].feature >= 0) {
            const auto& node = nodes_[i];
            i = static_cast<std::size_t>(x(r, node.feature) <= node.threshold ? node.left : node.right);
        }
        for (int c = 0; c < kNumClasses; ++c) scores(r, c) = nodes_[i].value[static_cast<std::size_t>(c)];
    }
    return scores;
}

}  // namespace eog::learn
