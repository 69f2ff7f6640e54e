#include <algorithm>
#include <numeric>

#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::learn {

namespace {

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
    if (truth.empty()) return 0.0;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hit += truth[i] == pred[i] ? 1 : 0;
    return static_cast<double>(hit) / static_cast<double>(truth.size());
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& part, std::size_t n) {
    std::vector<char> in(n, 0);
    for (std::size_t r : part) in[r] = 1;
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < n; ++r) {
        if (!in[r]) out.push_back(r);
    }
    return out;
}

Eigen::MatrixXd take(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows,
                     const std::vector<std::size_t>& columns) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                x(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(columns[j]));
        }
    }
    return out;
}

// Index into `remaining` of the least important feature; earliest on ties.
std::size_t weakest(const std::vector<double>& importance) {
    return static_cast<std::size_t>(std::min_element(importance.begin(), importance.end()) - importance.begin());
}

}  // namespace

std::vector<ModelParams> default_grid(ModelKind kind, std::uint64_t seed) {
    std::vector<ModelParams> grid;
    ModelParams base;
    base.seed = seed;
    switch (kind) {
        case ModelKind::knn:
            for (int k : {1, 3, 5, 7, 11}) {
                base.k = k;
                grid.push_back(base);
            }
            break;
        case ModelKind::lda_shrinkage:
            for (double a : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
                base.shrinkage = a;
                grid.push_back(base);
            }
            base.shrinkage.reset();
            grid.push_back(base);
            break;
        case ModelKind::decision_tree:
            for (auto depth : {std::optional<std::size_t>{}, std::optional<std::size_t>{10}}) {
                base.max_depth = depth;
                grid.push_back(base);
            }
            break;
        case ModelKind::random_forest:
            for (std::size_t trees : {100, 300}) {
                for (auto depth : {std::optional<std::size_t>{}, std::optional<std::size_t>{10}}) {
                    base.n_trees = trees;
                    base.max_depth = depth;
                    grid.push_back(base);
                }
            }
            break;
    }
    return grid;
}

GridResult grid_search(ModelKind kind, const std::vector<ModelParams>& grid, const Eigen::MatrixXd& x,
                       const std::vector<int>& y, std::size_t folds, std::uint64_t seed) {
    if (grid.empty()) throw InvalidParameter("empty parameter grid");
    GridResult result;
    if (grid.size() == 1) {
        result.scores.assign(1, 0.0);
        return result;
    }
    const auto cv = stratified_folds(y, folds, seed);
    result.scores.assign(grid.size(), 0.0);
    for (const auto& test : cv) {
        const auto train = complement(test, y.size());
        const Eigen::MatrixXd xtr = take_rows(x, train);
        const Eigen::MatrixXd xte = take_rows(x, test);
        const auto ytr = learn::take(y, train);
        const auto yte = learn::take(y, test);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            auto model = make_classifier(kind, grid[g]);
            model->fit(xtr, ytr);
            result.scores[g] += accuracy(yte, model->predict(xte)) / static_cast<double>(cv.size());
        }
    }
    for (std::size_t g = 1; g < grid.size(); ++g) {
        if (result.scores[g] > result.scores[result.best]) result.best = g;
    }
    return result;
}

RfecvResult rfecv(const Eigen::MatrixXd& x, const std::vector<int>& y, std::size_t folds, std::uint64_t seed) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw DimensionMismatch("rows and labels differ");
    if (y.size() < folds) throw InvalidParameter("RFECV needs at least as many rows as folds");
    const auto d = static_cast<std::size_t>(x.cols());
    if (d == 0) throw InvalidParameter("RFECV needs at least one feature");
    RfecvResult result;
    if (d == 1) {
        result.mask.assign(1, true);
        result.ranking.assign(1, 1);
        return result;
    }

    ModelParams tree_params;
    tree_params.seed = seed;
    const auto order = presort_columns(x);
    const auto cv = stratified_folds(y, folds, seed);
    result.mean_scores.assign(d, 0.0);
    for (const auto& test : cv) {
        const auto train = complement(test, y.size());
        const auto yte = learn::take(y, test);
        std::vector<std::size_t> remaining(d);
        std::iota(remaining.begin(), remaining.end(), 0);
        while (true) {
            DecisionTree tree(tree_params);
            tree.fit_presorted(x, y, train, order, remaining);
            result.mean_scores[remaining.size() - 1] +=
                accuracy(yte, tree.predict(take(x, test, remaining))) / static_cast<double>(cv.size());
            if (remaining.size() == 1) break;
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(weakest(tree.feature_importances())));
        }
    }

    std::size_t best = 1;
    for (std::size_t count = 2; count <= d; ++count) {
        if (result.mean_scores[count - 1] > result.mean_scores[best - 1]) best = count;
    }

    std::vector<std::size_t> all(y.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> remaining(d);
    std::iota(remaining.begin(), remaining.end(), 0);
    result.ranking.assign(d, 1);
    std::size_t rank = d - best + 1;
    while (remaining.size() > best) {
        DecisionTree tree(tree_params);
        tree.fit_presorted(x, y, all, order, remaining);
        const std::size_t drop = weakest(tree.feature_importances());
        result.ranking[remaining[drop]] = rank--;
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    result.mask.assign(d, false);
    for (std::size_t f : remaining) result.mask[f] = true;
    return result;
}

}  // namespace eog::learn
