#include <cmath>
#include <numeric>

#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::learn {

RandomForest::RandomForest(ModelParams params) : params_(params) {
    if (params.n_trees == 0) throw InvalidParameter("a forest needs at least one tree");
}

std::uint64_t RandomForest::tree_seed(std::size_t tree) const { return seeded_engine(params_.seed, tree)(); }

std::vector<std::size_t> RandomForest::bootstrap_indices(std::size_t n, std::size_t tree) const {
    auto rng = seeded_engine(tree_seed(tree), 2);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = pick(rng);
    return rows;
}

ModelParams RandomForest::tree_params(std::size_t tree, std::size_t n_features) const {
    ModelParams p = params_;
    p.seed = tree_seed(tree);
    p.max_features = params_.max_features.value_or(
        std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features))))));
    return p;
}

void RandomForest::fit(const Eigen::MatrixXd& x, const std::vector<int>& y) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw DimensionMismatch("rows and labels differ");
    if (y.empty()) throw InvalidParameter("cannot fit on an empty training set");
    n_features_ = static_cast<std::size_t>(x.cols());
    const auto order = presort_columns(x);
    std::vector<std::size_t> columns(n_features_);
    std::iota(columns.begin(), columns.end(), 0);
    trees_.clear();
    trees_.reserve(params_.n_trees);
    for (std::size_t t = 0; t < params_.n_trees; ++t) {
        DecisionTree tree(tree_params(t, n_features_));
        tree.fit_presorted(x, y, bootstrap_indices(y.size(), t), order, columns);
        trees_.push_back(std::move(tree));
    }
}

void RandomForest::restore(std::vector<DecisionTree> trees, std::size_t n_features) {
    trees_ = std::move(trees);
    n_features_ = n_features;
}

Eigen::MatrixXd RandomForest::predict_scores(const Eigen::MatrixXd& x) const {
    if (trees_.empty()) throw InvalidParameter("classifier is not fitted");
    Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(x.rows(), kNumClasses);
    for (const auto& tree : trees_) scores += tree.predict_scores(x);
    return scores / static_cast<double>(trees_.size());
}

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::knn: return "knn";
        case ModelKind::lda_shrinkage: return "lda";
        case ModelKind::decision_tree: return "tree";
        case ModelKind::random_forest: return "rf";
    }
    return "rf";
}

ModelKind model_kind_from_string(std::string_view name) {
    if (name == "knn") return ModelKind::knn;
    if (name == "lda" || name == "lda_shrinkage") return ModelKind::lda_shrinkage;
    if (name == "tree" || name == "dt" || name == "decision_tree") return ModelKind::decision_tree;
    if (name == "rf" || name == "forest" || name == "random_forest") return ModelKind::random_forest;
    throw InvalidParameter("unknown model kind: " + std::string(name));
}

std::unique_ptr<Classifier> make_classifier(ModelKind kind, const ModelParams& params) {
    switch (kind) {
        case ModelKind::knn: return std::make_unique<KnnClassifier>(params.k);
        case ModelKind::lda_shrinkage: return std::make_unique<LdaClassifier>(params.shrinkage);
        case ModelKind::decision_tree: return std::make_unique<DecisionTree>(params);
        case ModelKind::random_forest: return std::make_unique<RandomForest>(params);
    }
    throw InvalidParameter("unknown model kind");
}

std::unique_ptr<Classifier> fit_classifier(ModelKind kind, const ModelParams& params, const Eigen::MatrixXd& x,
                                           const std::vector<int>& y) {
    bool single = true;
    for (int label : y) single = single && label == y.front();
    if (y.empty() || single) throw InvalidParameter("training labels must contain at least 2 classes");
    auto model = make_classifier(kind, params);
    model->fit(x, y);
    return model;
}

}  // namespace eog::learn
