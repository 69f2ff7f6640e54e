#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::learn {

using nlohmann::json;

namespace {

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd json_vec(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mat_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_json(m.row(r).transpose()));
    return rows;
}

Eigen::MatrixXd json_mat(const json& j, Eigen::Index cols) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const auto row = json_vec(j[r]);
        if (row.size() != cols) throw FormatError("matrix row has the wrong width");
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

json tree_json(const std::vector<TreeNode>& nodes, std::size_t i) {
    const auto& n = nodes[i];
    json j;
    j["n"] = n.n_samples;
    j["impurity"] = n.impurity;
    j["value"] = std::vector<double>(n.value.begin(), n.value.end());
    if (n.feature >= 0) {
        j["feature"] = n.feature;
        j["threshold"] = n.threshold;
        j["left"] = tree_json(nodes, static_cast<std::size_t>(n.left));
        j["right"] = tree_json(nodes, static_cast<std::size_t>(n.right));
    }
    return j;
}

int json_tree(const json& j, std::vector<TreeNode>& nodes) {
    const auto index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    TreeNode node;
    node.n_samples = j.at("n").get<std::size_t>();
    node.impurity = j.at("impurity").get<double>();
    const auto value = j.at("value").get<std::vector<double>>();
    if (value.size() != kNumClasses) throw FormatError("tree node value has the wrong length");
    std::copy(value.begin(), value.end(), node.value.begin());
    if (j.contains("feature")) {
        node.feature = j.at("feature").get<int>();
        node.threshold = j.at("threshold").get<double>();
        node.left = json_tree(j.at("left"), nodes);
        node.right = json_tree(j.at("right"), nodes);
    }
    nodes[static_cast<std::size_t>(index)] = node;
    return index;
}

std::vector<TreeNode> json_tree_nodes(const json& j) {
    std::vector<TreeNode> nodes;
    json_tree(j, nodes);
    return nodes;
}

json params_json(const ModelParams& p) {
    json j;
    j["k"] = p.k;
    j["shrinkage"] = p.shrinkage ? json(*p.shrinkage) : json("auto");
    j["n_trees"] = p.n_trees;
    j["max_depth"] = p.max_depth ? json(*p.max_depth) : json(nullptr);
    j["max_features"] = p.max_features ? json(*p.max_features) : json(nullptr);
    j["min_samples_split"] = p.min_samples_split;
    j["seed"] = p.seed;
    return j;
}

ModelParams json_params(const json& j) {
    ModelParams p;
    p.k = j.at("k").get<int>();
    if (j.at("shrinkage").is_number()) p.shrinkage = j.at("shrinkage").get<double>();
    p.n_trees = j.at("n_trees").get<std::size_t>();
    if (!j.at("max_depth").is_null()) p.max_depth = j.at("max_depth").get<std::size_t>();
    if (!j.at("max_features").is_null()) p.max_features = j.at("max_features").get<std::size_t>();
    p.min_samples_split = j.at("min_samples_split").get<std::size_t>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

json metrics_json(const ClassificationMetrics& m) {
    return {{"accuracy", m.accuracy},
            {"precision", m.precision},
            {"recall", m.recall},
            {"f1", m.f1},
            {"weighted_precision", m.weighted_precision},
            {"weighted_recall", m.weighted_recall},
            {"weighted_f1", m.weighted_f1},
            {"zero_division", m.zero_division}};
}

}  // namespace

std::size_t TrainedModel::selected_count() const {
    return static_cast<std::size_t>(std::count(selected.begin(), selected.end(), true));
}

Eigen::MatrixXd TrainedModel::predict_scores(const Eigen::MatrixXd& raw) const {
    if (!classifier) throw InvalidParameter("model has no fitted classifier");
    if (raw.cols() != norm.mean.size()) throw DimensionMismatch("input width does not match the model");
    return classifier->predict_scores(take_columns(norm.apply(raw), selected));
}

std::vector<int> TrainedModel::predict(const Eigen::MatrixXd& raw) const {
    if (!classifier) throw InvalidParameter("model has no fitted classifier");
    if (raw.cols() != norm.mean.size()) throw DimensionMismatch("input width does not match the model");
    return classifier->predict(take_columns(norm.apply(raw), selected));
}

FitArtifacts fit_artifacts(ModelKind kind, const Eigen::MatrixXd& x, const std::vector<int>& y,
                           const TrainOptions& options) {
    FitArtifacts a;
    a.norm = features::fit_normalization(x);
    const Eigen::MatrixXd z = a.norm.apply(x);
    if (options.select_features) {
        a.selection = rfecv(z, y, options.rfecv_folds, options.seed);
    } else {
        a.selection.mask.assign(static_cast<std::size_t>(x.cols()), true);
        a.selection.ranking.assign(static_cast<std::size_t>(x.cols()), 1);
    }
    const auto grid = options.grid ? *options.grid : default_grid(kind, options.seed);
    a.grid = grid_search(kind, grid, take_columns(z, a.selection.mask), y, options.inner_folds, options.seed);
    a.chosen = grid[a.grid.best];
    return a;
}

TrainedModel train_model(ModelKind kind, const LabeledDataset& data, const TrainOptions& options) {
    data.validate();
    const auto artifacts = fit_artifacts(kind, data.X, data.y, options);
    TrainedModel m;
    m.kind = kind;
    m.params = artifacts.chosen;
    m.selected = artifacts.selection.mask;
    m.norm = artifacts.norm;
    m.feature_names = data.feature_names;
    m.classifier = fit_classifier(kind, m.params, take_columns(m.norm.apply(data.X), m.selected), data.y);
    return m;
}

std::string model_to_json(const TrainedModel& model) {
    if (!model.classifier) throw InvalidParameter("model has no fitted classifier");
    json j;
    j["format"] = kModelFormat;
    j["version"] = kModelVersion;
    j["feature_schema"] = features::kSchemaVersion;
    j["kind"] = std::string(to_string(model.kind));
    j["params"] = params_json(model.params);
    j["selected"] = model.selected;
    j["feature_names"] = model.feature_names;
    j["norm"] = {{"mean", vec_json(model.norm.mean)},
                 {"std", vec_json(model.norm.std)},
                 {"zero_variance", model.norm.zero_variance}};
    json c;
    switch (model.kind) {
        case ModelKind::knn: {
            const auto& knn = dynamic_cast<const KnnClassifier&>(*model.classifier);
            c["k"] = knn.k();
            c["x"] = mat_json(knn.train_x());
            c["y"] = knn.train_y();
            break;
        }
        case ModelKind::lda_shrinkage: {
            const auto& lda = dynamic_cast<const LdaClassifier&>(*model.classifier);
            c["shrinkage"] = lda.fitted_shrinkage();
            c["coef"] = mat_json(lda.coef());
            c["intercept"] = vec_json(lda.intercept());
            c["present"] = lda.present();
            break;
        }
        case ModelKind::decision_tree: {
            const auto& tree = dynamic_cast<const DecisionTree&>(*model.classifier);
            c["tree"] = tree_json(tree.nodes(), 0);
            break;
        }
        case ModelKind::random_forest: {
            const auto& forest = dynamic_cast<const RandomForest&>(*model.classifier);
            c["trees"] = json::array();
            for (const auto& t : forest.trees()) c["trees"].push_back(tree_json(t.nodes(), 0));
            break;
        }
    }
    j["classifier"] = std::move(c);
    return j.dump();
}

TrainedModel model_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != kModelFormat) throw FormatError("not a model file");
        if (j.at("version").get<int>() != kModelVersion) throw FormatError("unsupported model version");
        if (j.at("feature_schema").get<std::string>() != features::kSchemaVersion)
            throw FormatError("model was trained on a different feature schema");
        TrainedModel m;
        m.kind = model_kind_from_string(j.at("kind").get<std::string>());
        m.params = json_params(j.at("params"));
        m.selected = j.at("selected").get<std::vector<bool>>();
        m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        m.norm.mean = json_vec(j.at("norm").at("mean"));
        m.norm.std = json_vec(j.at("norm").at("std"));
        m.norm.zero_variance = j.at("norm").at("zero_variance").get<std::vector<bool>>();
        if (m.selected.size() != static_cast<std::size_t>(m.norm.mean.size()) ||
            m.norm.std.size() != m.norm.mean.size() ||
            m.norm.zero_variance.size() != static_cast<std::size_t>(m.norm.mean.size())) {
            throw FormatError("model dimensions disagree");
        }
        const auto width = static_cast<Eigen::Index>(m.selected_count());
        const json& c = j.at("classifier");
        switch (m.kind) {
            case ModelKind::knn: {
                auto knn = std::make_shared<KnnClassifier>(c.at("k").get<int>());
                knn->restore(json_mat(c.at("x"), width), c.at("y").get<std::vector<int>>());
                m.classifier = knn;
                break;
            }
            case ModelKind::lda_shrinkage: {
                auto lda = std::make_shared<LdaClassifier>();
                lda->restore(json_mat(c.at("coef"), width), json_vec(c.at("intercept")),
                             c.at("present").get<std::vector<bool>>(), c.at("shrinkage").get<double>());
                m.classifier = lda;
                break;
            }
            case ModelKind::decision_tree: {
                auto tree = std::make_shared<DecisionTree>(m.params);
                tree->restore(json_tree_nodes(c.at("tree")), static_cast<std::size_t>(width));
                m.classifier = tree;
                break;
            }
            case ModelKind::random_forest: {
                std::vector<DecisionTree> trees;
                for (const auto& t : c.at("trees")) {
                    DecisionTree tree(m.params);
                    tree.restore(json_tree_nodes(t), static_cast<std::size_t>(width));
                    trees.push_back(std::move(tree));
                }
                auto forest = std::make_shared<RandomForest>(m.params);
                forest->restore(std::move(trees), static_cast<std::size_t>(width));
                m.classifier = forest;
                break;
            }
        }
        return m;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed model JSON: ") + e.what());
    }
}

std::string eval_report_to_json(const EvalReport& report) {
    json j;
    j["kind"] = std::string(to_string(report.kind));
    j["mean_accuracy"] = report.mean_accuracy;
    j["accuracy_std"] = report.accuracy_std;
    j["mean_precision"] = report.mean_precision;
    j["mean_recall"] = report.mean_recall;
    j["mean_f1"] = report.mean_f1;
    j["classes"] = activity_names();
    j["confusion"] = mat_json(report.confusion);
    j["folds"] = json::array();
    for (const auto& f : report.folds) {
        json fj = metrics_json(f.metrics);
        fj["test_session"] = f.test_session;
        fj["n_train"] = f.train_rows.size();
        fj["n_test"] = f.test_rows.size();
        fj["selected"] = f.artifacts.selection.mask;
        fj["selected_count"] = std::count(f.artifacts.selection.mask.begin(), f.artifacts.selection.mask.end(), true);
        fj["rfecv_scores"] = f.artifacts.selection.mean_scores;
        fj["grid_scores"] = f.artifacts.grid.scores;
        fj["chosen"] = params_json(f.artifacts.chosen);
        fj["norm_mean"] = vec_json(f.artifacts.norm.mean);
        fj["norm_std"] = vec_json(f.artifacts.norm.std);
        j["folds"].push_back(std::move(fj));
    }
    return j.dump(2);
}

}  // namespace eog::learn
