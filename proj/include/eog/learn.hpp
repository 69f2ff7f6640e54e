#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "eog/features.hpp"

namespace eog::learn {

// ---- labels and datasets --------------------------------------------------

inline constexpr int kNumClasses = 6;

/// Activity alphabet; the index is the class label used everywhere.
[[nodiscard]] const std::array<std::string, kNumClasses>& activity_names();
/// Throws InvalidParameter for names outside the alphabet.
[[nodiscard]] int activity_index(std::string_view name);
[[nodiscard]] const std::string& activity_name(int label);

inline constexpr int kBlinkLabel = 5;

struct LabeledDataset {
    Eigen::MatrixXd X;
    std::vector<int> y;
    std::vector<std::string> session;
    std::vector<std::string> feature_names;

    [[nodiscard]] std::size_t rows() const noexcept { return y.size(); }
    /// Consistent sizes and labels inside the alphabet.
    void validate() const;
    /// Distinct sessions in sorted order.
    [[nodiscard]] std::vector<std::string> sessions() const;
    [[nodiscard]] LabeledDataset subset(const std::vector<std::size_t>& rows) const;
};

[[nodiscard]] Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows);
[[nodiscard]] std::vector<int> take(const std::vector<int>& y, const std::vector<std::size_t>& rows);
[[nodiscard]] Eigen::MatrixXd take_columns(const Eigen::MatrixXd& x, const std::vector<bool>& mask);

/// Per-class shuffled round-robin assignment of rows to folds.
[[nodiscard]] std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& y, std::size_t folds,
                                                                     std::uint64_t seed);

/// Deterministic generator for a (seed, stream) pair.
[[nodiscard]] std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream);

// ---- classifiers ----------------------------------------------------------

enum class ModelKind { knn, lda_shrinkage, decision_tree, random_forest };

[[nodiscard]] std::string_view to_string(ModelKind kind) noexcept;
[[nodiscard]] ModelKind model_kind_from_string(std::string_view name);

struct ModelParams {
    int k = 5;                                 // knn
    std::optional<double> shrinkage;           // lda; nullopt = Ledoit-Wolf
    std::size_t n_trees = 100;                 // forest
    std::optional<std::size_t> max_depth;      // tree/forest; nullopt = unlimited
    std::optional<std::size_t> max_features;   // tree/forest; nullopt = all (tree) or sqrt(d) (forest)
    std::size_t min_samples_split = 2;
    std::uint64_t seed = 0;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

class Classifier {
public:
    virtual ~Classifier() = default;
    virtual void fit(const Eigen::MatrixXd& x, const std::vector<int>& y) = 0;
    /// Row-wise scores over all kNumClasses classes; each row sums to 1.
    [[nodiscard]] virtual Eigen::MatrixXd predict_scores(const Eigen::MatrixXd& x) const = 0;
    [[nodiscard]] virtual std::size_t n_features() const noexcept = 0;
    /// Argmax of the scores unless a classifier has its own tie rule.
    [[nodiscard]] virtual std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

/// Argmax per row, lowest class on ties.
[[nodiscard]] std::vector<int> argmax_rows(const Eigen::MatrixXd& scores);

/**
 * @brief Brute-force Euclidean k-nearest neighbours.
 *
 * Neighbours are ranked by (distance, label, training row). The vote goes to the class with most
 * neighbours, then the smallest summed distance, then the lowest index. Scores are vote fractions.
 */
class KnnClassifier final : public Classifier {
public:
    explicit KnnClassifier(int k = 5);
    void fit(const Eigen::MatrixXd& x, const std::vector<int>& y) override;
    [[nodiscard]] Eigen::MatrixXd predict_scores(const Eigen::MatrixXd& x) const override;
    [[nodiscard]] std::vector<int> predict(const Eigen::MatrixXd& x) const override;
    [[nodiscard]] std::size_t n_features() const noexcept override { return static_cast<std::size_t>(x_.cols()); }

    [[nodiscard]] int k() const noexcept { return k_; }
    [[nodiscard]] const Eigen::MatrixXd& train_x() const noexcept { return x_; }
    [[nodiscard]] const std::vector<int>& train_y() const noexcept { return y_; }
    void restore(Eigen::MatrixXd x, std::vector<int> y);

private:
    void vote(const Eigen::MatrixXd& x, Eigen::MatrixXd* scores, std::vector<int>* winners) const;

    int k_;
    Eigen::MatrixXd x_;
    std::vector<int> y_;
};

/// Ledoit-Wolf shrinkage intensity for already-centred rows.
[[nodiscard]] double ledoit_wolf_shrinkage(const Eigen::MatrixXd& centred);

/**
 * @brief Linear discriminant analysis with a shrunk pooled covariance.
 *
 * Sigma = (1 - a) S + a (tr S / d) I with S the prior-weighted within-class covariance. The
 * discriminant uses a pseudo-inverse so a = 0 on singular data still fits. Scores are the
 * softmax of the discriminant values; classes absent from training score 0.
 */
class LdaClassifier final : public Classifier {
public:
    explicit LdaClassifier(std::optional<double> shrinkage = std::nullopt);
    void fit(const Eigen::MatrixXd& x, const std::vector<int>& y) override;
    [[nodiscard]] Eigen::MatrixXd predict_scores(const Eigen::MatrixXd& x) const override;
    [[nodiscard]] std::size_t n_features() const noexcept override { return static_cast<std::size_t>(coef_.cols()); }

    [[nodiscard]] double fitted_shrinkage() const noexcept { return fitted_shrinkage_; }
    [[nodiscard]] const Eigen::MatrixXd& coef() const noexcept { return coef_; }
    [[nodiscard]] const Eigen::VectorXd& intercept() const noexcept { return intercept_; }
    [[nodiscard]] const std::vector<bool>& present() const noexcept { return present_; }
    void restore(Eigen::MatrixXd coef, Eigen::VectorXd intercept, std::vector<bool> present, double shrinkage);

private:
    std::optional<double> shrinkage_;
    double fitted_shrinkage_ = 0.0;
    Eigen::MatrixXd coef_;       // classes x d
    Eigen::VectorXd intercept_;  // classes
    std::vector<bool> present_;
};

/// For each column, the row indices of x sorted by value (row index breaks ties).
using ColumnOrder = std::vector<std::vector<std::uint32_t>>;
[[nodiscard]] ColumnOrder presort_columns(const Eigen::MatrixXd& x);

struct TreeNode {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::array<double, kNumClasses> value{};  // class distribution at the node
    std::size_t n_samples = 0;
    double impurity = 0.0;
};

/**
 * @brief CART classifier with Gini impurity.
 *
 * Samples go left when x[feature] <= threshold; thresholds are midpoints between consecutive
 * distinct values. When max_features is below the feature count, each node examines a seeded
 * random permutation of the features and keeps searching past max_features only if none of the
 * first ones can split. Ties keep the first candidate found.
 */
class DecisionTree final : public Classifier {
public:
    explicit DecisionTree(ModelParams params = {});
    void fit(const Eigen::MatrixXd& x, const std::vector<int>& y) override;
    /// Fit on the listed rows; repeated rows act as sample weights.
    void fit_rows(const Eigen::MatrixXd& x, const std::vector<int>& y, const std::vector<std::size_t>& rows);
    /// Fit on `rows` using only `columns` of x; tree feature j is column columns[j]. `order` must
    /// come from presort_columns(x).
    void fit_presorted(const Eigen::MatrixXd& x, const std::vector<int>& y, const std::vector<std::size_t>& rows,
                       const ColumnOrder& order, const std::vector<std::size_t>& columns);
    [[nodiscard]] Eigen::MatrixXd predict_scores(const Eigen::MatrixXd& x) const override;
    [[nodiscard]] std::size_t n_features() const noexcept override { return n_features_; }

    /// Normalised Gini importance (sums to 1 unless the tree is a single leaf).
    [[nodiscard]] const std::vector<double>& feature_importances() const noexcept { return importance_; }
    [[nodiscard]] const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::size_t depth() const;
    void restore(std::vector<TreeNode> nodes, std::size_t n_features);

    friend bool operator==(const DecisionTree& a, const DecisionTree& b);

private:
    ModelParams params_;
    std::size_t n_features_ = 0;
    std::vector<TreeNode> nodes_;
    std::vector<double> importance_;
};

bool operator==(const TreeNode& a, const TreeNode& b);

/**
 * @brief Bagged Gini trees with sqrt(d) features per split by default.
 *
 * Tree t is trained on bootstrap_indices(n, t) with seed tree_seed(t); scores are the mean of the
 * trees' leaf distributions.
 */
class RandomForest final : public Classifier {
public:
    explicit RandomForest(ModelParams params = {});
    void fit(const Eigen::MatrixXd& x, const std::vector<int>& y) override;
    [[nodiscard]] Eigen::MatrixXd predict_scores(const Eigen::MatrixXd& x) const override;
    [[nodiscard]] std::size_t n_features() const noexcept override { return n_features_; }

    [[nodiscard]] std::uint64_t tree_seed(std::size_t tree) const;
    [[nodiscard]] std::vector<std::size_t> bootstrap_indices(std::size_t n, std::size_t tree) const;
    /// Parameters handed to each member tree for a given feature count.
    [[nodiscard]] ModelParams tree_params(std::size_t tree, std::size_t n_features) const;
    [[nodiscard]] const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
    void restore(std::vector<DecisionTree> trees, std::size_t n_features);

private:
    ModelParams params_;
    std::size_t n_features_ = 0;
    std::vector<DecisionTree> trees_;
};

[[nodiscard]] std::unique_ptr<Classifier> make_classifier(ModelKind kind, const ModelParams& params);
[[nodiscard]] std::unique_ptr<Classifier> fit_classifier(ModelKind kind, const ModelParams& params,
                                                         const Eigen::MatrixXd& x, const std::vector<int>& y);

// ---- metrics --------------------------------------------------------------

struct ClassificationMetrics {
    double accuracy = 0.0;
    double precision = 0.0;  // macro over classes seen in y_true or y_pred
    double recall = 0.0;
    double f1 = 0.0;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    bool zero_division = false;  // some class had no predictions or no true samples
    Eigen::MatrixXd counts;      // kNumClasses x kNumClasses, rows = true class
};

[[nodiscard]] ClassificationMetrics classification_metrics(const std::vector<int>& y_true,
                                                           const std::vector<int>& y_pred);
/// Rows divided by their sums; empty rows stay zero.
[[nodiscard]] Eigen::MatrixXd row_normalize(const Eigen::MatrixXd& counts);

// ---- model selection ------------------------------------------------------

/// Candidate parameter sets for a model kind, in evaluation order.
[[nodiscard]] std::vector<ModelParams> default_grid(ModelKind kind, std::uint64_t seed = 0);

struct GridResult {
    std::size_t best = 0;
    std::vector<double> scores;  // mean inner-CV accuracy per candidate
};

/// Stratified k-fold accuracy per candidate; ties go to the earliest candidate.
[[nodiscard]] GridResult grid_search(ModelKind kind, const std::vector<ModelParams>& grid, const Eigen::MatrixXd& x,
                                     const std::vector<int>& y, std::size_t folds, std::uint64_t seed);

struct RfecvResult {
    std::vector<bool> mask;
    std::vector<double> mean_scores;  // index i = i + 1 features kept
    std::vector<std::size_t> ranking; // 1 = kept; higher = eliminated earlier
};

/**
 * @brief Recursive feature elimination with stratified cross-validation.
 *
 * Each step refits a decision tree and drops the least important remaining feature (lowest
 * index on ties). The kept count maximises mean CV accuracy, smallest count on ties; the final
 * elimination runs on all rows. Throws InvalidParameter when rows < folds.
 */
[[nodiscard]] RfecvResult rfecv(const Eigen::MatrixXd& x, const std::vector<int>& y, std::size_t folds,
                                std::uint64_t seed);

// ---- trained model --------------------------------------------------------

inline constexpr const char* kModelFormat = "eog-model";
inline constexpr int kModelVersion = 1;

struct TrainedModel {
    ModelKind kind = ModelKind::random_forest;
    ModelParams params;
    std::vector<bool> selected;
    features::NormalizationStats norm;
    std::shared_ptr<const Classifier> classifier;
    std::vector<std::string> feature_names;

    /// Normalise, select, classify. Throws DimensionMismatch for the wrong width.
    [[nodiscard]] Eigen::MatrixXd predict_scores(const Eigen::MatrixXd& raw) const;
    [[nodiscard]] std::vector<int> predict(const Eigen::MatrixXd& raw) const;
    [[nodiscard]] std::size_t selected_count() const;
};

struct TrainOptions {
    std::uint64_t seed = 0;
    std::size_t rfecv_folds = 10;
    std::size_t inner_folds = 5;
    bool select_features = true;
    std::optional<std::vector<ModelParams>> grid;  // default_grid(kind) when empty
};

/// Everything learned from one training set, in pipeline order.
struct FitArtifacts {
    features::NormalizationStats norm;
    RfecvResult selection;
    GridResult grid;
    ModelParams chosen;
};

/// Train-only normalization, RFECV and grid search; no classifier fit.
[[nodiscard]] FitArtifacts fit_artifacts(ModelKind kind, const Eigen::MatrixXd& x, const std::vector<int>& y,
                                         const TrainOptions& options);

[[nodiscard]] TrainedModel train_model(ModelKind kind, const LabeledDataset& data, const TrainOptions& options);

[[nodiscard]] std::string model_to_json(const TrainedModel& model);
[[nodiscard]] TrainedModel model_from_json(const std::string& text);

// ---- leave-one-session-out ------------------------------------------------

struct FoldReport {
    std::string test_session;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    FitArtifacts artifacts;
    ClassificationMetrics metrics;
};

struct EvalReport {
    ModelKind kind = ModelKind::random_forest;
    std::vector<FoldReport> folds;
    double mean_accuracy = 0.0;
    double accuracy_std = 0.0;  // population
    double mean_precision = 0.0;
    double mean_recall = 0.0;
    double mean_f1 = 0.0;
    Eigen::MatrixXd confusion;  // row-normalised, summed over folds
};

/// Replaces the fit/predict step of a fold, e.g. with an instrumented stub.
using FoldClassifierFactory = std::function<std::unique_ptr<Classifier>(
    const Eigen::MatrixXd& x, const std::vector<int>& y, const ModelParams& chosen)>;

/**
 * @brief Leave-one-session-out evaluation.
 *
 * Every fold fits normalization, feature selection and the grid search on its training rows only,
 * then scores the held-out session. Needs at least 2 sessions.
 */
[[nodiscard]] EvalReport loso_evaluate(ModelKind kind, const LabeledDataset& data, const TrainOptions& options,
                                       const FoldClassifierFactory& factory = {});

[[nodiscard]] std::string eval_report_to_json(const EvalReport& report);

}  // namespace eog::learn
