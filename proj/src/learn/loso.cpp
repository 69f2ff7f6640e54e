#include <cmath>

#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::learn {

EvalReport loso_evaluate(ModelKind kind, const LabeledDataset& data, const TrainOptions& options,
                         const FoldClassifierFactory& factory) {
    data.validate();
    const auto sessions = data.sessions();
    if (sessions.size() < 2) throw InvalidParameter("leave-one-session-out needs at least 2 sessions");

    EvalReport report;
    report.kind = kind;
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(kNumClasses, kNumClasses);
    for (std::size_t s = 0; s < sessions.size(); ++s) {
        FoldReport fold;
        fold.test_session = sessions[s];
        for (std::size_t r = 0; r < data.rows(); ++r) {
            (data.session[r] == sessions[s] ? fold.test_rows : fold.train_rows).push_back(r);
        }
        const Eigen::MatrixXd xtr = take_rows(data.X, fold.train_rows);
        const auto ytr = take(data.y, fold.train_rows);
        TrainOptions fold_options = options;
        fold_options.seed = seeded_engine(options.seed, s)();
        fold.artifacts = fit_artifacts(kind, xtr, ytr, fold_options);

        const Eigen::MatrixXd ztr = take_columns(fold.artifacts.norm.apply(xtr), fold.artifacts.selection.mask);
        const auto model = factory ? factory(ztr, ytr, fold.artifacts.chosen)
                                   : fit_classifier(kind, fold.artifacts.chosen, ztr, ytr);
        const Eigen::MatrixXd zte = take_columns(fold.artifacts.norm.apply(take_rows(data.X, fold.test_rows)),
                                                 fold.artifacts.selection.mask);
        fold.metrics = classification_metrics(take(data.y, fold.test_rows), model->predict(zte));
        counts += fold.metrics.counts;
        report.folds.push_back(std::move(fold));
    }

    const auto n = static_cast<double>(report.folds.size());
    for (const auto& f : report.folds) {
        report.mean_accuracy += f.metrics.accuracy / n;
        report.mean_precision += f.metrics.precision / n;
        report.mean_recall += f.metrics.recall / n;
        report.mean_f1 += f.metrics.f1 / n;
    }
    double var = 0.0;
    for (const auto& f : report.folds) var += std::pow(f.metrics.accuracy - report.mean_accuracy, 2) / n;
    report.accuracy_std = std::sqrt(var);
    report.confusion = row_normalize(counts);
    return report;
}

}  // namespace eog::learn
