#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::learn {

ClassificationMetrics classification_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw DimensionMismatch("label sequences differ in length");
    ClassificationMetrics m;
    m.counts = Eigen::MatrixXd::Zero(kNumClasses, kNumClasses);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] < 0 || y_true[i] >= kNumClasses || y_pred[i] < 0 || y_pred[i] >= kNumClasses) {
            throw InvalidParameter("class label out of range");
        }
        m.counts(y_true[i], y_pred[i]) += 1.0;
    }
    const double n = static_cast<double>(y_true.size());
    if (n == 0.0) return m;
    m.accuracy = m.counts.trace() / n;

    int seen = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        const double tp = m.counts(c, c);
        const double support = m.counts.row(c).sum();
        const double predicted = m.counts.col(c).sum();
        if (support == 0.0 && predicted == 0.0) continue;
        ++seen;
        double p = 0.0, r = 0.0, f = 0.0;
        if (predicted > 0.0) p = tp / predicted; else m.zero_division = true;
        if (support > 0.0) r = tp / support; else m.zero_division = true;
        if (p + r > 0.0) f = 2.0 * p * r / (p + r);
        m.precision += p;
        m.recall += r;
        m.f1 += f;
        m.weighted_precision += p * support / n;
        m.weighted_recall += r * support / n;
        m.weighted_f1 += f * support / n;
    }
    m.precision /= seen;
    m.recall /= seen;
    m.f1 /= seen;
    return m;
}

Eigen::MatrixXd row_normalize(const Eigen::MatrixXd& counts) {
    Eigen::MatrixXd out = counts;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        const double s = out.row(r).sum();
        if (s > 0.0) out.row(r) /= s;
    }
    return out;
}

}  // namespace eog::learn
