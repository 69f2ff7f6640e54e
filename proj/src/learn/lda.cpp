#include <algorithm>
#include <cmath>
#include <limits>

#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::learn {

double ledoit_wolf_shrinkage(const Eigen::MatrixXd& centred) {
    const auto n = static_cast<double>(centred.rows());
    const auto d = static_cast<double>(centred.cols());
    if (n < 2 || d < 1) return 0.0;
    const Eigen::MatrixXd x2 = centred.array().square().matrix();
    const Eigen::VectorXd emp_trace = x2.colwise().sum().transpose() / n;
    const double mu = emp_trace.sum() / d;
    const double beta_raw = (x2.transpose() * x2).sum();
    const double delta_raw = (centred.transpose() * centred).array().square().sum() / (n * n);
    double beta = (beta_raw / n - delta_raw) / (d * n);
    double delta = (delta_raw - 2.0 * mu * emp_trace.sum() + d * mu * mu) / d;
    beta = std::min(beta, delta);
    if (!(beta > 0.0) || !(delta > 0.0)) return 0.0;
    return std::clamp(beta / delta, 0.0, 1.0);
}

LdaClassifier::LdaClassifier(std::optional<double> shrinkage) : shrinkage_(shrinkage) {
    if (shrinkage && !(*shrinkage >= 0.0 && *shrinkage <= 1.0)) {
        throw InvalidParameter("LDA shrinkage must lie in [0, 1]");
    }
}

void LdaClassifier::fit(const Eigen::MatrixXd& x, const std::vector<int>& y) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw DimensionMismatch("rows and labels differ");
    const Eigen::Index d = x.cols();
    const auto n = static_cast<double>(x.rows());
    std::array<double, kNumClasses> count{};
    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(kNumClasses, d);
    for (std::size_t i = 0; i < y.size(); ++i) {
        count[static_cast<std::size_t>(y[i])] += 1.0;
        means.row(y[i]) += x.row(static_cast<Eigen::Index>(i));
    }
    present_.assign(kNumClasses, false);
    int classes = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        if (count[static_cast<std::size_t>(c)] > 0) {
            present_[static_cast<std::size_t>(c)] = true;
            means.row(c) /= count[static_cast<std::size_t>(c)];
            ++classes;
        }
    }
    if (classes < 2) throw InvalidParameter("LDA needs at least 2 classes");

    Eigen::MatrixXd centred = x;
    for (std::size_t i = 0; i < y.size(); ++i) centred.row(static_cast<Eigen::Index>(i)) -= means.row(y[i]);
    const Eigen::MatrixXd s = centred.transpose() * centred / n;
    fitted_shrinkage_ = shrinkage_ ? *shrinkage_ : ledoit_wolf_shrinkage(centred);
    Eigen::MatrixXd sigma = (1.0 - fitted_shrinkage_) * s;
    sigma.diagonal().array() += fitted_shrinkage_ * s.trace() / static_cast<double>(d);
    const Eigen::MatrixXd pinv = sigma.completeOrthogonalDecomposition().pseudoInverse();

    coef_ = Eigen::MatrixXd::Zero(kNumClasses, d);
    intercept_ = Eigen::VectorXd::Zero(kNumClasses);
    for (int c = 0; c < kNumClasses; ++c) {
        if (!present_[static_cast<std::size_t>(c)]) continue;
        const Eigen::VectorXd w = pinv * means.row(c).transpose();
        coef_.row(c) = w.transpose();
        intercept_(c) = -0.5 * means.row(c).dot(w) + std::log(count[static_cast<std::size_t>(c)] / n);
    }
}

void LdaClassifier::restore(Eigen::MatrixXd coef, Eigen::VectorXd intercept, std::vector<bool> present,
                            double shrinkage) {
    coef_ = std::move(coef);
    intercept_ = std::move(intercept);
    present_ = std::move(present);
    fitted_shrinkage_ = shrinkage;
}

Eigen::MatrixXd LdaClassifier::predict_scores(const Eigen::MatrixXd& x) const {
    if (present_.empty()) throw InvalidParameter("classifier is not fitted");
    if (x.rows() > 0 && x.cols() != coef_.cols()) throw DimensionMismatch("feature count differs from training");
    Eigen::MatrixXd z = x * coef_.transpose();
    z.rowwise() += intercept_.transpose();
    Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(x.rows(), kNumClasses);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double top = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < kNumClasses; ++c) {
            if (present_[static_cast<std::size_t>(c)]) top = std::max(top, z(r, c));
        }
        double total = 0.0;
        for (int c = 0; c < kNumClasses; ++c) {
            if (!present_[static_cast<std::size_t>(c)]) continue;
            scores(r, c) = std::exp(z(r, c) - top);
            total += scores(r, c);
        }
        scores.row(r) /= total;
    }
    return scores;
}

}  // namespace eog::learn
