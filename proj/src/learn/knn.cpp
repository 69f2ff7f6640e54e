#include <algorithm>
#include <numeric>

#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::learn {

std::vector<int> Classifier::predict(const Eigen::MatrixXd& x) const { return argmax_rows(predict_scores(x)); }

std::vector<int> argmax_rows(const Eigen::MatrixXd& scores) {
    std::vector<int> out(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < scores.cols(); ++c) {
            if (scores(r, c) > scores(r, best)) best = c;
        }
        out[static_cast<std::size_t>(r)] = static_cast<int>(best);
    }
    return out;
}

KnnClassifier::KnnClassifier(int k) : k_(k) {
    if (k < 1) throw InvalidParameter("k must be >= 1");
}

void KnnClassifier::fit(const Eigen::MatrixXd& x, const std::vector<int>& y) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw DimensionMismatch("rows and labels differ");
    if (y.empty()) throw InvalidParameter("cannot fit on an empty training set");
    x_ = x;
    y_ = y;
}

void KnnClassifier::restore(Eigen::MatrixXd x, std::vector<int> y) {
    x_ = std::move(x);
    y_ = std::move(y);
}

void KnnClassifier::vote(const Eigen::MatrixXd& x, Eigen::MatrixXd* scores, std::vector<int>* winners) const {
    if (y_.empty()) throw InvalidParameter("classifier is not fitted");
    if (x.rows() > 0 && x.cols() != x_.cols()) throw DimensionMismatch("feature count differs from training");
    const std::size_t n = y_.size();
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), n);
    if (scores) *scores = Eigen::MatrixXd::Zero(x.rows(), kNumClasses);
    if (winners) winners->assign(static_cast<std::size_t>(x.rows()), 0);
    std::vector<double> dist(n);
    std::vector<std::size_t> order(n);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (std::size_t i = 0; i < n; ++i) dist[i] = (x_.row(static_cast<Eigen::Index>(i)) - x.row(r)).norm();
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (dist[a] != dist[b]) return dist[a] < dist[b];
                              if (y_[a] != y_[b]) return y_[a] < y_[b];
                              return a < b;
                          });
        std::array<int, kNumClasses> votes{};
        std::array<double, kNumClasses> total{};
        for (std::size_t j = 0; j < k; ++j) {
            ++votes[static_cast<std::size_t>(y_[order[j]])];
            total[static_cast<std::size_t>(y_[order[j]])] += dist[order[j]];
        }
        std::size_t winner = 0;
        for (std::size_t c = 1; c < kNumClasses; ++c) {
            if (votes[c] > votes[winner] || (votes[c] == votes[winner] && votes[c] > 0 && total[c] < total[winner])) {
                winner = c;
            }
        }
        if (winners) (*winners)[static_cast<std::size_t>(r)] = static_cast<int>(winner);
        if (scores) {
            for (std::size_t c = 0; c < kNumClasses; ++c) {
                (*scores)(r, static_cast<Eigen::Index>(c)) = static_cast<double>(votes[c]) / static_cast<double>(k);
            }
        }
    }
}

Eigen::MatrixXd KnnClassifier::predict_scores(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd scores;
    vote(x, &scores, nullptr);
    return scores;
}

std::vector<int> KnnClassifier::predict(const Eigen::MatrixXd& x) const {
    std::vector<int> winners;
    vote(x, nullptr, &winners);
    return winners;
}

}  // namespace eog::learn
