#include <algorithm>
#include <set>

#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::learn {

const std::array<std::string, kNumClasses>& activity_names() {
    static const std::array<std::string, kNumClasses> names{"normal_glance", "left_eye_closed", "right_eye_closed",
                                                            "frowning",      "eyebrows_up",     "blink"};
    return names;
}

int activity_index(std::string_view name) {
    const auto& names = activity_names();
    for (int i = 0; i < kNumClasses; ++i) {
        if (names[static_cast<std::size_t>(i)] == name) return i;
    }
    throw InvalidParameter("unknown activity: " + std::string(name));
}

const std::string& activity_name(int label) {
    if (label < 0 || label >= kNumClasses) throw InvalidParameter("class label out of range");
    return activity_names()[static_cast<std::size_t>(label)];
}

void LabeledDataset::validate() const {
    if (static_cast<std::size_t>(X.rows()) != y.size() || session.size() != y.size()) {
        throw DimensionMismatch("dataset rows, labels and sessions disagree");
    }
    if (!feature_names.empty() && feature_names.size() != static_cast<std::size_t>(X.cols())) {
        throw DimensionMismatch("dataset feature names do not match its width");
    }
    for (int label : y) {
        if (label < 0 || label >= kNumClasses) throw InvalidParameter("class label out of range");
    }
    if (!X.allFinite()) throw InvalidParameter("dataset contains non-finite values");
}

std::vector<std::string> LabeledDataset::sessions() const {
    const std::set<std::string> unique(session.begin(), session.end());
    return {unique.begin(), unique.end()};
}

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& rows) const {
    LabeledDataset out;
    out.X = take_rows(X, rows);
    out.y = take(y, rows);
    for (std::size_t r : rows) out.session.push_back(session[r]);
    out.feature_names = feature_names;
    return out;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

std::vector<int> take(const std::vector<int>& y, const std::vector<std::size_t>& rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(y[r]);
    return out;
}

Eigen::MatrixXd take_columns(const Eigen::MatrixXd& x, const std::vector<bool>& mask) {
    if (mask.size() != static_cast<std::size_t>(x.cols())) throw DimensionMismatch("feature mask width mismatch");
    const auto kept = static_cast<Eigen::Index>(std::count(mask.begin(), mask.end(), true));
    Eigen::MatrixXd out(x.rows(), kept);
    Eigen::Index c = 0;
    for (std::size_t j = 0; j < mask.size(); ++j) {
        if (mask[j]) out.col(c++) = x.col(static_cast<Eigen::Index>(j));
    }
    return out;
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& y, std::size_t folds,
                                                       std::uint64_t seed) {
    if (folds < 2) throw InvalidParameter("cross-validation needs at least 2 folds");
    if (y.size() < folds) throw InvalidParameter("fewer rows than cross-validation folds");
    auto rng = seeded_engine(seed, 0x5f01d);
    std::vector<std::vector<std::size_t>> out(folds);
    std::size_t offset = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] == c) rows.push_back(i);
        }
        std::shuffle(rows.begin(), rows.end(), rng);
        for (std::size_t i = 0; i < rows.size(); ++i) out[(offset + i) % folds].push_back(rows[i]);
        offset += rows.size();
    }
    for (auto& f : out) std::sort(f.begin(), f.end());
    return out;
}

}  // namespace eog::learn
