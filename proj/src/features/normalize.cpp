#include <algorithm>
#include <cmath>

#include "eog/error.hpp"
#include "eog/features.hpp"

namespace eog::features {

NormalizationStats fit_normalization(const Eigen::MatrixXd& train) {
    if (train.rows() < 2) throw InvalidParameter("normalization needs at least 2 training rows");
    NormalizationStats st;
    st.mean = train.colwise().mean().transpose();
    const Eigen::MatrixXd centred = train.rowwise() - st.mean.transpose();
    st.std = (centred.colwise().squaredNorm() / static_cast<double>(train.rows())).cwiseSqrt().transpose();
    st.zero_variance.assign(static_cast<std::size_t>(train.cols()), false);
    for (Eigen::Index j = 0; j < train.cols(); ++j) {
        const double scale = train.col(j).cwiseAbs().maxCoeff();
        if (!(st.std(j) > 1e-12 * std::max(scale, 1e-300))) st.zero_variance[static_cast<std::size_t>(j)] = true;
    }
    return st;
}

Eigen::MatrixXd NormalizationStats::apply(const Eigen::MatrixXd& x) const {
    if (x.cols() != mean.size()) throw DimensionMismatch("normalization width does not match the data");
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (zero_variance[static_cast<std::size_t>(j)]) {
            out.col(j).setZero();
        } else {
            out.col(j) = (x.col(j).array() - mean(j)) / std(j);
        }
    }
    return out;
}

Eigen::MatrixXd NormalizationStats::inverse(const Eigen::MatrixXd& z) const {
    if (z.cols() != mean.size()) throw DimensionMismatch("normalization width does not match the data");
    Eigen::MatrixXd out(z.rows(), z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        if (zero_variance[static_cast<std::size_t>(j)]) {
            out.col(j).setConstant(mean(j));
        } else {
            out.col(j) = z.col(j).array() * std(j) + mean(j);
        }
    }
    return out;
}

}  // namespace eog::features
