#include <cmath>

#include "eog/cluster.hpp"
#include "eog/error.hpp"

namespace eog::cluster {

namespace {

Embedding project(const Eigen::MatrixXd& data, std::size_t dims, const char* method) {
    if (dims == 0) throw InvalidParameter("embedding needs at least one dimension");
    if (static_cast<std::size_t>(data.rows()) <= dims) throw InvalidParameter("need more rows than output dimensions");
    if (!data.allFinite()) throw InvalidParameter("input contains non-finite values");
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(data, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double top = s.size() > 0 ? s(0) : 0.0;
    Eigen::Index rank = 0;
    const double tol = top * static_cast<double>(std::max(data.rows(), data.cols())) * 1e-13;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol && s(i) > 0.0) ++rank;
    }
    if (static_cast<std::size_t>(rank) < dims) throw DegenerateInput("input rank is below the requested dimensions");

    const auto k = static_cast<Eigen::Index>(dims);
    Embedding e;
    e.method = method;
    e.components = svd.matrixV().leftCols(k);
    // Fix the sign so the largest-magnitude loading of each component is positive.
    for (Eigen::Index c = 0; c < k; ++c) {
        Eigen::Index arg = 0;
        e.components.col(c).cwiseAbs().maxCoeff(&arg);
        if (e.components(arg, c) < 0.0) e.components.col(c) *= -1.0;
    }
    e.points = data * e.components;
    const double total = s.squaredNorm();
    e.explained_variance = s.head(k).array().square() / total;
    return e;
}

}  // namespace

Embedding pca_reduce(const Eigen::MatrixXd& x, std::size_t dims) {
    const Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
    return project(centred, dims, "pca");
}

Embedding tsvd_reduce(const Eigen::MatrixXd& x, std::size_t dims) { return project(x, dims, "tsvd"); }

}  // namespace eog::cluster
