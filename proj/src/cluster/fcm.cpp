#include <cmath>
#include <limits>

#include "eog/cluster.hpp"
#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::cluster {

namespace {

double objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers, const Eigen::MatrixXd& u, double m) {
    double j = 0.0;
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
        const Eigen::VectorXd d2 = (x.rowwise() - centers.row(c)).rowwise().squaredNorm();
        j += (u.col(c).array().pow(m) * d2.array()).sum();
    }
    return j;
}

Eigen::MatrixXd update_centers(const Eigen::MatrixXd& x, const Eigen::MatrixXd& u, double m) {
    const Eigen::MatrixXd w = u.array().pow(m).matrix();
    Eigen::MatrixXd centers = w.transpose() * x;
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
        const double s = w.col(c).sum();
        if (s > 0.0) centers.row(c) /= s;
    }
    return centers;
}

}  // namespace

Eigen::MatrixXd fcm_memberships(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers, double m) {
    if (!(m > 1.0)) throw InvalidParameter("fuzzifier m must exceed 1");
    const Eigen::Index n = x.rows();
    const Eigen::Index k = centers.rows();
    Eigen::MatrixXd d(n, k);
    for (Eigen::Index c = 0; c < k; ++c) d.col(c) = (x.rowwise() - centers.row(c)).rowwise().norm();
    const double power = 2.0 / (m - 1.0);
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index hit = -1;
        for (Eigen::Index c = 0; c < k && hit < 0; ++c) {
            if (d(i, c) == 0.0) hit = c;
        }
        if (hit >= 0) {
            u(i, hit) = 1.0;
            continue;
        }
        // u_ic = 1 / sum_l (d_ic / d_il)^power, evaluated relative to the nearest centre.
        const double dmin = d.row(i).minCoeff();
        double total = 0.0;
        for (Eigen::Index c = 0; c < k; ++c) {
            u(i, c) = std::pow(dmin / d(i, c), power);
            total += u(i, c);
        }
        u.row(i) /= total;
    }
    return u;
}

ClusterAssignment fuzzy_cmeans(const Eigen::MatrixXd& x, std::size_t k, std::uint64_t seed, const FcmParams& params) {
    if (!(params.m > 1.0)) throw InvalidParameter("fuzzifier m must exceed 1");
    if (params.n_init == 0) throw InvalidParameter("n_init must be >= 1");
    ClusterAssignment best;
    best.objective = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < params.n_init; ++r) {
        ClusterAssignment run;
        run.centers = kmeans_plus_plus(x, k, learn::seeded_engine(seed, r)());
        run.membership = fcm_memberships(x, run.centers, params.m);
        for (std::size_t it = 0; it < params.max_iter; ++it) {
            run.centers = update_centers(x, run.membership, params.m);
            const Eigen::MatrixXd next = fcm_memberships(x, run.centers, params.m);
            const double change = (next - run.membership).cwiseAbs().maxCoeff();
            run.membership = next;
            run.history.push_back(objective(x, run.centers, run.membership, params.m));
            run.iterations = it + 1;
            if (change < params.tol) break;
        }
        run.objective = run.history.empty() ? objective(x, run.centers, run.membership, params.m) : run.history.back();
        if (run.objective < best.objective) best = std::move(run);
    }
    best.labels.assign(static_cast<std::size_t>(x.rows()), 0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        Eigen::Index arg = 0;
        best.membership.row(i).maxCoeff(&arg);
        best.labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
    }
    return best;
}

}  // namespace eog::cluster
