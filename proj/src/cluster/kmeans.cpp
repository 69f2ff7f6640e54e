#include <algorithm>
#include <limits>
#include <random>

#include "eog/cluster.hpp"
#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::cluster {

namespace {

void check_input(const Eigen::MatrixXd& x, std::size_t k) {
    if (k == 0) throw InvalidParameter("k must be >= 1");
    if (k > static_cast<std::size_t>(x.rows())) throw InvalidParameter("k exceeds the number of points");
    if (!x.allFinite()) throw InvalidParameter("input contains non-finite values");
}

// Squared distance from every point to every centre (n x k).
Eigen::MatrixXd centre_distances(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers) {
    Eigen::MatrixXd d(x.rows(), centers.rows());
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
        d.col(c) = (x.rowwise() - centers.row(c)).rowwise().squaredNorm();
    }
    return d;
}

struct Run {
    std::vector<int> labels;
    Eigen::MatrixXd centers;
    std::vector<double> history;
    double inertia = 0.0;
    std::size_t iterations = 0;
};

double assign(const Eigen::MatrixXd& d, std::vector<int>& labels) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        Eigen::Index best = 0;
        d.row(i).minCoeff(&best);
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        inertia += d(i, best);
    }
    return inertia;
}

Run lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centers, const KMeansParams& params) {
    const Eigen::Index n = x.rows();
    const Eigen::Index k = centers.rows();
    Run run;
    run.labels.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t it = 0; it < params.max_iter; ++it) {
        const Eigen::MatrixXd d = centre_distances(x, centers);
        run.history.push_back(assign(d, run.labels));
        run.iterations = it + 1;

        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, x.cols());
        std::vector<double> count(static_cast<std::size_t>(k), 0.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            next.row(run.labels[static_cast<std::size_t>(i)]) += x.row(i);
            count[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])] += 1.0;
        }
        std::vector<char> taken(static_cast<std::size_t>(n), 0);
        for (Eigen::Index c = 0; c < k; ++c) {
            if (count[static_cast<std::size_t>(c)] > 0.0) {
                next.row(c) /= count[static_cast<std::size_t>(c)];
                continue;
            }
            // Empty cluster: move it onto the point farthest from its own centre.
            Eigen::Index far = 0;
            double best = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double v = d(i, run.labels[static_cast<std::size_t>(i)]);
                if (!taken[static_cast<std::size_t>(i)] && v > best) {
                    best = v;
                    far = i;
                }
            }
            taken[static_cast<std::size_t>(far)] = 1;
            next.row(c) = x.row(far);
        }
        const double shift = (next - centers).rowwise().norm().maxCoeff();
        centers = next;
        if (shift < params.tol) break;
    }
    // Final assignment against the final centres keeps labels and centres consistent.
    run.inertia = assign(centre_distances(x, centers), run.labels);
    if (run.inertia <= run.history.back()) run.history.push_back(run.inertia);
    run.centers = centers;
    return run;
}

}  // namespace

Eigen::MatrixXd kmeans_plus_plus(const Eigen::MatrixXd& x, std::size_t k, std::uint64_t seed) {
    check_input(x, k);
    const Eigen::Index n = x.rows();
    auto rng = learn::seeded_engine(seed, 0x6b6d);
    Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), x.cols());
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    centers.row(0) = x.row(first(rng));
    Eigen::VectorXd closest = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t c = 1; c < k; ++c) {
        const double total = closest.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double acc = 0.0;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += closest(i);
                if (acc >= target && closest(i) > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = first(rng);
        }
        centers.row(static_cast<Eigen::Index>(c)) = x.row(pick);
        closest = closest.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
    }
    return centers;
}

ClusterAssignment kmeans(const Eigen::MatrixXd& x, std::size_t k, std::uint64_t seed, const KMeansParams& params) {
    check_input(x, k);
    if (params.n_init == 0) throw InvalidParameter("n_init must be >= 1");
    Run best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < params.n_init; ++r) {
        Run run = lloyd(x, kmeans_plus_plus(x, k, learn::seeded_engine(seed, r)()), params);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    ClusterAssignment out;
    out.labels = std::move(best.labels);
    out.centers = std::move(best.centers);
    out.history = std::move(best.history);
    out.objective = best.inertia;
    out.iterations = best.iterations;
    return out;
}

}  // namespace eog::cluster
