#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "eog/cluster.hpp"
#include "eog/error.hpp"
#include "eog/learn.hpp"

namespace eog::cluster {

namespace {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
    const Eigen::VectorXd norms = x.rowwise().squaredNorm();
    Eigen::MatrixXd d = (-2.0 * x * x.transpose()).colwise() + norms;
    d.rowwise() += norms.transpose();
    d = d.cwiseMax(0.0);
    d.diagonal().setZero();
    return d;
}

}  // namespace

Eigen::MatrixXd tsne_conditional_affinities(const Eigen::MatrixXd& x, double perplexity,
                                            std::vector<double>* achieved) {
    const Eigen::Index n = x.rows();
    if (!(perplexity > 0.0)) throw InvalidParameter("perplexity must be positive");
    if (n < 2) throw InvalidParameter("affinities need at least 2 points");
    const Eigen::MatrixXd d2 = squared_distances(x);
    const double target = std::log(perplexity);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    if (achieved) achieved->assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        double beta = 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        double entropy = 0.0;
        // Shift by the nearest neighbour distance so exp() never underflows to an all-zero row.
        double dmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) dmin = std::min(dmin, d2(i, j));
        }
        for (int it = 0; it < 200; ++it) {
            double sum = 0.0;
            double weighted = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double v = j == i ? 0.0 : std::exp(-beta * (d2(i, j) - dmin));
                row[static_cast<std::size_t>(j)] = v;
                sum += v;
                weighted += v * (d2(i, j) - dmin);
            }
            entropy = std::log(sum) + beta * weighted / sum;
            for (Eigen::Index j = 0; j < n; ++j) p(i, j) = row[static_cast<std::size_t>(j)] / sum;
            const double diff = entropy - target;
            if (std::abs(diff) < 1e-6) break;
            if (diff > 0.0) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
            } else {
                hi = beta;
                beta = 0.5 * (beta + lo);
            }
        }
        if (achieved) (*achieved)[static_cast<std::size_t>(i)] = std::exp(entropy);
    }
    return p;
}

Embedding tsne_reduce(const Eigen::MatrixXd& x, const TsneParams& params) {
    const Eigen::Index n = x.rows();
    if (!(static_cast<double>(n) > 3.0 * params.perplexity)) {
        throw InvalidParameter("perplexity too large for the number of points (need n > 3 * perplexity)");
    }
    if (params.dims == 0) throw InvalidParameter("embedding needs at least one dimension");
    if (!x.allFinite()) throw InvalidParameter("input contains non-finite values");

    const Eigen::MatrixXd cond = tsne_conditional_affinities(x, params.perplexity);
    Eigen::MatrixXd p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
    p = p.cwiseMax(1e-12);
    p.diagonal().setZero();

    const auto dims = static_cast<Eigen::Index>(params.dims);
    auto rng = learn::seeded_engine(params.seed, 0x75e);
    std::normal_distribution<double> normal(0.0, 1e-4);
    Eigen::MatrixXd y(n, dims);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index c = 0; c < dims; ++c) y(i, c) = normal(rng);
    }
    Eigen::MatrixXd update = Eigen::MatrixXd::Zero(n, dims);
    Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, dims);
    Eigen::MatrixXd grad(n, dims);

    // Pairs i < j packed row by row; P is symmetric so one triangle is enough.
    const auto un = static_cast<std::size_t>(n);
    const std::size_t pairs = un * (un - 1) / 2;
    std::vector<double> pu(pairs);
    std::vector<double> num(pairs);
    double p_log_p = 0.0;
    for (std::size_t i = 0, k = 0; i < un; ++i) {
        for (std::size_t j = i + 1; j < un; ++j, ++k) {
            pu[k] = p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            p_log_p += 2.0 * pu[k] * std::log(pu[k]);
        }
    }
    double p_total = 2.0 * std::accumulate(pu.begin(), pu.end(), 0.0);

    Embedding e;
    e.method = "tsne";
    for (std::size_t it = 0; it < params.iterations; ++it) {
        const bool early = it < params.exaggeration_iterations;
        const double exaggeration = early ? params.early_exaggeration : 1.0;
        const double momentum = early ? 0.5 : 0.8;

        double zsum = 0.0;
        double p_log_num = 0.0;
        for (std::size_t i = 0, k = 0; i < un; ++i) {
            for (std::size_t j = i + 1; j < un; ++j, ++k) {
                double d2 = 0.0;
                for (Eigen::Index c = 0; c < dims; ++c) {
                    const double diff = y(static_cast<Eigen::Index>(i), c) - y(static_cast<Eigen::Index>(j), c);
                    d2 += diff * diff;
                }
                num[k] = 1.0 / (1.0 + d2);
                zsum += 2.0 * num[k];
                p_log_num -= 2.0 * pu[k] * std::log1p(d2);
            }
        }
        // KL(P || Q) with q_ij = num_ij / Z.
        e.kl_history.push_back(p_log_p - p_log_num + p_total * std::log(zsum));

        // grad_i = 4 sum_j (ex * p_ij - q_ij) num_ij (y_i - y_j)
        grad.setZero();
        for (std::size_t i = 0, k = 0; i < un; ++i) {
            for (std::size_t j = i + 1; j < un; ++j, ++k) {
                const double w = (exaggeration * pu[k] - num[k] / zsum) * num[k];
                for (Eigen::Index c = 0; c < dims; ++c) {
                    const double f = w * (y(static_cast<Eigen::Index>(i), c) - y(static_cast<Eigen::Index>(j), c));
                    grad(static_cast<Eigen::Index>(i), c) += f;
                    grad(static_cast<Eigen::Index>(j), c) -= f;
                }
            }
        }
        grad *= 4.0;

        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index c = 0; c < dims; ++c) {
                const bool same = (grad(i, c) > 0.0) == (update(i, c) > 0.0);
                gains(i, c) = same ? std::max(gains(i, c) * 0.8, 0.01) : gains(i, c) + 0.2;
            }
        }
        update = momentum * update - params.learning_rate * gains.cwiseProduct(grad);
        y += update;
        y.rowwise() -= y.colwise().mean();
    }
    e.points = y;
    return e;
}

}  // namespace eog::cluster
