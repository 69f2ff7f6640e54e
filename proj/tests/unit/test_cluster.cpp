#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "../support/oracles.hpp"
#include "eog/cluster.hpp"
#include "eog/error.hpp"

using namespace eog;
using namespace eog::cluster;

namespace {

// Fraction of point pairs on which two labelings agree about "same cluster".
double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    double agree = 0, total = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            agree += (a[i] == a[j]) == (b[i] == b[j]);
            ++total;
        }
    return agree / total;
}

double entropy(const std::vector<int>& l) {
    std::map<int, double> c;
    for (int v : l) c[v] += 1;
    double h = 0;
    for (auto [k, n] : c) h -= n / l.size() * std::log(n / l.size());
    return h;
}

double conditional_entropy(const std::vector<int>& a, const std::vector<int>& given) {
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> marg;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], given[i]}] += 1;
        marg[given[i]] += 1;
    }
    double h = 0;
    const double n = static_cast<double>(a.size());
    for (auto [key, c] : joint) h -= c / n * std::log(c / marg[key.second]);
    return h;
}

}  // namespace

TEST_SUITE("cluster") {

TEST_CASE("silhouette equals the brute-force definition") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        oracle::Gen g(seed);
        const auto n = g.index(3, seed < 2 ? 500 : 120);
        const auto k = static_cast<int>(g.index(2, 6));
        const Eigen::MatrixXd x = g.matrix(n, g.index(1, 5));
        auto labels = g.labels(n, k);
        if (seed % 4 == 0) labels[0] = k;  // a singleton cluster
        const auto got = silhouette(x, labels);
        const auto want = oracle::silhouette(x, labels);
        REQUIRE(got.samples.size() == n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got.samples[i] - want.s[i]) < 1e-12);
        CHECK(std::abs(got.mean - want.mean) < 1e-12);
        CHECK(std::abs(got.asw - want.asw) < 1e-12);
    }
    CHECK_THROWS((void)silhouette(Eigen::MatrixXd::Zero(4, 2), {0, 0, 0, 0}));
}

TEST_CASE("k-means recovers separated blobs and never increases inertia") {
    oracle::Gen g(1);
    std::vector<int> truth;
    const auto x = oracle::blobs(g, 4, 40, 3, 0.8, &truth);
    const auto r = kmeans(x, 4, 7);
    CHECK(rand_index(r.labels, truth) == 1.0);
    CHECK(r.centers.rows() == 4);
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] + 1e-9);
    double inertia = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        inertia += (x.row(i) - r.centers.row(r.labels[static_cast<std::size_t>(i)])).squaredNorm();
    CHECK(r.objective == doctest::Approx(inertia).epsilon(1e-9));
    CHECK(kmeans(x, 4, 7).labels == r.labels);
    CHECK_THROWS_AS((void)kmeans(x, 0, 1), InvalidParameter);
    CHECK_THROWS_AS((void)kmeans(x.topRows(3), 4, 1), InvalidParameter);
}

TEST_CASE("k-means++ seeds are data points") {
    oracle::Gen g(2);
    const Eigen::MatrixXd x = g.matrix(50, 2);
    const auto c = kmeans_plus_plus(x, 5, 3);
    for (Eigen::Index j = 0; j < c.rows(); ++j) {
        const double d = (x.rowwise() - c.row(j)).rowwise().squaredNorm().minCoeff();
        CHECK(d == 0.0);
    }
}

TEST_CASE("fuzzy c-means: memberships form a partition, J_m decreases, blobs recovered") {
    oracle::Gen g(3);
    std::vector<int> truth;
    const auto x = oracle::blobs(g, 3, 30, 2, 0.7, &truth);
    const auto r = fuzzy_cmeans(x, 3, 5);
    CHECK(rand_index(r.labels, truth) == 1.0);
    REQUIRE(r.membership.rows() == x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        CHECK(r.membership.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.membership.row(i).minCoeff() >= 0.0);
        Eigen::Index best = 0;
        r.membership.row(i).maxCoeff(&best);
        CHECK(best == r.labels[static_cast<std::size_t>(i)]);
    }
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] + 1e-9);
    // Memberships from the closed-form update.
    const auto u = fcm_memberships(x, r.centers, 2.0);
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            const double dj = (x.row(i) - r.centers.row(j)).norm();
            double denom = 0;
            for (Eigen::Index l = 0; l < 3; ++l) denom += std::pow(dj / (x.row(i) - r.centers.row(l)).norm(), 2.0);
            CHECK(u(i, j) == doctest::Approx(1.0 / denom).epsilon(1e-10));
        }
    }
    Eigen::MatrixXd on_center = r.centers.topRows(1);
    const auto u0 = fcm_memberships(on_center, r.centers, 2.0);
    CHECK(u0(0, 0) == 1.0);
    CHECK_THROWS_AS((void)fuzzy_cmeans(x, 3, 5, FcmParams{1.0}), InvalidParameter);
}

TEST_CASE("PCA and truncated SVD") {
    oracle::Gen g(4);
    Eigen::MatrixXd x = g.matrix(80, 5, 0.01);
    const auto dir = g.normal(5);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < 5; ++j) x(i, j) += 10.0 + (i - 40) * 0.3 * dir[static_cast<std::size_t>(j)];
    const auto pca = pca_reduce(x, 2);
    CHECK(pca.points.rows() == 80);
    CHECK(pca.points.cols() == 2);
    CHECK(pca.explained_variance(0) > 0.99);
    CHECK(pca.points.col(0).mean() == doctest::Approx(0.0).scale(1.0));
    CHECK((pca.components.transpose() * pca.components - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-10);
    const auto tsvd = tsvd_reduce(x, 2);
    CHECK(tsvd.points.rows() == 80);
    CHECK(std::abs(tsvd.points.col(0).mean()) > 1.0);  // no centring
    CHECK_THROWS_AS((void)pca_reduce(Eigen::MatrixXd::Ones(10, 3), 2), DegenerateInput);
}

TEST_CASE("t-SNE affinities reach the target perplexity") {
    oracle::Gen g(5);
    const Eigen::MatrixXd x = g.matrix(120, 4);
    for (double perp : {5.0, 15.0, 30.0}) {
        std::vector<double> achieved;
        const auto p = tsne_conditional_affinities(x, perp, &achieved);
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
            CHECK(p(i, i) == 0.0);
            CHECK(p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
            double h = 0;
            for (Eigen::Index j = 0; j < p.cols(); ++j)
                if (p(i, j) > 0) h -= p(i, j) * std::log(p(i, j));
            CHECK(std::exp(h) == doctest::Approx(perp).epsilon(1e-3));
            CHECK(achieved[static_cast<std::size_t>(i)] == doctest::Approx(perp).epsilon(1e-3));
        }
    }
}

TEST_CASE("t-SNE separates blobs and is seed-deterministic") {
    oracle::Gen g(6);
    std::vector<int> truth;
    const auto x = oracle::blobs(g, 3, 30, 5, 0.5, &truth);
    TsneParams p;
    p.perplexity = 10;
    p.iterations = 400;
    p.seed = 3;
    const auto e = tsne_reduce(x, p);
    CHECK(e.points.rows() == 90);
    CHECK(e.points.cols() == 2);
    CHECK(silhouette(e.points, truth).mean > 0.5);
    CHECK(rand_index(kmeans(e.points, 3, 1).labels, truth) > 0.95);
    CHECK(tsne_reduce(x, p).points == e.points);
    CHECK(e.kl_history.back() < e.kl_history[p.exaggeration_iterations + 5]);
    p.perplexity = 40;
    CHECK_THROWS_AS((void)tsne_reduce(x, p), InvalidParameter);
}

TEST_CASE("homogeneity, completeness and V-measure from entropies") {
    oracle::Gen g(7);
    for (int trial = 0; trial < 30; ++trial) {
        const auto n = g.index(10, 80);
        const auto t = g.labels(n, static_cast<int>(g.index(2, 5)));
        const auto p = g.labels(n, static_cast<int>(g.index(2, 5)));
        const auto m = external_metrics(t, p);
        const double h = 1.0 - conditional_entropy(t, p) / entropy(t);
        const double c = 1.0 - conditional_entropy(p, t) / entropy(p);
        CHECK(m.homogeneity == doctest::Approx(h).epsilon(1e-10));
        CHECK(m.completeness == doctest::Approx(c).epsilon(1e-10));
        CHECK(m.v_measure == doctest::Approx(h + c > 0 ? 2 * h * c / (h + c) : 0.0).epsilon(1e-10));
    }
    const auto perfect = external_metrics({0, 0, 1, 1}, {5, 5, 2, 2});
    CHECK(perfect.v_measure == doctest::Approx(1.0));
}

TEST_CASE("ASW sweep picks the generating k") {
    oracle::Gen g(8);
    const auto x = oracle::blobs(g, 5, 25, 2, 0.6, nullptr);
    for (auto algo : {Algorithm::kmeans, Algorithm::fcm}) {
        const auto s = asw_sweep(x, algo, 2, 8, 1);
        CHECK(s.ks.front() == 2);
        CHECK(s.ks.back() == 8);
        CHECK(s.best_k == 5);
        const auto best = std::max_element(s.asw.begin(), s.asw.end()) - s.asw.begin();
        CHECK(s.ks[static_cast<std::size_t>(best)] == s.best_k);
    }
    CHECK(algorithm_from_string("fcm") == Algorithm::fcm);
    CHECK_THROWS_AS((void)algorithm_from_string("dbscan"), InvalidParameter);
}

}  // TEST_SUITE
