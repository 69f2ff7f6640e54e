#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace eog::cluster {

struct Embedding {
    Eigen::MatrixXd points;  // n x dims
    std::string method;
    Eigen::MatrixXd components;          // d x dims (linear methods)
    Eigen::VectorXd explained_variance;  // fraction of total variance/energy per component (linear methods)
    std::vector<double> kl_history;      // t-SNE: KL divergence per iteration
};

/// Centred SVD projection. Throws DegenerateInput when the centred rank is below dims.
[[nodiscard]] Embedding pca_reduce(const Eigen::MatrixXd& x, std::size_t dims = 2);
/// Uncentred SVD projection. Throws DegenerateInput when the rank is below dims.
[[nodiscard]] Embedding tsvd_reduce(const Eigen::MatrixXd& x, std::size_t dims = 2);

struct TsneParams {
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
    std::size_t exaggeration_iterations = 250;
    std::size_t dims = 2;
    std::uint64_t seed = 0;
};

/**
 * @brief Gaussian conditional affinities p_{j|i} calibrated per point to the target perplexity.
 *
 * Row i sums to 1 with p_{i|i} = 0. achieved[i] receives exp(H(P_i)) when given.
 */
[[nodiscard]] Eigen::MatrixXd tsne_conditional_affinities(const Eigen::MatrixXd& x, double perplexity,
                                                          std::vector<double>* achieved = nullptr);

/// Exact-gradient t-SNE with early exaggeration, momentum and gains. Needs n > 3 * perplexity.
[[nodiscard]] Embedding tsne_reduce(const Eigen::MatrixXd& x, const TsneParams& params = {});

struct ClusterAssignment {
    std::vector<int> labels;
    Eigen::MatrixXd membership;    // fuzzy only: n x k
    Eigen::MatrixXd centers;       // k x d
    std::vector<double> history;   // inertia (k-means) or J_m (fuzzy) per iteration
    double objective = 0.0;
    std::size_t iterations = 0;
};

struct KMeansParams {
    std::size_t n_init = 10;
    std::size_t max_iter = 300;
    double tol = 1e-6;
};

/// k-means++ seeding then Lloyd iterations; best of n_init runs by inertia.
[[nodiscard]] ClusterAssignment kmeans(const Eigen::MatrixXd& x, std::size_t k, std::uint64_t seed,
                                       const KMeansParams& params = {});

/// D^2-weighted initial centres (one k-means++ pass).
[[nodiscard]] Eigen::MatrixXd kmeans_plus_plus(const Eigen::MatrixXd& x, std::size_t k, std::uint64_t seed);

struct FcmParams {
    double m = 2.0;
    std::size_t n_init = 10;
    std::size_t max_iter = 300;
    double tol = 1e-6;
};

/// Fuzzy C-means from k-means++ centres; best of n_init runs by final J_m.
[[nodiscard]] ClusterAssignment fuzzy_cmeans(const Eigen::MatrixXd& x, std::size_t k, std::uint64_t seed,
                                             const FcmParams& params = {});

/// Memberships for fixed centres; a point on a centre belongs to it entirely.
[[nodiscard]] Eigen::MatrixXd fcm_memberships(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers, double m);

struct ExternalMetrics {
    double homogeneity = 0.0;
    double completeness = 0.0;
    double v_measure = 0.0;
};

[[nodiscard]] ExternalMetrics external_metrics(const std::vector<int>& labels_true, const std::vector<int>& labels_pred);

/// Euclidean distance matrix.
[[nodiscard]] Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& x);

struct SilhouetteResult {
    std::vector<double> samples;
    double mean = 0.0;  // flat mean over points
    double asw = 0.0;   // mean within each cluster, then over clusters
    std::size_t singletons = 0;
};

/// Silhouettes from a distance matrix. Singleton clusters score 0. Needs >= 2 clusters.
[[nodiscard]] SilhouetteResult silhouette_from_distances(const Eigen::MatrixXd& dist, const std::vector<int>& labels);
[[nodiscard]] SilhouetteResult silhouette(const Eigen::MatrixXd& x, const std::vector<int>& labels);

enum class Algorithm { kmeans, fcm };
[[nodiscard]] std::string_view to_string(Algorithm algo) noexcept;
[[nodiscard]] Algorithm algorithm_from_string(std::string_view name);

struct SweepResult {
    std::vector<std::size_t> ks;
    std::vector<double> asw;
    std::vector<double> mean_silhouette;
    std::size_t best_k = 0;
};

/// Cluster for every k in [k_min, k_max] and keep the k with the highest ASW (smaller k on ties).
[[nodiscard]] SweepResult asw_sweep(const Eigen::MatrixXd& x, Algorithm algo, std::size_t k_min, std::size_t k_max,
                                    std::uint64_t seed);

}  // namespace eog::cluster
