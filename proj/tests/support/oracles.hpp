#pragma once

// Direct-definition reference implementations used only by the tests. They favour the
// plainest possible route (loops, sorting, naive transforms) over speed.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// ---- generators ----------------------------------------------------------

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    std::vector<double> normal(std::size_t n, double mean = 0.0, double sd = 1.0);
    std::vector<double> uniform(std::size_t n, double lo, double hi);
    std::size_t index(std::size_t lo, std::size_t hi);  // inclusive
    double real(double lo, double hi);
    std::vector<int> labels(std::size_t n, int k);      // every label used when n >= k
    Eigen::MatrixXd matrix(std::size_t rows, std::size_t cols, double sd = 1.0);
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Gaussian blobs: k well separated centres in d dims, n points each.
Eigen::MatrixXd blobs(Gen& g, std::size_t k, std::size_t n, std::size_t d, double spread, std::vector<int>* labels);

// ---- dsp -----------------------------------------------------------------

std::vector<double> sort_median_filter(std::span<const double> x, std::size_t l);
std::vector<std::complex<double>> naive_dft(std::span<const double> x);

// ---- features ------------------------------------------------------------

double zcr(std::span<const double> w);
double ste(std::span<const double> w);
double energy_entropy(std::span<const double> w, std::size_t k);

struct SpectrumRef {
    std::vector<double> mag;
    std::vector<double> freq;
};
SpectrumRef spectrum(std::span<const double> w, double fs);
double spectral_entropy(const SpectrumRef& s);
double spectral_centroid(const SpectrumRef& s);
double spectral_bandwidth(const SpectrumRef& s, double p);
double spectral_rolloff(const SpectrumRef& s, double fraction);
std::vector<double> spectral_contrast(const SpectrumRef& s, double fs, double a);
std::vector<double> poly_fit(const SpectrumRef& s, int order);

double kurtosis_g2(std::span<const double> w);
double skewness_g1(std::span<const double> w);
double sample_std(std::span<const double> w);
double median(std::span<const double> w);

/// Level-1 periodised db4 as circular convolution followed by keeping odd positions.
void db4_level1(std::span<const double> w, std::vector<double>& approx, std::vector<double>& detail);
struct CoeffStats {
    double mean, std, energy, entropy;
};
CoeffStats coeff_stats(const std::vector<double>& c);

/// All 29 per-window features in the toolkit's canonical order.
std::vector<double> window_features(std::span<const double> w, double fs);

// ---- statistics ----------------------------------------------------------

/// Regularised incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);
double f_sf(double f, double d1, double d2);
double t_two_sided(double t, double df);

struct AnovaRef {
    double ss_conditions, ss_subjects, ss_error, f, df1, df2, epsilon, p_gg;
};
AnovaRef rm_anova(const Eigen::MatrixXd& data);

struct PearsonRef {
    double r, p;
};
PearsonRef pearson(std::span<const double> x, std::span<const double> y);

/// OLS t-ratio of the lagged level in an ADF regression with a constant and fixed lag p.
double adf_tau(std::span<const double> y, std::size_t p);

// ---- clustering ----------------------------------------------------------

struct SilhouetteRef {
    std::vector<double> s;
    double mean;
    double asw;
};
SilhouetteRef silhouette(const Eigen::MatrixXd& x, const std::vector<int>& labels);

}  // namespace oracle
