#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "eog/error.hpp"
#include "eog/io.hpp"
#include "eog/stats.hpp"

using namespace eog;

#ifndef EOG_FIXTURE_DIR
#define EOG_FIXTURE_DIR "tests/fixtures"
#endif

TEST_SUITE("stats") {

TEST_CASE("ADF t-ratio matches an independent OLS at fixed lags") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto x = seed % 2 ? fixture::random_walk(seed, 200) : fixture::ar1(seed, 200, 0.6);
        for (std::size_t p : {0u, 1u, 4u}) {
            const auto r = stats::adf_test(x, p, false);
            CHECK(r.statistic == doctest::Approx(oracle::adf_tau(x, p)).epsilon(1e-8));
            CHECK(r.detail.at("lags") == static_cast<double>(p));
            CHECK(r.detail.at("nobs") == static_cast<double>(200 - 1 - p));
        }
    }
}

TEST_CASE("ADF reference values on the bundled random walk") {
    const auto x = io::read_sequence_csv(EOG_FIXTURE_DIR "/random_walk.csv");
    REQUIRE(x.size() == 500);
    const auto fixed = stats::adf_test(x, 3, false);
    CHECK(fixed.statistic == doctest::Approx(-2.10207817673323).epsilon(1e-8));
    CHECK(fixed.p_value == doctest::Approx(0.24367977773765487).epsilon(1e-6));
    const auto aic = stats::adf_test(x);
    CHECK(aic.detail.at("lags") == 0.0);
    CHECK(aic.statistic == doctest::Approx(-1.9328277588558478).epsilon(1e-8));
    CHECK(aic.p_value == doctest::Approx(0.3167789256837765).epsilon(1e-6));
    CHECK(aic.p_value > 0.05);
    const auto noise = stats::adf_test(io::read_sequence_csv(EOG_FIXTURE_DIR "/white_noise.csv"));
    CHECK(noise.statistic == doctest::Approx(-13.835612864802702).epsilon(1e-8));
    CHECK(noise.detail.at("lags") == 1.0);
}

TEST_CASE("MacKinnon p-values and critical values") {
    const std::pair<double, double> table[] = {{-4.0, 0.0014105112530392603}, {-3.43, 0.009977709398779726},
                                               {-2.86, 0.05020109988200309},  {-2.0, 0.28657309916843154},
                                               {-1.0, 0.7532643012005655},    {0.5, 0.9848730963065522}};
    for (auto [tau, p] : table) CHECK(stats::mackinnon_p_value(tau) == doctest::Approx(p).epsilon(1e-9));
    const auto c100 = stats::mackinnon_critical_values(100);
    CHECK(c100[0] == doctest::Approx(-3.49750103).epsilon(1e-8));
    CHECK(c100[1] == doctest::Approx(-2.89090644).epsilon(1e-8));
    CHECK(c100[2] == doctest::Approx(-2.5824349).epsilon(1e-8));
    double prev = 0.0;
    for (double tau = -8.0; tau < 3.0; tau += 0.05) {
        const double p = stats::mackinnon_p_value(tau);
        CHECK(p >= prev);
        CHECK(p <= 1.0);
        prev = p;
    }
}

TEST_CASE("ADF input validation and default lag") {
    CHECK(stats::adf_default_max_lag(500) == 17);
    CHECK(stats::adf_default_max_lag(100) == 12);
    CHECK_THROWS_AS((void)stats::adf_test(std::vector<double>(10, 0.0)), InvalidParameter);
    CHECK_THROWS_AS((void)stats::adf_test(std::vector<double>(50, 2.0)), DegenerateInput);
}

TEST_CASE("RM-ANOVA matches sums-of-squares recomputation") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        oracle::Gen g(seed);
        const auto n = g.index(4, 12);
        const auto k = g.index(3, 6);
        Eigen::MatrixXd d = g.matrix(n, k);
        for (Eigen::Index j = 0; j < d.cols(); ++j) d.col(j).array() += 0.3 * static_cast<double>(j);
        const auto got = stats::rm_anova_gg(d);
        const auto want = oracle::rm_anova(d);
        CHECK(got.detail.at("ss_conditions") == doctest::Approx(want.ss_conditions).epsilon(1e-9));
        CHECK(got.detail.at("ss_subjects") == doctest::Approx(want.ss_subjects).epsilon(1e-9));
        CHECK(got.detail.at("ss_error") == doctest::Approx(want.ss_error).epsilon(1e-9));
        CHECK(got.statistic == doctest::Approx(want.f).epsilon(1e-9));
        CHECK(got.detail.at("epsilon") == doctest::Approx(want.epsilon).epsilon(1e-9));
        CHECK(std::abs(got.p_value - want.p_gg) < 1e-9);
        CHECK(got.detail.at("epsilon") >= 1.0 / static_cast<double>(k - 1) - 1e-12);
        CHECK(got.detail.at("epsilon") <= 1.0 + 1e-12);
    }
}

TEST_CASE("RM-ANOVA: sphericity gives epsilon 1, bad shapes are rejected") {
    // Compound symmetry: subject effect plus a constant condition shift.
    Eigen::MatrixXd d(4, 3);
    d << 1, 2, 3, 2, 3, 4, 5, 6, 7, 0, 1, 2;
    d(0, 0) += 0.1;
    d(1, 1) += 0.1;
    d(2, 2) += 0.1;
    d(3, 0) -= 0.1;
    const auto r = stats::rm_anova_gg(d);
    CHECK(r.detail.at("df1") == 2.0);
    CHECK(r.detail.at("df2") == 6.0);
    CHECK_THROWS((void)stats::rm_anova_gg(Eigen::MatrixXd::Ones(1, 3)));
    CHECK_THROWS((void)stats::rm_anova_gg(Eigen::MatrixXd::Ones(5, 1)));
}

TEST_CASE("Pearson r and p match the oracle") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        oracle::Gen g(seed);
        const auto n = g.index(4, 60);
        auto x = g.normal(n);
        auto y = g.normal(n);
        for (std::size_t i = 0; i < n; ++i) y[i] += g.real(-1.0, 1.0) * x[i];
        const auto got = stats::pearson_test(x, y);
        const auto want = oracle::pearson(x, y);
        CHECK(got.statistic == doctest::Approx(want.r).epsilon(1e-12));
        CHECK(std::abs(got.p_value - want.p) < 1e-10);
    }
    CHECK_THROWS((void)stats::pearson_test(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}));
}

TEST_CASE("summary statistics") {
    const auto s = stats::summary_stats(std::vector<double>{45, 21, 66, 54, 33, 58});
    CHECK(s.mean == doctest::Approx(277.0 / 6.0));
    CHECK(s.sample_std == doctest::Approx(oracle::sample_std(std::vector<double>{45, 21, 66, 54, 33, 58})));
}

TEST_CASE("envelope sequences: one value per whole second, log10 of the envelope") {
    const double fs = 500.0;
    std::vector<double> x(static_cast<std::size_t>(10.5 * fs));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 4.0 * std::sin(2.0 * std::numbers::pi * 30.0 * i / fs);
    const auto e = stats::envelope_sequences(SignalTrace(x, fs));
    REQUIRE(e.avg_seq.size() == 10);
    REQUIRE(e.std_seq.size() == 10);
    for (std::size_t i = 2; i < 8; ++i) CHECK(e.avg_seq[i] == doctest::Approx(std::log10(4.0)).epsilon(1e-3));
    CHECK_THROWS_AS((void)stats::envelope_sequences(SignalTrace(std::vector<double>(600, 1.0), fs)), InvalidParameter);
}

TEST_CASE("decimate by block means drops a partial tail") {
    const std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
    CHECK(stats::decimate_by_mean(x, 3) == std::vector<double>{2, 5});
    CHECK(stats::decimate_by_mean(x, 1) == x);
}

}  // TEST_SUITE
