#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "eog/dsp/fft.hpp"
#include "eog/dsp/filters.hpp"
#include "eog/dsp/ops.hpp"
#include "eog/dsp/stft.hpp"
#include "eog/error.hpp"

using namespace eog;

TEST_SUITE("dsp") {

TEST_CASE("median filter equals the sort oracle on random sequences") {
    oracle::Gen g(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = g.index(1, 60);
        const auto l = 2 * g.index(0, 8) + 1;
        auto x = g.normal(n);
        // Repeated values exercise the tie handling.
        if (trial % 3 == 0) {
            for (auto& v : x) v = std::round(v);
        }
        const auto got = dsp::median_filter_1d(x, l);
        const auto want = oracle::sort_median_filter(x, l);
        REQUIRE(got == want);
    }
}

TEST_CASE("median filter rejects even lengths and keeps length 1 as identity") {
    const std::vector<double> x{3, 1, 2};
    CHECK_THROWS_AS((void)dsp::median_filter_1d(x, 2), InvalidParameter);
    CHECK_THROWS_AS((void)dsp::median_filter_1d(x, 0), InvalidParameter);
    CHECK(dsp::median_filter_1d(x, 1) == x);
    CHECK(dsp::median_filter_1d(std::vector<double>{1, 9, 2, 8, 3}, 3) == std::vector<double>{1, 2, 8, 3, 3});
}

TEST_CASE("median and percentile") {
    CHECK(dsp::median(std::vector<double>{}) == 0.0);
    CHECK(dsp::median(std::vector<double>{4, 1, 3, 2}) == 2.5);
    CHECK(dsp::median(std::vector<double>{5, 1, 3}) == 3.0);
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(dsp::percentile(v, 25) == doctest::Approx(1.75));
    CHECK(dsp::percentile(v, 100) == 4.0);
    CHECK_THROWS_AS((void)dsp::percentile(v, 101), InvalidParameter);
}

TEST_CASE("rfft matches a naive DFT and irfft inverts it") {
    oracle::Gen g(3);
    for (std::size_t n : {1u, 2u, 7u, 16u, 31u, 250u, 256u}) {
        const auto x = g.normal(n);
        const auto got = dsp::rfft(x);
        const auto want = oracle::naive_dft(x);
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - want[k]) < 1e-9 * (1.0 + n));
        const auto back = dsp::irfft(got, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
}

TEST_CASE("STFT/ISTFT round trip on random traces") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        oracle::Gen g(seed);
        const auto n = g.index(300, 3000);
        SignalTrace t(g.normal(n), 500.0);
        for (auto kind : {dsp::WindowKind::hann, dsp::WindowKind::rectangular}) {
            dsp::StftParams p;
            p.window = kind;
            const auto back = dsp::istft(dsp::stft(t, p));
            REQUIRE(back.size() == n);
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(back.samples[i] - t.samples[i]));
            CHECK(err < 1e-9);
        }
    }
}

TEST_CASE("STFT frame geometry and parameter validation") {
    SignalTrace t(std::vector<double>(1000, 1.0), 500.0);
    const auto s = dsp::stft(t);
    CHECK(s.n_bins() == 129);
    CHECK(s.n_frames() == 1 + (1000 + 256 - 256 + 63) / 64);
    dsp::StftParams bad;
    bad.hop = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidParameter);
    bad.hop = 300;
    CHECK_THROWS_AS(bad.validate(), InvalidParameter);
    CHECK(dsp::window_kind_from_string("rect") == dsp::WindowKind::rectangular);
    CHECK_THROWS_AS((void)dsp::window_kind_from_string("kaiser"), InvalidParameter);
}

TEST_CASE("notch filter removes mains hum and keeps a distant tone") {
    const auto hum = fixture::tones({50.0}, 10.0);
    const auto tone = fixture::tones({10.0}, 10.0);
    const auto rms_tail = [](const SignalTrace& t) {
        double s = 0;
        for (std::size_t i = t.size() / 2; i < t.size(); ++i) s += t.samples[i] * t.samples[i];
        return std::sqrt(s / static_cast<double>(t.size() / 2));
    };
    CHECK(rms_tail(dsp::notch_filter(hum, 50.0)) < 0.01);
    CHECK(rms_tail(dsp::notch_filter(tone, 50.0)) == doctest::Approx(std::sqrt(0.5)).epsilon(0.01));
    CHECK_THROWS_AS((void)dsp::notch_filter(hum, 300.0), InvalidParameter);
}

TEST_CASE("Butterworth high-pass: unit gain at Nyquist, -3 dB at cutoff, zero at DC") {
    for (int order : {1, 2, 3, 4, 5}) {
        const auto sos = dsp::design_butterworth_highpass(2.0, order, 500.0);
        std::complex<double> h_cut = 1.0, h_nyq = 1.0, h_dc = 1.0;
        const auto eval = [](const dsp::Biquad& b, std::complex<double> z) {
            const auto zi = 1.0 / z;
            return (b.b0 + b.b1 * zi + b.b2 * zi * zi) / (1.0 + b.a1 * zi + b.a2 * zi * zi);
        };
        const auto zc = std::polar(1.0, 2.0 * std::numbers::pi * 2.0 / 500.0);
        for (const auto& b : sos) {
            h_cut *= eval(b, zc);
            h_nyq *= eval(b, {-1.0, 0.0});
            h_dc *= b.dc_gain();
        }
        CHECK(std::abs(h_nyq) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(h_cut) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
        CHECK(std::abs(h_dc) < 1e-9);
    }
}

TEST_CASE("zero-phase high-pass removes a constant offset and linear drift") {
    auto t = fixture::tones({20.0}, 8.0);
    for (std::size_t i = 0; i < t.size(); ++i) t.samples[i] += 5.0 + 0.1 * static_cast<double>(i) / 500.0;
    const auto y = dsp::highpass_filter(t, 2.0);
    double err = 0.0;
    for (std::size_t i = 1000; i + 1000 < t.size(); ++i) {
        err = std::max(err, std::abs(y.samples[i] - std::sin(2.0 * std::numbers::pi * 20.0 * i / 500.0)));
    }
    CHECK(err < 0.01);
}

TEST_CASE("Hilbert envelope of an amplitude-modulated tone follows the modulation") {
    const double fs = 500.0;
    std::vector<double> x(2000), env(2000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = static_cast<double>(i) / fs;
        env[i] = 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * 0.5 * t);
        x[i] = env[i] * std::cos(2.0 * std::numbers::pi * 50.0 * t);
    }
    const auto e = dsp::hilbert_envelope(SignalTrace(x, fs));
    for (std::size_t i = 200; i < 1800; ++i) CHECK(e[i] == doctest::Approx(env[i]).epsilon(1e-3));
    CHECK_THROWS_AS((void)dsp::hilbert_envelope(SignalTrace({1, 2, 3}, fs)), InvalidParameter);
}

TEST_CASE("Savitzky-Golay reproduces polynomials up to its order everywhere") {
    oracle::Gen g(5);
    for (int order : {0, 1, 2, 3}) {
        std::vector<double> c = g.normal(static_cast<std::size_t>(order) + 1);
        std::vector<double> x(120);
        for (std::size_t i = 0; i < x.size(); ++i) {
            double v = 0.0, u = static_cast<double>(i) / 50.0;
            for (double ci : c) v = v * u + ci;
            x[i] = v;
        }
        const auto y = dsp::savgol_smooth(x, 21, order);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("Savitzky-Golay interior matches the direct local least-squares fit") {
    oracle::Gen g(6);
    const auto x = g.normal(80);
    const std::size_t win = 11;
    const auto y = dsp::savgol_smooth(x, win, 2);
    // Quadratic fit on offsets -5..5 evaluated at 0: closed-form weights (3(3m^2+3m-1) - 15 j^2) / ((2m-1)(2m+1)(2m+3)).
    const double m = 5.0;
    const double den = (2 * m - 1) * (2 * m + 1) * (2 * m + 3) / 3.0;
    for (std::size_t i = 5; i + 5 < x.size(); ++i) {
        double v = 0.0;
        for (int j = -5; j <= 5; ++j) v += (3 * m * m + 3 * m - 1 - 5.0 * j * j) / den * x[i + j];
        CHECK(y[i] == doctest::Approx(v).epsilon(1e-10));
    }
}

TEST_CASE("find_peaks: height, spacing and plateaus") {
    const std::vector<double> x{0, 5, 0, 3, 0, 0, 7, 7, 7, 0, 1, 0};
    CHECK(dsp::find_peaks(x, 2.0) == std::vector<std::size_t>{1, 3, 7});
    CHECK(dsp::find_peaks(x, 4.0) == std::vector<std::size_t>{1, 7});
    CHECK(dsp::find_peaks(x, 0.5, 3) == std::vector<std::size_t>{1, 7, 10});
    CHECK(dsp::find_peaks(x, 0.5, 5) == std::vector<std::size_t>{1, 7});
}

TEST_CASE("find_peaks property: result is increasing, spaced and above the height") {
    oracle::Gen g(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = g.normal(g.index(5, 200));
        const double h = g.real(-1.0, 2.0);
        const auto d = g.index(1, 20);
        const auto p = dsp::find_peaks(x, h, d);
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(x[p[i]] >= h);
            if (i > 0) CHECK(p[i] - p[i - 1] >= d);
        }
    }
}

TEST_CASE("robust z-score: median 0, MAD 1/1.4826; constant input is degenerate") {
    oracle::Gen g(2);
    SignalTrace t(g.normal(501, 3.0, 2.0), 500.0);
    const auto z = dsp::robust_zscore(t);
    CHECK(std::abs(dsp::median(z.samples)) < 1e-12);
    std::vector<double> dev;
    for (double v : z.samples) dev.push_back(std::abs(v));
    CHECK(dsp::median(dev) == doctest::Approx(1.0 / dsp::kMadToSigma));
    CHECK_THROWS_AS((void)dsp::robust_zscore(SignalTrace(std::vector<double>(10, 1.0), 500.0)), DegenerateInput);
}

TEST_CASE("segment_windows counts and rejects fractional durations") {
    SignalTrace t(std::vector<double>(20000, 0.0), 500.0);
    CHECK(dsp::segment_windows(t, 1.0, 0.5).size() == 79);
    CHECK(dsp::segment_windows(SignalTrace(std::vector<double>(100, 0.0), 500.0), 1.0, 0.5).empty());
    CHECK_THROWS_AS((void)dsp::segment_windows(t, 1.0001, 0.5), InvalidParameter);
}

}  // TEST_SUITE
