#include <doctest.h>

#include <cmath>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "eog/blink.hpp"
#include "eog/dsp/ops.hpp"
#include "eog/dsp/stft.hpp"
#include "eog/error.hpp"
#include "eog/hpss.hpp"

using namespace eog;

namespace {

double energy_share(const dsp::Spectrogram& part, const dsp::Spectrogram& other) {
    const double a = part.energy();
    return a / (a + other.energy());
}

}  // namespace

TEST_SUITE("hpss") {

TEST_CASE("steady tones go to the harmonic part, impulses to the percussive part") {
    for (auto mask : {hpss::MaskKind::soft, hpss::MaskKind::hard}) {
        hpss::HpssParams p;
        p.mask = mask;
        const auto tone = hpss::hpss_separate(dsp::stft(fixture::tones({20.0, 60.0}, 8.0)), p);
        CHECK(energy_share(tone.harmonic, tone.percussive) >= 0.99);
        const auto clicks = hpss::hpss_separate(dsp::stft(fixture::impulses(4000, 400)), p);
        CHECK(energy_share(clicks.percussive, clicks.harmonic) >= 0.99);
    }
}

TEST_CASE("soft masks sum to one and split the spectrogram exactly") {
    oracle::Gen g(4);
    SignalTrace t(g.normal(3000), 500.0);
    const auto spec = dsp::stft(t);
    for (double power : {1.0, 2.0, 3.5}) {
        hpss::HpssParams p;
        p.soft_power = power;
        const auto r = hpss::hpss_separate(spec, p);
        for (std::size_t i = 0; i < r.mask_harmonic.size(); ++i) {
            CHECK(r.mask_harmonic[i] + r.mask_percussive[i] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(r.mask_harmonic[i] >= 0.0);
            const auto sum = r.harmonic.data()[i] + r.percussive.data()[i];
            CHECK(std::abs(sum - spec.data()[i]) <= 1e-9 * (1.0 + std::abs(spec.data()[i])));
        }
    }
}

TEST_CASE("hard masks are binary with ties to the harmonic side") {
    SignalTrace zero(std::vector<double>(1000, 0.0), 500.0);
    hpss::HpssParams p;
    p.mask = hpss::MaskKind::hard;
    const auto r = hpss::hpss_separate(dsp::stft(zero), p);
    for (double m : r.mask_harmonic) CHECK(m == 1.0);
    oracle::Gen g(8);
    const auto q = hpss::hpss_separate(dsp::stft(SignalTrace(g.normal(2000), 500.0)), p);
    for (std::size_t i = 0; i < q.mask_harmonic.size(); ++i) {
        CHECK((q.mask_harmonic[i] == 0.0 || q.mask_harmonic[i] == 1.0));
        CHECK(q.mask_harmonic[i] + q.mask_percussive[i] == 1.0);
    }
}

TEST_CASE("harmonic filter keeps a tone and suppresses a click train in the time domain") {
    const auto tone = fixture::tones({15.0}, 6.0);
    const auto h = hpss::harmonic_filter_time(tone);
    REQUIRE(h.size() == tone.size());
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 500; i + 500 < tone.size(); ++i) {
        err += (h.samples[i] - tone.samples[i]) * (h.samples[i] - tone.samples[i]);
        ref += tone.samples[i] * tone.samples[i];
    }
    CHECK(err / ref < 0.01);
    const auto clicks = fixture::impulses(3000, 300);
    const auto hc = hpss::harmonic_filter_time(clicks);
    double e_in = 0, e_out = 0;
    for (std::size_t i = 0; i < clicks.size(); ++i) {
        e_in += clicks.samples[i] * clicks.samples[i];
        e_out += hc.samples[i] * hc.samples[i];
    }
    CHECK(e_out / e_in < 0.05);
}

TEST_CASE("parameter validation") {
    hpss::HpssParams p;
    p.l_harm = 4;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p.l_harm = 1;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p.l_harm = 17;
    p.soft_power = 0.5;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
}

}  // TEST_SUITE

TEST_SUITE("blink") {

TEST_CASE("regions follow the quartile growth rule on a hand-built trace") {
    // q1 = 0, q3 = 1 for this sequence; the peak at index 5 reaches 6.
    std::vector<double> x{0, 0, 1, 0, 2, 6, 3, 2, 0.5, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0};
    const auto b = blink::inlier_bounds(x, blink::BoundsMode::quartile);
    REQUIRE(b.q3 == 1.0);
    blink::BlinkParams p;
    p.threshold = 4.0;
    p.min_distance = 1;
    const auto r = blink::detect_blink_artifacts(SignalTrace(x, 500.0), p);
    REQUIRE(r.size() == 1);
    CHECK(r[0].peak_index == 5);
    CHECK(r[0].begin_index == 3);  // first failing sample on the left is included
    CHECK(r[0].end_index == 7);    // stops before the first failing sample on the right
    CHECK(r[0].polarity == blink::Polarity::positive);
}

TEST_CASE("negative spikes produce negative regions") {
    const auto t = fixture::spiked_trace(1, 6.0, -10.0);
    const auto r = blink::detect_blink_artifacts(t, blink::BlinkParams::for_rate(500.0));
    REQUIRE(!r.empty());
    for (const auto& reg : r) {
        CHECK(reg.polarity == blink::Polarity::negative);
        CHECK(t.samples[reg.peak_index] <= -4.0);
    }
}

TEST_CASE("one region per spike, each containing its peak") {
    const auto t = fixture::spiked_trace(2, 10.0, 10.0, 1.3, true);
    const auto r = blink::detect_blink_artifacts(t, blink::BlinkParams::for_rate(500.0));
    CHECK(r.size() == 8);
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(r[i].begin_index <= r[i].peak_index);
        CHECK(r[i].peak_index <= r[i].end_index);
        if (i > 0) CHECK(r[i].begin_index > r[i - 1].end_index);
    }
}

TEST_CASE("correction removes every threshold peak, is idempotent and leaves other samples alone") {
    const auto params = blink::BlinkParams::for_rate(500.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = fixture::spiked_trace(seed, 10.0, 8.0 + static_cast<double>(seed), 0.9, seed % 2 == 1);
        REQUIRE(blink::count_threshold_peaks(t.samples, 4.0, params.min_distance) > 0);
        const auto regions = blink::detect_blink_artifacts(t, params);
        const auto c = blink::correct_blink_artifacts(t, params);
        CHECK(blink::count_threshold_peaks(c.samples, 4.0, params.min_distance) == 0);
        CHECK(blink::correct_blink_artifacts(c, params).samples == c.samples);
        std::vector<bool> inside(t.size(), false);
        for (const auto& r : regions) {
            for (std::size_t i = r.begin_index; i <= r.end_index; ++i) inside[i] = true;
        }
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!inside[i]) CHECK(c.samples[i] == t.samples[i]);
        }
    }
}

TEST_CASE("a clean trace is returned unchanged") {
    oracle::Gen g(3);
    SignalTrace t(g.uniform(2000, -1.0, 1.0), 500.0);
    CHECK(blink::correct_blink_artifacts(t, blink::BlinkParams::for_rate(500.0)).samples == t.samples);
}

TEST_CASE("percentile bounds use the literal 1st and 3rd percentiles") {
    std::vector<double> x(101);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
    const auto q = blink::inlier_bounds(x, blink::BoundsMode::quartile);
    const auto p = blink::inlier_bounds(x, blink::BoundsMode::percentile);
    CHECK(q.q1 == 25.0);
    CHECK(q.q3 == 75.0);
    CHECK(p.q1 == 1.0);
    CHECK(p.q3 == 3.0);
}

TEST_CASE("rate-scaled defaults") {
    const auto p = blink::BlinkParams::for_rate(500.0, 4.0, 100.0);
    CHECK(p.min_distance == 50);
    CHECK(p.envelope_window == 501);
    CHECK_THROWS_AS((void)blink::BlinkParams::for_rate(0.0), InvalidParameter);
}

}  // TEST_SUITE
