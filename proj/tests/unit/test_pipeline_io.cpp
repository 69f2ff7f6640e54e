#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "../support/oracles.hpp"
#include "eog/blink.hpp"
#include "eog/error.hpp"
#include "eog/hpss.hpp"
#include "eog/io.hpp"
#include "eog/pipeline.hpp"

using namespace eog;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("eog_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

SignalTrace one_recording(int activity, double seconds = 40.0, std::uint64_t seed = 7) {
    pipeline::SimulateConfig sim;
    sim.sessions = 1;
    sim.duration_s = seconds;
    sim.seed = seed;
    return pipeline::simulate_dataset(sim)[static_cast<std::size_t>(activity)];
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("format_double reads back exactly") {
    oracle::Gen g(1);
    for (double v : g.normal(500, 0.0, 1e3)) CHECK(std::stod(io::format_double(v)) == v);
    for (double v : {0.0, 1e-300, -2.5, 1.0 / 3.0, 123456789.0}) CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("CSV and raw recordings round trip with their sidecars") {
    TempDir dir;
    oracle::Gen g(2);
    SignalTrace t(g.normal(1000, 0.0, 50.0), 250.0, {{"subject", "S1"}, {"activity", "frowning"}});
    io::write_recording_csv(t, dir.path / "a.csv");
    CHECK(fs::exists(io::sidecar_path(dir.path / "a.csv")));
    const auto back = io::read_recording(dir.path / "a.csv");
    CHECK(back.samples == t.samples);
    CHECK(back.fs == 250.0);
    CHECK(back.meta.at("activity") == "frowning");

    io::write_recording_raw(t, dir.path / "b.raw");
    const auto raw = io::read_recording(dir.path / "b.raw");
    REQUIRE(raw.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(raw.samples[i] == static_cast<double>(static_cast<float>(t.samples[i])));
    CHECK(raw.meta.at("subject") == "S1");

    fs::remove(io::sidecar_path(dir.path / "a.csv"));
    CHECK(io::read_recording(dir.path / "a.csv").fs == doctest::Approx(250.0));
    fs::remove(io::sidecar_path(dir.path / "b.raw"));
    CHECK_THROWS_AS((void)io::read_recording(dir.path / "b.raw"), FormatError);
}

TEST_CASE("malformed recordings are rejected") {
    TempDir dir;
    io::write_text(dir.path / "gap.csv", "t_s,amplitude\n0,1\n0.002,2\n0.010,3\n0.012,4\n");
    CHECK_THROWS_AS((void)io::read_recording(dir.path / "gap.csv"), FormatError);
    io::write_text(dir.path / "text.csv", "t_s,amplitude\n0,1\n0.002,abc\n");
    CHECK_THROWS_AS((void)io::read_recording(dir.path / "text.csv"), FormatError);
    io::write_text(dir.path / "empty.csv", "t_s,amplitude\n");
    CHECK_THROWS_AS((void)io::read_recording(dir.path / "empty.csv"), FormatError);
    CHECK_THROWS((void)io::read_recording(dir.path / "missing.csv"));
}

TEST_CASE("sequence and matrix CSV readers skip a header") {
    TempDir dir;
    io::write_text(dir.path / "s.csv", "value\n1.5\n-2\n3e2\n");
    CHECK(io::read_sequence_csv(dir.path / "s.csv") == std::vector<double>{1.5, -2.0, 300.0});
    io::write_text(dir.path / "m.csv", "a,b,c\n1,2,3\n4,5,6\n");
    const auto m = io::read_matrix_csv(dir.path / "m.csv");
    CHECK(m.rows() == 2);
    CHECK(m(1, 2) == 6.0);
    io::write_text(dir.path / "bad.csv", "a,b\n1,2\n3\n");
    CHECK_THROWS_AS((void)io::read_matrix_csv(dir.path / "bad.csv"), FormatError);
}

TEST_CASE("preprocess records which stages ran") {
    const auto raw = one_recording(1, 12.0);
    pipeline::PipelineConfig cfg;
    pipeline::StageOutputs st;
    const auto out = pipeline::preprocess(raw, cfg, &st);
    CHECK(out.size() == raw.size());
    CHECK(out.meta.at("stage_hpss") == "true");
    CHECK(out.meta.at("stage_blink") == "true");
    CHECK(out.meta.at("activity") == raw.meta.at("activity"));
    CHECK(st.zscored.samples == pipeline::condition(raw, cfg).samples);
    CHECK(st.harmonic.samples == hpss::harmonic_filter_time(st.zscored, cfg.hpss, cfg.stft).samples);

    cfg.skip_hpss = true;
    const auto no_hpss = pipeline::preprocess(raw, cfg, &st);
    CHECK(no_hpss.meta.at("stage_hpss") == "false");
    CHECK(st.harmonic.samples == st.zscored.samples);
    CHECK(no_hpss.samples == blink::correct_blink_artifacts(st.zscored, cfg.blink_params(raw.fs)).samples);

    cfg.skip_blink = true;
    const auto neither = pipeline::preprocess(raw, cfg);
    CHECK(neither.samples == pipeline::condition(raw, cfg).samples);
    CHECK(neither.meta.at("blink_regions") == "0");
}

TEST_CASE("invalid pipeline settings are rejected before running") {
    const auto raw = one_recording(0, 5.0);
    pipeline::PipelineConfig cfg;
    cfg.hop_s = 2.0;
    CHECK_THROWS_AS((void)pipeline::preprocess(raw, cfg), InvalidParameter);
    cfg = {};
    cfg.notch_hz = 400.0;
    CHECK_THROWS_AS((void)pipeline::preprocess(raw, cfg), InvalidParameter);
    cfg = {};
    cfg.hpss.l_harm = 4;
    CHECK_THROWS_AS((void)pipeline::preprocess(raw, cfg), InvalidParameter);
    cfg = {};
    cfg.stft.hop = 0;
    CHECK_THROWS_AS((void)pipeline::preprocess(raw, cfg), InvalidParameter);
}

TEST_CASE("a 40 s recording gives 79 windows and 77 stacked rows") {
    const auto raw = one_recording(2);
    pipeline::PipelineConfig cfg;
    const auto processed = pipeline::preprocess(raw, cfg);
    CHECK(pipeline::window_features(processed, cfg).size() == 79);
    const auto rows = pipeline::featurize(processed, cfg);
    REQUIRE(rows.size() == 77);
    for (const auto& r : rows) {
        CHECK(r.label == raw.meta.at("activity"));
        CHECK(r.session == raw.meta.at("session"));
    }
    SignalTrace shortt = processed;
    shortt.samples.resize(900);
    CHECK(pipeline::featurize(shortt, cfg).empty());
}

TEST_CASE("feature CSV round trip") {
    TempDir dir;
    pipeline::PipelineConfig cfg;
    auto rows = pipeline::featurize(pipeline::preprocess(one_recording(3, 6.0), cfg), cfg);
    const auto more = pipeline::featurize(pipeline::preprocess(one_recording(5, 6.0), cfg), cfg);
    rows.insert(rows.end(), more.begin(), more.end());
    io::write_feature_csv(rows, dir.path / "f.csv");
    const auto data = io::read_feature_csv(dir.path / "f.csv");
    const auto direct = pipeline::to_dataset(rows);
    CHECK(data.X == direct.X);
    CHECK(data.y == direct.y);
    CHECK(data.session == direct.session);
    CHECK(data.feature_names.size() == 87);
    CHECK(data.feature_names == features::stacked_feature_names());
}

TEST_CASE("simulated dataset layout and determinism") {
    pipeline::SimulateConfig sim;
    sim.sessions = 2;
    sim.duration_s = 4.0;
    const auto a = pipeline::simulate_dataset(sim);
    REQUIRE(a.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].size() == 2000);
        CHECK(a[i].meta.at("activity") == learn::activity_name(static_cast<int>(i % 6)));
        CHECK(a[i].meta.count("subject") == 1);
        CHECK(a[i].meta.count("recording") == 1);
    }
    CHECK(a[0].meta.at("session") != a[6].meta.at("session"));
    const auto b = pipeline::simulate_dataset(sim);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].samples == b[i].samples);
    sim.seed = 8;
    CHECK(pipeline::simulate_dataset(sim)[0].samples != a[0].samples);
}

TEST_CASE("synthetic generator output does not depend on chunking") {
    pipeline::SyntheticGenerator whole(pipeline::SynthParams{}, 3), parts(pipeline::SynthParams{}, 3);
    const auto all = whole.next(1500);
    std::vector<double> joined;
    for (std::size_t n : {100u, 250u, 1u, 1149u}) {
        const auto c = parts.next(n);
        joined.insert(joined.end(), c.begin(), c.end());
    }
    CHECK(joined == all);
}

TEST_CASE("blink activity carries more blink regions than a glance") {
    pipeline::PipelineConfig cfg;
    const auto blink = pipeline::preprocess(one_recording(5, 20.0), cfg);
    const auto glance = pipeline::preprocess(one_recording(0, 20.0), cfg);
    CHECK(std::stoi(blink.meta.at("blink_regions")) > std::stoi(glance.meta.at("blink_regions")));
}

}  // TEST_SUITE
