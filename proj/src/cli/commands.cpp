#include <algorithm>
#include <atomic>
#include <csignal>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "eog/cli.hpp"
#include "eog/cluster.hpp"
#include "eog/error.hpp"
#include "eog/io.hpp"
#include "eog/realtime.hpp"
#include "eog/server.hpp"
#include "eog/stats.hpp"

namespace eog::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

// Pipeline flags bound to optionals so only flags actually given override the config file.
struct PipelineFlags {
    std::optional<std::string> config_file;
    std::optional<double> window_s, hop_s, notch_hz, highpass_hz, blink_threshold, blink_min_distance_ms;
    std::optional<std::size_t> l_harm, l_perc;
    std::optional<std::string> mask;
    std::optional<std::uint64_t> seed;
    bool skip_hpss = false;
    bool skip_blink = false;

    void add_to(CLI::App* app, bool stages) {
        app->add_option("--config", config_file, "JSON config file (flags take precedence)");
        app->add_option("--window-s", window_s, "Feature window length in seconds");
        app->add_option("--hop-s", hop_s, "Feature hop in seconds");
        app->add_option("--seed", seed, "Random seed");
        if (!stages) return;
        app->add_option("--notch-hz", notch_hz, "Mains notch frequency");
        app->add_option("--highpass-hz", highpass_hz, "High-pass cutoff");
        app->add_option("--l-harm", l_harm, "Harmonic median filter length (frames)");
        app->add_option("--l-perc", l_perc, "Percussive median filter length (bins)");
        app->add_option("--mask", mask, "HPSS mask")->check(CLI::IsMember({"hard", "soft"}));
        app->add_option("--blink-threshold", blink_threshold, "Blink peak threshold (robust z)");
        app->add_option("--blink-min-distance-ms", blink_min_distance_ms, "Minimum blink peak distance");
        app->add_flag("--skip-hpss", skip_hpss, "Bypass the harmonic filter");
        app->add_flag("--skip-blink", skip_blink, "Bypass blink correction");
    }

    [[nodiscard]] pipeline::PipelineConfig resolve() const {
        pipeline::PipelineConfig c;
        if (config_file) apply_pipeline_json(load_config_file(*config_file), c);
        json j = json::object();
        if (window_s) j["window_s"] = *window_s;
        if (hop_s) j["hop_s"] = *hop_s;
        if (notch_hz) j["notch_hz"] = *notch_hz;
        if (highpass_hz) j["highpass_hz"] = *highpass_hz;
        if (l_harm) j["l_harm"] = *l_harm;
        if (l_perc) j["l_perc"] = *l_perc;
        if (mask) j["mask"] = *mask;
        if (blink_threshold) j["blink_threshold"] = *blink_threshold;
        if (blink_min_distance_ms) j["blink_min_distance_ms"] = *blink_min_distance_ms;
        if (seed) j["seed"] = *seed;
        if (skip_hpss) j["skip_hpss"] = true;
        if (skip_blink) j["skip_blink"] = true;
        apply_pipeline_json(j, c);
        // Checks that do not depend on the recording's rate fail before any file is read.
        if (!(c.window_s > 0.0) || !(c.hop_s > 0.0)) throw InvalidParameter("window and hop must be positive");
        if (c.hop_s > c.window_s) throw InvalidParameter("hop must not exceed the window");
        if (!(c.blink_threshold > 0.0)) throw InvalidParameter("blink threshold must be positive");
        c.hpss.validate();
        c.stft.validate();
        return c;
    }
};

json report_json(const stats::TestReport& r) {
    json j{{"test", r.test}, {"statistic", r.statistic}, {"p_value", r.p_value}};
    j["detail"] = json::object();
    for (const auto& [k, v] : r.detail) j["detail"][k] = v;
    return j;
}

void emit(const json& j, const std::optional<std::string>& path, std::ostream& out) {
    if (path) {
        io::write_text(*path, j.dump(2) + "\n");
    } else {
        out << j.dump(2) << "\n";
    }
}

std::string matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& header) {
    std::ostringstream s;
    for (std::size_t i = 0; i < header.size(); ++i) s << (i ? "," : "") << header[i];
    s << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) s << (c ? "," : "") << io::format_double(m(r, c));
        s << "\n";
    }
    return s.str();
}

// Runs fn over the items on up to `jobs` threads; results keep input order.
template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& items, std::size_t jobs, Fn fn) {
    using R = decltype(fn(items.front()));
    std::vector<R> results(items.size());
    std::atomic<std::size_t> next{0};
    const std::size_t n = std::max<std::size_t>(1, std::min(jobs, items.size()));
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n; ++t) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < items.size(); i = next++) results[i] = fn(items[i]);
        });
    }
    for (auto& t : threads) t.join();
    return results;
}

std::size_t default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct FileOutcome {
    std::string input;
    std::string output;
    std::string error;
    std::size_t rows = 0;
};

json outcomes_json(const std::vector<FileOutcome>& outcomes) {
    json files = json::array();
    for (const auto& o : outcomes) {
        json f{{"input", o.input}};
        if (o.error.empty()) {
            f["status"] = "ok";
            if (!o.output.empty()) f["output"] = o.output;
            if (o.rows) f["rows"] = o.rows;
        } else {
            f["status"] = "error";
            f["error"] = o.error;
        }
        files.push_back(std::move(f));
    }
    return files;
}

int batch_status(const std::vector<FileOutcome>& outcomes, std::ostream& err) {
    int code = kOk;
    for (const auto& o : outcomes) {
        if (!o.error.empty()) {
            err << "error: " << (o.error.rfind(o.input, 0) == 0 ? "" : o.input + ": ") << o.error << "\n";
            code = kRuntimeError;
        }
    }
    return code;
}

void write_spectrogram_jsonl(const SignalTrace& trace, const dsp::StftParams& params, const fs::path& path) {
    const auto spec = dsp::stft(trace, params);
    std::ostringstream s;
    for (std::size_t f = 0; f < spec.n_frames(); ++f) {
        json row{{"frame", f}, {"t", static_cast<double>(f * spec.hop()) / spec.fs()}};
        std::vector<double> mag(spec.n_bins());
        for (std::size_t b = 0; b < spec.n_bins(); ++b) mag[b] = std::abs(spec.at(b, f));
        row["magnitude"] = mag;
        s << row.dump() << "\n";
    }
    io::write_text(path, s.str());
}

void write_trace(const SignalTrace& trace, const fs::path& path) {
    if (path.extension() == ".csv") {
        io::write_recording_csv(trace, path);
    } else {
        io::write_recording_raw(trace, path);
    }
}

// ---- preprocess ----------------------------------------------------------

struct PreprocessArgs {
    std::vector<std::string> inputs;
    std::string output_dir;
    bool dump_stages = false;
    std::size_t jobs = default_jobs();
    PipelineFlags flags;
};

int cmd_preprocess(const PreprocessArgs& a, std::ostream& out, std::ostream& err) {
    const auto config = a.flags.resolve();
    const auto files = collect_recordings(a.inputs);
    fs::create_directories(a.output_dir);
    if (files.empty()) err << "warning: no recordings found\n";

    const auto outcomes = parallel_map(files, a.jobs, [&](const fs::path& in) {
        FileOutcome o{in.string(), {}, {}, 0};
        try {
            const auto raw = io::read_recording(in);
            config.validate(raw.fs);
            pipeline::StageOutputs stages;
            auto processed = pipeline::preprocess(raw, config, &stages);
            processed.meta["config"] = pipeline_config_json(config).dump();
            const fs::path target = fs::path(a.output_dir) / in.filename();
            write_trace(processed, target);
            if (a.dump_stages) {
                const auto stem = (fs::path(a.output_dir) / "stages" / in.stem()).string();
                const auto ext = in.extension().string() == ".csv" ? std::string(".csv") : std::string(".f32");
                write_trace(stages.notched, stem + ".notch" + ext);
                write_trace(stages.highpassed, stem + ".highpass" + ext);
                write_trace(stages.zscored, stem + ".robust_z" + ext);
                write_trace(stages.harmonic, stem + ".hpss" + ext);
                write_trace(stages.corrected, stem + ".blink" + ext);
                write_spectrogram_jsonl(stages.zscored, config.stft, stem + ".spectrogram.jsonl");
            }
            o.output = target.string();
        } catch (const std::exception& e) {
            o.error = e.what();
        }
        return o;
    });

    json report{{"command", "preprocess"}, {"config", pipeline_config_json(config)}, {"files", outcomes_json(outcomes)}};
    io::write_text(fs::path(a.output_dir) / "preprocess_report.json", report.dump(2) + "\n");
    std::size_t ok = 0;
    for (const auto& o : outcomes) ok += o.error.empty() ? 1 : 0;
    out << "preprocessed " << ok << "/" << outcomes.size() << " recordings into " << a.output_dir << "\n";
    return batch_status(outcomes, err);
}

// ---- featurize -----------------------------------------------------------

struct FeaturizeArgs {
    std::vector<std::string> inputs;
    std::string output;
    bool from_raw = false;
    std::size_t jobs = default_jobs();
    PipelineFlags flags;
};

int cmd_featurize(const FeaturizeArgs& a, std::ostream& out, std::ostream& err) {
    const auto config = a.flags.resolve();
    const auto files = collect_recordings(a.inputs);
    if (files.empty()) err << "warning: no recordings found\n";

    using Rows = std::pair<FileOutcome, std::vector<features::StackedFeature>>;
    auto results = parallel_map(files, a.jobs, [&](const fs::path& in) {
        Rows r{{in.string(), {}, {}, 0}, {}};
        try {
            auto trace = io::read_recording(in);
            config.validate(trace.fs);
            if (a.from_raw) trace = pipeline::preprocess(trace, config);
            r.second = pipeline::featurize(trace, config);
            r.first.rows = r.second.size();
        } catch (const std::exception& e) {
            r.first.error = e.what();
        }
        return r;
    });

    std::vector<features::StackedFeature> rows;
    std::vector<FileOutcome> outcomes;
    for (auto& [o, r] : results) {
        outcomes.push_back(o);
        rows.insert(rows.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    io::write_feature_csv(rows, a.output);
    auto schema = json::parse(io::feature_schema_json(config.window_s, config.hop_s));
    schema["config"] = pipeline_config_json(config);
    schema["files"] = outcomes_json(outcomes);
    schema["rows"] = rows.size();
    io::write_text(fs::path(a.output).replace_extension(".schema.json"), schema.dump(2) + "\n");
    out << "wrote " << rows.size() << " stacked rows from " << files.size() << " recordings to " << a.output << "\n";
    return batch_status(outcomes, err);
}

// ---- analyze -------------------------------------------------------------

struct AnalyzeArgs {
    std::vector<std::string> inputs;
    std::optional<std::string> output;
    std::optional<std::string> csv;
    std::optional<std::size_t> max_lag;
    bool no_autolag = false;
    std::size_t decimate = 1;
};

int cmd_adf(const AnalyzeArgs& a, std::ostream& out) {
    const auto seq = io::read_sequence_csv(a.inputs.at(0));
    auto j = report_json(stats::adf_test(seq, a.max_lag, !a.no_autolag));
    j["input"] = a.inputs.at(0);
    j["config"] = {{"max_lag", a.max_lag ? json(*a.max_lag) : json(nullptr)}, {"autolag", !a.no_autolag}};
    emit(j, a.output, out);
    return kOk;
}

int cmd_rm_anova(const AnalyzeArgs& a, std::ostream& out) {
    const auto m = io::read_matrix_csv(a.inputs.at(0));
    auto j = report_json(stats::rm_anova_gg(m));
    j["input"] = a.inputs.at(0);
    j["subjects"] = m.rows();
    j["conditions"] = m.cols();
    emit(j, a.output, out);
    return kOk;
}

int cmd_pearson(const AnalyzeArgs& a, std::ostream& out) {
    const auto m = io::read_matrix_csv(a.inputs.at(0));
    if (m.cols() != 2) throw InvalidParameter("pearson expects exactly two columns");
    const Eigen::VectorXd x = m.col(0), y = m.col(1);
    auto j = report_json(stats::pearson_test({x.data(), static_cast<std::size_t>(x.size())},
                                             {y.data(), static_cast<std::size_t>(y.size())}));
    j["input"] = a.inputs.at(0);
    emit(j, a.output, out);
    return kOk;
}

int cmd_survey(const AnalyzeArgs& a, std::ostream& out) {
    const auto m = io::read_matrix_csv(a.inputs.at(0));
    if (m.cols() != 3) throw InvalidParameter("survey expects columns score,efficiency,convenience");
    std::vector<std::vector<double>> cols(3);
    for (Eigen::Index c = 0; c < 3; ++c) cols[c].assign(m.col(c).data(), m.col(c).data() + m.rows());
    const char* names[] = {"score", "efficiency", "convenience"};
    json j{{"input", a.inputs.at(0)}, {"n", m.rows()}};
    std::ostringstream csv;
    csv << "measure,mean,sample_std\n";
    for (int c = 0; c < 3; ++c) {
        const auto s = stats::summary_stats(cols[c]);
        j[names[c]] = {{"mean", s.mean}, {"sample_std", s.sample_std}};
        csv << names[c] << "," << io::format_double(s.mean) << "," << io::format_double(s.sample_std) << "\n";
    }
    j["score_vs_efficiency"] = report_json(stats::pearson_test(cols[0], cols[1]));
    j["score_vs_convenience"] = report_json(stats::pearson_test(cols[0], cols[2]));
    emit(j, a.output, out);
    if (a.csv) io::write_text(*a.csv, csv.str());
    return kOk;
}

int cmd_stationarity(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
    if (a.decimate == 0) throw InvalidParameter("decimation factor must be positive");
    const auto files = collect_recordings(a.inputs);
    if (files.empty()) err << "warning: no recordings found\n";
    json results = json::array();
    std::ostringstream csv;
    csv << "recording,sequence,statistic,p_value,lags,nobs,stationary_5pct\n";
    std::vector<FileOutcome> outcomes;
    for (const auto& f : files) {
        FileOutcome o{f.string(), {}, {}, 0};
        try {
            const auto env = stats::envelope_sequences(io::read_recording(f));
            json entry{{"recording", f.string()}};
            for (const auto& [name, seq] : {std::pair{"avg_seq", env.avg_seq}, std::pair{"std_seq", env.std_seq}}) {
                const auto s = a.decimate > 1 ? stats::decimate_by_mean(seq, a.decimate) : seq;
                const auto r = stats::adf_test(s, a.max_lag, !a.no_autolag);
                entry[name] = report_json(r);
                csv << f.filename().string() << "," << name << "," << io::format_double(r.statistic) << ","
                    << io::format_double(r.p_value) << "," << r.detail.at("lags") << "," << r.detail.at("nobs") << ","
                    << (r.p_value < 0.05 ? "true" : "false") << "\n";
            }
            results.push_back(std::move(entry));
        } catch (const std::exception& e) {
            o.error = e.what();
        }
        outcomes.push_back(o);
    }
    json j{{"test", "stationarity"},
           {"config", {{"decimate", a.decimate}, {"autolag", !a.no_autolag}}},
           {"recordings", results},
           {"files", outcomes_json(outcomes)}};
    emit(j, a.output, out);
    if (a.csv) io::write_text(*a.csv, csv.str());
    return batch_status(outcomes, err);
}

// ---- train / loso --------------------------------------------------------

struct LearnArgs {
    std::string input;
    std::string model = "rf";
    std::optional<std::string> output;
    std::optional<std::string> confusion;
    std::uint64_t seed = 0;
    bool no_rfecv = false;
    std::size_t rfecv_folds = 10;
    std::size_t inner_folds = 5;
};

learn::ModelKind parse_model(const std::string& name) {
    if (name == "rf") return learn::ModelKind::random_forest;
    if (name == "dt") return learn::ModelKind::decision_tree;
    if (name == "lda") return learn::ModelKind::lda_shrinkage;
    return learn::model_kind_from_string(name);
}

learn::TrainOptions train_options(const LearnArgs& a) {
    learn::TrainOptions o;
    o.seed = a.seed;
    o.rfecv_folds = a.rfecv_folds;
    o.inner_folds = a.inner_folds;
    o.select_features = !a.no_rfecv;
    return o;
}

json learn_config(const LearnArgs& a) {
    return {{"input", a.input},
            {"model", std::string(learn::to_string(parse_model(a.model)))},
            {"seed", a.seed},
            {"rfecv", !a.no_rfecv},
            {"rfecv_folds", a.rfecv_folds},
            {"inner_folds", a.inner_folds}};
}

int cmd_train(const LearnArgs& a, std::ostream& out) {
    const auto kind = parse_model(a.model);
    const auto data = io::read_feature_csv(a.input);
    const auto model = learn::train_model(kind, data, train_options(a));
    auto j = json::parse(learn::model_to_json(model));
    j["config"] = learn_config(a);
    const std::string path = a.output.value_or("model.json");
    io::write_text(path, j.dump() + "\n");
    out << "trained " << learn::to_string(kind) << " on " << data.rows() << " rows, " << model.selected_count()
        << " features kept -> " << path << "\n";
    return kOk;
}

int cmd_loso(const LearnArgs& a, std::ostream& out) {
    const auto kind = parse_model(a.model);
    const auto data = io::read_feature_csv(a.input);
    const auto report = learn::loso_evaluate(kind, data, train_options(a));
    auto j = json::parse(learn::eval_report_to_json(report));
    j["config"] = learn_config(a);
    if (a.output) {
        io::write_text(*a.output, j.dump(2) + "\n");
    }
    if (a.confusion) {
        const auto& names = learn::activity_names();
        io::write_text(*a.confusion, matrix_csv(report.confusion, {names.begin(), names.end()}));
    }
    out << "LOSO " << learn::to_string(kind) << ": " << report.folds.size() << " folds, mean accuracy "
        << report.mean_accuracy << " (std " << report.accuracy_std << ")\n";
    for (const auto& f : report.folds) out << "  " << f.test_session << ": " << f.metrics.accuracy << "\n";
    if (!a.output) out << j.dump(2) << "\n";
    return kOk;
}

// ---- cluster -------------------------------------------------------------

struct ClusterArgs {
    std::string input;
    std::string output_dir = "cluster_out";
    std::string method = "tsne";
    std::string algo = "kmeans";
    std::string k_range = "2:10";
    std::size_t stride = 1;
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    std::uint64_t seed = 0;
};

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw InvalidParameter("k range must look like 2:10");
    try {
        const auto lo = std::stoul(s.substr(0, colon));
        const auto hi = std::stoul(s.substr(colon + 1));
        if (lo < 2 || hi < lo) throw InvalidParameter("k range needs 2 <= kmin <= kmax");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw InvalidParameter("k range must look like 2:10");
    }
}

int cmd_cluster(const ClusterArgs& a, std::ostream& out) {
    const auto [k_min, k_max] = parse_range(a.k_range);
    if (a.stride == 0) throw InvalidParameter("stride must be positive");
    const auto algo = cluster::algorithm_from_string(a.algo);
    const auto data = io::read_feature_csv(a.input);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.rows(); i += a.stride) rows.push_back(i);
    const auto sub = data.subset(rows);
    if (sub.rows() <= k_max) throw InvalidParameter("fewer rows than the largest k");

    const Eigen::MatrixXd z = features::fit_normalization(sub.X).apply(sub.X);
    cluster::Embedding emb;
    if (a.method == "pca") {
        emb = cluster::pca_reduce(z, 2);
    } else if (a.method == "tsvd") {
        emb = cluster::tsvd_reduce(z, 2);
    } else if (a.method == "tsne") {
        cluster::TsneParams p;
        p.perplexity = a.perplexity;
        p.iterations = a.iterations;
        p.seed = a.seed;
        emb = cluster::tsne_reduce(z, p);
    } else {
        throw InvalidParameter("method must be pca, tsvd or tsne");
    }
    const auto sweep = cluster::asw_sweep(emb.points, algo, k_min, k_max, a.seed);
    const auto best = algo == cluster::Algorithm::kmeans ? cluster::kmeans(emb.points, sweep.best_k, a.seed)
                                                         : cluster::fuzzy_cmeans(emb.points, sweep.best_k, a.seed);
    const auto ext = cluster::external_metrics(sub.y, best.labels);
    const auto sil = cluster::silhouette(emb.points, best.labels);

    fs::create_directories(a.output_dir);
    io::write_text(fs::path(a.output_dir) / "embedding.csv", matrix_csv(emb.points, {"dim1", "dim2"}));
    std::ostringstream assign;
    assign << "row,label,session,cluster\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        assign << rows[i] << "," << learn::activity_name(sub.y[i]) << "," << sub.session[i] << "," << best.labels[i]
               << "\n";
    }
    io::write_text(fs::path(a.output_dir) / "assignments.csv", assign.str());

    json j{{"method", a.method},
           {"algorithm", std::string(cluster::to_string(algo))},
           {"ks", sweep.ks},
           {"asw", sweep.asw},
           {"mean_silhouette", sweep.mean_silhouette},
           {"best_k", sweep.best_k},
           {"silhouette", sil.mean},
           {"asw_best", sil.asw},
           {"homogeneity", ext.homogeneity},
           {"completeness", ext.completeness},
           {"v_measure", ext.v_measure},
           {"rows", rows.size()},
           {"config",
            {{"input", a.input},
             {"k_range", a.k_range},
             {"stride", a.stride},
             {"perplexity", a.perplexity},
             {"iterations", a.iterations},
             {"seed", a.seed}}}};
    if (emb.explained_variance.size() > 0) {
        j["explained_variance"] = std::vector<double>(emb.explained_variance.data(),
                                                      emb.explained_variance.data() + emb.explained_variance.size());
    }
    io::write_text(fs::path(a.output_dir) / "metrics.json", j.dump(2) + "\n");
    out << a.method << "/" << cluster::to_string(algo) << ": best k = " << sweep.best_k << " (ASW "
        << sweep.asw[sweep.best_k - k_min] << "), v-measure " << ext.v_measure << "\n";
    return kOk;
}

// ---- serve ---------------------------------------------------------------

struct ServeArgs {
    std::string model;
    std::string source = "synthetic";
    std::string host = "127.0.0.1";
    unsigned short port = 8765;
    std::optional<double> threshold;
    double speed = 1.0;
    std::size_t wait_clients = 0;
    bool loop = false;
    double duration = 0.0;
    std::size_t workers = 1;
    std::size_t queue_limit = 256;
    std::optional<std::string> port_file;
    PipelineFlags flags;
};

int cmd_serve(const ServeArgs& a, std::ostream& out) {
    auto pipeline_config = a.flags.resolve();
    realtime::ServerConfig sc;
    sc.host = a.host;
    sc.port = a.port;
    sc.speed = a.speed;
    sc.wait_for_clients = a.wait_clients;
    sc.loop = a.loop;
    sc.queue_limit = a.queue_limit;
    sc.hard_limit = std::max(sc.hard_limit, a.queue_limit * 4);
    sc.seed = pipeline_config.seed;
    sc.engine.workers = a.workers;
    sc.engine.predictor.pipeline = pipeline_config;
    sc.engine.predictor.peak_threshold = a.threshold.value_or(pipeline_config.blink_threshold);
    sc.engine.task.seed = pipeline_config.seed;
    if (!(a.speed > 0.0)) throw InvalidParameter("speed must be positive");
    if (!fs::exists(a.model)) throw InvalidParameter("model file not found: " + a.model);

    auto model = learn::model_from_json(io::read_text(a.model));
    auto classifier = std::make_shared<realtime::ModelClassifier>(std::move(model), pipeline_config);
    realtime::Server server(sc, classifier, a.source,
                            realtime::default_source_factory(pipeline_config.hop_s, pipeline_config.seed));
    const auto port = server.start();
    if (a.port_file) io::write_text(*a.port_file, std::to_string(port) + "\n");
    out << "serving " << a.source << " on ws://" << a.host << ":" << port << "\n";
    out << "config " << pipeline_config_json(pipeline_config).dump() << "\n" << std::flush;

    g_interrupted = false;
    auto previous_int = std::signal(SIGINT, on_signal);
    auto previous_term = std::signal(SIGTERM, on_signal);
    const auto start = std::chrono::steady_clock::now();
    while (!g_interrupted && !server.finished()) {
        if (a.duration > 0.0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >= a.duration) {
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    if (server.finished()) (void)server.wait_idle(std::chrono::seconds(5));
    server.stop();
    std::signal(SIGINT, previous_int);
    std::signal(SIGTERM, previous_term);
    out << "sent " << server.predictions_sent() << " predictions\n";
    return kOk;
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
    std::string output_dir = "sim";
    std::size_t sessions = 6;
    double duration = 40.0;
    std::string format = "csv";
    bool clean = false;
    std::optional<std::string> features;
    PipelineFlags flags;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    const auto config = a.flags.resolve();
    pipeline::SimulateConfig sim;
    if (a.flags.seed) {
        sim.seed = *a.flags.seed;
    } else if (a.flags.config_file && load_config_file(*a.flags.config_file).contains("seed")) {
        sim.seed = config.seed;
    }
    sim.sessions = a.sessions;
    sim.duration_s = a.duration;
    if (a.clean) {
        sim.synth.burst_rate = 0.0;
        sim.synth.involuntary_blink_rate = 0.0;
    }
    if (sim.sessions == 0 || !(sim.duration_s > 0.0)) throw InvalidParameter("sessions and duration must be positive");
    config.validate(sim.synth.fs);

    const auto traces = pipeline::simulate_dataset(sim);
    fs::create_directories(a.output_dir);
    json files = json::array();
    for (const auto& t : traces) {
        const auto name = t.meta.at("recording") + (a.format == "csv" ? ".csv" : ".f32");
        write_trace(t, fs::path(a.output_dir) / name);
        files.push_back(name);
    }
    json manifest{{"command", "simulate"},
                  {"config",
                   {{"seed", sim.seed},
                    {"sessions", a.sessions},
                    {"duration_s", a.duration},
                    {"format", a.format},
                    {"contamination", !a.clean},
                    {"fs", sim.synth.fs}}},
                  {"recordings", files}};
    if (a.features) {
        std::vector<features::StackedFeature> rows;
        for (const auto& t : traces) {
            auto r = pipeline::featurize(pipeline::preprocess(t, config), config);
            rows.insert(rows.end(), r.begin(), r.end());
        }
        io::write_feature_csv(rows, *a.features);
        manifest["features"] = {{"path", *a.features}, {"rows", rows.size()}, {"pipeline", pipeline_config_json(config)}};
    }
    io::write_text(fs::path(a.output_dir) / "simulate.json", manifest.dump(2) + "\n");
    out << "simulated " << traces.size() << " recordings into " << a.output_dir << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"EOG activity recognition toolkit", "eoghmi"};
    app.require_subcommand(0, 1);
    bool version = false;
    app.add_flag("--version", version, "Print tool, feature-schema and protocol versions");

    PreprocessArgs pre;
    auto* c_pre = app.add_subcommand("preprocess", "Notch, high-pass, robust z, HPSS and blink correction");
    c_pre->add_option("inputs", pre.inputs, "Recordings or directories")->required();
    c_pre->add_option("-o,--output", pre.output_dir, "Output directory")->required();
    c_pre->add_flag("--dump-stages", pre.dump_stages, "Also write every intermediate stage");
    c_pre->add_option("-j,--jobs", pre.jobs, "Parallel files")->check(CLI::PositiveNumber);
    pre.flags.add_to(c_pre, true);

    FeaturizeArgs feat;
    auto* c_feat = app.add_subcommand("featurize", "Window, extract and stack features into a CSV");
    c_feat->add_option("inputs", feat.inputs, "Processed recordings or directories")->required();
    c_feat->add_option("-o,--output", feat.output, "Feature CSV")->required();
    c_feat->add_flag("--from-raw", feat.from_raw, "Preprocess the inputs first");
    c_feat->add_option("-j,--jobs", feat.jobs, "Parallel files")->check(CLI::PositiveNumber);
    feat.flags.add_to(c_feat, true);

    AnalyzeArgs an;
    auto* c_an = app.add_subcommand("analyze", "Statistical tests");
    c_an->require_subcommand(1);
    auto add_common = [&an](CLI::App* c) {
        c->add_option("-i,--input", an.inputs, "Input file(s)")->required();
        c->add_option("-o,--output", an.output, "JSON report (stdout when omitted)");
    };
    auto* c_adf = c_an->add_subcommand("adf", "Augmented Dickey-Fuller test on a sequence CSV");
    add_common(c_adf);
    c_adf->add_option("--max-lag", an.max_lag, "Maximum lag");
    c_adf->add_flag("--no-autolag", an.no_autolag, "Use max-lag directly");
    auto* c_rm = c_an->add_subcommand("rm-anova", "Repeated-measures ANOVA on a subjects x conditions CSV");
    add_common(c_rm);
    auto* c_pe = c_an->add_subcommand("pearson", "Pearson correlation of a two-column CSV");
    add_common(c_pe);
    auto* c_sv = c_an->add_subcommand("survey", "Survey summary from score,efficiency,convenience rows");
    add_common(c_sv);
    c_sv->add_option("--csv", an.csv, "Summary CSV");
    auto* c_st = c_an->add_subcommand("stationarity", "ADF on envelope sequences of recordings");
    add_common(c_st);
    c_st->add_option("--csv", an.csv, "Summary CSV");
    c_st->add_option("--decimate", an.decimate, "Block-mean factor before testing");
    c_st->add_option("--max-lag", an.max_lag, "Maximum lag");
    c_st->add_flag("--no-autolag", an.no_autolag, "Use max-lag directly");

    LearnArgs tr;
    auto* c_tr = app.add_subcommand("train", "Fit a model on a feature CSV");
    LearnArgs lo;
    auto* c_lo = app.add_subcommand("loso", "Leave-one-session-out evaluation");
    for (auto [c, l] : {std::pair{c_tr, &tr}, std::pair{c_lo, &lo}}) {
        c->add_option("-i,--input", l->input, "Feature CSV")->required();
        c->add_option("-m,--model", l->model, "knn, lda, dt or rf")
            ->check(CLI::IsMember({"knn", "lda", "dt", "rf", "lda_shrinkage", "decision_tree", "random_forest"}));
        c->add_option("-o,--output", l->output, "Output JSON");
        c->add_option("--seed", l->seed, "Random seed");
        c->add_flag("--no-rfecv", l->no_rfecv, "Keep every feature");
        c->add_option("--rfecv-folds", l->rfecv_folds, "RFECV folds")->check(CLI::Range(2, 100));
        c->add_option("--inner-folds", l->inner_folds, "Grid-search folds")->check(CLI::Range(2, 100));
    }
    c_lo->add_option("--confusion", lo.confusion, "Row-normalised confusion CSV");

    ClusterArgs cl;
    auto* c_cl = app.add_subcommand("cluster", "Embedding plus ASW sweep over k");
    c_cl->add_option("-i,--input", cl.input, "Feature CSV")->required();
    c_cl->add_option("-o,--output-dir", cl.output_dir, "Output directory");
    c_cl->add_option("--method", cl.method, "Embedding")->check(CLI::IsMember({"pca", "tsvd", "tsne"}));
    c_cl->add_option("--algo", cl.algo, "Clustering")->check(CLI::IsMember({"kmeans", "fcm"}));
    c_cl->add_option("--k-range", cl.k_range, "kmin:kmax");
    c_cl->add_option("--stride", cl.stride, "Use every n-th row");
    c_cl->add_option("--perplexity", cl.perplexity, "t-SNE perplexity");
    c_cl->add_option("--iterations", cl.iterations, "t-SNE iterations");
    c_cl->add_option("--seed", cl.seed, "Random seed");

    ServeArgs sv;
    auto* c_sv2 = app.add_subcommand("serve", "Realtime WebSocket service");
    c_sv2->add_option("--model", sv.model, "Trained model JSON")->required();
    c_sv2->add_option("--source", sv.source, "synthetic or replay:<file.csv>");
    c_sv2->add_option("--host", sv.host, "Bind address");
    c_sv2->add_option("--port", sv.port, "Port (0 picks a free one)");
    c_sv2->add_option("--threshold", sv.threshold, "Peak threshold (robust z)");
    c_sv2->add_option("--speed", sv.speed, "Replay speed multiplier");
    c_sv2->add_option("--wait-clients", sv.wait_clients, "Hold the stream until this many clients joined");
    c_sv2->add_flag("--loop", sv.loop, "Restart a finished replay");
    c_sv2->add_option("--duration", sv.duration, "Stop after this many seconds (0 = run until done)");
    c_sv2->add_option("--workers", sv.workers, "Inference threads");
    c_sv2->add_option("--queue-limit", sv.queue_limit, "Per-client queue length")->check(CLI::PositiveNumber);
    c_sv2->add_option("--port-file", sv.port_file, "Write the bound port here");
    sv.flags.add_to(c_sv2, true);

    SimulateArgs si;
    auto* c_si = app.add_subcommand("simulate", "Synthetic 6-activity benchmark recordings");
    c_si->add_option("-o,--output-dir", si.output_dir, "Output directory");
    c_si->add_option("--sessions", si.sessions, "Sessions");
    c_si->add_option("--duration", si.duration, "Seconds per recording");
    c_si->add_option("--format", si.format, "csv or raw")->check(CLI::IsMember({"csv", "raw"}));
    c_si->add_flag("--clean", si.clean, "Disable bursts and involuntary blinks");
    c_si->add_option("--features", si.features, "Also write the featurized dataset here");
    si.flags.add_to(c_si, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }

    if (version) {
        out << "eoghmi " << kToolVersion << "\nfeature schema " << features::kSchemaVersion << "\nprotocol "
            << realtime::kProtocolVersion << "\nmodel format " << learn::kModelVersion << "\n";
        return kOk;
    }

    try {
        if (*c_pre) return cmd_preprocess(pre, out, err);
        if (*c_feat) return cmd_featurize(feat, out, err);
        if (*c_adf) return cmd_adf(an, out);
        if (*c_rm) return cmd_rm_anova(an, out);
        if (*c_pe) return cmd_pearson(an, out);
        if (*c_sv) return cmd_survey(an, out);
        if (*c_st) return cmd_stationarity(an, out, err);
        if (*c_tr) return cmd_train(tr, out);
        if (*c_lo) return cmd_loso(lo, out);
        if (*c_cl) return cmd_cluster(cl, out);
        if (*c_sv2) return cmd_serve(sv, out);
        if (*c_si) return cmd_simulate(si, out);
        err << app.help();
        return kUsageError;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

}  // namespace eog::cli
