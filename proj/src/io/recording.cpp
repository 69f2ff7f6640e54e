#include "eog/io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eog/error.hpp"

namespace eog::io {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    if (first == last) return false;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

double parse_or_throw(const std::string& text, const fs::path& path, std::size_t line) {
    double v = 0.0;
    if (!parse_double(text, v)) {
        throw FormatError(path.string() + ":" + std::to_string(line) + ": not a number: '" + text + "'");
    }
    return v;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw FormatError("cannot open " + path.string());
    return in;
}

json read_sidecar(const fs::path& path) {
    try {
        const json j = json::parse(read_text(path));
        if (!j.is_object()) throw FormatError(path.string() + ": sidecar must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": malformed sidecar: " + e.what());
    }
}

void apply_sidecar(const json& j, SignalTrace& trace) {
    for (const auto& [key, value] : j.items()) {
        if (key == "fs") continue;
        if (value.is_string()) {
            trace.meta[key] = value.get<std::string>();
        } else if (value.is_boolean()) {
            trace.meta[key] = value.get<bool>() ? "true" : "false";
        } else if (value.is_number()) {
            trace.meta[key] = value.dump();
        }
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

fs::path sidecar_path(const fs::path& data) {
    fs::path p = data;
    p.replace_extension(".json");
    return p;
}

std::string read_text(const fs::path& path) {
    auto in = open_in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out << text;
}

TimedSamples read_timed_csv(const fs::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
    const auto header = split(line, ',');
    if (header.size() != 2 || header[0] != "t_s" || header[1] != "amplitude") {
        throw FormatError(path.string() + ": expected header 't_s,amplitude'");
    }
    TimedSamples out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line, ',');
        if (cells.size() != 2) throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected 2 columns");
        out.t.push_back(parse_or_throw(cells[0], path, lineno));
        out.amplitude.push_back(parse_or_throw(cells[1], path, lineno));
    }
    if (out.t.empty()) throw FormatError(path.string() + ": no samples");
    return out;
}

SignalTrace read_recording(const fs::path& path) {
    const fs::path side = sidecar_path(path);
    const bool has_sidecar = fs::exists(side);
    SignalTrace trace;
    json meta = json::object();
    if (has_sidecar) meta = read_sidecar(side);

    if (path.extension() == ".csv") {
        auto rows = read_timed_csv(path);
        double fs = 0.0;
        if (meta.contains("fs")) {
            fs = meta["fs"].get<double>();
        } else if (rows.t.size() >= 2) {
            fs = std::round(1e6 / (rows.t[1] - rows.t[0])) / 1e6;
        } else {
            throw FormatError(path.string() + ": cannot infer the sampling rate from one sample");
        }
        if (!(fs > 0.0) || !std::isfinite(fs)) throw FormatError(path.string() + ": invalid sampling rate");
        for (std::size_t i = 1; i < rows.t.size(); ++i) {
            const double expected = rows.t[0] + static_cast<double>(i) / fs;
            if (std::abs(rows.t[i] - expected) > 0.25 / fs) {
                throw FormatError(path.string() + ": time column is not uniformly spaced at 1/fs (row " +
                                  std::to_string(i + 2) + ")");
            }
        }
        trace.samples = std::move(rows.amplitude);
        trace.fs = fs;
    } else {
        if (!has_sidecar || !meta.contains("fs")) {
            throw FormatError(path.string() + ": raw recordings need a sidecar with fs");
        }
        trace.fs = meta["fs"].get<double>();
        auto in = open_in(path, std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (bytes.size() % 4 != 0) throw FormatError(path.string() + ": size is not a multiple of 4 bytes");
        trace.samples.resize(bytes.size() / 4);
        for (std::size_t i = 0; i < trace.samples.size(); ++i) {
            const auto* b = reinterpret_cast<const unsigned char*>(bytes.data() + 4 * i);
            const std::uint32_t bits = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                                       (static_cast<std::uint32_t>(b[2]) << 16) |
                                       (static_cast<std::uint32_t>(b[3]) << 24);
            float f = 0.0F;
            std::memcpy(&f, &bits, sizeof f);
            trace.samples[i] = static_cast<double>(f);
        }
    }
    apply_sidecar(meta, trace);
    if (!trace.meta.count("recording")) trace.meta["recording"] = path.stem().string();
    try {
        trace.validate();
    } catch (const InvalidParameter& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return trace;
}

std::string sidecar_json(const SignalTrace& trace) {
    json j = json::object();
    j["fs"] = trace.fs;
    j["bit_depth"] = 16;
    for (const auto& [key, value] : trace.meta) {
        if (value == "true" || value == "false") {
            j[key] = value == "true";
        } else if (key == "bit_depth") {
            double v = 0.0;
            if (parse_double(value, v)) j[key] = static_cast<int>(v);
        } else {
            j[key] = value;
        }
    }
    return j.dump(2) + "\n";
}

void write_recording_csv(const SignalTrace& trace, const fs::path& path) {
    std::string text = "t_s,amplitude\n";
    text.reserve(trace.size() * 32);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        text += format_double(static_cast<double>(i) / trace.fs);
        text += ',';
        text += format_double(trace.samples[i]);
        text += '\n';
    }
    write_text(path, text);
    write_text(sidecar_path(path), sidecar_json(trace));
}

void write_recording_raw(const SignalTrace& trace, const fs::path& path) {
    std::string bytes(trace.size() * 4, '\0');
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto f = static_cast<float>(trace.samples[i]);
        std::uint32_t bits = 0;
        std::memcpy(&bits, &f, sizeof bits);
        for (int b = 0; b < 4; ++b) bytes[4 * i + static_cast<std::size_t>(b)] = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
    write_text(path, bytes);
    write_text(sidecar_path(path), sidecar_json(trace));
}

void write_feature_csv(const std::vector<features::StackedFeature>& rows, const fs::path& path) {
    std::string text;
    for (const auto& name : features::stacked_feature_names()) text += name + ",";
    text += "label,session\n";
    for (const auto& r : rows) {
        for (double v : r.flat) {
            text += format_double(v);
            text += ',';
        }
        text += r.label + "," + r.session + "\n";
    }
    write_text(path, text);
}

learn::LabeledDataset read_feature_csv(const fs::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
    auto header = split(line, ',');
    if (header.size() < 3 || header[header.size() - 2] != "label" || header.back() != "session") {
        throw FormatError(path.string() + ": header must end with 'label,session'");
    }
    learn::LabeledDataset data;
    data.feature_names.assign(header.begin(), header.end() - 2);
    const std::size_t d = data.feature_names.size();
    std::vector<double> values;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line, ',');
        if (cells.size() != d + 2) throw FormatError(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
        for (std::size_t j = 0; j < d; ++j) values.push_back(parse_or_throw(cells[j], path, lineno));
        try {
            data.y.push_back(learn::activity_index(cells[d]));
        } catch (const InvalidParameter& e) {
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        data.session.push_back(cells[d + 1]);
    }
    data.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        values.data(), static_cast<Eigen::Index>(data.y.size()), static_cast<Eigen::Index>(d));
    data.validate();
    return data;
}

std::string feature_schema_json(double window_s, double hop_s) {
    json j;
    j["version"] = features::kSchemaVersion;
    j["window_features"] = features::window_feature_names();
    j["stacked_features"] = features::stacked_feature_names();
    j["context_windows"] = features::kContextWindows;
    j["window_s"] = window_s;
    j["hop_s"] = hop_s;
    j["trailing_columns"] = {"label", "session"};
    return j.dump(2) + "\n";
}

std::vector<double> read_sequence_csv(const fs::path& path) {
    auto in = open_in(path);
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line, ',');
        double v = 0.0;
        if (!parse_double(cells.back(), v)) {
            if (lineno == 1) continue;
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": not a number");
        }
        out.push_back(v);
    }
    return out;
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line, ',');
        std::vector<double> row;
        bool numeric = true;
        for (const auto& c : cells) {
            double v = 0.0;
            numeric = numeric && parse_double(c, v);
            row.push_back(v);
        }
        if (!numeric) {
            if (lineno == 1) continue;
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": not numeric");
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": ragged row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError(path.string() + ": no data rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

}  // namespace eog::io
