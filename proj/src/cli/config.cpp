#include <algorithm>
#include <fstream>

#include "eog/cli.hpp"
#include "eog/error.hpp"
#include "eog/io.hpp"

namespace eog::cli {

using nlohmann::json;

json pipeline_config_json(const pipeline::PipelineConfig& c) {
    return json{{"window_s", c.window_s},
                {"hop_s", c.hop_s},
                {"notch_hz", c.notch_hz},
                {"notch_q", c.notch_q},
                {"highpass_hz", c.highpass_hz},
                {"highpass_order", c.highpass_order},
                {"l_harm", c.hpss.l_harm},
                {"l_perc", c.hpss.l_perc},
                {"mask", c.hpss.mask == hpss::MaskKind::soft ? "soft" : "hard"},
                {"soft_power", c.hpss.soft_power},
                {"stft_window", c.stft.window_len},
                {"stft_hop", c.stft.hop},
                {"stft_window_kind", std::string(dsp::to_string(c.stft.window))},
                {"blink_threshold", c.blink_threshold},
                {"blink_min_distance_ms", c.blink_min_distance_ms},
                {"blink_bounds", c.blink_bounds == blink::BoundsMode::quartile ? "quartile" : "percentile"},
                {"skip_hpss", c.skip_hpss},
                {"skip_blink", c.skip_blink},
                {"seed", c.seed},
                {"feature_schema", features::kSchemaVersion}};
}

namespace {

template <typename T>
T value_of(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw InvalidParameter("config key '" + key + "' has the wrong type");
    }
}

std::size_t size_of(const json& j, const std::string& key) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        throw InvalidParameter("config key '" + key + "' must be a non-negative integer");
    }
    return j.get<std::size_t>();
}

}  // namespace

void apply_pipeline_json(const json& j, pipeline::PipelineConfig& c) {
    if (!j.is_object()) throw InvalidParameter("config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "window_s") c.window_s = value_of<double>(v, key);
        else if (key == "hop_s") c.hop_s = value_of<double>(v, key);
        else if (key == "notch_hz") c.notch_hz = value_of<double>(v, key);
        else if (key == "notch_q") c.notch_q = value_of<double>(v, key);
        else if (key == "highpass_hz") c.highpass_hz = value_of<double>(v, key);
        else if (key == "highpass_order") c.highpass_order = static_cast<int>(size_of(v, key));
        else if (key == "l_harm") c.hpss.l_harm = size_of(v, key);
        else if (key == "l_perc") c.hpss.l_perc = size_of(v, key);
        else if (key == "mask") {
            const auto m = value_of<std::string>(v, key);
            if (m == "soft") c.hpss.mask = hpss::MaskKind::soft;
            else if (m == "hard") c.hpss.mask = hpss::MaskKind::hard;
            else throw InvalidParameter("mask must be 'hard' or 'soft'");
        } else if (key == "soft_power") c.hpss.soft_power = value_of<double>(v, key);
        else if (key == "stft_window") c.stft.window_len = size_of(v, key);
        else if (key == "stft_hop") c.stft.hop = size_of(v, key);
        else if (key == "stft_window_kind") c.stft.window = dsp::window_kind_from_string(value_of<std::string>(v, key));
        else if (key == "blink_threshold") c.blink_threshold = value_of<double>(v, key);
        else if (key == "blink_min_distance_ms") c.blink_min_distance_ms = value_of<double>(v, key);
        else if (key == "blink_bounds") {
            const auto b = value_of<std::string>(v, key);
            if (b == "quartile") c.blink_bounds = blink::BoundsMode::quartile;
            else if (b == "percentile") c.blink_bounds = blink::BoundsMode::percentile;
            else throw InvalidParameter("blink_bounds must be 'quartile' or 'percentile'");
        } else if (key == "skip_hpss") c.skip_hpss = value_of<bool>(v, key);
        else if (key == "skip_blink") c.skip_blink = value_of<bool>(v, key);
        else if (key == "seed") c.seed = value_of<std::uint64_t>(v, key);
        else if (key == "feature_schema") {
            if (value_of<std::string>(v, key) != features::kSchemaVersion) {
                throw InvalidParameter("config was written for feature schema '" + v.get<std::string>() + "'");
            }
        } else {
            throw InvalidParameter("unknown config key '" + key + "'");
        }
    }
}

json load_config_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw InvalidParameter("config file not found: " + path.string());
    try {
        return json::parse(io::read_text(path));
    } catch (const json::exception&) {
        throw InvalidParameter("config file is not valid JSON: " + path.string());
    }
}

std::vector<std::filesystem::path> collect_recordings(const std::vector<std::string>& inputs) {
    namespace fs = std::filesystem;
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p)) {
                if (!entry.is_regular_file()) continue;
                const auto ext = entry.path().extension();
                if (ext == ".json" || entry.path().filename().string().front() == '.') continue;
                out.push_back(entry.path());
            }
        } else if (fs::exists(p)) {
            out.push_back(p);
        } else {
            throw InvalidParameter("input not found: " + in);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace eog::cli
