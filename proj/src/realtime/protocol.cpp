#include <nlohmann/json.hpp>

#include "eog/error.hpp"
#include "eog/realtime.hpp"

namespace eog::realtime {

using nlohmann::json;

std::string hello_message(double fs, double window_s, double hop_s, const std::string& source) {
    json j{{"type", "hello"},
           {"version", kProtocolVersion},
           {"fs", fs},
           {"window_s", window_s},
           {"hop_s", hop_s},
           {"source", source},
           {"feature_schema", features::kSchemaVersion}};
    j["activities"] = learn::activity_names();
    return j.dump();
}

std::string prediction_message(const ActivityPrediction& p, Command command) {
    json j{{"type", "prediction"},
           {"seq", p.seq},
           {"t", p.window_end_t},
           {"activity", learn::activity_name(p.activity)},
           {"voluntary_blink", p.voluntary_blink},
           {"peak", p.peak_detected},
           {"scores", p.scores},
           {"latency_ms", p.latency_ms},
           {"command", std::string(to_string(command))}};
    return j.dump();
}

std::string task_message(const TaskState& s) {
    json j{{"type", "task"},
           {"target", std::string(to_string(s.target))},
           {"cursor", {s.x, s.y}},
           {"score", s.score},
           {"t", s.clock}};
    return j.dump();
}

std::string gap_message(std::uint64_t seq) { return json{{"type", "gap"}, {"seq", seq}}.dump(); }

std::string error_message(const std::string& what) { return json{{"type", "error"}, {"message", what}}.dump(); }

std::string ack_message(const std::string& action, const std::string& value) {
    return json{{"type", "ack"}, {"action", action}, {"value", value}}.dump();
}

namespace {

std::string normalise_activity(std::string v) {
    for (char& c : v) {
        if (c == '-' || c == ' ') c = '_';
    }
    return v;
}

}  // namespace

ControlMessage parse_control(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception&) {
        throw FormatError("message is not valid JSON");
    }
    if (!j.is_object()) throw FormatError("message must be a JSON object");
    if (!j.contains("type") || !j["type"].is_string()) throw FormatError("message needs a string 'type'");
    if (j["type"] != "control") throw FormatError("unsupported message type '" + j["type"].get<std::string>() + "'");
    if (!j.contains("action") || !j["action"].is_string()) throw FormatError("control message needs a string 'action'");
    const auto action = j["action"].get<std::string>();

    ControlMessage m;
    std::string value;
    if (j.contains("value")) {
        const auto& v = j["value"];
        if (v.is_string()) {
            value = v.get<std::string>();
        } else if (v.is_number()) {
            value = v.dump();
        } else if (!v.is_null()) {
            throw FormatError("control value must be a string or a number");
        }
    }
    if (action == "set_activity") {
        m.action = ControlMessage::Action::set_activity;
        value = normalise_activity(value);
        try {
            (void)learn::activity_index(value);
        } catch (const InvalidParameter&) {
            throw FormatError("unknown activity '" + value + "'");
        }
    } else if (action == "set_source") {
        m.action = ControlMessage::Action::set_source;
        if (value != "synthetic" && value.rfind("replay:", 0) != 0) {
            throw FormatError("source must be 'synthetic' or 'replay:<file>'");
        }
    } else if (action == "reset") {
        m.action = ControlMessage::Action::reset;
    } else if (action == "set_speed") {
        m.action = ControlMessage::Action::set_speed;
        double speed = 0.0;
        try {
            speed = std::stod(value);
        } catch (const std::exception&) {
            throw FormatError("speed must be a number");
        }
        if (!(speed > 0.0)) throw FormatError("speed must be positive");
    } else {
        throw FormatError("unknown control action '" + action + "'");
    }
    m.value = value;
    return m;
}

}  // namespace eog::realtime
