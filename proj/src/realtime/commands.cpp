#include "eog/error.hpp"
#include "eog/realtime.hpp"

namespace eog::realtime {

std::string_view to_string(Command c) noexcept {
    switch (c) {
        case Command::none: return "none";
        case Command::move_left: return "move_left";
        case Command::move_right: return "move_right";
        case Command::move_up: return "move_up";
        case Command::move_down: return "move_down";
        case Command::click: return "click";
        case Command::double_click: return "double_click";
    }
    return "none";
}

Command command_from_string(std::string_view name) {
    for (Command c : {Command::none, Command::move_left, Command::move_right, Command::move_up, Command::move_down,
                      Command::click, Command::double_click}) {
        if (to_string(c) == name) return c;
    }
    throw InvalidParameter("unknown command: " + std::string(name));
}

Command activity_command(int activity) {
    switch (activity) {
        case 1: return Command::move_left;   // left_eye_closed
        case 2: return Command::move_right;  // right_eye_closed
        case 3: return Command::move_down;   // frowning
        case 4: return Command::move_up;     // eyebrows_up
        default: return Command::none;       // normal_glance, involuntary blink
    }
}

CommandMapper::CommandMapper(double double_click_s) : double_click_s_(double_click_s) {
    if (!(double_click_s > 0.0)) throw InvalidParameter("double-click interval must be positive");
}

void CommandMapper::reset() { armed_at_.reset(); }

Command CommandMapper::poll(double t) {
    if (armed_at_ && t - *armed_at_ > double_click_s_) {
        armed_at_.reset();
        return Command::click;
    }
    return Command::none;
}

Command CommandMapper::on_prediction(const ActivityPrediction& p) {
    const double t = p.window_end_t;
    if (p.voluntary_blink) {
        if (armed_at_ && t - *armed_at_ <= double_click_s_) {
            armed_at_.reset();
            return Command::double_click;
        }
        const Command due = armed_at_ ? Command::click : Command::none;
        armed_at_ = t;
        return due;
    }
    const Command due = poll(t);
    if (due != Command::none) return due;
    return activity_command(p.activity);
}

}  // namespace eog::realtime
