#include <algorithm>
#include <cmath>

#include "eog/realtime.hpp"

namespace eog::realtime {

std::string_view to_string(Button b) noexcept {
    switch (b) {
        case Button::left: return "left";
        case Button::right: return "right";
        case Button::up: return "up";
        case Button::down: return "down";
    }
    return "left";
}

std::array<double, 2> button_position(Button b) {
    switch (b) {
        case Button::left: return {0.0, 0.5};
        case Button::right: return {1.0, 0.5};
        case Button::up: return {0.5, 0.0};
        case Button::down: return {0.5, 1.0};
    }
    return {0.0, 0.5};
}

TaskEngine::TaskEngine(TaskConfig config) : config_(config) { reset(); }

void TaskEngine::reset() {
    rng_ = learn::seeded_engine(config_.seed, 0x7a5c);
    state_ = TaskState{};
    state_.target = static_cast<Button>(std::uniform_int_distribution<int>(0, 3)(rng_));
}

const TaskState& TaskEngine::apply(Command c, double t) {
    state_.clock = t;
    switch (c) {
        case Command::none: break;
        case Command::move_left: state_.x = std::max(0.0, state_.x - config_.step); break;
        case Command::move_right: state_.x = std::min(1.0, state_.x + config_.step); break;
        case Command::move_up: state_.y = std::max(0.0, state_.y - config_.step); break;
        case Command::move_down: state_.y = std::min(1.0, state_.y + config_.step); break;
        case Command::click:
        case Command::double_click: {
            const auto pos = button_position(state_.target);
            if (std::hypot(state_.x - pos[0], state_.y - pos[1]) <= config_.hit_radius) {
                ++state_.score;
                int next = std::uniform_int_distribution<int>(0, 2)(rng_);
                if (next >= static_cast<int>(state_.target)) ++next;
                state_.target = static_cast<Button>(next);
            }
            break;
        }
    }
    return state_;
}

TaskState replay_commands(const TaskConfig& config, const std::vector<std::pair<double, Command>>& log) {
    TaskEngine engine(config);
    for (const auto& [t, c] : log) engine.apply(c, t);
    return engine.state();
}

}  // namespace eog::realtime
