#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "eog/error.hpp"
#include "eog/learn.hpp"
#include "eog/pipeline.hpp"

namespace eog::pipeline {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::array<ActivitySignature, learn::kNumClasses> default_signatures() {
    return {{
        {3.0, 1.0, 10.3, 0.3, 0.0, 0.0},    // normal_glance
        {8.0, 1.0, 25.3, 0.45, 0.0, 0.0},   // left_eye_closed
        {12.0, 1.0, 37.3, 0.45, 0.0, 0.0},  // right_eye_closed
        {18.0, 1.0, 55.3, 0.5, 0.0, 0.0},   // frowning
        {5.0, 1.0, 70.3, 0.6, 0.0, 0.0},    // eyebrows_up
        {3.0, 0.5, 26.0, 0.4, 0.0, 0.0},    // blink, plus the spike train
    }};
}

SyntheticGenerator::SyntheticGenerator(SynthParams params, std::uint64_t seed, int session_index)
    : params_(params), rng_(learn::seeded_engine(seed, 0x5157u + static_cast<std::uint64_t>(session_index))),
      session_(session_index) {
    if (!(params_.fs > 0.0)) throw InvalidParameter("synthetic sampling rate must be positive");
    // Session-specific deviations of each signature.
    auto jitter = learn::seeded_engine(seed, 0x7a11u + static_cast<std::uint64_t>(session_index));
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    std::uniform_real_distribution<double> turn(0.0, kTwoPi);
    for (std::size_t a = 0; a < params_.signatures.size(); ++a) {
        freq_scale_.push_back(1.0 + params_.session_jitter * sym(jitter));
        phase_.push_back(turn(jitter));
        phase_.push_back(turn(jitter));
    }
    drift_phase_ = turn(jitter);
}

void SyntheticGenerator::set_activity(int activity) {
    if (activity < 0 || activity >= learn::kNumClasses) throw InvalidParameter("activity index out of range");
    if (activity == activity_) return;
    activity_ = activity;
    next_blink_ = t_;
}

void SyntheticGenerator::schedule_until(std::size_t i) {
    const double fs = params_.fs;
    auto exp_gap = [&](double rate) {
        return static_cast<std::size_t>(std::ceil(-std::log(1.0 - unit_(rng_)) / rate * fs));
    };
    const auto blink_len = static_cast<std::size_t>(std::lround(8.0 * params_.blink_width_ms / 1000.0 * fs));
    if (activity_ == learn::kBlinkLabel) {
        while (next_blink_ <= i) {
            const double h = params_.blink_height * (0.9 + 0.2 * unit_(rng_));
            events_.push_back({next_blink_, blink_len, h, false});
            next_blink_ += static_cast<std::size_t>(std::lround(params_.blink_period_s * (0.85 + 0.3 * unit_(rng_)) * fs));
        }
    } else if (params_.involuntary_blink_rate > 0.0) {
        if (next_involuntary_ == 0) next_involuntary_ = t_ + exp_gap(params_.involuntary_blink_rate);
        while (next_involuntary_ <= i) {
            const double h = params_.involuntary_blink_height * (0.85 + 0.3 * unit_(rng_));
            events_.push_back({next_involuntary_, blink_len, h, false});
            next_involuntary_ += exp_gap(params_.involuntary_blink_rate);
        }
    }
    if (params_.burst_rate > 0.0) {
        if (next_burst_ == 0) next_burst_ = t_ + exp_gap(params_.burst_rate);
        while (next_burst_ <= i) {
            const double ms = params_.burst_ms * (0.5 + unit_(rng_));
            const auto len = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(ms * fs / 1000.0)));
            events_.push_back({next_burst_, len, params_.burst_level * (0.5 + unit_(rng_)), true});
            next_burst_ += len + exp_gap(params_.burst_rate);
        }
    }
}

double SyntheticGenerator::sample_at(std::size_t i) {
    schedule_until(i);
    const double t = static_cast<double>(i) / params_.fs;
    const auto a = static_cast<std::size_t>(activity_);
    const ActivitySignature& s = params_.signatures[a];
    const double k = freq_scale_[a];
    const double envelope = 1.0 + s.am_depth * std::sin(kTwoPi * s.am_rate * t);
    double v = envelope * (s.a0 * std::sin(kTwoPi * s.f0 * k * t + phase_[2 * a]) +
                           s.a1 * std::sin(kTwoPi * s.f1 * k * t + phase_[2 * a + 1]));
    v += params_.noise * gauss_(rng_);
    v += params_.hum * std::sin(kTwoPi * 50.0 * t);
    v += params_.drift * (std::sin(kTwoPi * 0.05 * t + drift_phase_) + 0.5 * std::sin(kTwoPi * 0.13 * t));

    const double sigma = params_.blink_width_ms / 1000.0 * params_.fs;
    for (const Event& e : events_) {
        if (i < e.start || i >= e.start + e.length) continue;
        const double pos = static_cast<double>(i - e.start);
        if (e.burst) {
            const double ramp = std::min(1.0, std::min(pos + 1.0, static_cast<double>(e.length) - pos) / 5.0);
            v += ramp * e.height * (2.0 * unit_(rng_) - 1.0);
        } else {
            const double z = (pos - 0.5 * static_cast<double>(e.length)) / sigma;
            v += e.height * std::exp(-0.5 * z * z);
        }
    }
    std::erase_if(events_, [i](const Event& e) { return e.start + e.length <= i + 1; });
    return v * params_.scale;
}

std::vector<double> SyntheticGenerator::next(std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) v = sample_at(t_++);
    return out;
}

std::vector<SignalTrace> simulate_dataset(const SimulateConfig& config) {
    if (config.sessions == 0) throw InvalidParameter("simulation needs at least one session");
    if (!(config.duration_s > 0.0)) throw InvalidParameter("simulation duration must be positive");
    const auto n = static_cast<std::size_t>(std::lround(config.duration_s * config.synth.fs));
    std::vector<SignalTrace> out;
    for (std::size_t s = 0; s < config.sessions; ++s) {
        const std::string session = "s" + std::to_string(s + 1);
        for (int a = 0; a < learn::kNumClasses; ++a) {
            SyntheticGenerator gen(config.synth, learn::seeded_engine(config.seed, s)() + static_cast<std::uint64_t>(a),
                                   static_cast<int>(s));
            gen.set_activity(a);
            Meta meta{{"subject", session},
                      {"session", session},
                      {"activity", learn::activity_name(a)},
                      {"recording", session + "_" + learn::activity_name(a)},
                      {"source", "synthetic"},
                      {"seed", std::to_string(config.seed)}};
            out.emplace_back(gen.next(n), config.synth.fs, std::move(meta));
        }
    }
    return out;
}

}  // namespace eog::pipeline
