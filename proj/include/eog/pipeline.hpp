#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eog/blink.hpp"
#include "eog/dsp/stft.hpp"
#include "eog/features.hpp"
#include "eog/hpss.hpp"
#include "eog/learn.hpp"
#include "eog/signal.hpp"

namespace eog::pipeline {

/// Settings shared by offline preprocessing, featurization and the realtime service.
struct PipelineConfig {
    double window_s = 1.0;
    double hop_s = 0.5;
    double notch_hz = 50.0;
    double notch_q = 30.0;
    double highpass_hz = 2.0;
    int highpass_order = 4;
    hpss::HpssParams hpss{};
    dsp::StftParams stft{};
    double blink_threshold = 4.0;
    double blink_min_distance_ms = 100.0;
    blink::BoundsMode blink_bounds = blink::BoundsMode::quartile;
    bool skip_hpss = false;
    bool skip_blink = false;
    std::uint64_t seed = 0;

    /// Throws InvalidParameter when any stage would reject these settings at rate fs.
    void validate(double fs) const;
    [[nodiscard]] blink::BlinkParams blink_params(double fs) const;
};

/// Intermediate traces of one preprocessing run.
struct StageOutputs {
    SignalTrace notched;
    SignalTrace highpassed;
    SignalTrace zscored;
    SignalTrace harmonic;
    SignalTrace corrected;
    std::vector<blink::ArtifactRegion> regions;
};

/**
 * @brief notch -> high-pass -> robust z-score -> HPSS -> blink correction.
 *
 * Skipped stages pass their input through. The result carries `stage_*` metadata flags
 * ("true"/"false") recording which stages ran.
 */
[[nodiscard]] SignalTrace preprocess(const SignalTrace& raw, const PipelineConfig& config,
                                     StageOutputs* stages = nullptr);

/// Notch, high-pass and robust z-score only.
[[nodiscard]] SignalTrace condition(const SignalTrace& raw, const PipelineConfig& config);

/// Per-window features of a processed trace labelled from its metadata.
[[nodiscard]] std::vector<features::LabeledWindow> window_features(const SignalTrace& processed,
                                                                   const PipelineConfig& config);

/// Windows -> 3-window context stacks; traces shorter than three windows give no rows.
[[nodiscard]] std::vector<features::StackedFeature> featurize(const SignalTrace& processed,
                                                              const PipelineConfig& config);

[[nodiscard]] learn::LabeledDataset to_dataset(const std::vector<features::StackedFeature>& rows);

// ---- synthetic benchmark -----------------------------------------------------

/// Tonal signature of one activity: fundamental and overtone with a slow amplitude profile.
struct ActivitySignature {
    double f0 = 0.0;
    double a0 = 0.0;
    double f1 = 0.0;
    double a1 = 0.0;
    double am_rate = 0.0;
    double am_depth = 0.0;
};

/// Default signatures indexed by activity label.
[[nodiscard]] std::array<ActivitySignature, learn::kNumClasses> default_signatures();

/**
 * @brief Generator knobs. Amplitudes are relative to the unit-amplitude fundamental of each
 * activity signature; the output is scaled to device units by `scale`.
 */
struct SynthParams {
    double fs = 500.0;
    double scale = 100.0;
    double noise = 0.15;
    double hum = 0.4;
    double drift = 1.5;
    double session_jitter = 0.02;
    double blink_height = 12.0;
    double blink_period_s = 0.4;
    double blink_width_ms = 20.0;          // Gaussian sigma of one blink
    double involuntary_blink_rate = 0.02;  // per second, non-blink activities
    double involuntary_blink_height = 7.0;
    double burst_rate = 0.4;               // percussive bursts per second
    double burst_level = 10.0;
    double burst_ms = 200.0;               // mean duration; level and duration vary per burst
    std::array<ActivitySignature, learn::kNumClasses> signatures = default_signatures();
};

/// Continuous signature generator; the activity can change between chunks.
class SyntheticGenerator {
public:
    SyntheticGenerator(SynthParams params, std::uint64_t seed, int session_index = 0);

    void set_activity(int activity);
    [[nodiscard]] int activity() const noexcept { return activity_; }
    [[nodiscard]] const SynthParams& params() const noexcept { return params_; }

    /// Next n samples in device units.
    [[nodiscard]] std::vector<double> next(std::size_t n);

private:
    struct Event {
        std::size_t start;
        std::size_t length;
        double height;
        bool burst;
    };

    double sample_at(std::size_t i);
    void schedule_until(std::size_t i);

    SynthParams params_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    int activity_ = 0;
    int session_ = 0;
    std::size_t t_ = 0;
    std::vector<double> freq_scale_;
    std::vector<double> phase_;
    double drift_phase_ = 0.0;
    std::size_t next_blink_ = 0;
    std::size_t next_involuntary_ = 0;
    std::size_t next_burst_ = 0;
    std::vector<Event> events_;
};

struct SimulateConfig {
    std::size_t sessions = 6;
    double duration_s = 40.0;
    std::uint64_t seed = 7;
    SynthParams synth{};
};

/// One recording per (session, activity), session-major; metadata names subject, session,
/// activity and recording.
[[nodiscard]] std::vector<SignalTrace> simulate_dataset(const SimulateConfig& config);

/// Featurized benchmark: every simulated recording preprocessed and stacked.
[[nodiscard]] learn::LabeledDataset benchmark_dataset(const SimulateConfig& sim, const PipelineConfig& config);

}  // namespace eog::pipeline
