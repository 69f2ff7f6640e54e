#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eog/learn.hpp"
#include "eog/pipeline.hpp"

namespace eog::realtime {

inline constexpr int kProtocolVersion = 1;

// ---- transport ---------------------------------------------------------------

/// One hop-sized chunk of samples from a source.
struct StreamFrame {
    std::uint64_t seq_no = 0;
    std::vector<double> samples;
    double t_start = 0.0;
};

/// Samples of consecutive frames ending at `last_seq`. Invalid when a missing frame falls inside.
struct StreamWindow {
    std::uint64_t first_seq = 0;
    std::uint64_t last_seq = 0;
    double t_end = 0.0;
    std::vector<double> samples;
    bool valid = true;
};

/**
 * @brief Reassembles frames into sliding windows, one window per frame.
 *
 * Frames may arrive out of order; up to `reorder_capacity` frames wait for a missing
 * predecessor before it is declared lost. A lost frame counts as a gap: it is zero-filled and
 * every window containing it is emitted with valid = false. Windows grow from `min_chunks` to
 * `window_chunks` frames while the stream warms up.
 */
class StreamingWindower {
public:
    StreamingWindower(std::size_t chunk, std::size_t window_chunks, std::size_t min_chunks = 0,
                      std::size_t reorder_capacity = 8, double fs = 500.0);

    /// Accept a frame; returns windows that became ready, in sequence order.
    std::vector<StreamWindow> push(StreamFrame frame);
    /// Declare every pending hole lost and drain the reorder buffer.
    std::vector<StreamWindow> flush();

    [[nodiscard]] std::size_t gaps() const noexcept { return gaps_; }
    /// Sequence numbers declared lost since the last call.
    std::vector<std::uint64_t> take_lost();

private:
    void consume(std::uint64_t seq, std::vector<double> samples, bool lost, std::vector<StreamWindow>& out);

    std::size_t chunk_;
    std::size_t window_chunks_;
    std::size_t min_chunks_;
    std::size_t reorder_capacity_;
    double fs_;
    std::uint64_t next_seq_ = 0;
    bool started_ = false;
    std::map<std::uint64_t, StreamFrame> pending_;
    struct Held {
        std::uint64_t seq;
        std::vector<double> samples;
        bool lost;
    };
    std::deque<Held> ring_;
    std::size_t gaps_ = 0;
    std::vector<std::uint64_t> lost_;
};

// ---- prediction ----------------------------------------------------------------

struct Classification {
    int label = 0;
    std::array<double, learn::kNumClasses> scores{};
};

/// Classifies a processed span (robust-z units) long enough for one 3-window stack.
class WindowClassifier {
public:
    virtual ~WindowClassifier() = default;
    [[nodiscard]] virtual Classification classify(std::span<const double> processed, double fs) const = 0;
};

/// Featurizes the span with the pipeline settings and asks a trained model.
class ModelClassifier final : public WindowClassifier {
public:
    ModelClassifier(learn::TrainedModel model, pipeline::PipelineConfig config);
    [[nodiscard]] Classification classify(std::span<const double> processed, double fs) const override;
    [[nodiscard]] const learn::TrainedModel& model() const noexcept { return model_; }

private:
    learn::TrainedModel model_;
    pipeline::PipelineConfig config_;
};

struct ActivityPrediction {
    std::uint64_t seq = 0;
    double window_end_t = 0.0;
    int activity = 0;
    bool voluntary_blink = false;
    bool peak_detected = false;
    std::array<double, learn::kNumClasses> scores{};
    double latency_ms = 0.0;
};

struct PredictorConfig {
    pipeline::PipelineConfig pipeline{};
    double peak_threshold = 4.0;  // robust-z units
    double span_s = 2.0;          // classified tail: one window plus two hops
};

/**
 * @brief Voluntary-blink decision flow for one buffered window.
 *
 * The context is conditioned (notch, high-pass, robust z) and harmonic-filtered. When the
 * classified tail holds a peak at or above the threshold, the tail is classified with and
 * without blink correction: both passes answering blink make a voluntary blink, otherwise the
 * corrected pass decides. Without a peak the tail is classified once and never counts as a
 * voluntary blink.
 */
[[nodiscard]] ActivityPrediction rule_based_predict(std::span<const double> context, double fs,
                                                    const WindowClassifier& classifier, const PredictorConfig& config);

// ---- commands and task -------------------------------------------------------

enum class Command { none, move_left, move_right, move_up, move_down, click, double_click };

[[nodiscard]] std::string_view to_string(Command c) noexcept;
[[nodiscard]] Command command_from_string(std::string_view name);

/// Direction (or no-op) mapped to a non-blink activity.
[[nodiscard]] Command activity_command(int activity);

/**
 * @brief Turns the prediction stream into at most one command per window.
 *
 * A voluntary blink arms a click that fires once `double_click_s` passes without a second
 * voluntary blink; a second one inside the interval fires a double-click instead. A click that
 * comes due on the same window as a move is emitted and the move is dropped.
 */
class CommandMapper {
public:
    explicit CommandMapper(double double_click_s = 1.2);
    Command on_prediction(const ActivityPrediction& p);
    /// Fires a due click at time t without a new prediction.
    Command poll(double t);
    void reset();

private:
    double double_click_s_;
    std::optional<double> armed_at_;
};

enum class Button { left, right, up, down };

[[nodiscard]] std::string_view to_string(Button b) noexcept;

struct TaskConfig {
    double step = 0.04;
    double hit_radius = 0.1;
    std::uint64_t seed = 0;
};

struct TaskState {
    Button target = Button::left;
    double x = 0.5;
    double y = 0.5;
    int score = 0;
    double clock = 0.0;

    friend bool operator==(const TaskState&, const TaskState&) = default;
};

/// Centre of a button; buttons sit at the edge midpoints, y grows downwards.
[[nodiscard]] std::array<double, 2> button_position(Button b);

/**
 * @brief Four-button scoring task. Moves step and clamp to [0,1]^2; a click or double-click
 * within hit_radius of the target scores one point and draws a new target among the other
 * three buttons from a seeded generator.
 */
class TaskEngine {
public:
    explicit TaskEngine(TaskConfig config = {});
    const TaskState& apply(Command c, double t);
    void reset();
    [[nodiscard]] const TaskState& state() const noexcept { return state_; }
    [[nodiscard]] const TaskConfig& config() const noexcept { return config_; }

private:
    TaskConfig config_;
    std::mt19937_64 rng_;
    TaskState state_;
};

/// Final state from a command log alone.
[[nodiscard]] TaskState replay_commands(const TaskConfig& config, const std::vector<std::pair<double, Command>>& log);

// ---- sources -----------------------------------------------------------------

class SignalSource {
public:
    virtual ~SignalSource() = default;
    /// Next frame, or nullopt at the end of the stream.
    virtual std::optional<StreamFrame> next() = 0;
    [[nodiscard]] virtual double fs() const = 0;
    [[nodiscard]] virtual std::size_t chunk() const = 0;
    [[nodiscard]] virtual std::string name() const = 0;
    /// Live activity selection; only the synthetic source supports it.
    virtual void set_activity(int activity);
};

/**
 * @brief Frames from a `t_s,amplitude` recording. Time jumps larger than one sample spacing are
 * treated as lost samples: the chunks they cover are skipped in the sequence numbering.
 */
class ReplaySource final : public SignalSource {
public:
    ReplaySource(const std::filesystem::path& path, std::size_t chunk, std::optional<double> fs = std::nullopt);
    ReplaySource(SignalTrace trace, std::size_t chunk);

    std::optional<StreamFrame> next() override;
    [[nodiscard]] double fs() const override { return fs_; }
    [[nodiscard]] std::size_t chunk() const override { return chunk_; }
    [[nodiscard]] std::string name() const override { return "replay"; }

private:
    std::vector<double> samples_;
    std::vector<bool> present_;
    double fs_;
    std::size_t chunk_;
    std::size_t pos_ = 0;
    std::uint64_t seq_ = 0;
};

/// Endless per-activity signatures; contamination is off unless the params enable it.
class SyntheticSource final : public SignalSource {
public:
    SyntheticSource(pipeline::SynthParams params, std::uint64_t seed, std::size_t chunk, int activity = 0);

    std::optional<StreamFrame> next() override;
    [[nodiscard]] double fs() const override { return generator_.params().fs; }
    [[nodiscard]] std::size_t chunk() const override { return chunk_; }
    [[nodiscard]] std::string name() const override { return "synthetic"; }
    void set_activity(int activity) override;

private:
    pipeline::SyntheticGenerator generator_;
    std::size_t chunk_;
    std::uint64_t seq_ = 0;
    std::mutex mutex_;
};

/// Generator settings for live use: clean signatures without bursts or involuntary blinks.
[[nodiscard]] pipeline::SynthParams live_synth_params();

/// Sleeps so frame k is released at k * chunk / (fs * speed) seconds after start.
class Pacer {
public:
    explicit Pacer(double speed = 1.0);
    void set_speed(double speed);
    void wait_for(double stream_t);
    void restart();

private:
    double speed_;
    double base_stream_t_ = 0.0;
    std::chrono::steady_clock::time_point start_;
    bool started_ = false;
};

// ---- engine ------------------------------------------------------------------

struct EngineConfig {
    PredictorConfig predictor{};
    double context_s = 4.0;
    double double_click_s = 1.2;
    TaskConfig task{};
    std::size_t workers = 1;
    std::size_t reorder_capacity = 8;
};

struct EngineEvent {
    enum class Kind { prediction, task, gap };
    Kind kind = Kind::prediction;
    ActivityPrediction prediction;
    Command command = Command::none;
    TaskState task;
    std::uint64_t gap_seq = 0;
};

/**
 * @brief Windower -> predictor -> command mapper -> task, for one source.
 *
 * Windows are classified on a worker pool; results are emitted strictly in window order.
 * Task state is only touched by the thread calling ingest()/drain().
 */
class Engine {
public:
    Engine(EngineConfig config, std::shared_ptr<const WindowClassifier> classifier, double fs, std::size_t chunk);
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    /// Feed a frame; returns events completed so far.
    std::vector<EngineEvent> ingest(StreamFrame frame);
    /// Wait for all in-flight windows and flush the windower.
    std::vector<EngineEvent> drain();
    void reset_task();

    [[nodiscard]] const TaskState& task() const noexcept { return task_.state(); }
    [[nodiscard]] const EngineConfig& config() const noexcept { return config_; }
    [[nodiscard]] double fs() const noexcept { return fs_; }

private:
    struct Pending {
        std::uint64_t seq;
        double t_end;
        bool valid;
        std::shared_future<ActivityPrediction> result;
    };
    void submit(StreamWindow w);
    void collect(bool wait, std::vector<EngineEvent>& out);
    void emit_gaps(std::vector<EngineEvent>& out);

    EngineConfig config_;
    std::shared_ptr<const WindowClassifier> classifier_;
    double fs_;
    std::size_t chunk_;
    StreamingWindower windower_;
    CommandMapper mapper_;
    TaskEngine task_;
    std::deque<Pending> inflight_;
    class Pool;
    std::unique_ptr<Pool> pool_;
};

// ---- protocol ----------------------------------------------------------------

[[nodiscard]] std::string hello_message(double fs, double window_s, double hop_s, const std::string& source);
[[nodiscard]] std::string prediction_message(const ActivityPrediction& p, Command command);
[[nodiscard]] std::string task_message(const TaskState& s);
[[nodiscard]] std::string gap_message(std::uint64_t seq);
[[nodiscard]] std::string error_message(const std::string& what);
[[nodiscard]] std::string ack_message(const std::string& action, const std::string& value);

struct ControlMessage {
    enum class Action { set_activity, set_source, reset, set_speed };
    Action action = Action::reset;
    std::string value;
};

/// Parses a client message; throws FormatError with a readable reason on anything else.
[[nodiscard]] ControlMessage parse_control(std::string_view text);

}  // namespace eog::realtime
