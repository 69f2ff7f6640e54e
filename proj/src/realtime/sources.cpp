#include <cmath>
#include <thread>

#include "eog/error.hpp"
#include "eog/io.hpp"
#include "eog/realtime.hpp"

namespace eog::realtime {

void SignalSource::set_activity(int) {
    throw InvalidParameter("source '" + name() + "' does not accept activity selection");
}

ReplaySource::ReplaySource(const std::filesystem::path& path, std::size_t chunk, std::optional<double> fs)
    : chunk_(chunk) {
    if (chunk_ == 0) throw InvalidParameter("chunk size must be positive");
    const auto rows = io::read_timed_csv(path);
    if (fs) {
        fs_ = *fs;
    } else if (std::filesystem::exists(io::sidecar_path(path))) {
        fs_ = io::read_recording(path).fs;
    } else if (rows.t.size() >= 2) {
        fs_ = std::round(1e6 / (rows.t[1] - rows.t[0])) / 1e6;
    } else {
        throw FormatError(path.string() + ": cannot infer the sampling rate");
    }
    if (!(fs_ > 0.0)) throw FormatError(path.string() + ": invalid sampling rate");
    const double t0 = rows.t.front();
    const auto last = static_cast<std::size_t>(std::llround((rows.t.back() - t0) * fs_));
    samples_.assign(last + 1, 0.0);
    present_.assign(last + 1, false);
    for (std::size_t i = 0; i < rows.t.size(); ++i) {
        const double pos = (rows.t[i] - t0) * fs_;
        if (pos < -0.5) throw FormatError(path.string() + ": time column goes backwards");
        const auto k = static_cast<std::size_t>(std::llround(pos));
        if (k > last || present_[k]) throw FormatError(path.string() + ": time column is not increasing");
        samples_[k] = rows.amplitude[i];
        present_[k] = true;
    }
}

ReplaySource::ReplaySource(SignalTrace trace, std::size_t chunk)
    : samples_(std::move(trace.samples)), present_(samples_.size(), true), fs_(trace.fs), chunk_(chunk) {
    if (chunk_ == 0) throw InvalidParameter("chunk size must be positive");
}

std::optional<StreamFrame> ReplaySource::next() {
    while (pos_ + chunk_ <= samples_.size()) {
        const std::size_t begin = pos_;
        const std::uint64_t seq = seq_++;
        pos_ += chunk_;
        bool complete = true;
        for (std::size_t i = begin; i < begin + chunk_; ++i) complete = complete && present_[i];
        if (!complete) continue;  // the windower sees the skipped sequence number as a gap
        StreamFrame f;
        f.seq_no = seq;
        f.t_start = static_cast<double>(begin) / fs_;
        f.samples.assign(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                         samples_.begin() + static_cast<std::ptrdiff_t>(begin + chunk_));
        return f;
    }
    return std::nullopt;
}

pipeline::SynthParams live_synth_params() {
    pipeline::SynthParams p;
    p.burst_rate = 0.0;
    p.involuntary_blink_rate = 0.0;
    return p;
}

SyntheticSource::SyntheticSource(pipeline::SynthParams params, std::uint64_t seed, std::size_t chunk, int activity)
    : generator_(params, seed), chunk_(chunk) {
    if (chunk_ == 0) throw InvalidParameter("chunk size must be positive");
    generator_.set_activity(activity);
}

std::optional<StreamFrame> SyntheticSource::next() {
    std::lock_guard lock(mutex_);
    StreamFrame f;
    f.seq_no = seq_;
    f.t_start = static_cast<double>(seq_ * chunk_) / generator_.params().fs;
    f.samples = generator_.next(chunk_);
    ++seq_;
    return f;
}

void SyntheticSource::set_activity(int activity) {
    std::lock_guard lock(mutex_);
    generator_.set_activity(activity);
}

Pacer::Pacer(double speed) : speed_(speed) {}

void Pacer::restart() { started_ = false; }

void Pacer::set_speed(double speed) {
    speed_ = speed;
    started_ = false;
}

void Pacer::wait_for(double stream_t) {
    if (!(speed_ > 0.0)) return;
    const auto now = std::chrono::steady_clock::now();
    if (!started_) {
        start_ = now;
        base_stream_t_ = stream_t;
        started_ = true;
        return;
    }
    const auto due = start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>((stream_t - base_stream_t_) / speed_));
    std::this_thread::sleep_until(due);
}

}  // namespace eog::realtime
