#include "eog/error.hpp"
#include "eog/realtime.hpp"

namespace eog::realtime {

StreamingWindower::StreamingWindower(std::size_t chunk, std::size_t window_chunks, std::size_t min_chunks,
                                     std::size_t reorder_capacity, double fs)
    : chunk_(chunk),
      window_chunks_(window_chunks),
      min_chunks_(min_chunks == 0 ? window_chunks : min_chunks),
      reorder_capacity_(reorder_capacity),
      fs_(fs) {
    if (chunk_ == 0) throw InvalidParameter("chunk size must be positive");
    if (window_chunks_ == 0) throw InvalidParameter("window must span at least one chunk");
    if (min_chunks_ > window_chunks_) throw InvalidParameter("minimum window exceeds the window");
    if (!(fs_ > 0.0)) throw InvalidParameter("sampling rate must be positive");
}

void StreamingWindower::consume(std::uint64_t seq, std::vector<double> samples, bool lost,
                                std::vector<StreamWindow>& out) {
    ring_.push_back({seq, std::move(samples), lost});
    if (ring_.size() > window_chunks_) ring_.pop_front();
    next_seq_ = seq + 1;
    if (lost) {
        ++gaps_;
        lost_.push_back(seq);
    }
    if (ring_.size() < min_chunks_) return;
    StreamWindow w;
    w.first_seq = ring_.front().seq;
    w.last_seq = seq;
    w.t_end = static_cast<double>((seq + 1) * chunk_) / fs_;
    w.samples.reserve(ring_.size() * chunk_);
    for (const auto& h : ring_) {
        w.samples.insert(w.samples.end(), h.samples.begin(), h.samples.end());
        w.valid = w.valid && !h.lost;
    }
    out.push_back(std::move(w));
}

std::vector<StreamWindow> StreamingWindower::push(StreamFrame frame) {
    if (frame.samples.size() != chunk_) throw InvalidParameter("frame size differs from the configured chunk");
    std::vector<StreamWindow> out;
    if (frame.seq_no < next_seq_ || pending_.count(frame.seq_no)) return out;  // late or duplicate
    pending_.emplace(frame.seq_no, std::move(frame));
    for (;;) {
        auto it = pending_.find(next_seq_);
        if (it != pending_.end()) {
            auto samples = std::move(it->second.samples);
            pending_.erase(it);
            consume(next_seq_, std::move(samples), false, out);
        } else if (pending_.size() > reorder_capacity_) {
            consume(next_seq_, std::vector<double>(chunk_, 0.0), true, out);
        } else {
            break;
        }
    }
    return out;
}

std::vector<StreamWindow> StreamingWindower::flush() {
    std::vector<StreamWindow> out;
    while (!pending_.empty()) {
        auto it = pending_.find(next_seq_);
        if (it != pending_.end()) {
            auto samples = std::move(it->second.samples);
            pending_.erase(it);
            consume(next_seq_, std::move(samples), false, out);
        } else {
            consume(next_seq_, std::vector<double>(chunk_, 0.0), true, out);
        }
    }
    return out;
}

std::vector<std::uint64_t> StreamingWindower::take_lost() {
    std::vector<std::uint64_t> out;
    out.swap(lost_);
    return out;
}

}  // namespace eog::realtime
