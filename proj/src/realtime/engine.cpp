#include <cmath>
#include <condition_variable>
#include <thread>

#include "eog/error.hpp"
#include "eog/realtime.hpp"

namespace eog::realtime {

// Fixed worker threads draining a FIFO of tasks; zero workers run tasks inline.
class Engine::Pool {
public:
    explicit Pool(std::size_t workers) {
        for (std::size_t i = 0; i < workers; ++i) {
            threads_.emplace_back([this] { run(); });
        }
    }
    ~Pool() {
        {
            std::lock_guard lock(mutex_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    std::shared_future<ActivityPrediction> submit(std::function<ActivityPrediction()> fn) {
        auto task = std::make_shared<std::packaged_task<ActivityPrediction()>>(std::move(fn));
        auto fut = task->get_future().share();
        if (threads_.empty()) {
            (*task)();
            return fut;
        }
        {
            std::lock_guard lock(mutex_);
            queue_.push_back([task] { (*task)(); });
        }
        cv_.notify_one();
        return fut;
    }

private:
    void run() {
        for (;;) {
            std::function<void()> job;
            {
                std::unique_lock lock(mutex_);
                cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
                if (queue_.empty()) return;
                job = std::move(queue_.front());
                queue_.pop_front();
            }
            job();
        }
    }

    std::vector<std::thread> threads_;
    std::deque<std::function<void()>> queue_;
    std::mutex mutex_;
    std::condition_variable cv_;
    bool stop_ = false;
};

namespace {

std::size_t chunks_for(double seconds, double fs, std::size_t chunk) {
    const double n = seconds * fs / static_cast<double>(chunk);
    const auto k = static_cast<std::size_t>(std::llround(n));
    if (k == 0 || std::abs(n - static_cast<double>(k)) > 1e-9) {
        throw InvalidParameter("durations must be whole multiples of the chunk length");
    }
    return k;
}

}  // namespace

Engine::Engine(EngineConfig config, std::shared_ptr<const WindowClassifier> classifier, double fs, std::size_t chunk)
    : config_(std::move(config)),
      classifier_(std::move(classifier)),
      fs_(fs),
      chunk_(chunk),
      windower_(chunk, chunks_for(config_.context_s, fs, chunk), chunks_for(config_.predictor.span_s, fs, chunk),
                config_.reorder_capacity, fs),
      mapper_(config_.double_click_s),
      task_(config_.task),
      pool_(std::make_unique<Pool>(config_.workers)) {
    if (!classifier_) throw InvalidParameter("service not ready: no model loaded");
    if (config_.predictor.span_s > config_.context_s) throw InvalidParameter("classified span exceeds the context");
    config_.predictor.pipeline.validate(fs);
}

Engine::~Engine() = default;

void Engine::submit(StreamWindow w) {
    Pending p{w.last_seq, w.t_end, w.valid, {}};
    if (w.valid) {
        auto classifier = classifier_;
        const auto predictor = config_.predictor;
        const double fs = fs_;
        p.result = pool_->submit([classifier, predictor, fs, w = std::move(w)] {
            auto pred = rule_based_predict(w.samples, fs, *classifier, predictor);
            pred.seq = w.last_seq;
            pred.window_end_t = w.t_end;
            return pred;
        });
    }
    inflight_.push_back(std::move(p));
}

void Engine::collect(bool wait, std::vector<EngineEvent>& out) {
    while (!inflight_.empty()) {
        Pending& p = inflight_.front();
        if (p.valid) {
            if (!wait && p.result.wait_for(std::chrono::seconds(0)) != std::future_status::ready) break;
            try {
                EngineEvent ev;
                ev.kind = EngineEvent::Kind::prediction;
                ev.prediction = p.result.get();
                ev.command = mapper_.on_prediction(ev.prediction);
                ev.task = task_.apply(ev.command, ev.prediction.window_end_t);
                out.push_back(ev);
                EngineEvent t;
                t.kind = EngineEvent::Kind::task;
                t.task = task_.state();
                out.push_back(t);
            } catch (const DegenerateInput&) {
                EngineEvent g;
                g.kind = EngineEvent::Kind::gap;
                g.gap_seq = p.seq;
                out.push_back(g);
            }
        }
        inflight_.pop_front();
    }
}

void Engine::emit_gaps(std::vector<EngineEvent>& out) {
    for (const auto seq : windower_.take_lost()) {
        EngineEvent g;
        g.kind = EngineEvent::Kind::gap;
        g.gap_seq = seq;
        out.push_back(g);
    }
}

std::vector<EngineEvent> Engine::ingest(StreamFrame frame) {
    std::vector<EngineEvent> out;
    auto windows = windower_.push(std::move(frame));
    collect(false, out);
    emit_gaps(out);
    for (auto& w : windows) submit(std::move(w));
    collect(config_.workers == 0, out);
    return out;
}

std::vector<EngineEvent> Engine::drain() {
    std::vector<EngineEvent> out;
    auto windows = windower_.flush();
    collect(true, out);
    emit_gaps(out);
    for (auto& w : windows) submit(std::move(w));
    collect(true, out);
    return out;
}

void Engine::reset_task() {
    task_.reset();
    mapper_.reset();
}

}  // namespace eog::realtime
