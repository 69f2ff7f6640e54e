#include "eog/server.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <set>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "eog/error.hpp"

namespace eog::realtime {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

SourceFactory default_source_factory(double hop_s, std::uint64_t seed) {
    return [hop_s, seed](const std::string& spec) -> std::unique_ptr<SignalSource> {
        const auto chunk_for = [hop_s](double fs) {
            const double c = hop_s * fs;
            const auto k = static_cast<std::size_t>(std::llround(c));
            if (k == 0 || std::abs(c - static_cast<double>(k)) > 1e-9) {
                throw InvalidParameter("hop must be a whole number of samples");
            }
            return k;
        };
        if (spec == "synthetic") {
            const auto params = live_synth_params();
            return std::make_unique<SyntheticSource>(params, seed, chunk_for(params.fs));
        }
        if (spec.rfind("replay:", 0) == 0) {
            const std::filesystem::path path = spec.substr(7);
            if (!std::filesystem::exists(path)) throw FormatError("replay file not found: " + path.string());
            auto probe = ReplaySource(path, 1);
            return std::make_unique<ReplaySource>(path, chunk_for(probe.fs()), probe.fs());
        }
        throw InvalidParameter("source must be 'synthetic' or 'replay:<file>'");
    };
}

namespace {

class Session;

struct Control {
    ControlMessage message;
    std::weak_ptr<Session> sender;
};

// State shared between the I/O thread and the pipeline thread.
struct Hub {
    net::io_context io;
    std::set<std::shared_ptr<Session>> sessions;  // I/O thread only
    std::size_t queue_limit = 256;
    std::size_t hard_limit = 4096;

    std::mutex mutex;
    std::string hello;
    std::deque<Control> controls;

    std::atomic<std::size_t> joined{0};
    std::atomic<std::size_t> queued{0};

    void join(const std::shared_ptr<Session>& s);
    void leave(const std::shared_ptr<Session>& s);
    void on_text(const std::shared_ptr<Session>& s, const std::string& text);
    void broadcast(std::shared_ptr<const std::vector<std::pair<std::string, bool>>> batch);
};

class Session : public std::enable_shared_from_this<Session> {
public:
    Session(tcp::socket socket, Hub& hub) : ws_(std::move(socket)), hub_(hub) {}

    void start() {
        ws_.async_accept([self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
    }

    // Task frames are droppable; predictions, gaps and replies are not.
    void enqueue(std::string text, bool droppable) {
        if (closed_) return;
        queue_.push_back({std::move(text), droppable});
        ++hub_.queued;
        if (queue_.size() > hub_.queue_limit) {
            const std::size_t first = writing_ ? 1 : 0;
            for (std::size_t i = first; i < queue_.size(); ++i) {
                if (queue_[i].droppable) {
                    queue_.erase(queue_.begin() + static_cast<std::ptrdiff_t>(i));
                    --hub_.queued;
                    break;
                }
            }
        }
        if (queue_.size() > hub_.hard_limit) {
            close();
            return;
        }
        if (!writing_) write();
    }

    void close() {
        if (closed_) return;
        closed_ = true;
        hub_.queued -= queue_.size();
        queue_.clear();
        beast::error_code ignored;
        beast::get_lowest_layer(ws_).socket().close(ignored);
        hub_.leave(shared_from_this());
    }

    // Close handshake when idle; a socket with a write in flight is cut instead.
    void shutdown() {
        if (closed_) return;
        if (writing_) {
            close();
            return;
        }
        closed_ = true;
        hub_.queued -= queue_.size();
        queue_.clear();
        ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {
            beast::error_code ignored;
            beast::get_lowest_layer(self->ws_).socket().close(ignored);
            self->hub_.leave(self);
        });
    }

private:
    struct Outgoing {
        std::string text;
        bool droppable;
    };

    void on_accept(beast::error_code ec) {
        if (ec) return;
        ws_.text(true);
        hub_.join(shared_from_this());
        std::string hello;
        {
            std::lock_guard lock(hub_.mutex);
            hello = hub_.hello;
        }
        enqueue(std::move(hello), false);
        read();
    }

    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
    }

    void on_read(beast::error_code ec) {
        if (ec) {
            close();
            return;
        }
        const auto text = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        hub_.on_text(shared_from_this(), text);
        read();
    }

    void write() {
        writing_ = true;
        ws_.async_write(net::buffer(queue_.front().text),
                        [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_write(ec); });
    }

    void on_write(beast::error_code ec) {
        writing_ = false;
        if (closed_) return;
        queue_.pop_front();
        --hub_.queued;
        if (ec) {
            close();
            return;
        }
        if (!queue_.empty()) write();
    }

    websocket::stream<beast::tcp_stream> ws_;
    Hub& hub_;
    beast::flat_buffer buffer_;
    std::deque<Outgoing> queue_;
    bool writing_ = false;
    bool closed_ = false;
};

void Hub::join(const std::shared_ptr<Session>& s) {
    sessions.insert(s);
    joined = sessions.size();
}

void Hub::leave(const std::shared_ptr<Session>& s) {
    sessions.erase(s);
    joined = sessions.size();
}

void Hub::on_text(const std::shared_ptr<Session>& s, const std::string& text) {
    try {
        auto message = parse_control(text);
        std::lock_guard lock(mutex);
        controls.push_back({std::move(message), s});
    } catch (const std::exception& e) {
        s->enqueue(error_message(e.what()), false);
    }
}

void Hub::broadcast(std::shared_ptr<const std::vector<std::pair<std::string, bool>>> batch) {
    net::post(io, [this, batch] {
        const auto targets = sessions;
        for (const auto& s : targets) {
            for (const auto& [text, droppable] : *batch) s->enqueue(text, droppable);
        }
    });
}

std::string_view action_name(ControlMessage::Action a) {
    switch (a) {
        case ControlMessage::Action::set_activity: return "set_activity";
        case ControlMessage::Action::set_source: return "set_source";
        case ControlMessage::Action::reset: return "reset";
        case ControlMessage::Action::set_speed: return "set_speed";
    }
    return "reset";
}

}  // namespace

struct Server::Impl {
    ServerConfig config;
    std::shared_ptr<const WindowClassifier> classifier;
    std::string source_spec;
    SourceFactory factory;

    Hub hub;
    std::unique_ptr<tcp::acceptor> acceptor;
    std::thread io_thread;
    std::thread pipeline_thread;
    std::atomic<bool> stopping{false};
    std::atomic<bool> done{false};
    std::atomic<std::size_t> predictions{0};

    std::unique_ptr<SignalSource> source;
    std::unique_ptr<Engine> engine;
    Pacer pacer;

    void accept() {
        acceptor->async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            std::make_shared<Session>(std::move(socket), hub)->start();
            accept();
        });
    }

    void reply(const Control& c, std::string text) {
        net::post(hub.io, [sender = c.sender, text = std::move(text)] {
            if (auto s = sender.lock()) s->enqueue(text, false);
        });
    }

    // Replaces source and engine; the task state restarts with them.
    void open_source(const std::string& spec) {
        auto next = factory(spec);
        auto next_engine = std::make_unique<Engine>(config.engine, classifier, next->fs(), next->chunk());
        source = std::move(next);
        engine = std::move(next_engine);
        source_spec = spec;
        pacer.restart();
        const auto& p = config.engine.predictor.pipeline;
        std::lock_guard lock(hub.mutex);
        hub.hello = hello_message(source->fs(), p.window_s, p.hop_s, source->name());
    }

    void handle(const Control& c) {
        const std::string action(action_name(c.message.action));
        try {
            switch (c.message.action) {
                case ControlMessage::Action::set_activity:
                    source->set_activity(learn::activity_index(c.message.value));
                    break;
                case ControlMessage::Action::set_source:
                    open_source(c.message.value);
                    done = false;
                    hub.broadcast(std::make_shared<std::vector<std::pair<std::string, bool>>>(
                        std::vector<std::pair<std::string, bool>>{{hub.hello, false}}));
                    break;
                case ControlMessage::Action::reset:
                    engine->reset_task();
                    hub.broadcast(std::make_shared<std::vector<std::pair<std::string, bool>>>(
                        std::vector<std::pair<std::string, bool>>{{task_message(engine->task()), true}}));
                    break;
                case ControlMessage::Action::set_speed:
                    pacer.set_speed(std::stod(c.message.value));
                    break;
            }
            reply(c, ack_message(action, c.message.value));
        } catch (const std::exception& e) {
            reply(c, error_message(action + ": " + e.what()));
        }
    }

    void publish(const std::vector<EngineEvent>& events) {
        if (events.empty()) return;
        auto batch = std::make_shared<std::vector<std::pair<std::string, bool>>>();
        for (const auto& ev : events) {
            switch (ev.kind) {
                case EngineEvent::Kind::prediction:
                    batch->emplace_back(prediction_message(ev.prediction, ev.command), false);
                    ++predictions;
                    break;
                case EngineEvent::Kind::task: batch->emplace_back(task_message(ev.task), true); break;
                case EngineEvent::Kind::gap: batch->emplace_back(gap_message(ev.gap_seq), false); break;
            }
        }
        hub.broadcast(std::move(batch));
    }

    void run_pipeline() {
        using namespace std::chrono_literals;
        while (!stopping) {
            std::deque<Control> pending;
            {
                std::lock_guard lock(hub.mutex);
                pending.swap(hub.controls);
            }
            for (const auto& c : pending) handle(c);

            if (done || hub.joined < config.wait_for_clients) {
                std::this_thread::sleep_for(5ms);
                pacer.restart();
                continue;
            }
            auto frame = source->next();
            if (!frame) {
                publish(engine->drain());
                if (config.loop) {
                    open_source(source_spec);
                } else {
                    done = true;
                }
                continue;
            }
            pacer.wait_for(frame->t_start + static_cast<double>(source->chunk()) / source->fs());
            publish(engine->ingest(std::move(*frame)));
        }
    }
};

Server::Server(ServerConfig config, std::shared_ptr<const WindowClassifier> classifier, std::string source_spec,
               SourceFactory factory)
    : impl_(std::make_unique<Impl>()) {
    if (!classifier) throw InvalidParameter("service not ready: no model loaded");
    if (config.queue_limit == 0 || config.hard_limit < config.queue_limit) {
        throw InvalidParameter("queue limits must satisfy 0 < queue_limit <= hard_limit");
    }
    impl_->config = std::move(config);
    impl_->classifier = std::move(classifier);
    impl_->factory = std::move(factory);
    impl_->hub.queue_limit = impl_->config.queue_limit;
    impl_->hub.hard_limit = impl_->config.hard_limit;
    impl_->pacer.set_speed(impl_->config.speed);
    impl_->open_source(source_spec);
}

Server::~Server() { stop(); }

unsigned short Server::start() {
    auto& im = *impl_;
    const auto address = net::ip::make_address(im.config.host);
    im.acceptor = std::make_unique<tcp::acceptor>(im.hub.io, tcp::endpoint(address, im.config.port));
    const auto port = im.acceptor->local_endpoint().port();
    im.accept();
    im.io_thread = std::thread([&im] {
        auto guard = net::make_work_guard(im.hub.io);
        im.hub.io.run();
    });
    im.pipeline_thread = std::thread([&im] { im.run_pipeline(); });
    return port;
}

void Server::stop() {
    auto& im = *impl_;
    im.stopping = true;
    if (im.pipeline_thread.joinable()) im.pipeline_thread.join();
    if (im.io_thread.joinable()) {
        net::post(im.hub.io, [&im] {
            beast::error_code ignored;
            if (im.acceptor) im.acceptor->close(ignored);
            const auto targets = im.hub.sessions;
            for (const auto& s : targets) s->shutdown();
        });
        const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(1);
        while (im.hub.joined > 0 && std::chrono::steady_clock::now() < deadline) {
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
        }
        net::post(im.hub.io, [&im] { im.hub.io.stop(); });
        im.io_thread.join();
    }
}

bool Server::finished() const { return impl_->done; }

bool Server::wait_idle(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (std::chrono::steady_clock::now() < deadline) {
        if (impl_->done && impl_->hub.queued == 0) {
            // A broadcast may still be posted but not yet enqueued; let the I/O thread run it.
            std::promise<void> flushed;
            net::post(impl_->hub.io, [&flushed] { flushed.set_value(); });
            flushed.get_future().wait();
            if (impl_->hub.queued == 0) return true;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return false;
}

std::size_t Server::clients() const { return impl_->hub.joined; }

std::size_t Server::predictions_sent() const { return impl_->predictions; }

}  // namespace eog::realtime
