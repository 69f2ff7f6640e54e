#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "eog/realtime.hpp"

namespace eog::realtime {

struct ServerConfig {
    std::string host = "127.0.0.1";
    unsigned short port = 0;          // 0 picks a free port
    std::size_t queue_limit = 256;    // per client; older task frames are dropped beyond this
    std::size_t hard_limit = 4096;    // per client; the client is disconnected beyond this
    EngineConfig engine{};
    double speed = 1.0;               // replay pacing multiplier
    std::size_t wait_for_clients = 0; // hold the stream until this many clients joined
    bool loop = false;                // restart a finished replay
    std::uint64_t seed = 0;
};

/// Builds a source from "synthetic" or "replay:<path>".
using SourceFactory = std::function<std::unique_ptr<SignalSource>(const std::string& spec)>;

[[nodiscard]] SourceFactory default_source_factory(double hop_s, std::uint64_t seed);

/**
 * @brief WebSocket broadcast server around an Engine.
 *
 * One I/O thread owns the sockets; one pipeline thread owns the source, the engine and the
 * task state. Every client receives the same ordered stream of prediction, task and gap
 * messages. Control messages are queued to the pipeline thread and answered with an ack or an
 * error to the sender only.
 */
class Server {
public:
    Server(ServerConfig config, std::shared_ptr<const WindowClassifier> classifier, std::string source_spec,
           SourceFactory factory);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts both threads; returns the bound port.
    unsigned short start();
    /// Stops the stream and closes every connection.
    void stop();
    /// True once a non-looping source ran out and the engine was drained.
    [[nodiscard]] bool finished() const;
    /// Waits until finished and every client queue is flushed, or the timeout passes.
    bool wait_idle(std::chrono::milliseconds timeout);
    [[nodiscard]] std::size_t clients() const;
    [[nodiscard]] std::size_t predictions_sent() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace eog::realtime
