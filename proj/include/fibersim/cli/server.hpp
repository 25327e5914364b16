#pragma once
/**
 * @file server.hpp
 * @brief WebSocket endpoint for the sandbox.
 *
 * One io_context thread owns the SandboxSession. Incoming messages are queued
 * and applied at the start of the next tick in arrival order; every tick the
 * state frame is broadcast to all connected clients, error frames go to the
 * sender only. Plain HTTP GET requests are answered from an optional static
 * directory.
 */

#include "fibersim/cli/sandbox.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace fibersim::cli {

struct ServerOptions {
    std::string address{"127.0.0.1"};
    /// 0 binds an ephemeral port; see Server::port().
    unsigned short port{8765};
    double tick_hz{60.0};
    SandboxOptions sandbox{};
    std::optional<std::filesystem::path> static_dir{};
    /// Stop on SIGINT / SIGTERM.
    bool handle_signals{false};
    /// Called for every client message with the number of ticks completed
    /// before it was applied, i.e. the message takes effect on tick `tick + 1`.
    std::function<void(std::uint64_t tick, std::string_view message)> on_message{};
};

class Server {
public:
    /// Binds and listens; throws on failure.
    explicit Server(ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    unsigned short port() const;
    /// Serves until stop() is called.
    void run();
    /// Thread-safe.
    void stop();

    class Impl;

private:
    std::shared_ptr<Impl> impl_;
};

}  // namespace fibersim::cli
