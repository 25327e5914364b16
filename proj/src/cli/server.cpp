#include "fibersim/cli/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <deque>
#include <fstream>
#include <sstream>
#include <vector>

namespace fibersim::cli {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr std::size_t kMaxQueuedFrames = 256;

std::string_view mime_type(const std::filesystem::path& p) {
    const std::string ext = p.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html";
    if (ext == ".js" || ext == ".mjs") return "application/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    if (ext == ".wasm") return "application/wasm";
    return "application/octet-stream";
}

class WsSession;

}  // namespace

class Server::Impl {
public:
    explicit Impl(ServerOptions options)
        : options_(std::move(options)),
          acceptor_(ioc_),
          timer_(ioc_),
          signals_(ioc_),
          session_(options_.sandbox) {
        if (!(options_.tick_hz > 0)) throw Error(ErrorCode::InvalidParameters, "tick rate must be positive");
        const tcp::endpoint endpoint(net::ip::make_address(options_.address), options_.port);
        acceptor_.open(endpoint.protocol());
        acceptor_.set_option(net::socket_base::reuse_address(true));
        acceptor_.bind(endpoint);
        acceptor_.listen(net::socket_base::max_listen_connections);
    }

    unsigned short port() const { return acceptor_.local_endpoint().port(); }

    void run() {
        if (options_.handle_signals) {
            signals_.add(SIGINT);
            signals_.add(SIGTERM);
            signals_.async_wait([this](beast::error_code ec, int) {
                if (!ec) stop();
            });
        }
        do_accept();
        next_tick_ = std::chrono::steady_clock::now();
        schedule_tick();
        spdlog::info("serve: listening on {}:{}", options_.address, port());
        ioc_.run();
    }

    void stop() {
        net::post(ioc_, [this] {
            beast::error_code ec;
            acceptor_.close(ec);
            timer_.cancel();
            signals_.cancel();
            ioc_.stop();
        });
    }

    void join(const std::shared_ptr<WsSession>& client);
    void receive(std::weak_ptr<WsSession> from, std::string message) {
        inbox_.emplace_back(std::move(from), std::move(message));
    }
    const std::optional<std::filesystem::path>& static_dir() const { return options_.static_dir; }

private:
    void do_accept();
    void schedule_tick() {
        next_tick_ += std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(1.0 / options_.tick_hz));
        timer_.expires_at(next_tick_);
        timer_.async_wait([this](beast::error_code ec) {
            if (ec) return;
            on_tick();
            schedule_tick();
        });
    }
    void on_tick();
    void broadcast(const std::string& frame);

    ServerOptions options_;
    net::io_context ioc_;
    tcp::acceptor acceptor_;
    net::steady_timer timer_;
    net::signal_set signals_;
    std::chrono::steady_clock::time_point next_tick_;
    SandboxSession session_;
    std::uint64_t ticks_{0};
    std::vector<std::weak_ptr<WsSession>> clients_;
    std::deque<std::pair<std::weak_ptr<WsSession>, std::string>> inbox_;
};

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket&& socket, Server::Impl& hub) : ws_(std::move(socket)), hub_(hub) {}

    void start(http::request<http::string_body> request) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(request, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
    }

    void send(std::shared_ptr<const std::string> frame) {
        if (closed_ || queue_.size() >= kMaxQueuedFrames) return;
        queue_.push_back(std::move(frame));
        if (queue_.size() == 1) do_write();
    }

private:
    void on_accept(beast::error_code ec) {
        if (ec) {
            spdlog::debug("serve: websocket handshake failed: {}", ec.message());
            return;
        }
        hub_.join(shared_from_this());
        do_read();
    }

    void do_read() {
        ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            closed_ = true;
            spdlog::debug("serve: client left: {}", ec.message());
            return;
        }
        if (ws_.got_text()) {
            hub_.receive(weak_from_this(), beast::buffers_to_string(buffer_.data()));
        } else {
            send(std::make_shared<const std::string>(SandboxSession::error_frame("binary frames are not supported")));
        }
        buffer_.consume(buffer_.size());
        do_read();
    }

    void do_write() {
        ws_.text(true);
        ws_.async_write(net::buffer(*queue_.front()),
                        beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t) {
        if (ec) {
            closed_ = true;
            queue_.clear();
            return;
        }
        queue_.pop_front();
        if (!queue_.empty()) do_write();
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::deque<std::shared_ptr<const std::string>> queue_;
    Server::Impl& hub_;
    bool closed_{false};
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, Server::Impl& hub) : stream_(std::move(socket)), hub_(hub) {}

    void start() {
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, request_,
                         beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
    }

private:
    void on_read(beast::error_code ec, std::size_t) {
        if (ec) return;
        if (websocket::is_upgrade(request_)) {
            stream_.expires_never();
            std::make_shared<WsSession>(stream_.release_socket(), hub_)->start(std::move(request_));
            return;
        }
        respond();
    }

    void respond() {
        auto res = std::make_shared<http::response<http::string_body>>();
        res->version(request_.version());
        res->keep_alive(false);
        res->set(http::field::server, "fibersim");
        const auto file = resolve();
        std::ifstream in;
        if (file) in.open(*file, std::ios::binary);
        if (request_.method() != http::verb::get && request_.method() != http::verb::head) {
            res->result(http::status::method_not_allowed);
        } else if (!in.is_open()) {
            res->result(http::status::not_found);
            res->set(http::field::content_type, "text/plain");
            res->body() = "not found\n";
        } else {
            std::ostringstream body;
            body << in.rdbuf();
            res->result(http::status::ok);
            res->set(http::field::content_type, std::string(mime_type(*file)));
            if (request_.method() == http::verb::get) res->body() = body.str();
        }
        res->prepare_payload();
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
            beast::error_code ignored;
            self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        });
    }

    std::optional<std::filesystem::path> resolve() const {
        const auto& root = hub_.static_dir();
        if (!root) return std::nullopt;
        std::string target(request_.target());
        target = target.substr(0, target.find_first_of("?#"));
        if (target.empty() || target.front() != '/' || target.find("..") != std::string::npos)
            return std::nullopt;
        if (target.back() == '/') target += "index.html";
        auto file = *root / target.substr(1);
        std::error_code ec;
        if (!std::filesystem::is_regular_file(file, ec)) return std::nullopt;
        return file;
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
    Server::Impl& hub_;
};

}  // namespace

void Server::Impl::do_accept() {
    acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
        if (ec) {
            if (ec != net::error::operation_aborted) spdlog::warn("serve: accept failed: {}", ec.message());
            if (!acceptor_.is_open()) return;
        } else {
            std::make_shared<HttpSession>(std::move(socket), *this)->start();
        }
        do_accept();
    });
}

void Server::Impl::join(const std::shared_ptr<WsSession>& client) {
    clients_.push_back(client);
    client->send(std::make_shared<const std::string>(session_.state_frame()));
    spdlog::info("serve: client connected ({} total)", clients_.size());
}

void Server::Impl::on_tick() {
    while (!inbox_.empty()) {
        auto [from, message] = std::move(inbox_.front());
        inbox_.pop_front();
        if (options_.on_message) options_.on_message(ticks_, message);
        if (auto error = session_.handle(message)) {
            spdlog::debug("serve: rejected message: {}", *error);
            if (auto client = from.lock()) client->send(std::make_shared<const std::string>(std::move(*error)));
        }
    }
    try {
        session_.tick();
    } catch (const std::exception& e) {
        spdlog::error("serve: tick failed: {}", e.what());
    }
    ++ticks_;
    broadcast(session_.state_frame());
}

void Server::Impl::broadcast(const std::string& frame) {
    const auto shared = std::make_shared<const std::string>(frame);
    std::erase_if(clients_, [](const auto& w) { return w.expired(); });
    for (const auto& w : clients_)
        if (auto client = w.lock()) client->send(shared);
}

Server::Server(ServerOptions options) : impl_(std::make_shared<Impl>(std::move(options))) {}
Server::~Server() = default;
unsigned short Server::port() const { return impl_->port(); }
void Server::run() { impl_->run(); }
void Server::stop() { impl_->stop(); }

}  // namespace fibersim::cli
