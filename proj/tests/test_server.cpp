#include "doctest.h"
#include "replay.hpp"

#include "fibersim/cli/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

using namespace fibersim;
using namespace fibersim::cli;
using namespace fibersim::testing;
using nlohmann::json;

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

struct Running {
    Server server;
    std::jthread thread;
    explicit Running(ServerOptions o) : server(std::move(o)), thread([this] { server.run(); }) {}
    ~Running() { server.stop(); }
};

class Client {
public:
    explicit Client(unsigned short port) : ws_(ioc_) {
        tcp::resolver resolver(ioc_);
        net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws_.handshake("127.0.0.1", "/");
    }
    ~Client() {
        beast::error_code ec;
        if (ws_.is_open()) ws_.next_layer().close(ec);
    }
    void close() { ws_.close(websocket::close_code::normal); }
    void send(const std::string& text) {
        ws_.text(true);
        ws_.write(net::buffer(text));
    }
    json receive() {
        beast::flat_buffer buf;
        ws_.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    }
    /// Next frame of the given type, skipping others.
    json receive(const std::string& type) {
        for (int i = 0; i < 10000; ++i) {
            json f = receive();
            if (f["type"] == type) return f;
        }
        throw std::runtime_error("no " + type + " frame");
    }

private:
    net::io_context ioc_;
    websocket::stream<tcp::socket> ws_;
};

Config frame_config(const json& f) {
    return {{f["cM"][0].get<double>(), f["cM"][1].get<double>()},
            {f["cN"][0].get<double>(), f["cN"][1].get<double>()}};
}

ServerOptions fast_options() {
    ServerOptions o;
    o.port = 0;
    o.tick_hz = 240.0;
    return o;
}

std::string velocity(double vx, double vy) {
    return json{{"type", "velocity"}, {"vx", vx}, {"vy", vy}}.dump();
}

}  // namespace

TEST_CASE("state frames, velocity and errors over the socket") {
    Running r(fast_options());
    Client c(r.server.port());
    const json first = c.receive("state");
    CHECK(first["collided"] == false);
    CHECK(frame_config(first).cN == Vec2{0, 0});

    c.send(velocity(1.0, 0.0));
    json f;
    for (int i = 0; i < 200; ++i) {
        f = c.receive("state");
        if (frame_config(f).cN.x > 0.05) break;
    }
    CHECK(frame_config(f).cN.x > 0.05);
    CHECK(frame_config(f).cN.y == 0.0);
    // copy: the offset never changes
    CHECK((frame_config(f).cM - frame_config(f).cN - Vec2{3, 0}).norm() < 1e-12);

    c.send("{broken");
    const json err = c.receive("error");
    CHECK_FALSE(err["msg"].get<std::string>().empty());
    // the simulation keeps running after bad input
    const double t = c.receive("state")["t"].get<double>();
    CHECK(c.receive("state")["t"].get<double>() > t);
    c.close();
}

TEST_CASE("steering into D collides and the server freezes") {
    Running r(fast_options());
    Client c(r.server.port());
    c.send(R"({"type": "mechanism", "spec": {"kind": "linear_const", "alpha": 2, "beta": 0}})");
    c.send(velocity(-3.0, 0.0));
    json f;
    for (int i = 0; i < 2000; ++i) {
        f = c.receive("state");
        if (f["collided"] == true) break;
    }
    REQUIRE(f["collided"] == true);
    CHECK(f["overlays"]["cTilde0"] == json::array({-3.0, 0.0}));
    CHECK(f["overlays"]["rD"] == 2.0);
    CHECK(std::abs(f["dist"].get<double>() - 2.0) <= 1e-9);
    CHECK(c.receive("state") == f);
}

TEST_CASE("served states replay offline within 1e-12") {
    std::mutex mu;
    std::vector<LoggedMessage> log;
    ServerOptions o = fast_options();
    o.on_message = [&](std::uint64_t tick, std::string_view m) {
        std::lock_guard lock(mu);
        log.push_back({tick, std::string(m)});
    };
    Running r(o);
    Client c(r.server.port());

    std::vector<json> frames;
    const std::vector<std::string> script{
        velocity(0.5, 0.2),
        R"({"type": "mechanism", "spec": {"kind": "orbit", "mu": 0.8}})",
        velocity(-1.0, 0.4),
        R"({"type": "mechanism", "spec": {"kind": "damped"}})",
        velocity(10.0, 10.0),  // clamped to vmax
        velocity(0.0, 0.0),
    };
    for (const auto& m : script) {
        c.send(m);
        for (int i = 0; i < 8; ++i) frames.push_back(c.receive("state"));
    }
    c.close();
    r.server.stop();
    r.thread.join();

    const double h = o.sandbox.step;
    std::uint64_t last_tick = 0;
    for (const auto& f : frames) last_tick = std::max<std::uint64_t>(last_tick, std::llround(f["t"].get<double>() / h));
    std::vector<LoggedMessage> applied;
    {
        std::lock_guard lock(mu);
        applied = log;
    }
    REQUIRE(applied.size() == script.size());
    const auto offline = replay_offline(o.sandbox.initial, h, o.sandbox.vmax, applied, last_tick);
    double worst = 0.0;
    for (const auto& f : frames) {
        const auto k = static_cast<std::size_t>(std::llround(f["t"].get<double>() / h));
        const Config served = frame_config(f);
        CHECK(std::abs(f["t"].get<double>() - offline[k].t) < 1e-12);
        worst = std::max({worst, (served.cM - offline[k].e.cM).norm(), (served.cN - offline[k].e.cN).norm()});
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("static files over plain HTTP") {
    const auto dir = std::filesystem::temp_directory_path() / "fibersim_static_test";
    std::filesystem::create_directories(dir);
    std::filesystem::create_directories(dir / "sub");
    std::ofstream(dir / "index.html") << "<html>sandbox</html>";
    ServerOptions o = fast_options();
    o.static_dir = dir;
    Running r(o);

    auto get = [&](const std::string& target) {
        net::io_context ioc;
        beast::tcp_stream stream(ioc);
        tcp::resolver resolver(ioc);
        stream.connect(resolver.resolve("127.0.0.1", std::to_string(r.server.port())));
        http::request<http::string_body> req{http::verb::get, target, 11};
        req.set(http::field::host, "127.0.0.1");
        http::write(stream, req);
        beast::flat_buffer buf;
        http::response<http::string_body> res;
        http::read(stream, buf, res);
        return res;
    };
    const auto ok = get("/");
    CHECK(ok.result() == http::status::ok);
    CHECK(ok.body() == "<html>sandbox</html>");
    CHECK(ok[http::field::content_type] == "text/html");
    CHECK(get("/missing.js").result() == http::status::not_found);
    CHECK(get("/../etc/passwd").result() == http::status::not_found);
    CHECK(get("/sub").result() == http::status::not_found);
    std::filesystem::remove_all(dir);
}
