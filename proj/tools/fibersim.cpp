// fibersim command line: simulate, analyze, plan, serve.

#include "fibersim/cli/commands.hpp"
#include "fibersim/cli/server.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace fibersim;
using namespace fibersim::cli;

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("fibersim");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::off);
    const char* env = std::getenv("FIBERSIM_LOG");
    if (!env) return;
    const std::string level(env);
    if (level == "info") spdlog::set_level(spdlog::level::info);
    else if (level == "debug") spdlog::set_level(spdlog::level::debug);
    else if (level != "off") std::cerr << "warning: FIBERSIM_LOG must be off, info or debug\n";
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string cell; std::getline(ss, cell, ',');) {
        std::size_t used = 0;
        const double x = std::stod(cell, &used);
        if (used != cell.size() || !std::isfinite(x)) throw std::invalid_argument(cell);
        out.push_back(x);
    }
    return out;
}

Vec2 parse_point(const std::string& text) {
    const auto v = parse_numbers(text);
    if (v.size() != 2) throw std::invalid_argument(text);
    return {v[0], v[1]};
}

/// CLI11 validator for "x,y" (or "x,y,z,w" when `allow4`).
CLI::Validator numbers(bool allow4) {
    return CLI::Validator(
        [allow4](std::string& s) -> std::string {
            try {
                const auto v = parse_numbers(s);
                if (v.size() == 2 || (allow4 && v.size() == 4)) return {};
            } catch (const std::exception&) {
            }
            return allow4 ? "expected x,y or x,y,x,y" : "expected x,y";
        },
        allow4 ? "X,Y[,X,Y]" : "X,Y");
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"fibersim: reactive motion of a disk avoiding a moving disk obstacle"};
    app.require_subcommand(1);

    std::string scenario, out;
    auto* simulate = app.add_subcommand("simulate", "integrate a scenario and write a trajectory CSV");
    simulate->add_option("--scenario", scenario, "scenario JSON file")->required();
    simulate->add_option("--out", out, "output CSV file")->required();

    double alpha = 0, beta = 0;
    std::string cm0, cn0;
    auto* analyze = app.add_subcommand("analyze", "collision geometry of vM = (alpha I + beta J) vN");
    analyze->add_option("--alpha", alpha)->required();
    analyze->add_option("--beta", beta)->required();
    analyze->add_option("--cm0", cm0, "initial ego centre x,y")->required()->check(numbers(false));
    analyze->add_option("--cn0", cn0, "initial obstacle centre x,y")->required()->check(numbers(false));

    PlanRequest plan_request;
    std::string start, goal;
    auto* plan = app.add_subcommand("plan", "plan between two configurations over the scenario's obstacle motion");
    plan->add_option("--scenario", scenario, "scenario JSON file")->required();
    plan->add_option("--start", start, "start cM (or cM,cN)")->required()->check(numbers(true));
    plan->add_option("--goal", goal, "goal cM (or cM,cN)")->required()->check(numbers(true));
    plan->add_option("--out", out, "output CSV file")->required();
    plan->add_flag("--moving-target", plan_request.moving_target,
                   "chase the goal lifted along the obstacle motion");
    plan->add_option("--intervals", plan_request.intervals, "output intervals")->check(CLI::PositiveNumber);
    plan->add_option("--threads", plan_request.threads, "worker threads")->check(CLI::PositiveNumber);

    ServerOptions server_options;
    std::string static_dir, record;
    auto* serve = app.add_subcommand("serve", "run the interactive sandbox over WebSocket");
    serve->add_option("--port", server_options.port, "TCP port")->required();
    serve->add_option("--address", server_options.address, "bind address");
    serve->add_option("--vmax", server_options.sandbox.vmax, "obstacle speed limit")
        ->check(CLI::NonNegativeNumber);
    serve->add_option("--step", server_options.sandbox.step, "simulated seconds per tick")
        ->check(CLI::PositiveNumber);
    serve->add_option("--static", static_dir, "directory served over plain HTTP")->check(CLI::ExistingDirectory);
    serve->add_option("--record", record, "append applied client messages as JSON lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    if (simulate->parsed()) return run_simulate(scenario, out, std::cerr);
    if (analyze->parsed()) return run_analyze(alpha, beta, parse_point(cm0), parse_point(cn0), std::cout, std::cerr);
    if (plan->parsed()) {
        plan_request.scenario = scenario;
        plan_request.out = out;
        plan_request.start = parse_numbers(start);
        plan_request.goal = parse_numbers(goal);
        return run_plan(plan_request, std::cout, std::cerr);
    }

    try {
        if (!static_dir.empty()) server_options.static_dir = static_dir;
        std::ofstream log;
        if (!record.empty()) {
            log.open(record, std::ios::app);
            if (!log) throw std::runtime_error("cannot open " + record);
            server_options.on_message = [&log](std::uint64_t tick, std::string_view message) {
                log << nlohmann::json{{"tick", tick}, {"message", message}}.dump() << '\n';
                log.flush();
            };
        }
        server_options.handle_signals = true;
        Server server(server_options);
        std::cout << "serving on ws://" << server_options.address << ':' << server.port() << std::endl;
        server.run();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitOk;
}
