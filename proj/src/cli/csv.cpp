#include "fibersim/cli/csv.hpp"

#include "fibersim/cli/scenario.hpp"

#include <array>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace fibersim::cli {

namespace {

constexpr std::string_view kHeader = "t,cMx,cMy,cNx,cNy,dist,collided";
constexpr std::string_view kCollisionPrefix = "# collision_time=";

double parse_double(const std::string& s, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw ScenarioError("", "bad number '" + s + "'", line, 1);
    return x;
}

std::optional<Piece> parse_piece(const std::string& s) {
    for (Piece p : {Piece::Straight, Piece::DetourCCW, Piece::DetourCW, Piece::Degenerate})
        if (to_string(p) == s) return p;
    return std::nullopt;
}

}  // namespace

std::string format_double(double x) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", x);
    return buf.data();
}

Trajectory make_trajectory(std::span<const double> times, std::span<const Config> points,
                           std::optional<double> collision_time, std::span<const Piece> pieces) {
    Trajectory traj;
    traj.collision_time = collision_time;
    traj.with_piece = !pieces.empty();
    traj.rows.reserve(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        TrajectoryRow row{times[k], points[k], points[k].offset().norm(), false, std::nullopt};
        if (traj.with_piece) row.piece = pieces[k];
        traj.rows.push_back(row);
    }
    if (collision_time && !traj.rows.empty()) traj.rows.back().collided = true;
    return traj;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
    out << kHeader << (traj.with_piece ? ",piece\n" : "\n");
    for (const auto& r : traj.rows) {
        out << format_double(r.t) << ',' << format_double(r.e.cM.x) << ','
            << format_double(r.e.cM.y) << ',' << format_double(r.e.cN.x) << ','
            << format_double(r.e.cN.y) << ',' << format_double(r.dist) << ','
            << (r.collided ? '1' : '0');
        if (traj.with_piece) out << ',' << (r.piece ? to_string(*r.piece) : "");
        out << '\n';
    }
    if (traj.collision_time) out << kCollisionPrefix << format_double(*traj.collision_time) << '\n';
}

Trajectory read_csv(std::istream& in) {
    Trajectory traj;
    std::string line;
    if (!std::getline(in, line)) throw ScenarioError("", "empty file", 1, 1);
    if (line == std::string(kHeader) + ",piece")
        traj.with_piece = true;
    else if (line != kHeader)
        throw ScenarioError("", "unexpected header", 1, 1);

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line.starts_with(kCollisionPrefix)) {
            traj.collision_time = parse_double(line.substr(kCollisionPrefix.size()), lineno);
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        const std::size_t expected = traj.with_piece ? 8 : 7;
        if (cells.size() != expected)
            throw ScenarioError("", "expected " + std::to_string(expected) + " columns", lineno, 1);
        TrajectoryRow r;
        r.t = parse_double(cells[0], lineno);
        r.e = {{parse_double(cells[1], lineno), parse_double(cells[2], lineno)},
               {parse_double(cells[3], lineno), parse_double(cells[4], lineno)}};
        r.dist = parse_double(cells[5], lineno);
        if (cells[6] != "0" && cells[6] != "1")
            throw ScenarioError("", "collided must be 0 or 1", lineno, 1);
        r.collided = cells[6] == "1";
        if (traj.with_piece && !cells[7].empty()) {
            r.piece = parse_piece(cells[7]);
            if (!r.piece) throw ScenarioError("", "unknown piece '" + cells[7] + "'", lineno, 1);
        }
        traj.rows.push_back(r);
    }
    return traj;
}

}  // namespace fibersim::cli
