#include "doctest.h"
#include "support.hpp"

#include "fibersim/cli/csv.hpp"
#include "fibersim/cli/scenario.hpp"
#include "fibersim/integrate.hpp"

#include <cstdlib>
#include <cstring>
#include <sstream>

using namespace fibersim;
using namespace fibersim::cli;
using namespace fibersim::testing;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_bits(const Config& a, const Config& b) {
    return same_bits(a.cM.x, b.cM.x) && same_bits(a.cM.y, b.cM.y) && same_bits(a.cN.x, b.cN.x) &&
           same_bits(a.cN.y, b.cN.y);
}

}  // namespace

TEST_CASE("format_double round-trips") {
    Rng rng(70);
    for (int i = 0; i < 10000; ++i) {
        const double x = uniform(rng, -1, 1) * std::pow(10.0, uniform(rng, -300, 300));
        CHECK(same_bits(std::strtod(format_double(x).c_str(), nullptr), x));
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("trajectory CSV round-trip is bitwise") {
    Rng rng(71);
    const Config e0{{4, 0}, {0, 0}};
    const auto gamma = random_spline(rng, e0.cN, 2.0, 5, 1.0);
    const auto lift = integrate_lift(mech_radial(-0.7), e0, gamma);
    REQUIRE_FALSE(lift.completed);

    const Trajectory traj = make_trajectory(lift.path.times(), lift.path.points(), lift.collision_time);
    std::stringstream buf;
    write_csv(buf, traj);
    const std::string text = buf.str();
    CHECK(text.starts_with("t,cMx,cMy,cNx,cNy,dist,collided\n"));
    CHECK(text.find("# collision_time=") != std::string::npos);

    const Trajectory back = read_csv(buf);
    REQUIRE(back.rows.size() == lift.path.size());
    REQUIRE(back.collision_time);
    CHECK(same_bits(*back.collision_time, *lift.collision_time));
    for (std::size_t k = 0; k < back.rows.size(); ++k) {
        CHECK(same_bits(back.rows[k].t, lift.path.time(k)));
        CHECK(same_bits(back.rows[k].e, lift.path[k]));
        CHECK(same_bits(back.rows[k].dist, lift.path[k].offset().norm()));
        CHECK(back.rows[k].collided == (k + 1 == back.rows.size()));
    }
}

TEST_CASE("piece column") {
    const std::vector<double> times{0.0, 0.5, 1.0};
    const std::vector<Config> points{{{3, 0}, {0, 0}}, {{0, 3}, {0, 0}}, {{-3, 0}, {0, 0}}};
    const std::vector<Piece> pieces{Piece::Degenerate, Piece::DetourCW, Piece::Straight};
    const Trajectory traj = make_trajectory(times, points, std::nullopt, pieces);
    std::stringstream buf;
    write_csv(buf, traj);
    CHECK(buf.str().starts_with("t,cMx,cMy,cNx,cNy,dist,collided,piece\n0,3,0,0,0,3,0,Degenerate\n"));
    const Trajectory back = read_csv(buf);
    REQUIRE(back.with_piece);
    REQUIRE(back.rows.size() == 3);
    CHECK(back.rows[1].piece == Piece::DetourCW);
    CHECK_FALSE(back.collision_time);
}

TEST_CASE("malformed CSV") {
    auto read = [](const std::string& text) {
        std::stringstream s(text);
        return read_csv(s);
    };
    CHECK_THROWS_AS(read(""), ScenarioError);
    CHECK_THROWS_AS(read("t,x\n"), ScenarioError);
    CHECK_THROWS_AS(read("t,cMx,cMy,cNx,cNy,dist,collided\n0,1,2\n"), ScenarioError);
    CHECK_THROWS_AS(read("t,cMx,cMy,cNx,cNy,dist,collided\n0,1,2,3,4,5,7\n"), ScenarioError);
    CHECK_THROWS_AS(read("t,cMx,cMy,cNx,cNy,dist,collided\n0,1,2,3,4,five,0\n"), ScenarioError);
    try {
        read("t,cMx,cMy,cNx,cNy,dist,collided\n0,3,0,0,0,3,0\n0,1,2\n");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 3);
    }
}
