#include "doctest.h"
#include "support.hpp"

#include "fibersim/error.hpp"
#include "fibersim/lifting.hpp"

using namespace fibersim;
using namespace fibersim::testing;

namespace {

Vec2 vm(const Mechanism& l, const Config& e, Vec2 v) { return l(e, {e.cN, v}).vM; }

const Config kTouching{{2, 0}, {0, 0}};

std::vector<Mechanism> builtins() {
    return {mech_copy(),
            mech_damped(),
            mech_radial(1.0),
            mech_radial(-0.5),
            mech_orbit(0.7),
            mech_linear_const(2.0, 0.0),
            mech_linear_const(0.3, -1.2),
            add_form(mech_copy(), {pushing_form()}),
            affine_combine([](const Config& e) { return smoothstep_actuation()(e.offset().norm()); },
                           mech_copy(), mech_linear_const(0.5, 0.5))};
}

}  // namespace

TEST_CASE("smoothstep_actuation") {
    const auto psi = smoothstep_actuation();
    CHECK(psi(2.0) == 1.0);
    CHECK(psi(1.0) == 1.0);
    CHECK(psi(3.0) == 0.0);
    CHECK(psi(10.0) == 0.0);
    // symmetry psi(2 + u) + psi(3 - u) = 1 forces psi(2.5) = 1/2
    for (double u : {0.1, 0.2, 0.37, 0.5})
        CHECK(psi(2.0 + u) + psi(3.0 - u) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(psi(2.5) == 0.5);

    // monotone, and C1 at both seams (one-sided slopes -> 0)
    double prev = 1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = psi(2.0 + i / 1000.0);
        CHECK(v <= prev);
        prev = v;
    }
    const double h = 1e-6;
    CHECK(std::abs((psi(2.0 + h) - psi(2.0)) / h) < 1e-5);
    CHECK(std::abs((psi(3.0) - psi(3.0 - h)) / h) < 1e-5);
}

TEST_CASE("mech_copy") {
    const auto l = mech_copy();
    CHECK(l.linear());
    CHECK(vm(l, {{7, 1}, {0, 0}}, {1, 2}) == Vec2{1, 2});
    CHECK(vm(l, {{7, 1}, {0, 0}}, {0, 0}) == Vec2{0, 0});
    const auto y = l(kTouching, {kTouching.cN, {3, -1}});
    CHECK(y.vM == Vec2{3, -1});
    CHECK((y.vM - y.vN).dot(kTouching.offset()) == 0.0);
}

TEST_CASE("mech_damped") {
    const auto l = mech_damped();
    CHECK(l.linear());
    CHECK(vm(l, kTouching, {1, 0}) == Vec2{1, 0});
    CHECK(vm(l, {{4, 0}, {0, 0}}, {1, 0}) == Vec2{0, 0});
    CHECK(vm(l, {{2.5, 0}, {0, 0}}, {2, 0}) == Vec2{1, 0});
}

TEST_CASE("mech_radial") {
    CHECK_FALSE(mech_radial(1.0).linear());
    CHECK(vm(mech_radial(1.0), kTouching, {0, 1}) == Vec2{2, 1});
    CHECK(vm(mech_radial(-1.0), {{0, 3}, {0, 0}}, {0, 0}) == Vec2{0, -3});
    Rng rng(30);
    for (int i = 0; i < 50; ++i) {
        const Config e = random_config(rng);
        const Vec2 v = random_vec(rng, 3);
        CHECK(vm(mech_radial(0.0), e, v) == vm(mech_copy(), e, v));
    }
}

TEST_CASE("mech_orbit") {
    CHECK(vm(mech_orbit(std::numbers::pi / 2), kTouching, {0, 0}) == Vec2{0, std::numbers::pi});
    CHECK(vm(mech_orbit(1.0), {{0, 2}, {0, 0}}, {1, 0}) == Vec2{-1, 0});
    CHECK(vm(mech_orbit(0.0), kTouching, {4, 5}) == Vec2{4, 5});
}

TEST_CASE("mech_linear_const") {
    CHECK(vm(mech_linear_const(1, 0), kTouching, {2, 3}) == Vec2{2, 3});
    CHECK(vm(mech_linear_const(0, 1), kTouching, {1, 0}) == Vec2{0, 1});
    CHECK(vm(mech_linear_const(2, 0), kTouching, {1, 1}) == Vec2{2, 2});
    try {
        mech_linear_const(0, 0);
        FAIL("expected InvalidParameters");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidParameters);
    }
}

TEST_CASE("affine_combine") {
    Rng rng(31);
    const auto one = [](const Config&) { return 1.0; };
    const auto zero = [](const Config&) { return 0.0; };
    const auto half = [](const Config&) { return 0.5; };
    const auto a = mech_orbit(0.4);
    const auto b = mech_linear_const(0.2, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Config e = random_config(rng);
        const Vec2 v = random_vec(rng, 3);
        CHECK(vm(affine_combine(one, a, b), e, v) == vm(a, e, v));
        CHECK(vm(affine_combine(zero, a, b), e, v) == vm(b, e, v));
        // 0.5 (v + c) + 0.5 (v - c) == v
        const Vec2 mixed = vm(affine_combine(half, mech_radial(1), mech_radial(-1)), e, v);
        CHECK((mixed - vm(mech_copy(), e, v)).norm() <= 1e-14 * (1 + e.offset().norm()));
    }
    CHECK(affine_combine(half, mech_copy(), mech_damped()).linear());
    CHECK_FALSE(affine_combine(half, mech_copy(), mech_radial(1)).linear());
}

TEST_CASE("pushing_form") {
    const auto f = pushing_form();
    CHECK_FALSE(f.linear());
    CHECK(f(kTouching, {kTouching.cN, {0, 1}}).vM == Vec2{1, 0});
    CHECK(f(kTouching, {kTouching.cN, {0, 1}}).vN == Vec2{0, 0});
    CHECK(f({{3, 0}, {0, 0}}, {{0, 0}, {5, 5}}).vM == Vec2{0, 0});
    CHECK(f({{0, 7}, {0, 0}}, {{0, 0}, {5, 5}}).vM == Vec2{0, 0});
    CHECK(f(kTouching, {kTouching.cN, {1, 0}}).vM == Vec2{1, 0});
    CHECK(f(kTouching, {kTouching.cN, {-1, 0}}).vM == Vec2{1, 0});

    Rng rng(32);
    for (int i = 0; i < 500; ++i) {
        const Config e = random_config(rng, 2.0, 3.2);
        const Vec2 v = random_vec(rng, 3);
        const double s = uniform(rng, 0.01, 10.0);
        const Vec2 a = f(e, {e.cN, v * s}).vM;
        const Vec2 b = f(e, {e.cN, v}).vM * s;
        CHECK((a - b).norm() <= 1e-12 * (1 + b.norm()));
    }
}

TEST_CASE("add_form") {
    const auto copy = mech_copy();
    const auto pushed = add_form(copy, {pushing_form()});
    const auto twice = add_form(copy, {pushing_form(), pushing_form()});
    CHECK(add_form(copy, {}).linear());
    CHECK(vm(add_form(copy, {}), kTouching, {0, 1}) == Vec2{0, 1});
    CHECK(vm(pushed, kTouching, {0, 1}) == Vec2{1, 1});
    CHECK(vm(twice, kTouching, {0, 1}) == Vec2{2, 1});
    CHECK_FALSE(pushed.linear());
}

TEST_CASE("verify_linearity agrees with the declared flag") {
    CHECK(verify_linearity(mech_copy(), 200));
    CHECK_FALSE(verify_linearity(mech_radial(1.0), 200));
    CHECK_FALSE(verify_linearity(add_form(mech_copy(), {pushing_form()}), 200));
    for (const auto& l : builtins()) {
        INFO(l.name());
        CHECK(verify_linearity(l, 300) == l.linear());
    }
    CHECK(verify_linearity(mech_radial(0.0), 50));
    CHECK_THROWS_AS(verify_linearity(mech_copy(), 0), Error);
}

TEST_CASE("projection contract, bitwise") {
    Rng rng(33);
    for (const auto& l : builtins()) {
        for (int i = 0; i < 1000; ++i) {
            const Config e = random_config(rng, 2.0, 4.0);
            const BaseTangent x{e.cN, random_vec(rng, 5)};
            const auto y = l(e, x);
            CHECK(differential_project(y).v == x.v);
            CHECK(differential_project(y).at == x.at);
        }
    }
}

TEST_CASE("linear mechanisms are tangent to the boundary") {
    Rng rng(34);
    std::vector<Mechanism> linear;
    // linear_const with (alpha, beta) != (1, 0) is linear but not a lifting
    // into E: at the boundary it produces inadmissible velocities.
    for (const auto& l : builtins())
        if (verify_linearity(l, 100) && !l.name().starts_with("linear_const")) linear.push_back(l);
    linear.push_back(mech_linear_const(1, 0));
    REQUIRE(linear.size() >= 4);
    for (const auto& l : linear) {
        for (int i = 0; i < 1000; ++i) {
            const Config e = random_boundary_config(rng);
            const auto y = l(e, {e.cN, random_vec(rng, 3)});
            CHECK(std::abs((y.vM - y.vN).dot(e.offset())) <= 1e-10);
        }
    }
}

TEST_CASE("pushing form makes the boundary velocity point inward") {
    Rng rng(35);
    const auto pushed = add_form(mech_copy(), {pushing_form()});
    for (int i = 0; i < 1000; ++i) {
        const Config e = random_boundary_config(rng);
        Vec2 v = random_vec(rng, 3);
        if (v.norm() < 1e-6) v = {1, 0};
        const auto y = pushed(e, {e.cN, v});
        CHECK((y.vM - y.vN).dot(e.offset()) > 0.0);
        CHECK(is_admissible_velocity(y));
    }
}

TEST_CASE("non-identity conformal mechanisms leave E at the boundary") {
    Rng rng(36);
    const auto l = mech_linear_const(2.0, 0.0);
    int inadmissible = 0;
    for (int i = 0; i < 200; ++i) {
        const Config e = random_boundary_config(rng);
        if (!is_admissible_velocity(l(e, {e.cN, random_vec(rng, 3)}))) ++inadmissible;
    }
    CHECK(inadmissible > 50);
}
