#include "fibersim/lifting.hpp"

#include "fibersim/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace fibersim {

ActuationFunction smoothstep_actuation() { return {2.0, 3.0}; }

Mechanism::Mechanism(FiberRule rule, bool linear, std::string name)
    : impl_(std::make_shared<const Impl>(Impl{std::move(rule), linear, std::move(name)})) {}

Form::Form(FiberRule rule, bool linear, std::string name)
    : impl_(std::make_shared<const Impl>(Impl{std::move(rule), linear, std::move(name)})) {}

namespace {

std::string fmt_param(const char* name, double v) {
    std::ostringstream os;
    os << name << '(' << v << ')';
    return os.str();
}

}  // namespace

Mechanism mech_copy() {
    return Mechanism([](const Config&, const BaseTangent& x) { return x.v; }, true, "copy");
}

Mechanism mech_damped(ActuationFunction psi) {
    return Mechanism(
        [psi](const Config& e, const BaseTangent& x) { return x.v * psi(e.offset().norm()); },
        true, "damped");
}

Mechanism mech_radial(double lambda) {
    return Mechanism(
        [lambda](const Config& e, const BaseTangent& x) { return x.v + e.offset() * lambda; },
        lambda == 0.0, fmt_param("radial", lambda));
}

Mechanism mech_orbit(double mu) {
    return Mechanism(
        [mu](const Config& e, const BaseTangent& x) { return x.v + rot90(e.offset()) * mu; },
        mu == 0.0, fmt_param("orbit", mu));
}

Mechanism mech_linear_const(double alpha, double beta) {
    if (alpha == 0.0 && beta == 0.0)
        throw Error(ErrorCode::InvalidParameters, "linear_const requires (alpha, beta) != (0, 0)");
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidParameters, "linear_const parameters must be finite");
    const Mat2 a = conformal(alpha, beta);
    std::ostringstream os;
    os << "linear_const(" << alpha << ", " << beta << ')';
    return Mechanism([a](const Config&, const BaseTangent& x) { return a * x.v; }, true,
                     os.str());
}

Mechanism affine_combine(std::function<double(const Config&)> theta, Mechanism l1, Mechanism l2) {
    const bool linear = l1.linear() && l2.linear();
    std::string name = "affine(" + l1.name() + ", " + l2.name() + ')';
    return Mechanism(
        [theta = std::move(theta), l1 = std::move(l1), l2 = std::move(l2)](
            const Config& e, const BaseTangent& x) {
            const double w = theta(e);
            return l1.fiber_velocity(e, x) * w + l2.fiber_velocity(e, x) * (1.0 - w);
        },
        linear, std::move(name));
}

Form pushing_form(ActuationFunction psi) {
    return Form(
        [psi](const Config& e, const BaseTangent& x) {
            const Vec2 c = e.offset();
            const double r = c.norm();
            const double gain = psi(r);
            if (gain == 0.0) return Vec2{};
            return c * (gain * x.v.norm() / r);
        },
        false, "pushing");
}

Mechanism add_form(Mechanism l, std::vector<Form> forms) {
    if (forms.empty()) return l;
    bool linear = l.linear();
    std::string name = l.name();
    for (const auto& f : forms) {
        linear = linear && f.linear();
        name += " + " + f.name();
    }
    return Mechanism(
        [l = std::move(l), forms = std::move(forms)](const Config& e, const BaseTangent& x) {
            Vec2 v = l.fiber_velocity(e, x);
            for (const auto& f : forms) v += f.fiber_velocity(e, x);
            return v;
        },
        linear, std::move(name));
}

bool verify_linearity(const Mechanism& l, int samples) {
    if (samples < 1) throw Error(ErrorCode::InvalidParameters, "samples must be >= 1");
    constexpr double kTol = 1e-10;
    std::mt19937_64 rng(0x6c696674ULL);
    std::uniform_real_distribution<double> pos(-5.0, 5.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> dist(2.0, 4.0);
    std::uniform_real_distribution<double> vel(-3.0, 3.0);
    std::uniform_real_distribution<double> scale(-3.0, 3.0);

    for (int i = 0; i < samples; ++i) {
        const Vec2 cn{pos(rng), pos(rng)};
        const double phi = angle(rng);
        // every fourth sample sits exactly on the boundary
        const double r = i % 4 == 0 ? kContactDistance : dist(rng);
        const Config e{cn + Vec2{std::cos(phi), std::sin(phi)} * r, cn};
        const Vec2 x1{vel(rng), vel(rng)};
        const Vec2 x2{vel(rng), vel(rng)};

        const Vec2 y1 = l.fiber_velocity(e, {cn, x1});
        const Vec2 y2 = l.fiber_velocity(e, {cn, x2});
        const Vec2 y12 = l.fiber_velocity(e, {cn, x1 + x2});
        if ((y12 - y1 - y2).norm() > kTol * (1.0 + y1.norm() + y2.norm())) return false;

        for (const double s : {scale(rng), -1.0}) {
            const Vec2 ys = l.fiber_velocity(e, {cn, x1 * s});
            if ((ys - y1 * s).norm() > kTol * (1.0 + std::abs(s) * y1.norm())) return false;
        }
    }
    return true;
}

}  // namespace fibersim
