#include "fibersim/cli/scenario.hpp"

#include "fibersim/analysis.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <random>
#include <sstream>

namespace fibersim::cli {

using nlohmann::json;

namespace {

std::string describe(const std::string& field, const std::string& msg, std::size_t line,
                     std::size_t column) {
    std::ostringstream os;
    if (line > 0) os << "line " << line << ", column " << column << ": ";
    if (!field.empty()) os << "field '" << field << "': ";
    os << msg;
    return os.str();
}

std::string join(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ScenarioError(field, msg);
}

const json& object(const json& j, const std::string& where,
                   std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) fail(join(where, key), "unknown field");
    }
    return j;
}

const json& member(const json& j, const std::string& where, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(join(where, key), "missing required field");
    return *it;
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) fail(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(field, "must be finite");
    return x;
}

double number(const json& j, const std::string& where, const char* key) {
    return number(member(j, where, key), join(where, key));
}

std::optional<double> opt_number(const json& j, const std::string& where, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    return number(*it, join(where, key));
}

double positive(const json& j, const std::string& where, const char* key) {
    const double x = number(j, where, key);
    if (!(x > 0)) fail(join(where, key), "must be positive");
    return x;
}

Vec2 point(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2) fail(field, "expected [x, y]");
    return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
}

std::string kind(const json& j, const std::string& where) {
    const json& k = member(j, where, "kind");
    if (!k.is_string()) fail(join(where, "kind"), "expected a string");
    return k.get<std::string>();
}

ActuationFunction actuation(const json& j, const std::string& where) {
    ActuationFunction psi = smoothstep_actuation();
    psi.r_on = opt_number(j, where, "r_on").value_or(psi.r_on);
    psi.r_off = opt_number(j, where, "r_off").value_or(psi.r_off);
    if (!(psi.r_off > psi.r_on)) fail(join(where, "r_off"), "must exceed r_on");
    return psi;
}

Form parse_form(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    const std::string k = kind(j, where);
    if (k == "pushing") {
        object(j, where, {"kind", "r_on", "r_off"});
        return pushing_form(actuation(j, where));
    }
    fail(join(where, "kind"), "unknown form kind '" + k + "'");
}

template <class F>
auto guarded(const std::string& field, F&& f) {
    try {
        return f();
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& e) {
        throw ScenarioError(field, e.what());
    }
}

std::shared_ptr<const BaseCurve> parse_obstacle(const json& j, const Scenario& s) {
    const std::string where = "obstacle_path";
    if (!j.is_object()) fail(where, "expected an object");
    const std::string k = kind(j, where);
    const double t1 = s.duration;
    const Vec2 start = s.initial.cN;

    auto spline = [&](std::vector<Vec2> pts, std::optional<double> speed) {
        return guarded(where, [&]() -> std::shared_ptr<const BaseCurve> {
            if (speed) {
                if (!(*speed > 0)) fail(join(where, "speed"), "must be positive");
                return std::make_shared<SplineCurve>(std::move(pts), 0.0, t1, *speed);
            }
            return std::make_shared<SplineCurve>(std::move(pts), 0.0, t1);
        });
    };

    if (k == "constant") {
        object(j, where, {"kind"});
        return std::make_shared<ConstantCurve>(start, 0.0, t1);
    }
    if (k == "spline") {
        object(j, where, {"kind", "waypoints", "speed"});
        const json& w = member(j, where, "waypoints");
        const std::string field = join(where, "waypoints");
        if (!w.is_array() || w.size() < 2) fail(field, "expected at least 2 waypoints");
        std::vector<Vec2> pts;
        for (std::size_t i = 0; i < w.size(); ++i)
            pts.push_back(point(w[i], field + "[" + std::to_string(i) + "]"));
        if ((pts.front() - start).norm() > kAdmissibilityTol)
            fail(field + "[0]", "first waypoint must equal initial.cN");
        return spline(std::move(pts), opt_number(j, where, "speed"));
    }
    if (k == "random_spline") {
        object(j, where, {"kind", "count", "spacing", "speed"});
        const json& c = member(j, where, "count");
        if (!c.is_number_integer() || c.get<long long>() < 2)
            fail(join(where, "count"), "expected an integer >= 2");
        const double spacing = positive(j, where, "spacing");
        std::mt19937_64 rng(s.seed);
        std::vector<Vec2> pts{start};
        for (long long i = 1; i < c.get<long long>(); ++i) {
            const double angle = 2.0 * std::numbers::pi * unit_uniform(rng());
            const double r = spacing * (0.5 + 0.5 * unit_uniform(rng()));
            pts.push_back(pts.back() + Vec2{std::cos(angle), std::sin(angle)} * r);
        }
        return spline(std::move(pts), opt_number(j, where, "speed"));
    }
    if (k == "polyline") {
        object(j, where, {"kind", "knots", "points"});
        const json& kn = member(j, where, "knots");
        const json& pt = member(j, where, "points");
        if (!kn.is_array()) fail(join(where, "knots"), "expected an array");
        if (!pt.is_array() || pt.size() != kn.size())
            fail(join(where, "points"), "expected one point per knot");
        std::vector<double> knots;
        std::vector<Vec2> pts;
        for (std::size_t i = 0; i < kn.size(); ++i) {
            const std::string idx = "[" + std::to_string(i) + "]";
            knots.push_back(number(kn[i], join(where, "knots") + idx));
            pts.push_back(point(pt[i], join(where, "points") + idx));
        }
        if (knots.empty() || knots.front() != 0.0) fail(join(where, "knots"), "must start at 0");
        if ((pts.front() - start).norm() > kAdmissibilityTol)
            fail(join(where, "points") + "[0]", "first point must equal initial.cN");
        return guarded(where, [&]() -> std::shared_ptr<const BaseCurve> {
            return std::make_shared<PolylineCurve>(std::move(knots), std::move(pts));
        });
    }
    if (k == "adversary") {
        object(j, where, {"kind", "speed"});
        const double speed = positive(j, where, "speed");
        if (!s.mechanism.conformal) fail(where, "adversary requires a linear_const mechanism");
        const auto [alpha, beta] = *s.mechanism.conformal;
        return guarded(where, [&]() -> std::shared_ptr<const BaseCurve> {
            const auto geom = collision_geometry(alpha, beta, s.initial.cM, s.initial.cN);
            return std::make_shared<PolylineCurve>(adversary_path(geom, start, speed));
        });
    }
    fail(join(where, "kind"), "unknown obstacle path kind '" + k + "'");
}

}  // namespace

ScenarioError::ScenarioError(std::string field, const std::string& msg, std::size_t line,
                             std::size_t column)
    : Error(ErrorCode::MalformedScenario, describe(field, msg, line, column)),
      field_(std::move(field)),
      line_(line),
      column_(column) {}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

MechanismSpec parse_mechanism(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    const std::string k = kind(j, where);
    MechanismSpec spec{j, mech_copy(), std::nullopt};
    if (k == "copy") {
        object(j, where, {"kind"});
    } else if (k == "damped") {
        object(j, where, {"kind", "r_on", "r_off"});
        spec.mechanism = mech_damped(actuation(j, where));
    } else if (k == "radial") {
        object(j, where, {"kind", "lambda"});
        spec.mechanism = mech_radial(number(j, where, "lambda"));
    } else if (k == "orbit") {
        object(j, where, {"kind", "mu"});
        spec.mechanism = mech_orbit(number(j, where, "mu"));
    } else if (k == "linear_const") {
        object(j, where, {"kind", "alpha", "beta"});
        const double alpha = number(j, where, "alpha");
        const double beta = number(j, where, "beta");
        spec.mechanism = guarded(where, [&] { return mech_linear_const(alpha, beta); });
        spec.conformal = std::pair{alpha, beta};
    } else if (k == "composite") {
        object(j, where, {"kind", "base", "forms", "theta"});
        Mechanism base = parse_mechanism(member(j, where, "base"), join(where, "base")).mechanism;
        if (const auto it = j.find("theta"); it != j.end()) {
            const std::string tw = join(where, "theta");
            object(*it, tw, {"other", "r_on", "r_off"});
            const ActuationFunction psi = actuation(*it, tw);
            Mechanism other = parse_mechanism(member(*it, tw, "other"), join(tw, "other")).mechanism;
            base = affine_combine([psi](const Config& e) { return psi(e.offset().norm()); },
                                  std::move(base), std::move(other));
        }
        const json& f = member(j, where, "forms");
        if (!f.is_array()) fail(join(where, "forms"), "expected an array");
        std::vector<Form> forms;
        for (std::size_t i = 0; i < f.size(); ++i)
            forms.push_back(parse_form(f[i], join(where, "forms") + "[" + std::to_string(i) + "]"));
        spec.mechanism = add_form(std::move(base), std::move(forms));
    } else {
        fail(join(where, "kind"), "unknown mechanism kind '" + k + "'");
    }
    return spec;
}

Scenario parse_scenario(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // locate the byte offset reported by the parser
        std::size_t line = 1, column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ScenarioError("", "invalid JSON", line, column);
    }

    object(j, "", {"version", "mechanism", "initial", "obstacle_path", "duration", "step", "seed"});
    const json& version = member(j, "", "version");
    if (!version.is_number_integer() || version.get<long long>() != 1)
        fail("version", "unsupported version (expected 1)");

    Scenario s{parse_mechanism(member(j, "", "mechanism")), {}, nullptr, 1.0, 1e-3, 0};
    const json& initial = object(member(j, "", "initial"), "initial", {"cM", "cN"});
    s.initial = {point(member(initial, "initial", "cM"), "initial.cM"),
                 point(member(initial, "initial", "cN"), "initial.cN")};
    if (!is_admissible(s.initial)) fail("initial", "initial configuration is inadmissible (|cM - cN| < 2)");
    s.duration = positive(j, "", "duration");
    if (j.contains("step")) s.step = positive(j, "", "step");
    if (const auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer()) fail("seed", "expected an integer");
        s.seed = it->is_number_unsigned() ? it->get<std::uint64_t>()
                                          : static_cast<std::uint64_t>(it->get<std::int64_t>());
    }
    s.obstacle = parse_obstacle(member(j, "", "obstacle_path"), s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ScenarioError("", "cannot read " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace fibersim::cli
