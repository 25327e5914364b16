#pragma once
/**
 * @file lifting.hpp
 * @brief Reaction mechanisms (infinitesimal lifting functions) and reaction forms.
 *
 * A mechanism maps a configuration e and a base velocity X at p(e) to a total
 * velocity Y with dp(Y) = X. Implementations only choose the fiber component
 * vM; the wrapper copies X into vN, so the projection contract holds exactly.
 *
 * Linear mechanisms are Ehresmann connections. On the boundary of E they are
 * forced to be tangent to the boundary, which is why pushing away from the
 * obstacle needs a nonlinear reaction form such as pushing_form().
 */

#include "fibersim/bundle.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace fibersim {

/// Cutoff psi(r): 1 for r <= r_on, 0 for r >= r_off, C^1 smoothstep between.
struct ActuationFunction {
    double r_on{2.0};
    double r_off{3.0};

    double operator()(double r) const {
        if (r <= r_on) return 1.0;
        if (r >= r_off) return 0.0;
        const double u = (r - r_on) / (r_off - r_on);
        return 1.0 - u * u * (3.0 - 2.0 * u);
    }
};

/// psi with r_on = 2, r_off = 3.
ActuationFunction smoothstep_actuation();

/// Fiber-velocity rule behind a Mechanism or a Form.
using FiberRule = std::function<Vec2(const Config&, const BaseTangent&)>;

/// Immutable, cheaply copyable infinitesimal lifting function.
class Mechanism {
public:
    Mechanism(FiberRule rule, bool linear, std::string name);

    /// Y = (vM, X.v) at e.
    TotalTangent operator()(const Config& e, const BaseTangent& x) const {
        return {e, impl_->rule(e, x), x.v};
    }
    Vec2 fiber_velocity(const Config& e, const BaseTangent& x) const { return impl_->rule(e, x); }

    /// Declared linearity in X for fixed e (checked by verify_linearity).
    bool linear() const { return impl_->linear; }
    const std::string& name() const { return impl_->name; }

private:
    struct Impl {
        FiberRule rule;
        bool linear;
        std::string name;
    };
    std::shared_ptr<const Impl> impl_;
};

/// Vertical-valued correction term; output always has vN = 0.
class Form {
public:
    Form(FiberRule rule, bool linear, std::string name);

    TotalTangent operator()(const Config& e, const BaseTangent& x) const {
        return {e, impl_->rule(e, x), Vec2{}};
    }
    Vec2 fiber_velocity(const Config& e, const BaseTangent& x) const { return impl_->rule(e, x); }
    bool linear() const { return impl_->linear; }
    const std::string& name() const { return impl_->name; }

private:
    struct Impl {
        FiberRule rule;
        bool linear;
        std::string name;
    };
    std::shared_ptr<const Impl> impl_;
};

/// vM = vN. The ego disk repeats the obstacle motion; the offset is conserved.
Mechanism mech_copy();
/// vM = psi(|cM - cN|) vN. Reduces to copy on contact and to no reaction beyond r_off.
Mechanism mech_damped(ActuationFunction psi = smoothstep_actuation());
/// vM = vN + lambda (cM - cN). Affine in e; distance evolves as d(0) e^{lambda t}.
Mechanism mech_radial(double lambda);
/// vM = vN + mu rot90(cM - cN). Orbits the obstacle at angular rate mu.
Mechanism mech_orbit(double mu);
/// vM = (alpha I + beta J) vN. Throws InvalidParameters for (0, 0).
Mechanism mech_linear_const(double alpha, double beta);

/// Pointwise blend theta(e) L1 + (1 - theta(e)) L2.
Mechanism affine_combine(std::function<double(const Config&)> theta, Mechanism l1, Mechanism l2);

/// l(e, X) = psi(|cM - cN|) |X| (cM - cN)/|cM - cN|. Positively homogeneous, not linear.
Form pushing_form(ActuationFunction psi = smoothstep_actuation());

/// L + sum of forms.
Mechanism add_form(Mechanism l, std::vector<Form> forms);

/// Randomized check of additivity and homogeneity in X at `samples` random
/// points (deterministic seed). Tolerance 1e-10, scaled by the magnitudes involved.
bool verify_linearity(const Mechanism& l, int samples);

}  // namespace fibersim
