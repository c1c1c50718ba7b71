#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <utility>

#include "orbitmetric/errors.hpp"
#include "orbitmetric/quotient.hpp"

namespace orbitmetric {

/// A map from quotient points into a finite-dimensional inner-product space.
///
/// `eval` acts on orbit representatives and must be constant on orbit
/// closures. `domain_distance` is the quotient metric of the input space, so
/// bilipschitz ratios can be measured without knowing how the domain was
/// assembled (plain action quotient, sphere restriction, direct sum, ...).
/// `claimed_alpha`/`claimed_beta` are metadata propagated by the composition
/// rules; the test suite measures them rather than trusting them.
struct InvariantMap {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> domain_distance;
    int input_dim = 0;
    int target_dim = 0;
    std::optional<double> claimed_alpha;
    std::optional<double> claimed_beta;
    bool unit_sphere_output = false;
    std::shared_ptr<const GroupAction> action;  // set when the domain is an action quotient

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return eval(x); }
    Eigen::VectorXd operator()(const QuotientPoint& p) const { return eval(p.rep); }

    double distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const { return domain_distance(x, y); }
};

/// Attaches the quotient metric of `action` as the domain distance.
inline InvariantMap make_action_map(std::shared_ptr<const GroupAction> action, int target_dim,
                                    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval) {
    InvariantMap f;
    f.action = action;
    f.input_dim = action->ambient_dim();
    f.target_dim = target_dim;
    f.eval = std::move(eval);
    f.domain_distance = [action](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        return quotient_distance(*action, x, y);
    };
    return f;
}

/// Radial Pythagorean identity: d([au],[bv])^2 = (a-b)^2 + ab d([u],[v])^2
/// for unit u, v and nonnegative radii.
inline double radial_distance(double a, double b, double sphere_dist) {
    if (a < 0 || b < 0) throw InvalidParameter("radial_distance: radii must be nonnegative");
    if (sphere_dist < 0 || sphere_dist > 2.0 + 1e-12)
        throw InvalidParameter("radial_distance: sphere distance must lie in [0,2]");
    return std::sqrt((a - b) * (a - b) + a * b * sphere_dist * sphere_dist);
}

/// Homogeneous extension f*([cu]) = c f([u]), f*([0]) = 0.
///
/// For a sphere map with optimal bounds (alpha, beta) the extension has
/// optimal bounds (min{alpha,1}, max{beta,1}).
inline InvariantMap homogeneous_extension(const InvariantMap& f) {
    if (!f.unit_sphere_output) throw NotSphereMap("homogeneous_extension requires a map with unit-sphere outputs");
    InvariantMap out = f;
    out.unit_sphere_output = false;
    const auto inner = f.eval;
    const int target = f.target_dim;
    out.eval = [inner, target](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const double r = x.norm();
        if (r < 1e-14) return Eigen::VectorXd::Zero(target);
        return r * inner(x / r);
    };
    if (f.claimed_alpha) out.claimed_alpha = std::min(*f.claimed_alpha, 1.0);
    if (f.claimed_beta) out.claimed_beta = std::max(*f.claimed_beta, 1.0);
    return out;
}

/// Lift into one extra dimension: x -> (t f(x), sqrt(1-t^2)). Scales both
/// optimal bounds by t while keeping outputs on the unit sphere.
inline InvariantMap sphere_lift(const InvariantMap& f, double t) {
    if (!(t > 0.0 && t <= 1.0)) throw InvalidParameter("sphere_lift: t must lie in (0,1]");
    if (!f.unit_sphere_output) throw NotSphereMap("sphere_lift requires a map with unit-sphere outputs");
    InvariantMap out = f;
    out.target_dim = f.target_dim + 1;
    const auto inner = f.eval;
    const double tail = std::sqrt(std::max(0.0, 1.0 - t * t));
    out.eval = [inner, t, tail](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Eigen::VectorXd y = inner(x);
        Eigen::VectorXd z(y.size() + 1);
        z.head(y.size()) = t * y;
        z(y.size()) = tail;
        return z;
    };
    if (f.claimed_alpha) out.claimed_alpha = t * *f.claimed_alpha;
    if (f.claimed_beta) out.claimed_beta = t * *f.claimed_beta;
    return out;
}

/// Converts a bounded map into a sphere-valued one:
/// x -> (t g(x), sqrt(1 - |t g(x)|^2)), for 0 < t < 1/bound.
/// Bounds become t*alpha and t*beta/sqrt(1 - t^2 bound^2), possibly suboptimal.
inline InvariantMap normalize_lift(const InvariantMap& g, double bound, double t) {
    if (!(bound > 0)) throw InvalidParameter("normalize_lift: bound must be positive");
    if (!(t > 0.0 && t < 1.0 / bound)) throw InvalidParameter("normalize_lift: t must lie in (0, 1/bound)");
    InvariantMap out = g;
    out.target_dim = g.target_dim + 1;
    out.unit_sphere_output = true;
    const auto inner = g.eval;
    out.eval = [inner, bound, t](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Eigen::VectorXd y = inner(x);
        if (y.norm() > bound * (1.0 + 1e-12))
            throw DomainViolation("normalize_lift: |g(x)| exceeds the declared bound");
        Eigen::VectorXd z(y.size() + 1);
        z.head(y.size()) = t * y;
        z(y.size()) = std::sqrt(std::max(0.0, 1.0 - t * t * y.squaredNorm()));
        return z;
    };
    const double upper_factor = t / std::sqrt(1.0 - t * t * bound * bound);
    if (g.claimed_alpha) out.claimed_alpha = t * *g.claimed_alpha;
    if (g.claimed_beta) out.claimed_beta = upper_factor * *g.claimed_beta;
    return out;
}

/// Concatenation over a product domain. With `rescale`, each factor is scaled
/// so its claimed lower bound is 1, giving claimed bounds (1, max distortions).
inline InvariantMap direct_sum(const InvariantMap& f1, const InvariantMap& f2, bool rescale = true) {
    if (f1.input_dim <= 0 || f2.input_dim <= 0)
        throw InvalidParameter("direct_sum: factors must have fixed input dimensions");
    double s1 = 1.0, s2 = 1.0;
    if (rescale) {
        if (!f1.claimed_alpha || !f2.claimed_alpha || *f1.claimed_alpha <= 0 || *f2.claimed_alpha <= 0)
            throw MissingBounds("direct_sum: rescaling requires known positive lower bounds");
        s1 = 1.0 / *f1.claimed_alpha;
        s2 = 1.0 / *f2.claimed_alpha;
    }

    InvariantMap out;
    out.input_dim = f1.input_dim + f2.input_dim;
    out.target_dim = f1.target_dim + f2.target_dim;
    out.unit_sphere_output = false;
    const int d1 = f1.input_dim, d2 = f2.input_dim;
    const auto e1 = f1.eval, e2 = f2.eval;
    out.eval = [e1, e2, d1, d2, s1, s2](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        if (x.size() != d1 + d2) throw DimensionMismatch("direct_sum: input dimension mismatch");
        const Eigen::VectorXd y1 = s1 * e1(x.head(d1));
        const Eigen::VectorXd y2 = s2 * e2(x.tail(d2));
        Eigen::VectorXd z(y1.size() + y2.size());
        z << y1, y2;
        return z;
    };
    const auto g1 = f1.domain_distance, g2 = f2.domain_distance;
    out.domain_distance = [g1, g2, d1, d2](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        const double a = g1(x.head(d1), y.head(d1));
        const double b = g2(x.tail(d2), y.tail(d2));
        return std::sqrt(a * a + b * b);
    };
    if (rescale) {
        out.claimed_alpha = 1.0;
        if (f1.claimed_beta && f2.claimed_beta)
            out.claimed_beta = std::max(*f1.claimed_beta / *f1.claimed_alpha, *f2.claimed_beta / *f2.claimed_alpha);
    } else {
        if (f1.claimed_alpha && f2.claimed_alpha) out.claimed_alpha = std::min(*f1.claimed_alpha, *f2.claimed_alpha);
        if (f1.claimed_beta && f2.claimed_beta) out.claimed_beta = std::max(*f1.claimed_beta, *f2.claimed_beta);
    }
    return out;
}

}  // namespace orbitmetric
