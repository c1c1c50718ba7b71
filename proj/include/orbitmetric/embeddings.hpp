#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <memory>

#include "orbitmetric/invariant_map.hpp"

namespace orbitmetric {

/// Sphere-level map [x] -> x (x)^T for the sign action, with optimal bounds
/// (1, sqrt(2)) on the sphere quotient. Inputs are normalized defensively.
inline InvariantMap projective_sphere_map(int d) {
    if (d < 2) throw DimensionMismatch("projective map needs dimension at least 2");
    auto action = std::make_shared<GroupAction>(GroupAction::sign(d));
    InvariantMap f = make_action_map(action, d * d, [d](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const double r = x.norm();
        if (r < 1e-14) return Eigen::VectorXd::Zero(d * d);
        const Eigen::VectorXd u = x / r;
        Eigen::MatrixXd outer = u * u.transpose();
        return Eigen::Map<Eigen::VectorXd>(outer.data(), d * d);
    });
    f.unit_sphere_output = true;
    f.claimed_alpha = 1.0;
    f.claimed_beta = std::sqrt(2.0);
    return f;
}

/// x -> x (x)^T / |x|, the homogeneous extension of the projective sphere map.
/// Optimal bilipschitz bounds 1 and sqrt(2); maps 0 to 0.
inline InvariantMap real_projective_embed(int d) {
    InvariantMap f = homogeneous_extension(projective_sphere_map(d));
    f.claimed_alpha = 1.0;
    f.claimed_beta = std::sqrt(2.0);
    return f;
}

/// The raw quadratic map x -> x (x)^T, neither Lipschitz nor lower Lipschitz
/// on the full quotient. Used by the figure reproduction and the probes.
inline InvariantMap unnormalized_projective_map(int d) {
    if (d < 1) throw DimensionMismatch("projective map needs positive dimension");
    auto action = std::make_shared<GroupAction>(GroupAction::sign(d));
    return make_action_map(action, d * d, [d](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::MatrixXd outer = x * x.transpose();
        return Eigen::Map<Eigen::VectorXd>(outer.data(), d * d);
    });
}

namespace detail {

inline Eigen::VectorXd hermitian_outer_flat(const Eigen::VectorXcd& z, double scale) {
    const int d = static_cast<int>(z.size());
    Eigen::VectorXd out(2 * d * d);
    int k = 0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const std::complex<double> v = scale * z(i) * std::conj(z(j));
            out(k++) = v.real();
            out(k++) = v.imag();
        }
    }
    return out;
}

}  // namespace detail

/// Sphere-level map [x] -> x x* for the phase action on C^d (interleaved
/// reals), optimal bounds (1, sqrt(2)).
inline InvariantMap complex_phase_sphere_map(int d) {
    if (d < 2) throw DimensionMismatch("complex phase map needs complex dimension at least 2");
    auto action = std::make_shared<GroupAction>(GroupAction::phase(d));
    InvariantMap f = make_action_map(action, 2 * d * d, [d](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXcd z = to_complex(x);
        const double r = z.norm();
        if (r < 1e-14) return Eigen::VectorXd::Zero(2 * d * d);
        return detail::hermitian_outer_flat(z / r, 1.0);
    });
    f.unit_sphere_output = true;
    f.claimed_alpha = 1.0;
    f.claimed_beta = std::sqrt(2.0);
    return f;
}

/// x -> x x* / |x| over the phase action; optimal bounds 1 and sqrt(2).
inline InvariantMap complex_phase_embed(int d) {
    InvariantMap f = homogeneous_extension(complex_phase_sphere_map(d));
    f.claimed_alpha = 1.0;
    f.claimed_beta = std::sqrt(2.0);
    return f;
}

/// Sphere-level power map [z] -> z^r on C modulo the r-th roots of unity.
/// Optimal sphere bounds csc(pi/2r) and r.
inline InvariantMap power_sphere_map(int r) {
    if (r < 1) throw InvalidParameter("power map: order must be positive");
    auto action = std::make_shared<GroupAction>(GroupAction::cyclic_rotation(r));
    InvariantMap f = make_action_map(action, 2, [r](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        std::complex<double> z(x(0), x(1));
        const double m = std::abs(z);
        if (m < 1e-14) return Eigen::VectorXd::Zero(2);
        z /= m;
        const std::complex<double> w = std::pow(z, r);
        Eigen::VectorXd out(2);
        out << w.real(), w.imag();
        return out;
    });
    f.unit_sphere_output = true;
    f.claimed_alpha = (r == 1) ? 1.0 : 1.0 / std::sin(M_PI / (2.0 * r));
    f.claimed_beta = static_cast<double>(r);
    return f;
}

/// Homogeneous extension of the lifted power map z -> z^r.
///
/// The sphere bounds straddle 1 after lifting with t in [1/r, sin(pi/2r)], so
/// the extension keeps the optimal distortion r sin(pi/2r). The default
/// t = 1/r makes the lifted upper bound exactly 1.
inline InvariantMap power_map_embed(int r, double t) {
    if (r < 1) throw InvalidParameter("power map: order must be positive");
    const double lo = 1.0 / r;
    const double hi = (r == 1) ? 1.0 : std::sin(M_PI / (2.0 * r));
    if (t < lo - 1e-12 || t > hi + 1e-12)
        throw InvalidParameter("power_map_embed: t must lie in [1/r, sin(pi/2r)]");
    InvariantMap f = homogeneous_extension(sphere_lift(power_sphere_map(r), t));
    // claimed distortion r sin(pi/2r), attained with these extension bounds
    f.claimed_alpha = std::min(t * (r == 1 ? 1.0 : 1.0 / std::sin(M_PI / (2.0 * r))), 1.0);
    f.claimed_beta = std::max(t * r, 1.0);
    return f;
}

inline InvariantMap power_map_embed(int r) { return power_map_embed(r, 1.0 / r); }

}  // namespace orbitmetric
