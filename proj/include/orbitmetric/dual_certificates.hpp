#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "orbitmetric/errors.hpp"
#include "orbitmetric/finite_metric.hpp"

namespace orbitmetric {

/// A PSD matrix Q with Q1 = 0 whose entrywise parts bound squared distortion
/// from below: <D, Q+> <= dist(f)^2 <D, Q->.
struct DualCertificate {
    Eigen::MatrixXd Q;
};

struct DualVerification {
    double gap = 0.0;
    bool optimal = false;
};

/// Weak duality check: gap = c^2 <D, Q-> - <D, Q+>. A zero gap with Q != 0
/// certifies c = c2(X).
inline DualVerification verify_dual(const FiniteMetric& metric, const DualCertificate& dual, double c) {
    const Eigen::MatrixXd& Q = dual.Q;
    if (Q.rows() != metric.n || Q.cols() != metric.n)
        throw InvalidCertificate("verify_dual: certificate size does not match the metric");
    const double scale = std::max(1.0, Q.lpNorm<Eigen::Infinity>());
    if ((Q - Q.transpose()).lpNorm<Eigen::Infinity>() > 1e-9 * scale)
        throw InvalidCertificate("verify_dual: Q is not symmetric");
    if ((Q * Eigen::VectorXd::Ones(metric.n)).lpNorm<Eigen::Infinity>() > 1e-9 * scale)
        throw InvalidCertificate("verify_dual: Q 1 != 0");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    if (es.info() != Eigen::Success) throw EigenFailure("verify_dual: eigendecomposition failed");
    if (es.eigenvalues().minCoeff() < -1e-8 * scale) throw InvalidCertificate("verify_dual: Q is not PSD");

    const Eigen::MatrixXd Qp = Q.cwiseMax(0.0);
    const Eigen::MatrixXd Qm = (-Q).cwiseMax(0.0);
    const double plus = (metric.D.array() * Qp.array()).sum();
    const double minus = (metric.D.array() * Qm.array()).sum();

    DualVerification out;
    out.gap = c * c * minus - plus;
    out.optimal = (std::abs(out.gap) <= 1e-9 * minus) && (Q.lpNorm<Eigen::Infinity>() > 0.0);
    return out;
}

/// The circulant dual certificate for even cycles: diagonal 2cos^2(pi/n),
/// adjacent entries -1, antipodal entries 2sin^2(pi/n). Q1 = 0 and Q is PSD;
/// paired with any circle metric it witnesses optimality via verify_dual.
inline DualCertificate cycle_certificate(int n) {
    if (n < 4 || n % 2 != 0) throw InvalidParameter("cycle_certificate: n must be an even integer >= 4");
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
    const double diag = 2.0 * std::cos(M_PI / n) * std::cos(M_PI / n);
    const double anti = 2.0 * std::sin(M_PI / n) * std::sin(M_PI / n);
    for (int i = 0; i < n; ++i) {
        Q(i, i) = diag;
        Q(i, (i + 1) % n) = -1.0;
        Q(i, (i + n - 1) % n) = -1.0;
        Q(i, (i + n / 2) % n) = anti;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -1e-12 * n)
        throw InfeasibleNumerics("cycle_certificate: circulant matrix failed the PSD check");
    return {Q};
}

/// Euclidean distortion of the circle R/Z under a translation-invariant
/// metric whose chordal ratio g(t) = |e^{2 pi i t} - 1| / d(t+Z, Z) is
/// monotonically decreasing on (0, 1/2]: the distortion is
/// lim_{t->0} g(t)/g(1/2), at most pi/2.
///
/// Monotonicity is checked on a grid of 10^4 points; the limit is taken at
/// eps = 1e-8 with a consistency check against eps = 1e-6.
inline double circle_distortion(const std::function<double(double)>& g) {
    const int grid = 10000;
    double prev = g(0.5 / grid);
    for (int i = 2; i <= grid; ++i) {
        const double cur = g(0.5 * i / grid);
        if (cur > prev + 1e-12 * std::max(1.0, std::abs(prev)))
            throw NotMonotone("circle_distortion: g must be monotonically decreasing on (0, 1/2]");
        prev = cur;
    }
    const double denom = g(0.5);
    if (!(denom > 0)) throw InvalidParameter("circle_distortion: g(1/2) must be positive");
    const double v8 = g(1e-8) / denom;
    const double v6 = g(1e-6) / denom;
    if (std::abs(v8 - v6) > 1e-5)
        throw InvalidParameter("circle_distortion: limit estimate did not stabilize between eps=1e-6 and 1e-8");
    return v8;
}

}  // namespace orbitmetric
