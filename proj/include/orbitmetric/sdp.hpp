#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <utility>

#include "orbitmetric/errors.hpp"
#include "orbitmetric/finite_metric.hpp"

namespace orbitmetric {

/// Feasible witness of an embedding with squared distortion t: a PSD Gram
/// matrix Q with D <= E(Q) <= t*D entrywise, where
/// E(Q)_xy = Q_xx - 2 Q_xy + Q_yy are the embedded squared distances.
struct DistortionCertificate {
    double t = 1.0;
    Eigen::MatrixXd Q;
};

struct SdpOptions {
    int max_bisections = 200;
    int max_sweeps = 20000;      // Dykstra sweeps per feasibility subproblem
    double feas_tol = 1e-8;      // relative box violation declaring feasibility
    int stall_window = 250;      // sweeps between stall checks
    double stall_factor = 0.995; // residual decay slower than this means stalled
};

namespace detail {

/// E(Q) as a hollow symmetric matrix of embedded squared distances.
inline Eigen::MatrixXd embedded_squared_distances(const Eigen::MatrixXd& Q) {
    const int n = static_cast<int>(Q.rows());
    Eigen::MatrixXd E(n, n);
    for (int i = 0; i < n; ++i) {
        E(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            E(i, j) = E(j, i) = Q(i, i) - 2.0 * Q(i, j) + Q(j, j);
        }
    }
    return E;
}

/// min/max of E(Q)_ij / D_ij over pairs.
inline std::pair<double, double> ratio_range(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& D) {
    const int n = static_cast<int>(Q.rows());
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double r = (Q(i, i) - 2.0 * Q(i, j) + Q(j, j)) / D(i, j);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    }
    return {lo, hi};
}

/// Double centering: S = C V C with C = I - J/n.
inline Eigen::MatrixXd double_center(const Eigen::MatrixXd& V) {
    const Eigen::VectorXd row_mean = V.rowwise().mean();
    const double total_mean = row_mean.mean();
    Eigen::MatrixXd S = V;
    S.colwise() -= row_mean;
    S.rowwise() -= row_mean.transpose();
    S.array() += total_mean;
    return S;
}

struct EdmProjection {
    Eigen::MatrixXd projected;  // nearest V' with C V' C negative semidefinite
    Eigen::MatrixXd gram;       // Q = -1/2 * (negative part of C V C), PSD
};

/// Symmetric eigendecomposition that survives Eigen's QL no-convergence on
/// matrices with tightly clustered spectra (circle metrics are doubly
/// degenerate everywhere). Falls back to a deterministic diagonal jitter that
/// splits the clusters, then to a Jacobi SVD with signs recovered from
/// u_i . v_i.
inline void robust_symmetric_eig(const Eigen::MatrixXd& S, Eigen::VectorXd& lam, Eigen::MatrixXd& U) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() == Eigen::Success) {
        lam = es.eigenvalues();
        U = es.eigenvectors();
        return;
    }
    const int n = static_cast<int>(S.rows());
    const double eps = 1e-13 * std::max(1.0, S.lpNorm<Eigen::Infinity>());
    Eigen::VectorXd jitter(n);
    for (int i = 0; i < n; ++i) jitter(i) = eps * static_cast<double>((i * 2654435761ULL) % 97) / 97.0;
    es.compute(S + jitter.asDiagonal().toDenseMatrix());
    if (es.info() == Eigen::Success) {
        lam = es.eigenvalues();
        U = es.eigenvectors();
        return;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeFullU | Eigen::ComputeFullV);
    lam.resize(n);
    for (int i = 0; i < n; ++i) {
        const double sign = svd.matrixU().col(i).dot(svd.matrixV().col(i));
        lam(i) = (sign >= 0 ? 1.0 : -1.0) * svd.singularValues()(i);
    }
    U = svd.matrixU();
}

/// Projection onto {V : C V C <= 0}. V -> CVC is an orthogonal projection of
/// symmetric matrices, so the projection clips the positive eigenvalues of the
/// centered part and keeps the complement untouched.
inline EdmProjection project_edm_cone(const Eigen::MatrixXd& V) {
    Eigen::MatrixXd S = double_center(V);
    S = 0.5 * (S + S.transpose()).eval();
    Eigen::VectorXd lam;
    Eigen::MatrixXd U;
    robust_symmetric_eig(S, lam, U);
    const Eigen::VectorXd neg = lam.cwiseMin(0.0);
    const Eigen::MatrixXd S_neg = U * neg.asDiagonal() * U.transpose();
    EdmProjection out;
    out.projected = V - S + S_neg;
    out.gram = -0.5 * S_neg;
    return out;
}

inline Eigen::MatrixXd project_box(const Eigen::MatrixXd& V, const Eigen::MatrixXd& D, double t) {
    const int n = static_cast<int>(V.rows());
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        out(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const double v = std::clamp(V(i, j), D(i, j), t * D(i, j));
            out(i, j) = out(j, i) = v;
        }
    }
    return out;
}

/// Relative violation of the box constraints by an EDM-feasible iterate.
inline double box_violation(const Eigen::MatrixXd& V, const Eigen::MatrixXd& D, double t) {
    const int n = static_cast<int>(V.rows());
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(V(i, i)) / D.maxCoeff());
        for (int j = i + 1; j < n; ++j) {
            const double lo = D(i, j), hi = t * D(i, j);
            const double v = V(i, j);
            const double viol = std::max({lo - v, v - hi, 0.0});
            worst = std::max(worst, viol / lo);
        }
    }
    return worst;
}

struct FeasibilityState {
    Eigen::MatrixXd warm;        // last EDM-feasible iterate, reused across bisection steps
    double best_t = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_gram;   // witness achieving best_t (unscaled)
};

/// Dykstra alternating projections between the entrywise box
/// {D <= V <= tD, diag 0} and the cone {C V C <= 0}.
///
/// Every cone projection yields a PSD Gram candidate whose achievable
/// distortion bounds the optimum from above; reaching t certifies
/// feasibility exactly, while residual stalls above the tolerance declare
/// the subproblem infeasible.
inline bool feasible_at(const Eigen::MatrixXd& D, double t, FeasibilityState& state, const SdpOptions& opts) {
    Eigen::MatrixXd x = state.warm.size() ? state.warm : project_box(D * (1.0 + t) * 0.5, D, t);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(D.rows(), D.cols());
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(D.rows(), D.cols());

    double window_best = std::numeric_limits<double>::infinity();
    double prev_window_best = std::numeric_limits<double>::infinity();

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        const EdmProjection edm = project_edm_cone(x + p);
        p = x + p - edm.projected;
        x = project_box(edm.projected + q, D, t);
        q = edm.projected + q - x;

        state.warm = edm.projected;
        const auto [rmin, rmax] = ratio_range(edm.gram, D);
        if (rmin > 1e-14) {
            const double achieved = rmax / rmin;
            if (achieved < state.best_t) {
                state.best_t = achieved;
                state.best_gram = edm.gram;
            }
            if (achieved <= t * (1.0 + 1e-12)) return true;
        }

        const double residual = box_violation(edm.projected, D, t);
        if (residual <= opts.feas_tol) return true;
        window_best = std::min(window_best, residual);
        if ((sweep + 1) % opts.stall_window == 0) {
            if (window_best > prev_window_best * opts.stall_factor) return false;  // stalled
            prev_window_best = window_best;
            window_best = std::numeric_limits<double>::infinity();
        }
    }
    return false;
}

}  // namespace detail

/// Recovers n points in R^n (rows) from a certificate's Gram matrix by
/// eigendecomposition, clipping negative eigenvalues at zero.
inline Eigen::MatrixXd gram_to_embedding(const DistortionCertificate& cert) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cert.Q);
    if (es.info() != Eigen::Success) throw EigenFailure("gram_to_embedding: eigendecomposition failed");
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

/// Squared Euclidean distortion of a finite metric by semidefinite
/// programming: c2(X)^2 is the least t admitting a PSD Q with
/// D <= E(Q) <= t*D. Solved by bisection on t with a Dykstra-style
/// feasibility subproblem; deterministic and single threaded.
///
/// Returns t within `tol` of the optimum together with a feasible Q
/// (rescaled so the lower constraints hold exactly up to 1e-12).
inline DistortionCertificate sdp_distortion(const FiniteMetric& metric, double tol, SdpOptions opts = {}) {
    if (metric.n > 64) throw InvalidParameter("sdp_distortion: n must be at most 64");
    if (!(tol > 0)) throw InvalidParameter("sdp_distortion: tolerance must be positive");
    const int n = metric.n;
    const Eigen::MatrixXd& D = metric.D;

    if (n == 1) return {1.0, Eigen::MatrixXd::Zero(1, 1)};
    if (n == 2) {
        Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2, 2);
        Q(1, 1) = D(0, 1);
        return {1.0, Q};
    }

    detail::FeasibilityState state;

    // Simplex start: E(cI) is constant, feasible after scaling.
    {
        double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                dmin = std::min(dmin, D(i, j));
                dmax = std::max(dmax, D(i, j));
            }
        }
        state.best_t = dmax / dmin;
        state.best_gram = 0.5 * dmax * Eigen::MatrixXd::Identity(n, n);
    }
    // Classical MDS start is usually much tighter.
    {
        const detail::EdmProjection edm = detail::project_edm_cone(D);
        const auto [rmin, rmax] = detail::ratio_range(edm.gram, D);
        if (rmin > 1e-14 && rmax / rmin < state.best_t) {
            state.best_t = rmax / rmin;
            state.best_gram = edm.gram;
        }
    }

    double t_lo = 1.0;
    double t_hi = state.best_t;
    if (t_hi <= t_lo + tol) {
        // already (numerically) Euclidean
        const auto [rmin, rmax] = detail::ratio_range(state.best_gram, D);
        return {rmax / rmin, state.best_gram / rmin};
    }

    for (int step = 0; step < opts.max_bisections && t_hi - t_lo > tol; ++step) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (detail::feasible_at(D, mid, state, opts)) {
            t_hi = std::min(mid, state.best_t);
        } else {
            t_lo = mid;
        }
    }

    if (!state.best_gram.size()) throw InfeasibleNumerics("sdp_distortion: no feasible Gram matrix found");
    const auto [rmin, rmax] = detail::ratio_range(state.best_gram, D);
    if (rmin <= 0) throw InfeasibleNumerics("sdp_distortion: degenerate Gram candidate");
    return {rmax / rmin, state.best_gram / rmin};
}

}  // namespace orbitmetric
