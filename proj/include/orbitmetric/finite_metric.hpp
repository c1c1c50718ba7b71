#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "orbitmetric/errors.hpp"

namespace orbitmetric {

/// An n-point metric space given by its matrix of squared distances.
///
/// Construction validates symmetry, a zero diagonal, strictly positive
/// off-diagonal entries, and the triangle inequality of the root distances
/// over all triples (tolerance 1e-9).
struct FiniteMetric {
    int n = 0;
    Eigen::MatrixXd D;  // squared distances

    static FiniteMetric from_squared(Eigen::MatrixXd D) {
        FiniteMetric m;
        m.n = static_cast<int>(D.rows());
        if (D.cols() != m.n || m.n < 1) throw InvalidParameter("FiniteMetric: D must be square and nonempty");
        for (int i = 0; i < m.n; ++i) {
            if (std::abs(D(i, i)) > 1e-12) throw InvalidParameter("FiniteMetric: diagonal of D must be zero");
            D(i, i) = 0.0;
            for (int j = i + 1; j < m.n; ++j) {
                if (std::abs(D(i, j) - D(j, i)) > 1e-9 * std::max(1.0, std::abs(D(i, j))))
                    throw InvalidParameter("FiniteMetric: D must be symmetric");
                if (D(i, j) <= 0.0) throw InvalidParameter("FiniteMetric: off-diagonal squared distances must be positive");
                D(j, i) = D(i, j);
            }
        }
        for (int i = 0; i < m.n; ++i) {
            for (int j = 0; j < m.n; ++j) {
                for (int k = 0; k < m.n; ++k) {
                    if (i == j || j == k || i == k) continue;
                    const double dij = std::sqrt(D(i, j)), djk = std::sqrt(D(j, k)), dik = std::sqrt(D(i, k));
                    if (dik > dij + djk + 1e-9)
                        throw InvalidParameter("FiniteMetric: triangle inequality violated");
                }
            }
        }
        m.D = std::move(D);
        return m;
    }

    /// Builds the squared-distance matrix from a pairwise distance callback.
    template <class DistFn>
    static FiniteMetric from_distances(int count, DistFn&& dist) {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(count, count);
        for (int i = 0; i < count; ++i) {
            for (int j = i + 1; j < count; ++j) {
                const double d = dist(i, j);
                D(i, j) = D(j, i) = d * d;
            }
        }
        return from_squared(std::move(D));
    }

    double distance(int i, int j) const { return std::sqrt(D(i, j)); }
};

/// Path metric of the n-cycle graph: d(i,j) = min(|i-j|, n-|i-j|).
inline FiniteMetric cycle_graph_metric(int n) {
    if (n < 3) throw InvalidParameter("cycle_graph_metric: need at least 3 vertices");
    return FiniteMetric::from_distances(n, [n](int i, int j) {
        const int k = std::abs(i - j);
        return static_cast<double>(std::min(k, n - k));
    });
}

}  // namespace orbitmetric
