#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "orbitmetric/errors.hpp"

namespace orbitmetric {

/// Exact linear assignment by shortest augmenting paths (Jonker-Volgenant
/// style with dual potentials), O(n^3) for an n x n cost matrix.
///
/// Returns the minimal total cost; if `row_to_col` is non-null it receives the
/// optimal matching.
inline double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>* row_to_col = nullptr) {
    if (cost.rows() != cost.cols()) throw DimensionMismatch("assignment cost matrix must be square");
    const int n = static_cast<int>(cost.rows());
    if (n == 0) {
        if (row_to_col) row_to_col->clear();
        return 0.0;
    }

    const double inf = std::numeric_limits<double>::infinity();
    // 1-based arrays; p[j] = row matched to column j, column 0 is a sentinel.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    if (row_to_col) {
        row_to_col->assign(n, -1);
        for (int j = 1; j <= n; ++j) (*row_to_col)[p[j] - 1] = j - 1;
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) total += cost(p[j] - 1, j - 1);
    return total;
}

}  // namespace orbitmetric
