#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <vector>

#include "orbitmetric/errors.hpp"
#include "orbitmetric/group_action.hpp"
#include "orbitmetric/sequences.hpp"

namespace orbitmetric {

/// Max filtering map <<[z],[x]>> = sup over orbit pairs of <p,q>. For complex
/// kinds this is the real part of the complex inner product, maximized over
/// the group.
inline double max_filter(const GroupAction& action, const Eigen::VectorXd& z, const Eigen::VectorXd& x) {
    action.check_vector(z);
    action.check_vector(x);
    switch (action.kind()) {
        case ActionKind::sign:
            return std::abs(z.dot(x));
        case ActionKind::phase:
            return std::abs(complex_inner(z, x));
        case ActionKind::cyclic_rotation: {
            const std::complex<double> c = complex_inner(z, x);
            const int r = action.cyclic_order();
            double best = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < r; ++k) {
                const double t = 2.0 * M_PI * k / r;
                best = std::max(best, c.real() * std::cos(t) - c.imag() * std::sin(t));
            }
            return best;
        }
        case ActionKind::finite_matrix: {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& g : action.matrix_elements()) best = std::max(best, z.dot(g * x));
            return best;
        }
        case ActionKind::circular_shift:
            return circular_max_filter(z, x, action.size_n());
        case ActionKind::diagonal_unitary: {
            double best = -std::numeric_limits<double>::infinity();
            for (int e = 0; e < action.diagonal_elements().cols(); ++e)
                best = std::max(best, z.dot(action.apply_diagonal(x, e)));
            return best;
        }
        case ActionKind::permutation: {
            if (action.permutation_mode() == PermutationMode::coordinates) {
                // Rearrangement inequality: sorted pairing maximizes the dot product.
                std::vector<double> a(z.data(), z.data() + z.size());
                std::vector<double> b(x.data(), x.data() + x.size());
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
            }
            // Column mode is an optimal assignment between column blocks.
            const int n = action.size_n(), d = action.block_dim();
            Eigen::MatrixXd cost(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) cost(i, j) = -z.segment(i * d, d).dot(x.segment(j * d, d));
            return -solve_assignment(cost);
        }
        case ActionKind::integer_shift:
            return shift_max_filter(SparseSeq::from_dense(z), SparseSeq::from_dense(x));
        case ActionKind::multiset: {
            const SparseSeq a = SparseSeq::from_dense_blocks(z, action.block_dim());
            const SparseSeq b = SparseSeq::from_dense_blocks(x, action.block_dim());
            const double dist = multiset_distance(a, b);
            return 0.5 * (a.squared_norm() + b.squared_norm() - dist * dist);
        }
    }
    throw UnsupportedAction("max_filter: unsupported action kind");
}

/// Quotient distance d([x],[y]) = inf over orbit representatives. Each kind
/// minimizes |x - g.y| directly over its closed form; differences are formed
/// entrywise so d(x, x) stays at zero instead of drowning in the cancellation
/// of the max filter identity. The identity d^2 = |x|^2 - 2<<.,.>> + |y|^2
/// still holds and is verified in the tests as an independent route.
inline double quotient_distance(const GroupAction& action, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    action.check_vector(x);
    action.check_vector(y);
    switch (action.kind()) {
        case ActionKind::sign:
            return std::min((x - y).norm(), (x + y).norm());
        case ActionKind::phase: {
            const std::complex<double> c = complex_inner(x, y);
            const double mod = std::abs(c);
            if (mod < 1e-300) return std::sqrt(x.squaredNorm() + y.squaredNorm());
            // best aligning phase rotates y by conj(c)/|c|
            return (x - GroupAction::rotate_complex(y, -std::arg(c))).norm();
        }
        case ActionKind::cyclic_rotation: {
            const int r = action.cyclic_order();
            double best = std::numeric_limits<double>::infinity();
            for (int k = 0; k < r; ++k)
                best = std::min(best, (x - GroupAction::rotate_complex(y, 2.0 * M_PI * k / r)).norm());
            return best;
        }
        case ActionKind::finite_matrix: {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& g : action.matrix_elements()) best = std::min(best, (x - g * y).norm());
            return best;
        }
        case ActionKind::circular_shift: {
            const int n = action.size_n();
            double best = std::numeric_limits<double>::infinity();
            for (int k = 0; k < n; ++k) {
                double sq = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double diff = x((j + k) % n) - y(j);
                    sq += diff * diff;
                }
                best = std::min(best, sq);
            }
            return std::sqrt(best);
        }
        case ActionKind::diagonal_unitary: {
            double best = std::numeric_limits<double>::infinity();
            for (int e = 0; e < action.diagonal_elements().cols(); ++e)
                best = std::min(best, (x - action.apply_diagonal(y, e)).norm());
            return best;
        }
        case ActionKind::permutation: {
            if (action.permutation_mode() == PermutationMode::coordinates) {
                std::vector<double> a(x.data(), x.data() + x.size());
                std::vector<double> b(y.data(), y.data() + y.size());
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                double sq = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
                return std::sqrt(sq);
            }
            const int n = action.size_n(), d = action.block_dim();
            Eigen::MatrixXd cost(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) cost(i, j) = (x.segment(i * d, d) - y.segment(j * d, d)).squaredNorm();
            return std::sqrt(std::max(0.0, solve_assignment(cost)));
        }
        case ActionKind::integer_shift:
            return shift_quotient_distance(SparseSeq::from_dense(x), SparseSeq::from_dense(y));
        case ActionKind::multiset:
            return multiset_distance(SparseSeq::from_dense_blocks(x, action.block_dim()),
                                     SparseSeq::from_dense_blocks(y, action.block_dim()));
    }
    throw UnsupportedAction("quotient_distance: unsupported action kind");
}

/// Coordinate i is max_filter(action, templates[i], x); G-invariant in x.
inline Eigen::VectorXd max_filter_bank(const GroupAction& action, const std::vector<Eigen::VectorXd>& templates,
                                       const Eigen::VectorXd& x) {
    Eigen::VectorXd out(static_cast<int>(templates.size()));
    for (std::size_t i = 0; i < templates.size(); ++i) out(static_cast<int>(i)) = max_filter(action, templates[i], x);
    return out;
}

/// A representative vector tagged with its action. Equality is orbit-closure
/// equality, i.e. quotient distance below 1e-9.
struct QuotientPoint {
    static constexpr double kEqualityTol = 1e-9;

    Eigen::VectorXd rep;
    std::shared_ptr<const GroupAction> action;

    QuotientPoint() = default;
    QuotientPoint(Eigen::VectorXd representative, std::shared_ptr<const GroupAction> act)
        : rep(std::move(representative)), action(std::move(act)) {
        if (action) action->check_vector(rep);
    }

    double distance_to(const QuotientPoint& other) const {
        if (!action || !other.action) throw InvalidParameter("QuotientPoint: missing action");
        if (action->kind() != other.action->kind() || action->ambient_dim() != other.action->ambient_dim())
            throw DimensionMismatch("QuotientPoint: points live over different actions");
        return quotient_distance(*action, rep, other.rep);
    }

    friend bool operator==(const QuotientPoint& a, const QuotientPoint& b) {
        return a.distance_to(b) <= kEqualityTol;
    }
};

}  // namespace orbitmetric
