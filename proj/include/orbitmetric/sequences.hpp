#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "orbitmetric/assignment.hpp"
#include "orbitmetric/errors.hpp"

namespace orbitmetric {

/// A finitely supported sequence of R^d blocks, indexed by integers.
///
/// Under the full permutation group only the multiset of block values matters;
/// under integer shift the index differences matter. Zero blocks are dropped
/// on construction and indices must be distinct.
struct SparseSeq {
    int d = 1;
    std::vector<std::pair<long long, Eigen::VectorXd>> entries;

    SparseSeq() = default;

    SparseSeq(int block_dim, std::vector<std::pair<long long, Eigen::VectorXd>> raw) : d(block_dim) {
        if (d < 1) throw InvalidParameter("SparseSeq block dimension must be positive");
        std::map<long long, Eigen::VectorXd> seen;
        for (auto& [idx, val] : raw) {
            if (val.size() != d) throw DimensionMismatch("SparseSeq entry has wrong block dimension");
            if (seen.count(idx)) throw InvalidParameter("SparseSeq indices must be distinct");
            if (val.norm() > 1e-14) seen.emplace(idx, std::move(val));
        }
        entries.assign(seen.begin(), seen.end());
    }

    /// Scalar sequence supported on {0, ..., len-1}.
    static SparseSeq from_dense(const Eigen::VectorXd& x) {
        std::vector<std::pair<long long, Eigen::VectorXd>> raw;
        for (int i = 0; i < x.size(); ++i) raw.emplace_back(i, Eigen::VectorXd::Constant(1, x(i)));
        return SparseSeq(1, std::move(raw));
    }

    /// Blocks of size d laid out consecutively from index 0.
    static SparseSeq from_dense_blocks(const Eigen::VectorXd& x, int block_dim) {
        if (x.size() % block_dim != 0) throw DimensionMismatch("dense vector length not a multiple of block size");
        std::vector<std::pair<long long, Eigen::VectorXd>> raw;
        for (int i = 0; i * block_dim < x.size(); ++i) raw.emplace_back(i, x.segment(i * block_dim, block_dim));
        return SparseSeq(block_dim, std::move(raw));
    }

    bool empty() const { return entries.empty(); }

    double squared_norm() const {
        double s = 0.0;
        for (const auto& [idx, val] : entries) s += val.squaredNorm();
        return s;
    }

    double norm() const { return std::sqrt(squared_norm()); }

    long long min_index() const { return entries.front().first; }
    long long max_index() const { return entries.back().first; }
};

/// Quotient distance of l^2(N; R^d) modulo all permutations of the index set.
///
/// Orbit closures are support bijection classes, so the distance is the
/// optimal assignment between the two value multisets padded with zeros:
/// matching a block against a pad encodes leaving it over an absent position.
/// Solved exactly; this is the ground truth the sorting isometry is tested
/// against.
inline double multiset_distance(const SparseSeq& x, const SparseSeq& y) {
    if (x.d != y.d) throw DimensionMismatch("multiset_distance: block dimensions differ");
    const int m = static_cast<int>(x.entries.size());
    const int k = static_cast<int>(y.entries.size());
    if (m == 0 && k == 0) return 0.0;

    // Canonical value order makes the result independent of how entries are
    // indexed, bit for bit.
    auto values_sorted = [](const SparseSeq& s) {
        std::vector<Eigen::VectorXd> vals;
        vals.reserve(s.entries.size());
        for (const auto& [idx, v] : s.entries) vals.push_back(v);
        std::sort(vals.begin(), vals.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
            for (int i = 0; i < a.size(); ++i) {
                if (a(i) != b(i)) return a(i) < b(i);
            }
            return false;
        });
        return vals;
    };
    const std::vector<Eigen::VectorXd> xv = values_sorted(x);
    const std::vector<Eigen::VectorXd> yv = values_sorted(y);

    const int n = m + k;
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i < m && j < k) {
                cost(i, j) = (xv[i] - yv[j]).squaredNorm();
            } else if (i < m) {
                cost(i, j) = xv[i].squaredNorm();
            } else if (j < k) {
                cost(i, j) = yv[j].squaredNorm();
            } else {
                cost(i, j) = 0.0;
            }
        }
    }
    return std::sqrt(std::max(0.0, solve_assignment(cost)));
}

/// Sorting isometry for scalar sequences modulo all permutations.
///
/// Even positions (1-indexed) carry the positive part sorted in decreasing
/// order and odd positions carry the negated, decreasingly sorted negative
/// part. Equal magnitudes keep their original index order so the output is
/// deterministic.
inline SparseSeq sort_embed(const SparseSeq& x) {
    if (x.d != 1) throw UnsupportedDimension("sort_embed requires block dimension 1");
    std::vector<double> pos, neg;
    for (const auto& [idx, v] : x.entries) {
        const double t = v(0);
        if (t > 0) pos.push_back(t);
        else if (t < 0) neg.push_back(-t);
    }
    std::stable_sort(pos.begin(), pos.end(), std::greater<double>());
    std::stable_sort(neg.begin(), neg.end(), std::greater<double>());

    const long long len = 2 * std::max(pos.size(), neg.size());
    std::vector<std::pair<long long, Eigen::VectorXd>> raw;
    for (long long n = 1; n <= len; ++n) {
        double value = 0.0;
        if (n % 2 == 0) {
            const std::size_t i = static_cast<std::size_t>(n / 2 - 1);
            if (i < pos.size()) value = pos[i];
        } else {
            const std::size_t i = static_cast<std::size_t>((n + 1) / 2 - 1);
            if (i < neg.size()) value = -neg[i];
        }
        if (value != 0.0) raw.emplace_back(n - 1, Eigen::VectorXd::Constant(1, value));
    }
    return SparseSeq(1, std::move(raw));
}

/// Max filtering over the integer shift action: the best correlation
/// sup_k sum_j <a_{j-k}, b_j>. Finite supports reduce the sup to a window and
/// a disjoint shift always exists, so the value is at least 0.
inline double shift_max_filter(const SparseSeq& a, const SparseSeq& b) {
    if (a.d != b.d) throw DimensionMismatch("shift_max_filter: block dimensions differ");
    if (a.empty() || b.empty()) return 0.0;

    std::map<long long, const Eigen::VectorXd*> a_at;
    for (const auto& [idx, v] : a.entries) a_at.emplace(idx, &v);

    const long long k_lo = b.min_index() - a.max_index();
    const long long k_hi = b.max_index() - a.min_index();
    double best = 0.0;
    for (long long k = k_lo; k <= k_hi; ++k) {
        double corr = 0.0;
        for (const auto& [j, bv] : b.entries) {
            auto it = a_at.find(j - k);
            if (it != a_at.end()) corr += it->second->dot(bv);
        }
        best = std::max(best, corr);
    }
    return best;
}

/// Quotient distance of l^2(Z)-style sequences modulo integer shift: the
/// minimum of |a - shift_k(b)| over the overlap window and the disjoint
/// placement. Differences are formed entrywise, which keeps d(a, a) at zero
/// instead of losing it to cancellation in the max filter identity.
inline double shift_quotient_distance(const SparseSeq& a, const SparseSeq& b) {
    if (a.d != b.d) throw DimensionMismatch("shift_quotient_distance: block dimensions differ");
    double best = a.squared_norm() + b.squared_norm();  // disjoint shift
    if (!a.empty() && !b.empty()) {
        std::map<long long, const Eigen::VectorXd*> a_at;
        std::map<long long, const Eigen::VectorXd*> b_at;
        for (const auto& [idx, v] : a.entries) a_at.emplace(idx, &v);
        for (const auto& [idx, v] : b.entries) b_at.emplace(idx, &v);
        const long long k_lo = b.min_index() - a.max_index();
        const long long k_hi = b.max_index() - a.min_index();
        for (long long k = k_lo; k <= k_hi; ++k) {
            double cost = 0.0;
            for (const auto& [j, bv] : b.entries) {
                auto it = a_at.find(j - k);
                if (it != a_at.end())
                    cost += (*it->second - bv).squaredNorm();
                else
                    cost += bv.squaredNorm();
            }
            for (const auto& [i, av] : a.entries) {
                if (!b_at.count(i + k)) cost += av.squaredNorm();
            }
            best = std::min(best, cost);
        }
    }
    return std::sqrt(std::max(0.0, best));
}

/// Max over the n cyclic rotations of <u, rot_k(v)>.
inline double circular_max_filter(const Eigen::VectorXd& u, const Eigen::VectorXd& v, int n) {
    if (u.size() != n || v.size() != n) throw DimensionMismatch("circular_max_filter: vectors must have length n");
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        double corr = 0.0;
        for (int j = 0; j < n; ++j) corr += u(j) * v((j + k) % n);
        best = std::max(best, corr);
    }
    return best;
}

/// Places a scalar sequence supported in {0..N} on a circle of n positions.
/// For n > 2N every cyclic correlation realizes exactly one integer shift, so
/// circular max filtering reproduces the linear one.
inline Eigen::VectorXd circular_embed(const SparseSeq& a, int n) {
    if (a.d != 1) throw UnsupportedDimension("circular_embed requires block dimension 1");
    long long N = 0;
    if (!a.empty()) {
        if (a.min_index() < 0) throw InvalidParameter("circular_embed: support must lie in {0..N}");
        N = a.max_index();
    }
    if (n <= 2 * N) throw WindowTooSmall("circular_embed: need n > 2N");
    if (n < 1) throw InvalidParameter("circular_embed: n must be positive");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (const auto& [idx, v] : a.entries) out(static_cast<int>(idx)) = v(0);
    return out;
}

}  // namespace orbitmetric
