#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "orbitmetric/errors.hpp"
#include "orbitmetric/invariant_map.hpp"
#include "orbitmetric/rng.hpp"

namespace orbitmetric {

/// Points of one quotient space, optionally carrying cached embeddings.
struct Dataset {
    std::shared_ptr<const GroupAction> action;
    std::vector<Eigen::VectorXd> points;
    std::optional<std::vector<Eigen::VectorXd>> embedded;

    static Dataset create(std::shared_ptr<const GroupAction> action, std::vector<Eigen::VectorXd> points) {
        Dataset d;
        d.action = std::move(action);
        for (const auto& p : points) d.action->check_vector(p);
        d.points = std::move(points);
        return d;
    }

    /// Precomputes map values; the cache must match evaluation within 1e-12.
    void attach_cache(const InvariantMap& map) {
        std::vector<Eigen::VectorXd> cache;
        cache.reserve(points.size());
        for (const auto& p : points) cache.push_back(map(p));
        embedded = std::move(cache);
    }

    const Eigen::VectorXd& embedded_point(const InvariantMap& map, std::size_t i,
                                          std::vector<Eigen::VectorXd>& scratch) const {
        if (embedded) {
            const Eigen::VectorXd check = map(points[i]);
            if (((*embedded)[i] - check).lpNorm<Eigen::Infinity>() > 1e-12)
                throw InvalidParameter("Dataset: embedded cache does not match the map");
            return (*embedded)[i];
        }
        if (scratch.empty()) {
            scratch.reserve(points.size());
            for (const auto& p : points) scratch.push_back(map(p));
        }
        return scratch[i];
    }

    double quotient_distance_between(std::size_t i, std::size_t j) const {
        return quotient_distance(*action, points[i], points[j]);
    }
};

/// Exact nearest neighbor in the embedded space; a c-approximate nearest
/// neighbor in the quotient when the map has distortion c.
inline int pullback_ann(const Dataset& data, const InvariantMap& map, const Eigen::VectorXd& query) {
    if (data.points.empty()) throw EmptyDataset("pullback_ann: dataset is empty");
    const Eigen::VectorXd fq = map(query);
    std::vector<Eigen::VectorXd> scratch;
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        const double d = (data.embedded_point(map, i, scratch) - fq).norm();
        if (d < best_dist) {
            best_dist = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

struct KmeansResult {
    std::vector<int> labels;
    double embedded_objective = 0.0;  // sum over clusters of (1/|C|) sum of pairwise squared distances
    double quotient_objective = 0.0;
    int iterations = 0;
};

namespace detail {

inline double pairwise_objective(const std::vector<int>& labels, int k,
                                 const std::function<double(int, int)>& sqdist, int n) {
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (labels[i] == c) members.push_back(i);
        if (members.empty()) continue;
        double sum = 0.0;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = 0; b < members.size(); ++b) sum += sqdist(members[a], members[b]);
        total += sum / static_cast<double>(members.size());
    }
    return total;
}

}  // namespace detail

/// k-means++ seeding plus Lloyd iterations in the embedded space. Returns the
/// induced partition with both the embedded and the quotient pairwise
/// objectives. Deterministic for a fixed seed.
inline KmeansResult pullback_kmeans(const Dataset& data, const InvariantMap& map, int k, std::uint64_t seed) {
    const int n = static_cast<int>(data.points.size());
    if (k < 1 || k > n) throw InvalidK("pullback_kmeans: k must lie in {1, ..., n}");

    std::vector<Eigen::VectorXd> scratch;
    std::vector<Eigen::VectorXd> emb;
    emb.reserve(n);
    for (int i = 0; i < n; ++i) emb.push_back(data.embedded_point(map, i, scratch));

    Rng rng(seed);
    // k-means++ seeding
    std::vector<Eigen::VectorXd> centers;
    centers.push_back(emb[rng.below(n)]);
    std::vector<double> dist2(n);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, (emb[i] - c).squaredNorm());
            dist2[i] = best;
            total += best;
        }
        int pick = 0;
        if (total > 0) {
            double target = rng.uniform() * total;
            for (; pick < n - 1; ++pick) {
                target -= dist2[pick];
                if (target <= 0) break;
            }
        } else {
            pick = static_cast<int>(rng.below(n));
        }
        centers.push_back(emb[pick]);
    }

    std::vector<int> labels(n, 0);
    double prev_sse = std::numeric_limits<double>::infinity();
    int iterations = 0;
    for (; iterations < 100; ++iterations) {
        // assignment
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (emb[i] - centers[c]).squaredNorm();
                if (d < best) {
                    best = d;
                    labels[i] = c;
                }
            }
        }
        // update, reseeding empty clusters with the worst-fit point
        std::vector<int> count(k, 0);
        std::vector<Eigen::VectorXd> sums(k, Eigen::VectorXd::Zero(emb[0].size()));
        for (int i = 0; i < n; ++i) {
            ++count[labels[i]];
            sums[labels[i]] += emb[i];
        }
        for (int c = 0; c < k; ++c) {
            if (count[c] > 0) {
                centers[c] = sums[c] / count[c];
            } else {
                int worst = 0;
                double worst_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d = (emb[i] - centers[labels[i]]).squaredNorm();
                    if (d > worst_d) {
                        worst_d = d;
                        worst = i;
                    }
                }
                centers[c] = emb[worst];
                labels[worst] = c;
            }
        }
        double sse = 0.0;
        for (int i = 0; i < n; ++i) sse += (emb[i] - centers[labels[i]]).squaredNorm();
        if (prev_sse - sse <= 1e-10 * std::max(1.0, prev_sse)) break;
        prev_sse = sse;
    }

    KmeansResult result;
    result.labels = labels;
    result.iterations = iterations;
    result.embedded_objective = detail::pairwise_objective(
        labels, k, [&](int a, int b) { return (emb[a] - emb[b]).squaredNorm(); }, n);
    result.quotient_objective = detail::pairwise_objective(
        labels, k,
        [&](int a, int b) {
            const double d = data.quotient_distance_between(a, b);
            return d * d;
        },
        n);
    return result;
}

struct MdsResult {
    Eigen::MatrixXd coordinates;   // n x k
    Eigen::VectorXd eigenvalues;   // all eigenvalues of g(D), descending
    double gram_residual = 0.0;    // |g(D) - g(E)|_F when an embedding was supplied
    double error_bound = 0.0;      // (1/2) max(|alpha^2-1|, |beta^2-1|) |D|_F
    double alpha = 0.0;            // bounds used for the error bound
    double beta = 0.0;
};

namespace detail {

inline Eigen::MatrixXd mds_gram(const Eigen::MatrixXd& D) {
    const int n = static_cast<int>(D.rows());
    const Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    return -0.5 * C * D * C;
}

}  // namespace detail

/// Classical multidimensional scaling: top-k eigenpairs of the double-centered
/// squared-distance matrix g(D).
inline MdsResult classical_mds(const Eigen::MatrixXd& D_squared, int k) {
    const int n = static_cast<int>(D_squared.rows());
    if (n < k) throw InvalidParameter("classical_mds: need at least k points");
    const Eigen::MatrixXd B = detail::mds_gram(D_squared);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    if (es.info() != Eigen::Success) throw EigenFailure("classical_mds: eigendecomposition failed");

    MdsResult out;
    out.eigenvalues = es.eigenvalues().reverse();
    out.coordinates.resize(n, k);
    for (int j = 0; j < k; ++j) {
        const double lam = std::max(0.0, es.eigenvalues()(n - 1 - j));
        out.coordinates.col(j) = std::sqrt(lam) * es.eigenvectors().col(n - 1 - j);
    }
    return out;
}

/// MDS over a quotient dataset with the embedding comparison of the error
/// bound |g(D) - g(E)|_F <= (1/2) max(|a^2-1|, |b^2-1|) |D|_F. Claimed bounds
/// are used when present, measured ratios otherwise.
inline MdsResult quotient_mds(const Dataset& data, const InvariantMap& map, int k) {
    const int n = static_cast<int>(data.points.size());
    if (n < k) throw InvalidParameter("quotient_mds: need at least k points");

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::VectorXd> scratch;
    double alpha = std::numeric_limits<double>::infinity(), beta = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double din = data.quotient_distance_between(i, j);
            const double dout = (data.embedded_point(map, i, scratch) - data.embedded_point(map, j, scratch)).norm();
            D(i, j) = D(j, i) = din * din;
            E(i, j) = E(j, i) = dout * dout;
            if (din > 1e-12) {
                alpha = std::min(alpha, dout / din);
                beta = std::max(beta, dout / din);
            }
        }
    }
    MdsResult out = classical_mds(D, k);
    out.alpha = map.claimed_alpha.value_or(alpha);
    out.beta = map.claimed_beta.value_or(beta);
    out.gram_residual = (detail::mds_gram(D) - detail::mds_gram(E)).norm();
    out.error_bound = 0.5 * std::max(std::abs(out.alpha * out.alpha - 1.0), std::abs(out.beta * out.beta - 1.0)) * D.norm();
    return out;
}

/// Scans decreasing radii around a center, recording the minimum over sampled
/// unit directions of output distance over quotient distance. Differentiable
/// invariants at points with nontrivial stabilizers decay with the radius;
/// max filter banks stabilize.
inline std::vector<std::pair<double, double>> lower_lipschitz_probe(const InvariantMap& map,
                                                                    const Eigen::VectorXd& center,
                                                                    const std::vector<double>& radii,
                                                                    std::uint64_t seed = 0, int samples = 256) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] <= 0) throw InvalidParameter("lower_lipschitz_probe: radii must be positive");
        if (i > 0 && radii[i] >= radii[i - 1])
            throw InvalidParameter("lower_lipschitz_probe: radii must be strictly decreasing");
    }
    const Eigen::VectorXd f0 = map(center);
    std::vector<std::pair<double, double>> out;
    out.reserve(radii.size());
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        Rng rng(derive_seed(seed, ri));
        double min_ratio = std::numeric_limits<double>::infinity();
        for (int s = 0; s < samples; ++s) {
            const Eigen::VectorXd v = rng.unit_vector(static_cast<int>(center.size()));
            const Eigen::VectorXd p = center + radii[ri] * v;
            const double din = map.distance(p, center);
            if (din <= 1e-18) continue;
            min_ratio = std::min(min_ratio, (map(p) - f0).norm() / din);
        }
        out.emplace_back(radii[ri], min_ratio);
    }
    return out;
}

/// The bispectrum B(x)_{kl} = xhat(k) conj(xhat(l)) xhat(l-k), indices mod d.
/// Invariant under circular shifts of x. The DFT is computed directly.
inline Eigen::MatrixXcd bispectrum(const Eigen::VectorXcd& x) {
    const int d = static_cast<int>(x.size());
    if (d < 1) throw InvalidParameter("bispectrum: empty input");
    if (d > 256) throw InvalidParameter("bispectrum: direct DFT supports d <= 256");
    Eigen::VectorXcd hat(d);
    for (int k = 0; k < d; ++k) {
        std::complex<double> sum = 0.0;
        for (int j = 0; j < d; ++j) sum += x(j) * std::polar(1.0, -2.0 * M_PI * j * k / d);
        hat(k) = sum;
    }
    Eigen::MatrixXcd B(d, d);
    for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
            B(k, l) = hat(k) * std::conj(hat(l)) * hat(((l - k) % d + d) % d);
        }
    }
    return B;
}

/// Circular shift of the d complex coordinates as an explicit orthogonal
/// group on R^{2d}.
inline GroupAction complex_circular_shift_action(int d) {
    std::vector<Eigen::MatrixXd> els;
    els.reserve(d);
    for (int s = 0; s < d; ++s) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * d, 2 * d);
        for (int j = 0; j < d; ++j) {
            const int tj = (j + s) % d;
            g(2 * tj, 2 * j) = 1.0;
            g(2 * tj + 1, 2 * j + 1) = 1.0;
        }
        els.push_back(std::move(g));
    }
    return GroupAction::finite_matrix(els);
}

/// The bispectrum as an invariant map over the complex circular shift action
/// (interleaved reals on both sides).
inline InvariantMap bispectrum_map(int d) {
    auto action = std::make_shared<GroupAction>(complex_circular_shift_action(d));
    return make_action_map(action, 2 * d * d, [d](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Eigen::MatrixXcd B = bispectrum(to_complex(x));
        Eigen::VectorXd out(2 * d * d);
        int idx = 0;
        for (int k = 0; k < d; ++k) {
            for (int l = 0; l < d; ++l) {
                out(idx++) = B(k, l).real();
                out(idx++) = B(k, l).imag();
            }
        }
        return out;
    });
}

}  // namespace orbitmetric
