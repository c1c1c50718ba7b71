#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "orbitmetric/errors.hpp"
#include "orbitmetric/finite_metric.hpp"
#include "orbitmetric/invariant_map.hpp"
#include "orbitmetric/io_format.hpp"
#include "orbitmetric/rng.hpp"
#include "orbitmetric/sdp.hpp"
#include "orbitmetric/sequences.hpp"

namespace orbitmetric {

struct BilipschitzEstimate {
    double alpha_hat = 0.0;
    double beta_hat = 0.0;
    std::int64_t used = 0;
    std::int64_t degenerate = 0;
};

using PairSampler = std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(Rng&)>;

inline PairSampler gaussian_pair_sampler(int dim, double scale = 1.0) {
    return [dim, scale](Rng& rng) {
        return std::make_pair(Eigen::VectorXd(scale * rng.gaussian_vector(dim)),
                              Eigen::VectorXd(scale * rng.gaussian_vector(dim)));
    };
}

inline PairSampler sphere_pair_sampler(int dim) {
    return [dim](Rng& rng) { return std::make_pair(rng.unit_vector(dim), rng.unit_vector(dim)); };
}

/// Estimates optimal bilipschitz bounds of `map` by sampling pairs.
///
/// Pair i is drawn from a stream seeded by (seed, i), so the reduction is
/// independent of how pairs are partitioned across threads. Pairs with
/// quotient distance at most 1e-12 are skipped and counted; more than 1% of
/// them is an error. When `ratio_stream` is set, rows
/// "input_distance,output_distance" are appended as they are produced (row
/// order is unspecified under threads > 1).
inline BilipschitzEstimate empirical_bilipschitz(const InvariantMap& map, const PairSampler& sampler,
                                                 std::int64_t pairs, std::uint64_t seed,
                                                 std::ostream* ratio_stream = nullptr, int threads = 1) {
    if (pairs < 0) throw InvalidParameter("empirical_bilipschitz: pair count must be nonnegative");
    if (threads < 1) threads = 1;

    std::mutex stream_mutex;
    std::vector<BilipschitzEstimate> partial(threads);
    for (auto& p : partial) {
        p.alpha_hat = std::numeric_limits<double>::infinity();
        p.beta_hat = 0.0;
    }

    auto work = [&](int w, std::int64_t lo, std::int64_t hi) {
        BilipschitzEstimate& acc = partial[w];
        std::string buffer;
        for (std::int64_t i = lo; i < hi; ++i) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
            const auto [x, y] = sampler(rng);
            const double din = map.distance(x, y);
            if (din <= 1e-12) {
                ++acc.degenerate;
                continue;
            }
            const double dout = (map(x) - map(y)).norm();
            const double ratio = dout / din;
            acc.alpha_hat = std::min(acc.alpha_hat, ratio);
            acc.beta_hat = std::max(acc.beta_hat, ratio);
            ++acc.used;
            if (ratio_stream) {
                buffer += format_double(din);
                buffer += ',';
                buffer += format_double(dout);
                buffer += '\n';
                if (buffer.size() > 1 << 16) {
                    std::lock_guard<std::mutex> lock(stream_mutex);
                    (*ratio_stream) << buffer;
                    buffer.clear();
                }
            }
        }
        if (ratio_stream && !buffer.empty()) {
            std::lock_guard<std::mutex> lock(stream_mutex);
            (*ratio_stream) << buffer;
        }
    };

    if (threads == 1) {
        work(0, 0, pairs);
    } else {
        std::vector<std::thread> pool;
        const std::int64_t chunk = (pairs + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const std::int64_t lo = w * chunk;
            const std::int64_t hi = std::min<std::int64_t>(pairs, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, w, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    BilipschitzEstimate total;
    total.alpha_hat = std::numeric_limits<double>::infinity();
    for (const auto& p : partial) {
        total.alpha_hat = std::min(total.alpha_hat, p.alpha_hat);
        total.beta_hat = std::max(total.beta_hat, p.beta_hat);
        total.used += p.used;
        total.degenerate += p.degenerate;
    }
    if (total.degenerate * 100 > pairs)
        throw DegeneratePair("empirical_bilipschitz: more than 1% of sampled pairs were degenerate");
    return total;
}

template <class Point>
struct LowerBoundResult {
    double best_c2 = 1.0;
    std::vector<Point> witness;
    DistortionCertificate certificate;
    std::vector<double> running_best;  // best certified value after each round
    int failed_rounds = 0;
};

/// Certified lower bounds on the Euclidean distortion of a quotient space by
/// sampling finite subsets and solving the distortion SDP on each: Euclidean
/// distortion is finitely determined, so every subset value bounds the space
/// from below. Round r draws from a stream seeded by (seed, r); results do
/// not depend on the thread count. Failed solver rounds are skipped and
/// counted.
template <class Point, class SampleFn, class DistFn>
LowerBoundResult<Point> lower_bound_search(SampleFn&& sample_point, DistFn&& dist, int set_size, int rounds,
                                           std::uint64_t seed, double tol = 1e-3, int threads = 1,
                                           SdpOptions opts = {}) {
    if (set_size < 2) throw InvalidParameter("lower_bound_search: set size must be at least 2");
    if (rounds < 1) throw InvalidParameter("lower_bound_search: need at least one round");
    if (threads < 1) threads = 1;

    struct RoundOutcome {
        bool ok = false;
        double c2 = 0.0;
        std::vector<Point> points;
        DistortionCertificate cert;
    };
    std::vector<RoundOutcome> outcomes(rounds);

    auto run_round = [&](int r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        std::vector<Point> pts;
        pts.reserve(set_size);
        int attempts = 0;
        while (static_cast<int>(pts.size()) < set_size && attempts < 100 * set_size) {
            ++attempts;
            Point candidate = sample_point(rng);
            bool separated = true;
            for (const auto& p : pts) {
                if (dist(p, candidate) <= 1e-6) {
                    separated = false;
                    break;
                }
            }
            if (separated) pts.push_back(std::move(candidate));
        }
        if (static_cast<int>(pts.size()) < set_size) return;  // degenerate sampling round
        try {
            const FiniteMetric metric =
                FiniteMetric::from_distances(set_size, [&](int i, int j) { return dist(pts[i], pts[j]); });
            DistortionCertificate cert = sdp_distortion(metric, tol, opts);
            outcomes[r].ok = true;
            outcomes[r].c2 = std::sqrt(cert.t);
            outcomes[r].points = std::move(pts);
            outcomes[r].cert = std::move(cert);
        } catch (const SolverError&) {
            // skip this round
        } catch (const ValidationError&) {
            // numerically degenerate metric; skip
        }
    };

    if (threads == 1) {
        for (int r = 0; r < rounds; ++r) run_round(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < rounds; r = next.fetch_add(1)) run_round(r);
            });
        }
        for (auto& t : pool) t.join();
    }

    LowerBoundResult<Point> result;
    double best = 0.0;
    result.running_best.reserve(rounds);
    for (int r = 0; r < rounds; ++r) {
        if (!outcomes[r].ok) {
            ++result.failed_rounds;
        } else if (outcomes[r].c2 > best) {
            best = outcomes[r].c2;
            result.witness = std::move(outcomes[r].points);
            result.certificate = std::move(outcomes[r].cert);
        }
        result.running_best.push_back(std::max(best, 1.0));
    }
    if (best == 0.0) throw SolverDivergence("lower_bound_search: every sampling round failed");
    result.best_c2 = best;
    return result;
}

/// Finitely supported scalar sequences for probing l^2(Z)/Z: support length
/// up to max_support, standard gaussian values.
inline std::function<SparseSeq(Rng&)> shift_space_sampler(int max_support) {
    if (max_support < 1) throw InvalidParameter("shift_space_sampler: support must be positive");
    return [max_support](Rng& rng) {
        const int len = 1 + static_cast<int>(rng.below(max_support));
        std::vector<std::pair<long long, Eigen::VectorXd>> raw;
        for (int i = 0; i < len; ++i) raw.emplace_back(i, Eigen::VectorXd::Constant(1, rng.gaussian()));
        return SparseSeq(1, std::move(raw));
    };
}

}  // namespace orbitmetric
