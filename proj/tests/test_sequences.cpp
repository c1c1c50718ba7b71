#include <catch2/catch.hpp>

#include <map>

#include "orbitmetric/rng.hpp"
#include "orbitmetric/sequences.hpp"

using namespace orbitmetric;

namespace {

SparseSeq seq1(std::vector<std::pair<long long, double>> vals) {
    std::vector<std::pair<long long, Eigen::VectorXd>> raw;
    for (auto [i, v] : vals) raw.emplace_back(i, Eigen::VectorXd::Constant(1, v));
    return SparseSeq(1, std::move(raw));
}

SparseSeq seq_blocks(int d, std::vector<std::pair<long long, std::vector<double>>> vals) {
    std::vector<std::pair<long long, Eigen::VectorXd>> raw;
    for (auto& [i, v] : vals) {
        Eigen::VectorXd b(d);
        for (int j = 0; j < d; ++j) b(j) = v[j];
        raw.emplace_back(i, b);
    }
    return SparseSeq(d, std::move(raw));
}

/// Exhaustive oracle: every x entry is matched to a distinct y entry or split
/// to zero; leftover y entries pay their own norm.
double exhaustive_multiset_cost(const std::vector<Eigen::VectorXd>& xv, const std::vector<Eigen::VectorXd>& yv,
                                std::size_t i, std::vector<bool>& used) {
    if (i == xv.size()) {
        double rest = 0.0;
        for (std::size_t j = 0; j < yv.size(); ++j)
            if (!used[j]) rest += yv[j].squaredNorm();
        return rest;
    }
    double best = xv[i].squaredNorm() + exhaustive_multiset_cost(xv, yv, i + 1, used);
    for (std::size_t j = 0; j < yv.size(); ++j) {
        if (used[j]) continue;
        used[j] = true;
        best = std::min(best, (xv[i] - yv[j]).squaredNorm() + exhaustive_multiset_cost(xv, yv, i + 1, used));
        used[j] = false;
    }
    return best;
}

double exhaustive_multiset_distance(const SparseSeq& x, const SparseSeq& y) {
    std::vector<Eigen::VectorXd> xv, yv;
    for (const auto& [i, v] : x.entries) xv.push_back(v);
    for (const auto& [i, v] : y.entries) yv.push_back(v);
    std::vector<bool> used(yv.size(), false);
    return std::sqrt(exhaustive_multiset_cost(xv, yv, 0, used));
}

/// l2 distance of two index-aligned sparse sequences.
double aligned_l2(const SparseSeq& a, const SparseSeq& b) {
    std::map<long long, double> diff;
    for (const auto& [i, v] : a.entries) diff[i] += v(0);
    for (const auto& [i, v] : b.entries) diff[i] -= v(0);
    double s = 0.0;
    for (const auto& [i, v] : diff) s += v * v;
    return std::sqrt(s);
}

SparseSeq random_seq(Rng& rng, int max_support, int d = 1) {
    const int m = static_cast<int>(rng.below(max_support + 1));
    std::vector<std::pair<long long, Eigen::VectorXd>> raw;
    for (int i = 0; i < m; ++i) raw.emplace_back(i, rng.gaussian_vector(d));
    return SparseSeq(d, std::move(raw));
}

}  // namespace

TEST_CASE("multiset distance basics") {
    SECTION("direct match beats splitting to zeros") {
        const auto x = seq_blocks(2, {{0, {1, 1}}});
        const auto y = seq_blocks(2, {{0, {1, 0}}});
        CHECK(multiset_distance(x, y) == Approx(1.0));
    }
    SECTION("direct match and zero split tie at sqrt(2)") {
        const auto x = seq_blocks(2, {{0, {1, 0}}});
        const auto y = seq_blocks(2, {{0, {0, 1}}});
        CHECK(multiset_distance(x, y) == Approx(std::sqrt(2.0)));
    }
    SECTION("reordering is free") {
        const auto x = seq1({{0, 3.0}, {1, -1.0}, {2, 0.5}});
        const auto y = seq1({{5, -1.0}, {9, 0.5}, {17, 3.0}});
        CHECK(multiset_distance(x, y) == Approx(0.0).margin(1e-15));
    }
    SECTION("block dimension mismatch") {
        CHECK_THROWS_AS(multiset_distance(seq1({{0, 1.0}}), seq_blocks(2, {{0, {1, 0}}})), DimensionMismatch);
    }
}

TEST_CASE("assignment solver matches exhaustive bijection enumeration") {
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const auto x = random_seq(rng, 4, d);
        const auto y = random_seq(rng, 4, d);
        const double fast = multiset_distance(x, y);
        const double slow = exhaustive_multiset_distance(x, y);
        REQUIRE(fast == Approx(slow).margin(1e-12));
    }
}

TEST_CASE("multiset distance ignores indexing exactly") {
    Rng rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_seq(rng, 6);
        auto y = random_seq(rng, 6);
        const double before = multiset_distance(x, y);
        // scatter y across arbitrary indices
        std::vector<std::pair<long long, Eigen::VectorXd>> raw;
        long long base = 100;
        for (const auto& [i, v] : y.entries) raw.emplace_back(base -= 7, v);
        const SparseSeq y2(1, std::move(raw));
        REQUIRE(multiset_distance(x, y2) == before);
    }
}

TEST_CASE("sort_embed reproduces the interleaved sorted form") {
    const auto x = seq1({{0, 1.0}, {1, 0.5}, {2, -1.0 / 3}, {3, -0.25}, {4, 0.2}, {5, 1.0 / 6}, {6, -1.0 / 7}, {7, -0.125}});
    const auto phi = sort_embed(x);
    const std::vector<double> expected = {-1.0 / 3, 1.0, -0.25, 0.5, -1.0 / 7, 0.2, -0.125, 1.0 / 6};
    REQUIRE(phi.entries.size() == expected.size());
    for (std::size_t n = 0; n < expected.size(); ++n) {
        CHECK(phi.entries[n].first == static_cast<long long>(n));
        CHECK(phi.entries[n].second(0) == Approx(expected[n]));
    }
}

TEST_CASE("sort_embed of an all-positive sequence fills even slots only") {
    const auto x = seq1({{3, 0.5}, {10, 2.0}, {42, 1.0}});
    const auto phi = sort_embed(x);
    // positions (1-indexed): 2 -> 2.0, 4 -> 1.0, 6 -> 0.5; odd slots are zero and dropped
    REQUIRE(phi.entries.size() == 3);
    CHECK(phi.entries[0].first == 1);
    CHECK(phi.entries[0].second(0) == Approx(2.0));
    CHECK(phi.entries[1].first == 3);
    CHECK(phi.entries[1].second(0) == Approx(1.0));
    CHECK(phi.entries[2].first == 5);
    CHECK(phi.entries[2].second(0) == Approx(0.5));
}

TEST_CASE("sort_embed edge cases") {
    CHECK(sort_embed(SparseSeq(1, {})).empty());
    CHECK_THROWS_AS(sort_embed(seq_blocks(2, {{0, {1, 0}}})), UnsupportedDimension);
}

TEST_CASE("sorting isometry against the assignment oracle") {
    Rng rng(33);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto x = random_seq(rng, 8);
        const auto y = random_seq(rng, 8);
        const double oracle = multiset_distance(x, y);
        const double embedded = aligned_l2(sort_embed(x), sort_embed(y));
        REQUIRE(embedded == Approx(oracle).margin(1e-9));
        REQUIRE(multiset_distance(sort_embed(x), x) <= 1e-12);
    }
}

TEST_CASE("shift max filter and distance") {
    SECTION("impulses are shift equivalent") {
        const auto a = seq1({{0, 1.0}});
        const auto b = seq1({{5, 1.0}});
        CHECK(shift_max_filter(a, b) == Approx(1.0));
        CHECK(shift_quotient_distance(a, b) == Approx(0.0).margin(1e-12));
    }
    SECTION("two-entry example") {
        const auto a = seq1({{0, 1.0}, {1, 2.0}});
        const auto b = seq1({{0, 2.0}, {1, 1.0}});
        CHECK(shift_max_filter(a, b) == Approx(4.0));
        CHECK(shift_quotient_distance(a, b) == Approx(std::sqrt(2.0)));
    }
    SECTION("zero sequence") {
        const auto a = seq1({{0, 1.0}, {3, -2.0}});
        CHECK(shift_max_filter(a, SparseSeq(1, {})) == 0.0);
    }
    SECTION("shifted copies collapse") {
        const auto a = seq1({{0, 1.5}, {2, -0.5}});
        const auto b = seq1({{7, 1.5}, {9, -0.5}});
        CHECK(shift_quotient_distance(a, b) == Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("circular embedding preserves max filters for n >= 2N+2") {
    Rng rng(34);
    const int N = 6;
    for (int trial = 0; trial < 200; ++trial) {
        auto dense = [&](Rng& r) {
            std::vector<std::pair<long long, Eigen::VectorXd>> raw;
            for (int i = 0; i <= N; ++i) raw.emplace_back(i, Eigen::VectorXd::Constant(1, r.gaussian()));
            return SparseSeq(1, std::move(raw));
        };
        const auto a = dense(rng);
        const auto b = dense(rng);
        const double linear = shift_max_filter(a, b);
        for (int n = 2 * N + 2; n <= 2 * N + 8; ++n) {
            const double circ = circular_max_filter(circular_embed(a, n), circular_embed(b, n), n);
            REQUIRE(std::abs(circ - linear) <= 1e-12);
        }
    }
}

TEST_CASE("circular embedding examples") {
    SECTION("single atom") {
        const auto a = seq1({{0, 2.0}});
        const Eigen::VectorXd u = circular_embed(a, 1);
        CHECK(u.size() == 1);
        CHECK(circular_max_filter(u, u, 1) == Approx(4.0));
    }
    SECTION("matches the linear value at n = 5") {
        const auto a = seq1({{0, 1.0}, {1, 2.0}});
        const auto b = seq1({{0, 2.0}, {1, 1.0}});
        const double circ = circular_max_filter(circular_embed(a, 5), circular_embed(b, 5), 5);
        CHECK(circ == Approx(4.0));
    }
    SECTION("window too small") {
        const auto a = seq1({{0, 1.0}, {1, 2.0}});
        CHECK_THROWS_AS(circular_embed(a, 2), WindowTooSmall);
    }
}

TEST_CASE("circular max filter agrees with brute force") {
    Rng rng(35);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(6));
        const Eigen::VectorXd u = rng.gaussian_vector(n);
        const Eigen::VectorXd v = rng.gaussian_vector(n);
        double best = -1e300;
        for (int k = 0; k < n; ++k) {
            double c = 0.0;
            for (int j = 0; j < n; ++j) c += u(j) * v((j + k) % n);
            best = std::max(best, c);
        }
        REQUIRE(circular_max_filter(u, v, n) == Approx(best).margin(1e-12));
    }
    CHECK_THROWS_AS(circular_max_filter(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(4), 4), DimensionMismatch);
}

TEST_CASE("constant vector self correlation") {
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(4, 1.5);
    CHECK(circular_max_filter(u, u, 4) == Approx(u.squaredNorm()));
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(4), e3 = Eigen::VectorXd::Zero(4);
    e0(0) = 1;
    e3(3) = 1;
    CHECK(circular_max_filter(e0, e3, 4) == Approx(1.0));
}
