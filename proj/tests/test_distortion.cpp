#include <catch2/catch.hpp>

#include "orbitmetric/dual_certificates.hpp"
#include "orbitmetric/embeddings.hpp"
#include "orbitmetric/empirical.hpp"
#include "orbitmetric/sdp.hpp"
#include "test_helpers.hpp"

using namespace orbitmetric;

namespace {

/// Validates a certificate against its metric: PSD and D <= E(Q) <= t D.
void check_certificate(const FiniteMetric& metric, const DistortionCertificate& cert) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cert.Q);
    REQUIRE(es.info() == Eigen::Success);
    REQUIRE(es.eigenvalues().minCoeff() >= -1e-8 * std::max(1.0, cert.Q.norm()));
    for (int i = 0; i < metric.n; ++i) {
        for (int j = i + 1; j < metric.n; ++j) {
            const double e = cert.Q(i, i) - 2 * cert.Q(i, j) + cert.Q(j, j);
            REQUIRE(e >= metric.D(i, j) * (1.0 - 1e-7));
            REQUIRE(e <= cert.t * metric.D(i, j) * (1.0 + 1e-7));
        }
    }
}

/// Random snowflaked Euclidean metric: d(i,j) = |p_i - p_j|^gamma is a metric
/// for gamma in (0,1]; gamma < 1 is genuinely non-Euclidean.
FiniteMetric random_metric(Rng& rng, int n, double gamma) {
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < n; ++i) pts.push_back(rng.gaussian_vector(3));
    return FiniteMetric::from_distances(n, [&](int i, int j) { return std::pow((pts[i] - pts[j]).norm(), gamma); });
}

/// Random dual-feasible certificate: C A A' C is PSD with zero row sums.
DualCertificate random_dual(Rng& rng, int n) {
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) A.row(i) = rng.gaussian_vector(n).transpose();
    const Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    return {C * A * A.transpose() * C};
}

}  // namespace

TEST_CASE("finite metric validation") {
    SECTION("asymmetric matrix rejected") {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
        D(0, 1) = 1.0;
        D(1, 0) = 2.0;
        CHECK_THROWS_AS(FiniteMetric::from_squared(D), InvalidParameter);
    }
    SECTION("zero off-diagonal rejected") {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
        D(0, 1) = D(1, 0) = 1.0;
        D(0, 2) = D(2, 0) = 1.0;
        CHECK_THROWS_AS(FiniteMetric::from_squared(D), InvalidParameter);
    }
    SECTION("triangle violation rejected") {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
        auto set = [&](int i, int j, double d) { D(i, j) = D(j, i) = d * d; };
        set(0, 1, 1.0);
        set(1, 2, 1.0);
        set(0, 2, 5.0);
        CHECK_THROWS_AS(FiniteMetric::from_squared(D), InvalidParameter);
    }
    SECTION("cycle metric is valid") { CHECK_NOTHROW(cycle_graph_metric(7)); }
}

TEST_CASE("sdp distortion of small metrics") {
    SECTION("two points embed isometrically") {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
        D(0, 1) = D(1, 0) = 4.0;
        const auto cert = sdp_distortion(FiniteMetric::from_squared(D), 1e-6);
        CHECK(cert.t == Approx(1.0));
        check_certificate(FiniteMetric::from_squared(D), cert);
    }
    SECTION("4-cycle has c2 = sqrt(2)") {
        const auto metric = cycle_graph_metric(4);
        const auto cert = sdp_distortion(metric, 1e-6);
        CHECK(std::sqrt(cert.t) == Approx(std::sqrt(2.0)).margin(1e-4));
        check_certificate(metric, cert);
    }
    SECTION("6-cycle has c2 = 1.5") {
        const auto metric = cycle_graph_metric(6);
        const auto cert = sdp_distortion(metric, 1e-6);
        CHECK(std::sqrt(cert.t) == Approx(1.5).margin(1e-4));
        check_certificate(metric, cert);
    }
    SECTION("n > 64 rejected") {
        CHECK_THROWS_AS(sdp_distortion(cycle_graph_metric(66), 1e-4), InvalidParameter);
    }
}

TEST_CASE("gram_to_embedding reproduces the certificate distances") {
    SECTION("identity Gram on two points") {
        DistortionCertificate cert{1.0, Eigen::MatrixXd::Identity(2, 2)};
        const Eigen::MatrixXd pts = gram_to_embedding(cert);
        CHECK((pts.row(0) - pts.row(1)).norm() == Approx(std::sqrt(2.0)).margin(1e-12));
    }
    SECTION("optimal 4-cycle embedding realizes the cycle metric up to sqrt(2)") {
        const auto metric = cycle_graph_metric(4);
        const auto cert = sdp_distortion(metric, 1e-6);
        const Eigen::MatrixXd pts = gram_to_embedding(cert);
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                const double e = (pts.row(i) - pts.row(j)).squaredNorm();
                const double via_gram = cert.Q(i, i) - 2 * cert.Q(i, j) + cert.Q(j, j);
                REQUIRE(e == Approx(via_gram).margin(1e-7 * std::max(1.0, via_gram)));
                REQUIRE(e >= metric.D(i, j) * (1 - 1e-7));
                REQUIRE(e <= 2.0 * metric.D(i, j) * (1 + 1e-4));
            }
        }
    }
    SECTION("rank-deficient Gram keeps distances") {
        Eigen::MatrixXd Q(3, 3);
        Q << 1, 1, 0, 1, 1, 0, 0, 0, 1;  // rank 2
        DistortionCertificate cert{1.0, Q};
        const Eigen::MatrixXd pts = gram_to_embedding(cert);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                REQUIRE((pts.row(i) - pts.row(j)).squaredNorm() ==
                        Approx(Q(i, i) - 2 * Q(i, j) + Q(j, j)).margin(1e-9));
    }
}

TEST_CASE("dual certificates for cycles") {
    SECTION("n = 4 circulant entries and row sums") {
        const auto dual = cycle_certificate(4);
        CHECK(dual.Q(0, 0) == Approx(1.0));          // 2 cos^2(pi/4)
        CHECK(dual.Q(0, 1) == Approx(-1.0));
        CHECK(dual.Q(0, 2) == Approx(1.0));          // antipodal 2 sin^2(pi/4)
        CHECK((dual.Q * Eigen::VectorXd::Ones(4)).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    SECTION("n = 6 is PSD") {
        const auto dual = cycle_certificate(6);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dual.Q);
        REQUIRE(es.info() == Eigen::Success);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    }
    SECTION("odd n rejected") { CHECK_THROWS_AS(cycle_certificate(3), InvalidParameter); }
}

TEST_CASE("verify_dual") {
    const auto metric = cycle_graph_metric(4);
    SECTION("zero certificate has zero gap but is not optimal") {
        const auto v = verify_dual(metric, {Eigen::MatrixXd::Zero(4, 4)}, 1.3);
        CHECK(v.gap == 0.0);
        CHECK_FALSE(v.optimal);
    }
    SECTION("circulant certificate certifies c = sqrt(2)") {
        const auto v = verify_dual(metric, cycle_certificate(4), std::sqrt(2.0));
        CHECK(std::abs(v.gap) < 1e-12);
        CHECK(v.optimal);
    }
    SECTION("c = 1.5 leaves the frozen gap 2") {
        // <D,Q+> = 16, <D,Q-> = 8: gap = 2.25 * 8 - 16 = 2
        const auto v = verify_dual(metric, cycle_certificate(4), 1.5);
        CHECK(v.gap == Approx(2.0).margin(1e-12));
        CHECK_FALSE(v.optimal);
    }
    SECTION("invalid certificates are rejected") {
        CHECK_THROWS_AS(verify_dual(metric, {Eigen::MatrixXd::Identity(4, 4)}, 1.0), InvalidCertificate);
        Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(4, 4);
        asym(0, 1) = 1.0;
        CHECK_THROWS_AS(verify_dual(metric, {asym}, 1.0), InvalidCertificate);
    }
}

TEST_CASE("weak duality holds for generated triples") {
    Rng rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(5));
        const auto metric = random_metric(rng, n, 0.5 + 0.5 * rng.uniform());
        const auto primal = sdp_distortion(metric, 1e-5);
        const auto dual = random_dual(rng, n);
        const Eigen::MatrixXd Qp = dual.Q.cwiseMax(0.0);
        const Eigen::MatrixXd Qm = (-dual.Q).cwiseMax(0.0);
        const double plus = (metric.D.array() * Qp.array()).sum();
        const double minus = (metric.D.array() * Qm.array()).sum();
        REQUIRE(plus <= primal.t * minus + 1e-9);
    }
}

TEST_CASE("sdp monotonicity and subset consistency") {
    Rng rng(72);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 5 + static_cast<int>(rng.below(3));
        const auto big = random_metric(rng, n, 0.6 + 0.3 * rng.uniform());
        const auto big_cert = sdp_distortion(big, 1e-6);

        // nested prefix metrics never decrease c2
        double prev = 1.0;
        for (int m = 3; m <= n; ++m) {
            const auto sub = FiniteMetric::from_squared(big.D.topLeftCorner(m, m));
            const double c2 = std::sqrt(sdp_distortion(sub, 1e-6).t);
            REQUIRE(c2 >= prev - 1e-6);
            REQUIRE(c2 <= std::sqrt(big_cert.t) + 1e-6);
            prev = c2;
        }
    }
}

TEST_CASE("circle distortion") {
    SECTION("projective circle metric gives sqrt(2)") {
        const double v = circle_distortion([](double t) { return std::sqrt(2.0 * (1.0 + std::cos(M_PI * t))); });
        CHECK(v == Approx(std::sqrt(2.0)).margin(1e-6));
        CHECK(v <= M_PI / 2.0 + 1e-6);
    }
    SECTION("power-map pullback gives r sin(pi/2r)") {
        for (int r : {2, 3, 4}) {
            const double v = circle_distortion([r](double t) { return std::sin(M_PI * t) / std::sin(M_PI * t / r); });
            CHECK(v == Approx(r * std::sin(M_PI / (2.0 * r))).margin(1e-6));
            CHECK(v <= M_PI / 2.0 + 1e-6);
        }
    }
    SECTION("graph metric on the circle gives pi/2") {
        const double v = circle_distortion([](double t) { return 2.0 * std::sin(M_PI * t) / std::min(t, 1.0 - t); });
        CHECK(v == Approx(M_PI / 2.0).margin(1e-6));
        CHECK(v <= M_PI / 2.0 + 1e-6);
    }
    SECTION("non-monotone g rejected") {
        CHECK_THROWS_AS(circle_distortion([](double t) { return t; }), NotMonotone);
    }
}

TEST_CASE("empirical bilipschitz estimation") {
    SECTION("identity over the trivial group") {
        InvariantMap ident;
        ident.input_dim = 3;
        ident.target_dim = 3;
        ident.eval = [](const Eigen::VectorXd& x) { return x; };
        ident.domain_distance = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return (x - y).norm(); };
        const auto est = empirical_bilipschitz(ident, gaussian_pair_sampler(3), 2000, 73);
        CHECK(est.alpha_hat == Approx(1.0));
        CHECK(est.beta_hat == Approx(1.0));
    }
    SECTION("projective embedding ratios stay in [1, sqrt(2)]") {
        const auto est = empirical_bilipschitz(real_projective_embed(2), gaussian_pair_sampler(2), 50000, 74);
        CHECK(est.alpha_hat >= 1.0 - 1e-9);
        CHECK(est.beta_hat <= std::sqrt(2.0) + 1e-9);
    }
    SECTION("unnormalized outer product has radius-growing upper ratios") {
        const auto near = empirical_bilipschitz(unnormalized_projective_map(2), gaussian_pair_sampler(2, 1.0), 20000, 75);
        const auto far = empirical_bilipschitz(unnormalized_projective_map(2), gaussian_pair_sampler(2, 5.0), 20000, 75);
        CHECK(far.beta_hat > 2.0 * near.beta_hat);
    }
    SECTION("multithreaded reduction matches single thread") {
        const auto one = empirical_bilipschitz(real_projective_embed(2), gaussian_pair_sampler(2), 10000, 76, nullptr, 1);
        const auto four = empirical_bilipschitz(real_projective_embed(2), gaussian_pair_sampler(2), 10000, 76, nullptr, 4);
        CHECK(one.alpha_hat == four.alpha_hat);
        CHECK(one.beta_hat == four.beta_hat);
    }
}

TEST_CASE("lower bound search") {
    SECTION("pairs always embed isometrically") {
        const auto res = lower_bound_search<Eigen::VectorXd>(
            [](Rng& rng) { return rng.gaussian_vector(3); },
            [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm(); }, 2, 20, 77);
        CHECK(res.best_c2 == Approx(1.0).margin(1e-5));
    }
    SECTION("euclidean subsets stay at c2 = 1") {
        const auto res = lower_bound_search<Eigen::VectorXd>(
            [](Rng& rng) { return rng.gaussian_vector(4); },
            [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm(); }, 6, 10, 78);
        CHECK(res.best_c2 == Approx(1.0).margin(1e-4));
    }
    SECTION("shift quotient subsets certify c2 > 1") {
        const auto res = lower_bound_search<SparseSeq>(
            shift_space_sampler(6),
            [](const SparseSeq& a, const SparseSeq& b) { return shift_quotient_distance(a, b); }, 6, 25, 0, 1e-4);
        CHECK(res.best_c2 > 1.0 + 1e-3);
        // running best is monotone by construction
        for (std::size_t i = 1; i < res.running_best.size(); ++i)
            REQUIRE(res.running_best[i] >= res.running_best[i - 1]);
        // the archived witness reproduces the certified value
        REQUIRE(res.witness.size() == 6);
        const auto metric = FiniteMetric::from_distances(
            6, [&](int i, int j) { return shift_quotient_distance(res.witness[i], res.witness[j]); });
        check_certificate(metric, res.certificate);
    }
    SECTION("thread count does not change the result") {
        const auto seq = lower_bound_search<Eigen::VectorXd>(
            [](Rng& rng) { return rng.gaussian_vector(3); },
            [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm(); }, 4, 12, 79, 1e-3, 1);
        const auto par = lower_bound_search<Eigen::VectorXd>(
            [](Rng& rng) { return rng.gaussian_vector(3); },
            [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm(); }, 4, 12, 79, 1e-3, 3);
        CHECK(seq.best_c2 == par.best_c2);
    }
}
