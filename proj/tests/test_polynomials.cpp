#include <catch2/catch.hpp>

#include "orbitmetric/poly_invariants.hpp"
#include "orbitmetric/rng.hpp"
#include "test_helpers.hpp"

using namespace orbitmetric;
using testutil::vec2;

namespace {

MultiPoly random_poly(Rng& rng, int dim, int max_degree, int terms) {
    MultiPoly p(dim);
    for (int t = 0; t < terms; ++t) {
        MultiPoly::Exponents e(dim, 0);
        int budget = max_degree;
        for (int i = 0; i < dim; ++i) {
            const int k = static_cast<int>(rng.below(budget + 1));
            e[i] = k;
            budget -= k;
        }
        p.add_term(e, rng.gaussian());
    }
    return p;
}

Eigen::MatrixXd fd_jacobian(const std::vector<MultiPoly>& polys, const Eigen::VectorXd& u, double h = 1e-5) {
    const int d = static_cast<int>(u.size());
    Eigen::MatrixXd J(static_cast<int>(polys.size()), d);
    for (std::size_t i = 0; i < polys.size(); ++i) {
        for (int j = 0; j < d; ++j) {
            Eigen::VectorXd up = u, dn = u;
            up(j) += h;
            dn(j) -= h;
            J(static_cast<int>(i), j) = (polys[i].evaluate(up) - polys[i].evaluate(dn)) / (2 * h);
        }
    }
    return J;
}

bool same_coefficients(const MultiPoly& a, const MultiPoly& b, double tol) {
    MultiPoly diff = a;
    diff += -1.0 * b;
    for (const auto& [e, c] : diff.terms()) {
        if (std::abs(c) > tol) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("polynomial evaluation and symbolic gradient agree with finite differences") {
    Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 1 + static_cast<int>(rng.below(3));
        const MultiPoly p = random_poly(rng, dim, 4, 6);
        const Eigen::VectorXd x = rng.gaussian_vector(dim);
        const Eigen::VectorXd sym = p.gradient_at(x);
        for (int j = 0; j < dim; ++j) {
            Eigen::VectorXd up = x, dn = x;
            const double h = 1e-6;
            up(j) += h;
            dn(j) -= h;
            const double fd = (p.evaluate(up) - p.evaluate(dn)) / (2 * h);
            REQUIRE(fd == Approx(sym(j)).margin(1e-6 * std::max(1.0, std::abs(sym(j)))));
        }
    }
}

TEST_CASE("polynomial degree cap") {
    MultiPoly p(1);
    CHECK_THROWS_AS(p.add_term({65}, 1.0), InvalidParameter);
}

TEST_CASE("gradient interpolation") {
    SECTION("single zero point with zero gradient") {
        const MultiPoly p = gradient_interpolate({Eigen::VectorXd::Zero(2)}, {Eigen::VectorXd::Zero(2)});
        CHECK(p.gradient_at(Eigen::VectorXd::Zero(2)).norm() < 1e-12);
    }
    SECTION("single point with gradient e1 gives a linear polynomial") {
        Eigen::VectorXd e1(2);
        e1 << 1, 0;
        const MultiPoly p = gradient_interpolate({vec2(0.3, -0.7)}, {e1});
        CHECK(p.degree() <= 1);
        Rng rng(62);
        for (int i = 0; i < 10; ++i) {
            CHECK((p.gradient_at(rng.gaussian_vector(2)) - e1).norm() < 1e-9);
        }
    }
    SECTION("two points with prescribed gradients") {
        const std::vector<Eigen::VectorXd> u = {vec2(0, 0), vec2(1, 0)};
        const std::vector<Eigen::VectorXd> v = {vec2(1, 0), vec2(0, 1)};
        const MultiPoly p = gradient_interpolate(u, v);
        for (int i = 0; i < 2; ++i) {
            CHECK((p.gradient_at(u[i]) - v[i]).norm() < 1e-6);
        }
        // finite-difference oracle
        const Eigen::MatrixXd J = fd_jacobian({p}, u[0]);
        CHECK(std::abs(J(0, 0) - 1.0) < 1e-5);
        CHECK(std::abs(J(0, 1)) < 1e-5);
    }
    SECTION("round trip on random instances") {
        Rng rng(63);
        for (int trial = 0; trial < 30; ++trial) {
            const int dim = 2 + static_cast<int>(rng.below(2));
            const int n = 1 + static_cast<int>(rng.below(5));
            std::vector<Eigen::VectorXd> pts, grads;
            for (int i = 0; i < n; ++i) {
                pts.push_back(rng.gaussian_vector(dim));
                grads.push_back(rng.gaussian_vector(dim));
            }
            bool distinct = true;
            for (int i = 0; i < n && distinct; ++i)
                for (int j = i + 1; j < n; ++j)
                    if ((pts[i] - pts[j]).norm() <= 1e-8) distinct = false;
            if (!distinct) continue;
            const MultiPoly p = gradient_interpolate(pts, grads, trial);
            for (int i = 0; i < n; ++i) {
                REQUIRE((p.gradient_at(pts[i]) - grads[i]).norm() < 1e-6 * std::max(1.0, grads[i].norm()));
            }
        }
    }
    SECTION("duplicate points are degenerate") {
        CHECK_THROWS_AS(gradient_interpolate({vec2(1, 1), vec2(1, 1)}, {vec2(1, 0), vec2(0, 1)}), DegeneratePoints);
    }
}

TEST_CASE("Reynolds averaging") {
    SECTION("odd coordinate function averages to zero over the sign group") {
        const MultiPoly p = MultiPoly::variable(2, 0);
        const MultiPoly avg = reynolds_average(p, GroupAction::sign(2));
        CHECK(avg.is_zero());
    }
    SECTION("even monomial is already invariant") {
        MultiPoly p(2);
        p.add_term({2, 0}, 1.0);
        const MultiPoly avg = reynolds_average(p, GroupAction::sign(2));
        CHECK(same_coefficients(avg, p, 1e-12));
    }
    SECTION("coordinate swap symmetrizes") {
        const MultiPoly p = MultiPoly::variable(2, 0);
        const MultiPoly avg = reynolds_average(p, GroupAction::permutation_coordinates(2));
        MultiPoly expected(2);
        expected.add_term({1, 0}, 0.5);
        expected.add_term({0, 1}, 0.5);
        CHECK(same_coefficients(avg, expected, 1e-12));
    }
    SECTION("output is invariant under sampled group elements") {
        Rng rng(64);
        const auto group = testutil::dihedral_action(3);
        const MultiPoly p = random_poly(rng, 2, 3, 5);
        const MultiPoly avg = reynolds_average(p, group);
        const auto elements = group.dense_elements();
        for (int trial = 0; trial < 50; ++trial) {
            const Eigen::VectorXd x = rng.gaussian_vector(2);
            const auto& g = elements[rng.below(elements.size())];
            REQUIRE(avg.evaluate(g * x) == Approx(avg.evaluate(x)).margin(1e-9));
        }
    }
    SECTION("idempotence on already invariant polynomials") {
        Rng rng(65);
        const auto group = GroupAction::permutation_coordinates(3);
        const MultiPoly p = random_poly(rng, 3, 3, 6);
        const MultiPoly once = reynolds_average(p, group);
        const MultiPoly twice = reynolds_average(once, group);
        CHECK(same_coefficients(once, twice, 1e-12));
    }
    SECTION("infinite kinds are unsupported") {
        CHECK_THROWS_AS(reynolds_average(MultiPoly::variable(2, 0), GroupAction::phase(1)), UnsupportedAction);
    }
}

TEST_CASE("local immersion polynomials") {
    SECTION("trivial group: Jacobian is exactly the identity") {
        const auto trivial = GroupAction::finite_matrix({Eigen::MatrixXd::Identity(2, 2)});
        const auto polys = local_immersion_poly(trivial, vec2(0.6, -0.8));
        const Eigen::MatrixXd J = fd_jacobian(polys, vec2(0.6, -0.8));
        CHECK((J - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-9);
    }
    SECTION("sign group on R^2 at u = e1") {
        const auto polys = local_immersion_poly(GroupAction::sign(2), vec2(1, 0));
        REQUIRE(polys.size() == 2);
        const Eigen::MatrixXd J = fd_jacobian(polys, vec2(1, 0));
        CHECK((J - Eigen::MatrixXd::Identity(2, 2)).operatorNorm() < 1e-5);
        // the polynomials are sign invariant
        Rng rng(66);
        for (int i = 0; i < 20; ++i) {
            const Eigen::VectorXd x = rng.gaussian_vector(2);
            for (const auto& p : polys) REQUIRE(p.evaluate(x) == Approx(p.evaluate(-x)).margin(1e-9));
        }
    }
    SECTION("a reflection fixing u breaks freeness") {
        Eigen::MatrixXd refl(2, 2);
        refl << 1, 0, 0, -1;
        const auto group = GroupAction::finite_matrix({Eigen::MatrixXd::Identity(2, 2), refl});
        CHECK_THROWS_AS(local_immersion_poly(group, vec2(1, 0)), NotFree);
    }
}

TEST_CASE("character tables") {
    SECTION("cyclic table from diag(i, -i)") {
        const auto table = CharacterTable::cyclic(Eigen::Vector2cd(std::complex<double>(0, 1), std::complex<double>(0, -1)));
        CHECK(table.group_size() == 4);
        CHECK(table.dim() == 2);
        CHECK(table.multiplicativity_residual() < 1e-10);
    }
    SECTION("non-root-of-unity generator rejected") {
        CHECK_THROWS_AS(CharacterTable::cyclic(Eigen::VectorXcd::Constant(1, std::polar(1.0, 1.0))), InvalidParameter);
    }
    SECTION("product group Z2 x Z2") {
        Eigen::MatrixXcd gen(2, 2);
        gen << -1.0, 1.0, 1.0, -1.0;  // chi_1 = (-1)^a, chi_2 = (-1)^b
        const CharacterTable table({2, 2}, gen);
        CHECK(table.group_size() == 4);
        CHECK(table.multiplicativity_residual() < 1e-12);
        CHECK_FALSE(acts_freely_on_sphere(table));  // (a,b) = (0,1) fixes u_1
    }
}

TEST_CASE("abelian exponents") {
    SECTION("minus identity on C^2 gives all ones") {
        const auto table = CharacterTable::cyclic(Eigen::Vector2cd(-1.0, -1.0));
        const auto m = abelian_exponents(table);
        REQUIRE(m.has_value());
        CHECK((*m)(0, 0) == 1);
        CHECK((*m)(0, 1) == 1);
        CHECK((*m)(1, 0) == 1);
        CHECK((*m)(1, 1) == 1);
    }
    SECTION("diag(i, -i): frozen oracle [[3,1],[1,3]]") {
        const std::complex<double> I(0, 1);
        // independent brute force: chi_1(g^k) = i^k, chi_2(g^k) = (-i)^k
        auto ok = [&](int i, int j, int m) {
            for (int k = 0; k < 4; ++k) {
                const std::complex<double> ci = std::pow(i == 0 ? I : -I, k);
                const std::complex<double> cj = std::pow(j == 0 ? I : -I, k);
                std::complex<double> v = ci;
                for (int t = 0; t < m; ++t) v *= cj;
                if (std::abs(v - 1.0) > 1e-12) return false;
            }
            return true;
        };
        Eigen::MatrixXi expected(2, 2);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                int least = -1;
                for (int m = 0; m < 4 && least < 0; ++m)
                    if (ok(i, j, m)) least = m;
                expected(i, j) = least;
            }
        }
        REQUIRE(expected(0, 0) == 3);
        REQUIRE(expected(0, 1) == 1);
        REQUIRE(expected(1, 0) == 1);
        REQUIRE(expected(1, 1) == 3);

        const auto table = CharacterTable::cyclic(Eigen::Vector2cd(I, -I));
        const auto m = abelian_exponents(table);
        REQUIRE(m.has_value());
        CHECK((*m - expected).cwiseAbs().maxCoeff() == 0);
    }
    SECTION("diag(1, -1) fails freeness") {
        const auto table = CharacterTable::cyclic(Eigen::Vector2cd(1.0, -1.0));
        CHECK_FALSE(abelian_exponents(table).has_value());
        CHECK_FALSE(acts_freely_on_sphere(table));
    }
    SECTION("trivial group acts freely") {
        const auto table = CharacterTable::cyclic(Eigen::VectorXcd::Ones(2));
        CHECK(acts_freely_on_sphere(table));
        CHECK(abelian_exponents(table).has_value());
    }
}

TEST_CASE("freeness is equivalent to exponent existence on random cyclic tables") {
    Rng rng(67);
    int free_count = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int order = 2 + static_cast<int>(rng.below(10));
        const int d = 1 + static_cast<int>(rng.below(3));
        Eigen::VectorXcd gen(d);
        for (int i = 0; i < d; ++i) {
            const int a = static_cast<int>(rng.below(order));
            gen(i) = std::polar(1.0, 2.0 * M_PI * a / order);
        }
        // ensure the generator really has the claimed order (else cyclic() infers a divisor)
        const auto table = CharacterTable::cyclic(gen);
        const bool free = acts_freely_on_sphere(table);
        const bool has_exponents = abelian_exponents(table).has_value();
        REQUIRE(free == has_exponents);
        free_count += free ? 1 : 0;
    }
    CHECK(free_count > 0);
    CHECK(free_count < 50);
}

TEST_CASE("abelian invariant map") {
    const std::complex<double> I(0, 1);
    SECTION("order-2 case coincides with the quadratic monomials") {
        const auto table = CharacterTable::cyclic(Eigen::Vector2cd(-1.0, -1.0));
        const auto m = abelian_exponents(table);
        REQUIRE(m.has_value());
        const InvariantMap f = abelian_invariant(table, *m);
        Rng rng(68);
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::VectorXd x = rng.gaussian_vector(4);
            const Eigen::VectorXcd z = to_complex(x);
            const Eigen::VectorXd out = f(x);
            int k = 0;
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    const std::complex<double> expect = z(i) * z(j);
                    REQUIRE(out(k++) == Approx(expect.real()).margin(1e-12));
                    REQUIRE(out(k++) == Approx(expect.imag()).margin(1e-12));
                }
            }
        }
    }
    SECTION("invariance under the group") {
        const auto table = CharacterTable::cyclic(Eigen::Vector2cd(I, -I));
        const auto m = abelian_exponents(table);
        REQUIRE(m.has_value());
        const InvariantMap f = abelian_invariant(table, *m);
        const auto action = table.action();
        Rng rng(69);
        for (int trial = 0; trial < 100; ++trial) {
            const Eigen::VectorXd x = rng.gaussian_vector(4);
            const int g = static_cast<int>(rng.below(4));
            REQUIRE((f(x) - f(action.apply_diagonal(x, g))).norm() <= 1e-10);
        }
    }
    SECTION("empirical sphere lower Lipschitz bound is positive") {
        const auto table = CharacterTable::cyclic(Eigen::Vector2cd(I, -I));
        const InvariantMap f = abelian_invariant(table, *abelian_exponents(table));
        Rng rng(70);
        double lo = 1e300;
        for (int i = 0; i < 20000; ++i) {
            const Eigen::VectorXd x = rng.unit_vector(4), y = rng.unit_vector(4);
            const double din = f.distance(x, y);
            if (din < 1e-9) continue;
            lo = std::min(lo, (f(x) - f(y)).norm() / din);
        }
        CHECK(lo > 0.05);
    }
}
