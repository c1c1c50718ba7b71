#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "orbitmetric/errors.hpp"
#include "orbitmetric/group_action.hpp"
#include "orbitmetric/invariant_map.hpp"
#include "orbitmetric/polynomial.hpp"
#include "orbitmetric/rng.hpp"

namespace orbitmetric {

namespace detail {

/// Monomial coefficients of the interpolating polynomial through
/// (nodes[i], values[i]), built from Newton divided differences.
inline std::vector<double> interpolate_univariate(const std::vector<double>& nodes, const std::vector<double>& values) {
    const int n = static_cast<int>(nodes.size());
    std::vector<double> dd = values;  // dd[i] becomes f[y_0..y_i]
    for (int level = 1; level < n; ++level) {
        for (int i = n - 1; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
        }
    }
    // expand c_0 + c_1 (t - y_0) + c_2 (t - y_0)(t - y_1) + ...
    std::vector<double> poly = {dd[0]};
    std::vector<double> basis = {1.0};
    for (int i = 1; i < n; ++i) {
        std::vector<double> next(basis.size() + 1, 0.0);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            next[k] -= nodes[i - 1] * basis[k];
            next[k + 1] += basis[k];
        }
        basis = std::move(next);
        if (poly.size() < basis.size()) poly.resize(basis.size(), 0.0);
        for (std::size_t k = 0; k < basis.size(); ++k) poly[k] += dd[i] * basis[k];
    }
    return poly;
}

inline std::vector<double> antiderivative(const std::vector<double>& coeffs) {
    std::vector<double> out(coeffs.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) out[k + 1] = coeffs[k] / static_cast<double>(k + 1);
    return out;
}

}  // namespace detail

/// Builds a polynomial p with prescribed gradients: grad p(u_i) = v_i.
///
/// A generic linear change of coordinates A makes every coordinate of the
/// transformed points distinct; the problem then splits into d univariate
/// interpolations of the partial derivatives, which are integrated and summed.
/// A is redrawn (up to 32 times) if coordinates collide within 1e-8.
inline MultiPoly gradient_interpolate(const std::vector<Eigen::VectorXd>& points,
                                      const std::vector<Eigen::VectorXd>& gradients, std::uint64_t seed = 0) {
    if (points.empty()) throw InvalidParameter("gradient_interpolate: no points");
    if (points.size() != gradients.size())
        throw DimensionMismatch("gradient_interpolate: point and gradient counts differ");
    const int d = static_cast<int>(points.front().size());
    const int n = static_cast<int>(points.size());
    for (const auto& p : points) {
        if (p.size() != d) throw DimensionMismatch("gradient_interpolate: inconsistent point dimensions");
    }
    for (const auto& v : gradients) {
        if (v.size() != d) throw DimensionMismatch("gradient_interpolate: inconsistent gradient dimensions");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if ((points[i] - points[j]).norm() <= 1e-8)
                throw DegeneratePoints("gradient_interpolate: interpolation points must be distinct");
        }
    }

    Rng rng(derive_seed(seed, 0xA17));
    Eigen::MatrixXd A;
    bool found = false;
    for (int attempt = 0; attempt < 32 && !found; ++attempt) {
        A = Eigen::MatrixXd::NullaryExpr(d, d, [&rng](Eigen::Index, Eigen::Index) { return rng.gaussian(); });
        found = true;
        for (int k = 0; k < d && found; ++k) {
            for (int i = 0; i < n && found; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    if (std::abs(A.row(k).dot(points[i] - points[j])) <= 1e-8) {
                        found = false;
                        break;
                    }
                }
            }
        }
        if (found && std::abs(A.determinant()) <= 1e-8) found = false;
    }
    if (!found) throw DegeneratePoints("gradient_interpolate: no generic coordinate change found in 32 draws");

    const Eigen::MatrixXd Ainv_t = A.transpose().inverse();
    MultiPoly p(d);
    for (int k = 0; k < d; ++k) {
        std::vector<double> nodes(n), values(n);
        for (int i = 0; i < n; ++i) {
            nodes[i] = A.row(k).dot(points[i]);
            values[i] = Ainv_t.row(k).dot(gradients[i]);
        }
        const std::vector<double> q = detail::interpolate_univariate(nodes, values);
        p += MultiPoly::compose_univariate(detail::antiderivative(q), A.row(k));
    }
    return p;
}

/// Reynolds operator (1/|G|) sum_g p(g x); the output is G-invariant.
inline MultiPoly reynolds_average(const MultiPoly& p, const GroupAction& group) {
    if (!group.finitely_enumerable())
        throw UnsupportedAction("reynolds_average: group must have finitely many elements");
    if (p.dim() != group.ambient_dim())
        throw DimensionMismatch("reynolds_average: polynomial dimension must match the ambient dimension");
    const auto elements = group.dense_elements();
    MultiPoly out(p.dim());
    for (const auto& g : elements) out += p.substitute_linear(g);
    out *= 1.0 / static_cast<double>(elements.size());
    return out;
}

/// For a group acting freely at the unit vector u, builds d invariant
/// polynomials whose joint Jacobian at u is the identity: interpolate
/// grad q_i(gu) = g e_i over the orbit, then Reynolds-average.
inline std::vector<MultiPoly> local_immersion_poly(const GroupAction& group, const Eigen::VectorXd& u,
                                                   std::uint64_t seed = 0) {
    if (!group.finitely_enumerable())
        throw UnsupportedAction("local_immersion_poly: group must have finitely many elements");
    group.check_vector(u);
    const auto elements = group.dense_elements();
    const int d = group.ambient_dim();

    std::vector<Eigen::VectorXd> orbit_points;
    orbit_points.reserve(elements.size());
    for (const auto& g : elements) orbit_points.push_back(g * u);
    for (std::size_t i = 0; i < orbit_points.size(); ++i) {
        for (std::size_t j = i + 1; j < orbit_points.size(); ++j) {
            if ((orbit_points[i] - orbit_points[j]).norm() <= 1e-8)
                throw NotFree("local_immersion_poly: orbit points collide; the action is not free at u");
        }
    }

    std::vector<MultiPoly> out;
    out.reserve(d);
    for (int i = 0; i < d; ++i) {
        std::vector<Eigen::VectorXd> grads;
        grads.reserve(elements.size());
        for (const auto& g : elements) grads.push_back(g.col(i));  // g e_i
        const MultiPoly q = gradient_interpolate(orbit_points, grads, derive_seed(seed, i));
        out.push_back(reynolds_average(q, group));
    }
    return out;
}

/// Character table of a finite abelian group given by a generator order list.
/// Row i holds the values of chi_i on all group elements, enumerated in mixed
/// radix over the generator exponents (element 0 is the identity).
class CharacterTable {
public:
    CharacterTable(std::vector<int> orders, const Eigen::MatrixXcd& generator_values) : orders_(std::move(orders)) {
        if (orders_.empty()) throw InvalidParameter("CharacterTable: empty generator list");
        for (int o : orders_) {
            if (o < 1) throw InvalidParameter("CharacterTable: generator orders must be positive");
        }
        if (generator_values.cols() != static_cast<int>(orders_.size()))
            throw DimensionMismatch("CharacterTable: one column of generator values per generator");
        const int d = static_cast<int>(generator_values.rows());
        long long size = 1;
        for (int o : orders_) {
            size *= o;
            if (size > (1 << 20)) throw InvalidParameter("CharacterTable: group too large");
        }
        n_ = static_cast<int>(size);

        for (int i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < orders_.size(); ++j) {
                std::complex<double> v = generator_values(i, j);
                if (std::abs(std::abs(v) - 1.0) > 1e-10)
                    throw InvalidParameter("CharacterTable: character values must have unit modulus");
                std::complex<double> pow = 1.0;
                for (int k = 0; k < orders_[j]; ++k) pow *= v;
                if (std::abs(pow - 1.0) > 1e-9)
                    throw InvalidParameter("CharacterTable: character value is not a root of unity of the generator order");
            }
        }

        table_.resize(d, n_);
        for (int g = 0; g < n_; ++g) {
            std::vector<int> exps = element_exponents(g);
            for (int i = 0; i < d; ++i) {
                std::complex<double> v = 1.0;
                for (std::size_t j = 0; j < orders_.size(); ++j) {
                    for (int k = 0; k < exps[j]; ++k) v *= generator_values(i, j);
                }
                table_(i, g) = v;
            }
        }
    }

    /// Cyclic group generated by one diagonal unitary; the order is inferred.
    static CharacterTable cyclic(const Eigen::VectorXcd& generator_diagonal) {
        const int d = static_cast<int>(generator_diagonal.size());
        int order = 0;
        std::vector<std::complex<double>> pows(d, 1.0);
        for (int m = 1; m <= 4096; ++m) {
            bool all_one = true;
            for (int i = 0; i < d; ++i) {
                pows[i] *= generator_diagonal(i);
                if (std::abs(pows[i] - 1.0) > 1e-9) all_one = false;
            }
            if (all_one) {
                order = m;
                break;
            }
        }
        if (order == 0) throw InvalidParameter("CharacterTable::cyclic: generator entries are not roots of unity");
        Eigen::MatrixXcd gen(d, 1);
        gen.col(0) = generator_diagonal;
        return CharacterTable({order}, gen);
    }

    int dim() const { return static_cast<int>(table_.rows()); }
    int group_size() const { return n_; }
    std::complex<double> value(int character, int element) const { return table_(character, element); }
    const Eigen::MatrixXcd& table() const { return table_; }
    const std::vector<int>& orders() const { return orders_; }

    /// Multiplicativity of a row over the group law, used by the validation tests.
    double multiplicativity_residual() const {
        double worst = 0.0;
        for (int a = 0; a < n_; ++a) {
            for (int b = 0; b < n_; ++b) {
                const int ab = product_index(a, b);
                for (int i = 0; i < dim(); ++i)
                    worst = std::max(worst, std::abs(table_(i, a) * table_(i, b) - table_(i, ab)));
            }
        }
        return worst;
    }

    /// The diagonal unitary action whose element diagonals are the columns.
    GroupAction action() const { return GroupAction::diagonal_unitary(table_); }

private:
    std::vector<int> element_exponents(int g) const {
        std::vector<int> exps(orders_.size());
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            exps[j] = g % orders_[j];
            g /= orders_[j];
        }
        return exps;
    }

    int product_index(int a, int b) const {
        const std::vector<int> ea = element_exponents(a), eb = element_exponents(b);
        int idx = 0, stride = 1;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            idx += ((ea[j] + eb[j]) % orders_[j]) * stride;
            stride *= orders_[j];
        }
        return idx;
    }

    std::vector<int> orders_;
    int n_ = 0;
    Eigen::MatrixXcd table_;
};

/// Least m_ij >= 0 with chi_i * chi_j^{m_ij} = 1 on the whole group, searched
/// over {0, ..., |G|-1}; characters take values in |G|-th roots of unity, so
/// any valid exponent appears in this window. Empty optional signals that the
/// action is not free on the sphere.
inline std::optional<Eigen::MatrixXi> abelian_exponents(const CharacterTable& table) {
    const int d = table.dim();
    const int n = table.group_size();
    Eigen::MatrixXi m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            int found = -1;
            for (int cand = 0; cand < n && found < 0; ++cand) {
                bool ok = true;
                for (int g = 0; g < n; ++g) {
                    std::complex<double> v = table.value(i, g);
                    for (int k = 0; k < cand; ++k) v *= table.value(j, g);
                    if (std::abs(v - 1.0) > 1e-9) {
                        ok = false;
                        break;
                    }
                }
                if (ok) found = cand;
            }
            if (found < 0) return std::nullopt;  // freeness failure
            m(i, j) = found;
        }
    }
    return m;
}

/// True iff every character has trivial kernel, which is equivalent to the
/// action being free on the sphere and to the existence of the exponents.
inline bool acts_freely_on_sphere(const CharacterTable& table) {
    for (int g = 1; g < table.group_size(); ++g) {
        for (int i = 0; i < table.dim(); ++i) {
            if (std::abs(table.value(i, g) - 1.0) <= 1e-9) return false;
        }
    }
    return true;
}

/// The invariant f(x) = { x_i * x_j^{m_ij} } over C^d (standard basis after a
/// change of coordinates), flattened to 2 d^2 reals. Bilipschitz on the sphere
/// quotient when the exponents exist.
inline InvariantMap abelian_invariant(const CharacterTable& table, const Eigen::MatrixXi& exponents) {
    const int d = table.dim();
    if (exponents.rows() != d || exponents.cols() != d)
        throw DimensionMismatch("abelian_invariant: exponent matrix must be d x d");
    auto action = std::make_shared<GroupAction>(table.action());
    Eigen::MatrixXi m = exponents;
    return make_action_map(action, 2 * d * d, [d, m](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Eigen::VectorXcd z = to_complex(x);
        Eigen::VectorXd out(2 * d * d);
        int k = 0;
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                std::complex<double> v = z(i);
                for (int p = 0; p < m(i, j); ++p) v *= z(j);
                out(k++) = v.real();
                out(k++) = v.imag();
            }
        }
        return out;
    });
}

}  // namespace orbitmetric
