#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "orbitmetric/errors.hpp"

namespace orbitmetric {

// Complex spaces are handled as real spaces of doubled dimension with an
// interleaved (re, im) layout and the real part of the complex inner product.

inline Eigen::VectorXcd to_complex(const Eigen::VectorXd& x) {
    if (x.size() % 2 != 0) throw DimensionMismatch("interleaved complex vector must have even length");
    Eigen::VectorXcd z(x.size() / 2);
    for (int i = 0; i < z.size(); ++i) z(i) = std::complex<double>(x(2 * i), x(2 * i + 1));
    return z;
}

inline Eigen::VectorXd to_interleaved(const Eigen::VectorXcd& z) {
    Eigen::VectorXd x(2 * z.size());
    for (int i = 0; i < z.size(); ++i) {
        x(2 * i) = z(i).real();
        x(2 * i + 1) = z(i).imag();
    }
    return x;
}

/// Complex inner product <z, x> (conjugating on the left) of interleaved vectors.
inline std::complex<double> complex_inner(const Eigen::VectorXd& z, const Eigen::VectorXd& x) {
    if (z.size() != x.size()) throw DimensionMismatch("complex_inner: sizes differ");
    if (z.size() % 2 != 0) throw DimensionMismatch("complex_inner: odd interleaved length");
    double re = 0.0, im = 0.0;
    for (int i = 0; i < z.size(); i += 2) {
        re += z(i) * x(i) + z(i + 1) * x(i + 1);
        im += z(i) * x(i + 1) - z(i + 1) * x(i);
    }
    return {re, im};
}

enum class ActionKind {
    finite_matrix,
    sign,
    phase,
    cyclic_rotation,
    permutation,
    circular_shift,
    diagonal_unitary,
    integer_shift,
    multiset,
};

enum class PermutationMode { coordinates, columns };

inline const char* kind_name(ActionKind k) {
    switch (k) {
        case ActionKind::finite_matrix: return "finite_matrix";
        case ActionKind::sign: return "sign";
        case ActionKind::phase: return "phase";
        case ActionKind::cyclic_rotation: return "cyclic_rotation";
        case ActionKind::permutation: return "permutation";
        case ActionKind::circular_shift: return "circular_shift";
        case ActionKind::diagonal_unitary: return "diagonal_unitary";
        case ActionKind::integer_shift: return "integer_shift";
        case ActionKind::multiset: return "multiset";
    }
    return "?";
}

/// A group of linear isometries, either an explicit finite element list or a
/// closed-form quotient rule. Immutable after construction.
class GroupAction {
public:
    static constexpr double kElementTol = 1e-10;
    static constexpr std::int64_t kMaxEnumeration = 100000;

    static GroupAction sign(int dim) {
        if (dim < 1) throw InvalidParameter("sign action: dimension must be positive");
        GroupAction a(ActionKind::sign, dim);
        return a;
    }

    static GroupAction phase(int complex_dim) {
        if (complex_dim < 1) throw InvalidParameter("phase action: dimension must be positive");
        GroupAction a(ActionKind::phase, 2 * complex_dim);
        a.complex_dim_ = complex_dim;
        return a;
    }

    static GroupAction cyclic_rotation(int r, int complex_dim = 1) {
        if (r < 1) throw InvalidParameter("cyclic_rotation: order must be positive");
        if (complex_dim < 1) throw InvalidParameter("cyclic_rotation: dimension must be positive");
        GroupAction a(ActionKind::cyclic_rotation, 2 * complex_dim);
        a.r_ = r;
        a.complex_dim_ = complex_dim;
        return a;
    }

    static GroupAction permutation_coordinates(int n) {
        if (n < 1) throw InvalidParameter("permutation: n must be positive");
        GroupAction a(ActionKind::permutation, n);
        a.n_ = n;
        a.perm_mode_ = PermutationMode::coordinates;
        return a;
    }

    static GroupAction permutation_columns(int n, int d) {
        if (n < 1 || d < 1) throw InvalidParameter("permutation: n and d must be positive");
        GroupAction a(ActionKind::permutation, n * d);
        a.n_ = n;
        a.block_dim_ = d;
        a.perm_mode_ = PermutationMode::columns;
        return a;
    }

    static GroupAction circular_shift(int n) {
        if (n < 1) throw InvalidParameter("circular_shift: n must be positive");
        GroupAction a(ActionKind::circular_shift, n);
        a.n_ = n;
        return a;
    }

    /// Columns of `element_diagonals` are the diagonals of the group elements
    /// acting on C^d; closure and unit modulus are validated.
    static GroupAction diagonal_unitary(Eigen::MatrixXcd element_diagonals) {
        const int d = static_cast<int>(element_diagonals.rows());
        if (d < 1 || element_diagonals.cols() < 1)
            throw InvalidParameter("diagonal_unitary: empty element table");
        GroupAction a(ActionKind::diagonal_unitary, 2 * d);
        a.complex_dim_ = d;
        a.diag_elements_ = std::move(element_diagonals);
        a.validate_diagonal_unitary();
        return a;
    }

    static GroupAction finite_matrix(std::vector<Eigen::MatrixXd> elements) {
        if (elements.empty()) throw InvalidParameter("finite_matrix: empty element list");
        const int d = static_cast<int>(elements.front().rows());
        GroupAction a(ActionKind::finite_matrix, d);
        a.elements_ = std::move(elements);
        a.validate_finite_matrix();
        return a;
    }

    static GroupAction integer_shift() { return GroupAction(ActionKind::integer_shift, 0); }

    static GroupAction multiset(int block_dim) {
        if (block_dim < 1) throw InvalidParameter("multiset: block dimension must be positive");
        GroupAction a(ActionKind::multiset, 0);
        a.block_dim_ = block_dim;
        return a;
    }

    ActionKind kind() const { return kind_; }

    /// Real dimension of the space acted on; 0 means any finitely supported length.
    int ambient_dim() const { return ambient_dim_; }
    int cyclic_order() const { return r_; }
    int size_n() const { return n_; }
    int block_dim() const { return block_dim_; }
    int complex_dim() const { return complex_dim_; }
    PermutationMode permutation_mode() const { return perm_mode_; }
    const std::vector<Eigen::MatrixXd>& matrix_elements() const { return elements_; }
    const Eigen::MatrixXcd& diagonal_elements() const { return diag_elements_; }

    bool finitely_enumerable() const {
        switch (kind_) {
            case ActionKind::phase:
            case ActionKind::integer_shift:
            case ActionKind::multiset:
                return false;
            default:
                return true;
        }
    }

    /// Number of group elements for enumerable kinds.
    std::int64_t group_size() const {
        switch (kind_) {
            case ActionKind::finite_matrix: return static_cast<std::int64_t>(elements_.size());
            case ActionKind::sign: return 2;
            case ActionKind::cyclic_rotation: return r_;
            case ActionKind::circular_shift: return n_;
            case ActionKind::diagonal_unitary: return diag_elements_.cols();
            case ActionKind::permutation: {
                std::int64_t f = 1;
                for (int i = 2; i <= n_; ++i) {
                    f *= i;
                    if (f > kMaxEnumeration) return f;
                }
                return f;
            }
            default:
                throw UnsupportedAction(std::string("group_size: infinite action kind ") + kind_name(kind_));
        }
    }

    void check_vector(const Eigen::VectorXd& x) const {
        if (kind_ == ActionKind::integer_shift) return;
        if (kind_ == ActionKind::multiset) {
            if (x.size() % block_dim_ != 0)
                throw DimensionMismatch("multiset action: vector length not a multiple of block dimension");
            return;
        }
        if (x.size() != ambient_dim_) throw DimensionMismatch("vector dimension does not match action ambient dimension");
    }

    /// The orbit G.x for finite kinds, deduplicated within 1e-10.
    std::vector<Eigen::VectorXd> orbit(const Eigen::VectorXd& x) const {
        if (!finitely_enumerable())
            throw UnsupportedAction(std::string("orbit: action kind ") + kind_name(kind_) + " has infinitely many elements");
        check_vector(x);
        std::vector<Eigen::VectorXd> points;
        switch (kind_) {
            case ActionKind::finite_matrix:
                for (const auto& g : elements_) points.push_back(g * x);
                break;
            case ActionKind::sign:
                points = {x, -x};
                break;
            case ActionKind::cyclic_rotation:
                for (int k = 0; k < r_; ++k) points.push_back(rotate_complex(x, 2.0 * M_PI * k / r_));
                break;
            case ActionKind::circular_shift:
                for (int k = 0; k < n_; ++k) {
                    Eigen::VectorXd y(n_);
                    for (int j = 0; j < n_; ++j) y((j + k) % n_) = x(j);
                    points.push_back(std::move(y));
                }
                break;
            case ActionKind::diagonal_unitary:
                for (int g = 0; g < diag_elements_.cols(); ++g) points.push_back(apply_diagonal(x, g));
                break;
            case ActionKind::permutation: {
                if (group_size() > kMaxEnumeration)
                    throw UnsupportedAction("orbit: permutation group too large to enumerate");
                std::vector<int> idx(n_);
                for (int i = 0; i < n_; ++i) idx[i] = i;
                do {
                    points.push_back(permute(x, idx));
                } while (std::next_permutation(idx.begin(), idx.end()));
                break;
            }
            default:
                throw UnsupportedAction("orbit: unsupported kind");
        }
        return dedupe(std::move(points));
    }

    /// Explicit orthogonal matrices for the group elements of finite kinds.
    std::vector<Eigen::MatrixXd> dense_elements() const {
        if (!finitely_enumerable())
            throw UnsupportedAction(std::string("dense_elements: action kind ") + kind_name(kind_) + " is not finite");
        const int d = ambient_dim_;
        std::vector<Eigen::MatrixXd> out;
        switch (kind_) {
            case ActionKind::finite_matrix:
                return elements_;
            case ActionKind::sign:
                out = {Eigen::MatrixXd::Identity(d, d), -Eigen::MatrixXd::Identity(d, d)};
                break;
            case ActionKind::cyclic_rotation:
                for (int k = 0; k < r_; ++k) {
                    const double t = 2.0 * M_PI * k / r_;
                    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
                    for (int i = 0; i < complex_dim_; ++i) {
                        g(2 * i, 2 * i) = std::cos(t);
                        g(2 * i, 2 * i + 1) = -std::sin(t);
                        g(2 * i + 1, 2 * i) = std::sin(t);
                        g(2 * i + 1, 2 * i + 1) = std::cos(t);
                    }
                    out.push_back(std::move(g));
                }
                break;
            case ActionKind::circular_shift:
                for (int k = 0; k < n_; ++k) {
                    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
                    for (int j = 0; j < n_; ++j) g((j + k) % n_, j) = 1.0;
                    out.push_back(std::move(g));
                }
                break;
            case ActionKind::diagonal_unitary:
                for (int e = 0; e < diag_elements_.cols(); ++e) {
                    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
                    for (int i = 0; i < complex_dim_; ++i) {
                        const std::complex<double> lam = diag_elements_(i, e);
                        g(2 * i, 2 * i) = lam.real();
                        g(2 * i, 2 * i + 1) = -lam.imag();
                        g(2 * i + 1, 2 * i) = lam.imag();
                        g(2 * i + 1, 2 * i + 1) = lam.real();
                    }
                    out.push_back(std::move(g));
                }
                break;
            case ActionKind::permutation: {
                if (group_size() > kMaxEnumeration)
                    throw UnsupportedAction("dense_elements: permutation group too large to enumerate");
                std::vector<int> idx(n_);
                for (int i = 0; i < n_; ++i) idx[i] = i;
                do {
                    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
                    if (perm_mode_ == PermutationMode::coordinates) {
                        for (int j = 0; j < n_; ++j) g(j, idx[j]) = 1.0;
                    } else {
                        for (int j = 0; j < n_; ++j)
                            for (int b = 0; b < block_dim_; ++b) g(j * block_dim_ + b, idx[j] * block_dim_ + b) = 1.0;
                    }
                    out.push_back(std::move(g));
                } while (std::next_permutation(idx.begin(), idx.end()));
                break;
            }
            default:
                throw UnsupportedAction("dense_elements: unsupported kind");
        }
        return out;
    }

    // Elementwise actions used by the closed forms.

    static Eigen::VectorXd rotate_complex(const Eigen::VectorXd& x, double theta) {
        const double c = std::cos(theta), s = std::sin(theta);
        Eigen::VectorXd y(x.size());
        for (int i = 0; i < x.size(); i += 2) {
            y(i) = c * x(i) - s * x(i + 1);
            y(i + 1) = s * x(i) + c * x(i + 1);
        }
        return y;
    }

    Eigen::VectorXd apply_diagonal(const Eigen::VectorXd& x, int element) const {
        Eigen::VectorXd y(x.size());
        for (int i = 0; i < complex_dim_; ++i) {
            const std::complex<double> lam = diag_elements_(i, element);
            y(2 * i) = lam.real() * x(2 * i) - lam.imag() * x(2 * i + 1);
            y(2 * i + 1) = lam.imag() * x(2 * i) + lam.real() * x(2 * i + 1);
        }
        return y;
    }

    Eigen::VectorXd permute(const Eigen::VectorXd& x, const std::vector<int>& idx) const {
        Eigen::VectorXd y(x.size());
        if (perm_mode_ == PermutationMode::coordinates) {
            for (int j = 0; j < n_; ++j) y(j) = x(idx[j]);
        } else {
            for (int j = 0; j < n_; ++j) y.segment(j * block_dim_, block_dim_) = x.segment(idx[j] * block_dim_, block_dim_);
        }
        return y;
    }

private:
    GroupAction(ActionKind k, int ambient) : kind_(k), ambient_dim_(ambient) {}

    static std::vector<Eigen::VectorXd> dedupe(std::vector<Eigen::VectorXd> pts) {
        std::sort(pts.begin(), pts.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
            for (int i = 0; i < a.size(); ++i) {
                if (a(i) != b(i)) return a(i) < b(i);
            }
            return false;
        });
        std::vector<Eigen::VectorXd> out;
        for (auto& p : pts) {
            if (out.empty() || (out.back() - p).lpNorm<Eigen::Infinity>() > kElementTol) out.push_back(std::move(p));
        }
        return out;
    }

    bool contains_matrix(const Eigen::MatrixXd& m) const {
        for (const auto& g : elements_) {
            if ((g - m).lpNorm<Eigen::Infinity>() <= kElementTol) return true;
        }
        return false;
    }

    void validate_finite_matrix() const {
        const int d = ambient_dim_;
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            const auto& g = elements_[i];
            if (g.rows() != d || g.cols() != d)
                throw InvalidParameter("finite_matrix: element " + std::to_string(i) + " has inconsistent dimensions");
            const double err = (g.transpose() * g - Eigen::MatrixXd::Identity(d, d)).lpNorm<Eigen::Infinity>();
            if (err > kElementTol)
                throw InvalidParameter("finite_matrix: element " + std::to_string(i) + " is not orthogonal (|M'M - I|_max = " +
                                       std::to_string(err) + ")");
        }
        if (!contains_matrix(Eigen::MatrixXd::Identity(d, d)))
            throw InvalidParameter("finite_matrix: element set does not contain the identity");
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (!contains_matrix(elements_[i].transpose()))
                throw InvalidParameter("finite_matrix: element set is not closed under inverse (element " + std::to_string(i) + ")");
        }
        // Full closure check is cubic in |G|; fine at desk scale.
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            for (std::size_t j = 0; j < elements_.size(); ++j) {
                if (!contains_matrix(elements_[i] * elements_[j]))
                    throw InvalidParameter("finite_matrix: element set is not closed under product (elements " +
                                           std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }

    void validate_diagonal_unitary() const {
        const int d = complex_dim_;
        const int m = static_cast<int>(diag_elements_.cols());
        for (int e = 0; e < m; ++e) {
            for (int i = 0; i < d; ++i) {
                if (std::abs(std::abs(diag_elements_(i, e)) - 1.0) > kElementTol)
                    throw InvalidParameter("diagonal_unitary: element " + std::to_string(e) + " is not unitary");
            }
        }
        auto contains = [&](const Eigen::VectorXcd& v) {
            for (int e = 0; e < m; ++e) {
                if ((diag_elements_.col(e) - v).lpNorm<Eigen::Infinity>() <= kElementTol) return true;
            }
            return false;
        };
        if (!contains(Eigen::VectorXcd::Ones(d)))
            throw InvalidParameter("diagonal_unitary: element set does not contain the identity");
        for (int e = 0; e < m; ++e) {
            if (!contains(diag_elements_.col(e).conjugate()))
                throw InvalidParameter("diagonal_unitary: element set is not closed under inverse");
        }
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                if (!contains(diag_elements_.col(a).cwiseProduct(diag_elements_.col(b))))
                    throw InvalidParameter("diagonal_unitary: element set is not closed under product");
            }
        }
    }

    ActionKind kind_;
    int ambient_dim_ = 0;
    int r_ = 0;            // cyclic_rotation order
    int n_ = 0;            // permutation / circular_shift size
    int block_dim_ = 1;    // permutation columns / multiset block size
    int complex_dim_ = 0;  // phase / cyclic_rotation / diagonal_unitary
    PermutationMode perm_mode_ = PermutationMode::coordinates;
    std::vector<Eigen::MatrixXd> elements_;
    Eigen::MatrixXcd diag_elements_;
};

}  // namespace orbitmetric
