#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "orbitmetric/errors.hpp"

namespace orbitmetric {

/// Sparse multivariate polynomial with exact integer exponents.
///
/// Terms map exponent vectors to real coefficients; coefficients below 1e-14
/// are pruned. Total degree is capped at 64 to bound interpolation blowup.
class MultiPoly {
public:
    static constexpr double kCoeffTol = 1e-14;
    static constexpr int kMaxDegree = 64;

    using Exponents = std::vector<int>;

    explicit MultiPoly(int dim = 0) : dim_(dim) {}

    static MultiPoly constant(int dim, double c) {
        MultiPoly p(dim);
        p.add_term(Exponents(dim, 0), c);
        return p;
    }

    static MultiPoly variable(int dim, int index, double coeff = 1.0) {
        if (index < 0 || index >= dim) throw InvalidParameter("MultiPoly::variable: index out of range");
        MultiPoly p(dim);
        Exponents e(dim, 0);
        e[index] = 1;
        p.add_term(e, coeff);
        return p;
    }

    int dim() const { return dim_; }
    const std::map<Exponents, double>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        int deg = 0;
        for (const auto& [e, c] : terms_) {
            int d = 0;
            for (int k : e) d += k;
            deg = std::max(deg, d);
        }
        return deg;
    }

    void add_term(const Exponents& e, double c) {
        if (static_cast<int>(e.size()) != dim_) throw DimensionMismatch("MultiPoly: exponent vector length mismatch");
        int total = 0;
        for (int k : e) {
            if (k < 0) throw InvalidParameter("MultiPoly: negative exponent");
            total += k;
        }
        if (total > kMaxDegree) throw InvalidParameter("MultiPoly: degree cap exceeded");
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (std::abs(c) > kCoeffTol) terms_.emplace(e, c);
        } else {
            it->second += c;
            if (std::abs(it->second) <= kCoeffTol) terms_.erase(it);
        }
    }

    double evaluate(const Eigen::VectorXd& x) const {
        if (x.size() != dim_) throw DimensionMismatch("MultiPoly::evaluate: dimension mismatch");
        double sum = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = c;
            for (int i = 0; i < dim_; ++i) {
                for (int k = 0; k < e[i]; ++k) t *= x(i);
            }
            sum += t;
        }
        return sum;
    }

    MultiPoly partial(int i) const {
        MultiPoly out(dim_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            Exponents d = e;
            d[i] -= 1;
            out.add_term(d, c * e[i]);
        }
        return out;
    }

    std::vector<MultiPoly> gradient() const {
        std::vector<MultiPoly> g;
        g.reserve(dim_);
        for (int i = 0; i < dim_; ++i) g.push_back(partial(i));
        return g;
    }

    Eigen::VectorXd gradient_at(const Eigen::VectorXd& x) const {
        Eigen::VectorXd g(dim_);
        for (int i = 0; i < dim_; ++i) g(i) = partial(i).evaluate(x);
        return g;
    }

    MultiPoly& operator+=(const MultiPoly& other) {
        if (other.dim_ != dim_) throw DimensionMismatch("MultiPoly: dimension mismatch in +=");
        for (const auto& [e, c] : other.terms_) add_term(e, c);
        return *this;
    }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) {
        a += b;
        return a;
    }

    MultiPoly& operator*=(double s) {
        if (std::abs(s) <= kCoeffTol) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend MultiPoly operator*(double s, MultiPoly p) {
        p *= s;
        return p;
    }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        if (a.dim_ != b.dim_) throw DimensionMismatch("MultiPoly: dimension mismatch in *");
        MultiPoly out(a.dim_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(a.dim_);
                for (int i = 0; i < a.dim_; ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    /// p(A x) for a linear change of coordinates.
    MultiPoly substitute_linear(const Eigen::MatrixXd& A) const {
        if (A.rows() != dim_ || A.cols() != dim_)
            throw DimensionMismatch("MultiPoly::substitute_linear: matrix must be dim x dim");
        // linear forms for each variable
        std::vector<MultiPoly> forms;
        forms.reserve(dim_);
        for (int i = 0; i < dim_; ++i) {
            MultiPoly f(dim_);
            for (int j = 0; j < dim_; ++j) {
                if (std::abs(A(i, j)) > kCoeffTol) f.add_term(unit_exponent(dim_, j), A(i, j));
            }
            forms.push_back(std::move(f));
        }
        MultiPoly out(dim_);
        for (const auto& [e, c] : terms_) {
            MultiPoly term = MultiPoly::constant(dim_, c);
            for (int i = 0; i < dim_; ++i) {
                for (int k = 0; k < e[i]; ++k) term = term * forms[i];
            }
            out += term;
        }
        return out;
    }

    /// Substitutes a univariate polynomial (monomial coefficients, low to high)
    /// evaluated at the linear form <a, x>, via Horner.
    static MultiPoly compose_univariate(const std::vector<double>& coeffs, const Eigen::VectorXd& a) {
        const int dim = static_cast<int>(a.size());
        MultiPoly form(dim);
        for (int j = 0; j < dim; ++j) {
            if (std::abs(a(j)) > kCoeffTol) form.add_term(unit_exponent(dim, j), a(j));
        }
        MultiPoly out(dim);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            out = out * form;
            out += MultiPoly::constant(dim, *it);
        }
        return out;
    }

private:
    static Exponents unit_exponent(int dim, int j) {
        Exponents e(dim, 0);
        e[j] = 1;
        return e;
    }

    int dim_;
    std::map<Exponents, double> terms_;
};

}  // namespace orbitmetric
