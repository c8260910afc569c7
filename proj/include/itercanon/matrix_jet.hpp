#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "jet.hpp"
#include "rational.hpp"

namespace itercanon {

/// Square matrix of jets sharing one base point and one truncation order.
/// Equivalently a truncated series whose coefficients are rational matrices.
class MatrixJet {
public:
    MatrixJet() = default;

    MatrixJet(std::size_t dim, std::vector<Jet> entries) : dim_(dim), entries_(std::move(entries))
    {
        if (dim_ == 0)
            throw Error(ErrorKind::invalid_argument, "matrix dimension must be positive");
        if (entries_.size() != dim_ * dim_)
            throw Error(ErrorKind::dimension_mismatch,
                        "expected " + std::to_string(dim_ * dim_) + " entries, got " + std::to_string(entries_.size()));
        for (const auto& e : entries_) {
            Jet::require_same_base(entries_.front(), e);
            if (e.order() != entries_.front().order())
                throw Error(ErrorKind::invalid_argument, "matrix entries must share one truncation order");
        }
    }

    static MatrixJet constant(const RationalMatrix& value, int order, const Rational& base_point = 0)
    {
        std::vector<Jet> e;
        e.reserve(value.dim() * value.dim());
        for (std::size_t i = 0; i < value.dim(); ++i)
            for (std::size_t j = 0; j < value.dim(); ++j)
                e.push_back(Jet::constant(value(i, j), order, base_point));
        return MatrixJet(value.dim(), std::move(e));
    }

    static MatrixJet identity(std::size_t dim, int order, const Rational& base_point = 0)
    {
        return constant(RationalMatrix::identity(dim), order, base_point);
    }

    static MatrixJet zero(std::size_t dim, int order, const Rational& base_point = 0)
    {
        return constant(RationalMatrix(dim), order, base_point);
    }

    /// lambda * I_m
    static MatrixJet scalar(const Jet& lambda, std::size_t dim)
    {
        std::vector<Jet> e(dim * dim, Jet::zero(lambda.order(), lambda.base_point()));
        for (std::size_t i = 0; i < dim; ++i)
            e[i * dim + i] = lambda;
        return MatrixJet(dim, std::move(e));
    }

    /// Assembles the series sum_k coeffs[k] t^k; order = coeffs.size() - 1.
    static MatrixJet from_coefficients(const std::vector<RationalMatrix>& coeffs, const Rational& base_point = 0)
    {
        if (coeffs.empty())
            throw Error(ErrorKind::invalid_argument, "matrix series needs at least one coefficient");
        const std::size_t m = coeffs.front().dim();
        std::vector<Jet> e;
        e.reserve(m * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                std::vector<Rational> c(coeffs.size());
                for (std::size_t k = 0; k < coeffs.size(); ++k)
                    c[k] = coeffs[k](i, j);
                e.emplace_back(std::move(c), base_point);
            }
        return MatrixJet(m, std::move(e));
    }

    std::size_t dim() const noexcept { return dim_; }
    int order() const { return entries_.front().order(); }
    const Rational& base_point() const { return entries_.front().base_point(); }
    const std::vector<Jet>& entries() const noexcept { return entries_; }

    const Jet& operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

    /// Copy with entry (row, col) replaced; the replacement is truncated to this order.
    MatrixJet with_entry(std::size_t row, std::size_t col, const Jet& value) const
    {
        MatrixJet out = *this;
        out.entries_[row * dim_ + col] = value.truncated(order());
        return out;
    }

    RationalMatrix coefficient(int k) const
    {
        RationalMatrix out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                out(i, j) = (*this)(i, j)[static_cast<std::size_t>(k)];
        return out;
    }

    RationalMatrix constant_term() const { return coefficient(0); }

    MatrixJet truncated(int order) const
    {
        std::vector<Jet> e;
        e.reserve(entries_.size());
        for (const auto& x : entries_)
            e.push_back(x.truncated(order));
        return MatrixJet(dim_, std::move(e));
    }

    bool is_zero() const
    {
        return std::all_of(entries_.begin(), entries_.end(), [](const Jet& e) { return e.is_zero(); });
    }

    bool is_invertible() const
    {
        RationalMatrix inverse;
        return try_invert(constant_term(), inverse);
    }

    friend MatrixJet operator+(const MatrixJet& a, const MatrixJet& b)
    {
        require_same_dim(a, b);
        std::vector<Jet> e;
        e.reserve(a.entries_.size());
        for (std::size_t k = 0; k < a.entries_.size(); ++k)
            e.push_back(a.entries_[k] + b.entries_[k]);
        return MatrixJet(a.dim_, std::move(e));
    }

    friend MatrixJet operator-(const MatrixJet& a, const MatrixJet& b)
    {
        require_same_dim(a, b);
        std::vector<Jet> e;
        e.reserve(a.entries_.size());
        for (std::size_t k = 0; k < a.entries_.size(); ++k)
            e.push_back(a.entries_[k] - b.entries_[k]);
        return MatrixJet(a.dim_, std::move(e));
    }

    friend MatrixJet operator-(const MatrixJet& a)
    {
        std::vector<Jet> e;
        e.reserve(a.entries_.size());
        for (const auto& x : a.entries_)
            e.push_back(-x);
        return MatrixJet(a.dim_, std::move(e));
    }

    friend MatrixJet operator*(const MatrixJet& a, const MatrixJet& b)
    {
        require_same_dim(a, b);
        const std::size_t m = a.dim_;
        const int order = std::min(a.order(), b.order());
        std::vector<Jet> e(m * m, Jet::zero(order, a.base_point()));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                const Jet& aik = a(i, k);
                if (aik.is_zero())
                    continue;
                for (std::size_t j = 0; j < m; ++j)
                    e[i * m + j] += aik * b(k, j);
            }
        return MatrixJet(m, std::move(e));
    }

    friend MatrixJet operator*(const Jet& lambda, const MatrixJet& a)
    {
        std::vector<Jet> e;
        e.reserve(a.entries_.size());
        for (const auto& x : a.entries_)
            e.push_back(lambda * x);
        return MatrixJet(a.dim_, std::move(e));
    }

    friend MatrixJet operator*(const Rational& c, const MatrixJet& a)
    {
        std::vector<Jet> e;
        e.reserve(a.entries_.size());
        for (const auto& x : a.entries_)
            e.push_back(c * x);
        return MatrixJet(a.dim_, std::move(e));
    }

    friend bool operator==(const MatrixJet& a, const MatrixJet& b)
    {
        return a.dim_ == b.dim_ && a.entries_ == b.entries_;
    }

    static void require_same_dim(const MatrixJet& a, const MatrixJet& b)
    {
        if (a.dim_ != b.dim_)
            throw Error(ErrorKind::dimension_mismatch,
                        "matrices of size " + std::to_string(a.dim_) + " and " + std::to_string(b.dim_));
    }

private:
    std::size_t dim_ = 0;
    std::vector<Jet> entries_;
};

inline bool agree(const MatrixJet& a, const MatrixJet& b)
{
    MatrixJet::require_same_dim(a, b);
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        if (!agree(a.entries()[k], b.entries()[k]))
            return false;
    return true;
}

inline bool agree_through(const MatrixJet& a, const MatrixJet& b, int order)
{
    MatrixJet::require_same_dim(a, b);
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        if (!agree_through(a.entries()[k], b.entries()[k], order))
            return false;
    return true;
}

inline MatrixJet derive(const MatrixJet& a)
{
    std::vector<Jet> e;
    e.reserve(a.entries().size());
    for (const auto& x : a.entries())
        e.push_back(derive(x));
    return MatrixJet(a.dim(), std::move(e));
}

/// Inverse via the coefficient recursion X_k = -M_0^{-1} sum_{i=1..k} M_i X_{k-i}.
inline MatrixJet invert(const MatrixJet& a)
{
    RationalMatrix inv0;
    if (!try_invert(a.constant_term(), inv0))
        throw Error(ErrorKind::singular, "matrix jet has a singular constant term");
    const int order = a.order();
    std::vector<RationalMatrix> m(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k)
        m[static_cast<std::size_t>(k)] = a.coefficient(k);
    std::vector<RationalMatrix> x(m.size());
    x[0] = inv0;
    for (std::size_t k = 1; k < m.size(); ++k) {
        RationalMatrix acc(a.dim());
        for (std::size_t i = 1; i <= k; ++i)
            if (!m[i].is_zero())
                acc = acc + m[i] * x[k - i];
        x[k] = Rational(-1) * (inv0 * acc);
    }
    return MatrixJet::from_coefficients(x, a.base_point());
}

/// Returns lambda when M = lambda * I_m exactly (through M's order), nothing otherwise.
inline std::optional<Jet> scalar_test(const MatrixJet& a)
{
    const std::size_t m = a.dim();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) {
                if (!(a(i, i) == a(0, 0)))
                    return std::nullopt;
            } else if (!a(i, j).is_zero()) {
                return std::nullopt;
            }
        }
    return a(0, 0);
}

/// First entry in (row, col) order that breaks scalarity: a nonzero off-diagonal,
/// or a diagonal entry differing from entry (0, 0).
inline std::optional<std::pair<std::size_t, std::size_t>> first_non_scalar_entry(const MatrixJet& a)
{
    const std::size_t m = a.dim();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const bool bad = (i == j) ? !(a(i, i) == a(0, 0)) : !a(i, j).is_zero();
            if (bad)
                return std::pair{i, j};
        }
    return std::nullopt;
}

/// Entrywise composition B(f(z)).
inline MatrixJet compose(const MatrixJet& outer, const Jet& inner)
{
    std::vector<Jet> e;
    e.reserve(outer.entries().size());
    for (const auto& x : outer.entries())
        e.push_back(compose(x, inner));
    return MatrixJet(outer.dim(), std::move(e));
}

inline MatrixJet commutator(const MatrixJet& a, const MatrixJet& b) { return a * b - b * a; }

inline MatrixJet pow(const MatrixJet& a, long k)
{
    if (k < 0)
        return pow(invert(a), -k);
    MatrixJet result = MatrixJet::identity(a.dim(), a.order(), a.base_point());
    for (long i = 0; i < k; ++i)
        result = result * a;
    return result;
}

} // namespace itercanon
