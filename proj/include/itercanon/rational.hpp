#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace itercanon {

/// Exact rational, always kept in lowest terms with a positive denominator.
using Rational = mpq_class;

/// Parses "p" or "p/q" (optional leading sign). Throws std::invalid_argument.
inline Rational parse_rational(std::string_view text)
{
    if (text.empty())
        throw std::invalid_argument("empty rational");
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+')
        ++i;
    bool seen_digit = false;
    bool seen_slash = false;
    bool digit_after_slash = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            seen_digit = true;
            if (seen_slash)
                digit_after_slash = true;
        } else if (c == '/' && !seen_slash && seen_digit) {
            seen_slash = true;
        } else {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
    }
    if (!seen_digit || (seen_slash && !digit_after_slash))
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");

    std::string body(text[0] == '+' ? text.substr(1) : text);
    Rational value;
    if (value.set_str(body, 10) != 0)
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    if (value.get_den() == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value.canonicalize();
    return value;
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string format_rational(const Rational& value)
{
    return value.get_str(10);
}

/// p/q in lowest terms.
inline Rational ratio(long numerator, long denominator)
{
    if (denominator == 0)
        throw Error(ErrorKind::invalid_argument, "zero denominator");
    Rational out{mpz_class(numerator), mpz_class(denominator)};
    out.canonicalize();
    return out;
}

inline double to_double(const Rational& value)
{
    return value.get_d();
}

/// Exact square root when both numerator and denominator are perfect squares.
inline bool rational_sqrt(const Rational& value, Rational& root)
{
    if (sgn(value) < 0)
        return false;
    mpz_class num = value.get_num();
    mpz_class den = value.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return false;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    root = Rational(rn, rd);
    root.canonicalize();
    return true;
}

inline Rational binomial(long n, long k)
{
    if (k < 0 || n < 0 || k > n)
        return Rational(0);
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(out);
}

inline Rational factorial(long n)
{
    mpz_class out;
    mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(out);
}

/// Dense square matrix of rationals; used for constant matrices (C, k_ij) and for
/// Taylor coefficients of matrix jets.
class RationalMatrix {
public:
    RationalMatrix() = default;
    explicit RationalMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    static RationalMatrix identity(std::size_t dim)
    {
        RationalMatrix out(dim);
        for (std::size_t i = 0; i < dim; ++i)
            out(i, i) = 1;
        return out;
    }

    std::size_t dim() const noexcept { return dim_; }

    Rational& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Rational& operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

    bool is_zero() const
    {
        for (const auto& v : data_)
            if (sgn(v) != 0)
                return false;
        return true;
    }

    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b)
    {
        return a.dim_ == b.dim_ && a.data_ == b.data_;
    }

    friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b)
    {
        RationalMatrix out(a.dim_);
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            out.data_[i] = a.data_[i] + b.data_[i];
        return out;
    }

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b)
    {
        const std::size_t m = a.dim_;
        RationalMatrix out(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                if (sgn(a(i, k)) == 0)
                    continue;
                for (std::size_t j = 0; j < m; ++j)
                    out(i, j) += a(i, k) * b(k, j);
            }
        return out;
    }

    friend RationalMatrix operator*(const Rational& c, const RationalMatrix& a)
    {
        RationalMatrix out(a.dim_);
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            out.data_[i] = c * a.data_[i];
        return out;
    }

private:
    std::size_t dim_ = 0;
    std::vector<Rational> data_;
};

/// Gauss-Jordan inverse; returns false when the matrix is singular.
inline bool try_invert(const RationalMatrix& a, RationalMatrix& inverse)
{
    const std::size_t m = a.dim();
    RationalMatrix work = a;
    inverse = RationalMatrix::identity(m);
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        while (pivot < m && sgn(work(pivot, col)) == 0)
            ++pivot;
        if (pivot == m)
            return false;
        if (pivot != col)
            for (std::size_t j = 0; j < m; ++j) {
                std::swap(work(pivot, j), work(col, j));
                std::swap(inverse(pivot, j), inverse(col, j));
            }
        Rational scale = 1 / work(col, col);
        for (std::size_t j = 0; j < m; ++j) {
            work(col, j) *= scale;
            inverse(col, j) *= scale;
        }
        for (std::size_t row = 0; row < m; ++row) {
            if (row == col || sgn(work(row, col)) == 0)
                continue;
            Rational factor = work(row, col);
            for (std::size_t j = 0; j < m; ++j) {
                work(row, j) -= factor * work(col, j);
                inverse(row, j) -= factor * inverse(col, j);
            }
        }
    }
    return true;
}

inline RationalMatrix invert(const RationalMatrix& a)
{
    RationalMatrix out;
    if (!try_invert(a, out))
        throw Error(ErrorKind::singular, "constant matrix is not invertible");
    return out;
}

/// Rank of a rectangular row-major rational matrix (rows x cols).
inline std::size_t rank(std::vector<std::vector<Rational>> rows)
{
    std::size_t rank = 0;
    if (rows.empty())
        return 0;
    const std::size_t cols = rows.front().size();
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && sgn(rows[pivot][col]) == 0)
            ++pivot;
        if (pivot == rows.size())
            continue;
        std::swap(rows[pivot], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (sgn(rows[r][col]) == 0)
                continue;
            Rational factor = rows[r][col] / rows[rank][col];
            for (std::size_t j = col; j < cols; ++j)
                rows[r][j] -= factor * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

} // namespace itercanon
