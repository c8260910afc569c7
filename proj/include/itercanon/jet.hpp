#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace itercanon {

/// Default truncation order for jets built by the engine and the CLI.
inline constexpr int default_truncation = 16;

/// Truncated Taylor series over the rationals at a base point.
///
/// coeffs[k] is the k-th Taylor coefficient in the local coordinate t = x - base_point;
/// the jet knows its coefficients through `order()` and nothing beyond. Every
/// arithmetic result carries the order through which it is exact.
class Jet {
public:
    Jet() : coeffs_(1) {}

    explicit Jet(std::vector<Rational> coeffs, Rational base_point = 0)
        : base_(std::move(base_point)), coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty())
            throw Error(ErrorKind::invalid_argument, "jet needs at least one coefficient");
    }

    static Jet constant(const Rational& value, int order, const Rational& base_point = 0)
    {
        check_order(order);
        std::vector<Rational> c(static_cast<std::size_t>(order) + 1);
        c[0] = value;
        return Jet(std::move(c), base_point);
    }

    static Jet zero(int order, const Rational& base_point = 0) { return constant(0, order, base_point); }

    /// The coordinate function x itself: base_point + t.
    static Jet variable(int order, const Rational& base_point = 0)
    {
        Jet out = constant(base_point, order, base_point);
        if (order >= 1)
            out.coeffs_[1] = 1;
        return out;
    }

    /// Builds a jet of the given order from a (possibly shorter) coefficient list;
    /// missing trailing coefficients are zero, extra ones are dropped.
    static Jet from_coefficients(std::span<const Rational> coeffs, int order, const Rational& base_point = 0)
    {
        check_order(order);
        std::vector<Rational> c(static_cast<std::size_t>(order) + 1);
        for (std::size_t k = 0; k < c.size() && k < coeffs.size(); ++k)
            c[k] = coeffs[k];
        return Jet(std::move(c), base_point);
    }

    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const Rational& base_point() const noexcept { return base_; }
    const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }

    const Rational& operator[](std::size_t k) const { return coeffs_.at(k); }
    const Rational& constant_term() const noexcept { return coeffs_.front(); }

    Jet truncated(int order) const
    {
        check_order(order);
        if (order > this->order())
            throw Error(ErrorKind::order_exhausted,
                        "cannot extend a jet of order " + std::to_string(this->order()) + " to order " +
                            std::to_string(order));
        return Jet(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + order + 1), base_);
    }

    bool is_zero() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return sgn(c) == 0; });
    }

    bool is_unit() const { return sgn(coeffs_.front()) != 0; }

    /// Index of the first nonzero coefficient, or -1 for the zero jet.
    int valuation() const
    {
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            if (sgn(coeffs_[k]) != 0)
                return static_cast<int>(k);
        return -1;
    }

    /// Horner evaluation of the truncated polynomial at local coordinate t.
    Rational evaluate(const Rational& t) const
    {
        Rational acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * t + *it;
        return acc;
    }

    Jet& operator+=(const Jet& other)
    {
        require_same_base(*this, other);
        coeffs_.resize(std::min(coeffs_.size(), other.coeffs_.size()));
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            coeffs_[k] += other.coeffs_[k];
        return *this;
    }

    Jet& operator-=(const Jet& other)
    {
        require_same_base(*this, other);
        coeffs_.resize(std::min(coeffs_.size(), other.coeffs_.size()));
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            coeffs_[k] -= other.coeffs_[k];
        return *this;
    }

    Jet& operator*=(const Rational& scale)
    {
        for (auto& c : coeffs_)
            c *= scale;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

    friend Jet operator-(Jet a)
    {
        for (auto& c : a.coeffs_)
            c = -c;
        return a;
    }

    friend Jet operator+(Jet a, const Rational& c)
    {
        a.coeffs_[0] += c;
        return a;
    }
    friend Jet operator+(const Rational& c, Jet a) { return std::move(a) + c; }
    friend Jet operator-(Jet a, const Rational& c)
    {
        a.coeffs_[0] -= c;
        return a;
    }
    friend Jet operator-(const Rational& c, const Jet& a) { return -a + c; }

    friend Jet operator*(Jet a, const Rational& c) { return a *= c; }
    friend Jet operator*(const Rational& c, Jet a) { return a *= c; }
    friend Jet operator/(Jet a, const Rational& c)
    {
        if (sgn(c) == 0)
            throw Error(ErrorKind::singular, "division of a jet by zero");
        return a *= Rational(1 / c);
    }

    /// Cauchy product truncated to the smaller order.
    friend Jet operator*(const Jet& a, const Jet& b)
    {
        require_same_base(a, b);
        const std::size_t len = std::min(a.coeffs_.size(), b.coeffs_.size());
        std::vector<Rational> out(len);
        for (std::size_t i = 0; i < len; ++i) {
            if (sgn(a.coeffs_[i]) == 0)
                continue;
            for (std::size_t j = 0; i + j < len; ++j)
                if (sgn(b.coeffs_[j]) != 0)
                    out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return Jet(std::move(out), a.base_);
    }

    Jet& operator*=(const Jet& other) { return *this = *this * other; }

    /// Exact identity: same base point, same order, same coefficients.
    friend bool operator==(const Jet& a, const Jet& b) { return a.base_ == b.base_ && a.coeffs_ == b.coeffs_; }

    static void require_same_base(const Jet& a, const Jet& b)
    {
        if (a.base_ != b.base_)
            throw Error(ErrorKind::base_point_mismatch,
                        "jets at " + format_rational(a.base_) + " and " + format_rational(b.base_));
    }

private:
    static void check_order(int order)
    {
        if (order < 0)
            throw Error(ErrorKind::invalid_argument, "negative truncation order");
    }

    Rational base_;
    std::vector<Rational> coeffs_;
};

/// True when a and b agree through the smaller of their two orders.
inline bool agree(const Jet& a, const Jet& b)
{
    Jet::require_same_base(a, b);
    const auto len = static_cast<std::size_t>(std::min(a.order(), b.order())) + 1;
    return std::equal(a.coefficients().begin(), a.coefficients().begin() + len, b.coefficients().begin());
}

/// True when a and b agree through the given order (both must carry it).
inline bool agree_through(const Jet& a, const Jet& b, int order)
{
    if (order < 0)
        return true;
    if (a.order() < order || b.order() < order)
        return false;
    return agree(a.truncated(order), b.truncated(order));
}

inline Jet derive(const Jet& a)
{
    if (a.order() < 1)
        throw Error(ErrorKind::order_exhausted, "cannot differentiate a jet of order 0");
    std::vector<Rational> out(static_cast<std::size_t>(a.order()));
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = a[k + 1] * static_cast<long>(k + 1);
    return Jet(std::move(out), a.base_point());
}

/// Antiderivative with zero constant term.
inline Jet integrate(const Jet& a)
{
    std::vector<Rational> out(a.coefficients().size() + 1);
    for (std::size_t k = 0; k < a.coefficients().size(); ++k)
        out[k + 1] = a[k] / static_cast<long>(k + 1);
    return Jet(std::move(out), a.base_point());
}

inline Jet invert(const Jet& a)
{
    if (!a.is_unit())
        throw Error(ErrorKind::singular, "jet with zero constant term is not invertible");
    const auto len = a.coefficients().size();
    std::vector<Rational> out(len);
    const Rational inv0 = 1 / a[0];
    out[0] = inv0;
    for (std::size_t k = 1; k < len; ++k) {
        Rational acc = 0;
        for (std::size_t i = 1; i <= k; ++i)
            if (sgn(a[i]) != 0)
                acc += a[i] * out[k - i];
        out[k] = -inv0 * acc;
    }
    return Jet(std::move(out), a.base_point());
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * invert(b); }

/// Square root with positive constant term. Only rational-rooted constant terms are
/// supported; anything else needs an algebraic extension and is rejected.
inline Jet sqrt(const Jet& a)
{
    if (sgn(a[0]) <= 0)
        throw Error(ErrorKind::unsupported_extension,
                    "square root needs a positive constant term, got " + format_rational(a[0]));
    Rational root0;
    if (!rational_sqrt(a[0], root0))
        throw Error(ErrorKind::unsupported_extension,
                    "constant term " + format_rational(a[0]) +
                        " has no rational square root; rescale so it is a square of a rational");
    const auto len = a.coefficients().size();
    std::vector<Rational> out(len);
    out[0] = root0;
    const Rational half_inv = 1 / (2 * root0);
    for (std::size_t k = 1; k < len; ++k) {
        Rational acc = a[k];
        for (std::size_t i = 1; i < k; ++i)
            acc -= out[i] * out[k - i];
        out[k] = acc * half_inv;
    }
    return Jet(std::move(out), a.base_point());
}

/// outer(inner(z)): outer is expanded at its base point x0, inner at z0 with
/// inner(z0) = x0. The result lives at z0 with order min(outer, inner).
inline Jet compose(const Jet& outer, const Jet& inner)
{
    if (inner[0] != outer.base_point())
        throw Error(ErrorKind::base_point_mismatch,
                    "inner jet takes the value " + format_rational(inner[0]) + " at its base point but outer is at " +
                        format_rational(outer.base_point()));
    const int order = std::min(outer.order(), inner.order());
    Jet shift = inner.truncated(order) - inner[0];
    Jet acc = Jet::constant(outer[static_cast<std::size_t>(order)], order, inner.base_point());
    for (int k = order - 1; k >= 0; --k)
        acc = acc * shift + outer[static_cast<std::size_t>(k)];
    return acc;
}

/// Exponent that is an integer or half an odd integer, stored as twice its value.
struct HalfInteger {
    long twice = 0;

    static constexpr HalfInteger whole(long k) noexcept { return {2 * k}; }
    /// numerator / 2
    static constexpr HalfInteger halves(long numerator) noexcept { return {numerator}; }

    constexpr bool is_integer() const noexcept { return twice % 2 == 0; }
    friend constexpr bool operator==(HalfInteger, HalfInteger) = default;
};

inline Jet pow(const Jet& a, long k)
{
    if (k < 0)
        return pow(invert(a), -k);
    Jet result = Jet::constant(1, a.order(), a.base_point());
    Jet base = a;
    while (k > 0) {
        if (k & 1)
            result = result * base;
        k >>= 1;
        if (k > 0)
            base = base * base;
    }
    return result;
}

/// a^k for integer or half-integer k; half-integers go through one sqrt.
inline Jet pow(const Jet& a, HalfInteger k)
{
    if (k.is_integer())
        return pow(a, k.twice / 2);
    return pow(sqrt(a), k.twice);
}

} // namespace itercanon
