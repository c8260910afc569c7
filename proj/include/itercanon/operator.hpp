#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "jet.hpp"
#include "matrix_jet.hpp"

namespace itercanon {

/// First-order operator Psi = R d/dx + S with R invertible at the base point.
class DiffOperator {
public:
    DiffOperator(MatrixJet r, MatrixJet s) : r_(std::move(r)), s_(std::move(s))
    {
        MatrixJet::require_same_dim(r_, s_);
        Jet::require_same_base(r_(0, 0), s_(0, 0));
        if (r_.order() != s_.order())
            throw Error(ErrorKind::invalid_argument, "R and S must share one truncation order");
        if (!r_.is_invertible())
            throw Error(ErrorKind::singular, "leading matrix R of the operator is not invertible");
    }

    /// Scalar operator r d/dx + s, truncated to the common order.
    static DiffOperator scalar(const Jet& r, const Jet& s)
    {
        const int order = std::min(r.order(), s.order());
        return DiffOperator(MatrixJet::scalar(r.truncated(order), 1), MatrixJet::scalar(s.truncated(order), 1));
    }

    const MatrixJet& r() const noexcept { return r_; }
    const MatrixJet& s() const noexcept { return s_; }
    std::size_t dim() const noexcept { return r_.dim(); }
    int order() const { return r_.order(); }

private:
    MatrixJet r_;
    MatrixJet s_;
};

/// K[0] y^(n) + K[1] y^(n-1) + ... + K[n] y, not normalized.
class LinearForm {
public:
    explicit LinearForm(std::vector<MatrixJet> k) : k_(std::move(k))
    {
        if (k_.empty())
            throw Error(ErrorKind::invalid_argument, "linear form needs a leading coefficient");
        for (const auto& c : k_)
            MatrixJet::require_same_dim(k_.front(), c);
    }

    int n() const noexcept { return static_cast<int>(k_.size()) - 1; }
    std::size_t dim() const { return k_.front().dim(); }

    /// Coefficient of y^(n - j).
    const MatrixJet& k(int j) const { return k_.at(static_cast<std::size_t>(j)); }
    const std::vector<MatrixJet>& coefficients() const noexcept { return k_; }

private:
    std::vector<MatrixJet> k_;
};

/// Monic system y^(n) + B_1 y^(n-1) + ... + B_n y = 0.
class LinearSystem {
public:
    LinearSystem(std::size_t dim, std::vector<MatrixJet> b) : dim_(dim), b_(std::move(b))
    {
        if (b_.empty())
            throw Error(ErrorKind::invalid_argument, "linear system must have order n >= 1");
        for (const auto& c : b_)
            if (c.dim() != dim_)
                throw Error(ErrorKind::dimension_mismatch, "coefficient matrix does not match system dimension");
        for (const auto& c : b_)
            Jet::require_same_base(b_.front()(0, 0), c(0, 0));
    }

    /// y^(n) = 0 with zero coefficients of the given order.
    static LinearSystem canonical(int n, std::size_t dim, int order, const Rational& base_point = 0)
    {
        return LinearSystem(dim, std::vector<MatrixJet>(static_cast<std::size_t>(n), MatrixJet::zero(dim, order, base_point)));
    }

    int n() const noexcept { return static_cast<int>(b_.size()); }
    std::size_t dim() const noexcept { return dim_; }
    const Rational& base_point() const { return b_.front().base_point(); }

    /// B_k, the coefficient of y^(n - k), for k = 1..n.
    const MatrixJet& b(int k) const
    {
        if (k < 1 || k > n())
            throw Error(ErrorKind::invalid_argument, "coefficient index " + std::to_string(k) + " out of range");
        return b_[static_cast<std::size_t>(k - 1)];
    }

    const std::vector<MatrixJet>& coefficients() const noexcept { return b_; }

    /// Smallest truncation order among the coefficients.
    int order() const
    {
        int out = b_.front().order();
        for (const auto& c : b_)
            out = std::min(out, c.order());
        return out;
    }

    LinearSystem truncated(int order) const
    {
        std::vector<MatrixJet> b;
        for (const auto& c : b_)
            b.push_back(c.truncated(order));
        return LinearSystem(dim_, std::move(b));
    }

    LinearSystem with_coefficient(int k, MatrixJet value) const
    {
        LinearSystem out = *this;
        if (value.dim() != dim_)
            throw Error(ErrorKind::dimension_mismatch, "replacement coefficient has the wrong size");
        out.b_.at(static_cast<std::size_t>(k - 1)) = std::move(value);
        return out;
    }

    friend bool operator==(const LinearSystem& a, const LinearSystem& b) { return a.dim_ == b.dim_ && a.b_ == b.b_; }

private:
    std::size_t dim_;
    std::vector<MatrixJet> b_;
};

/// Coefficientwise agreement through the smaller order of each pair.
inline bool agree(const LinearSystem& a, const LinearSystem& b)
{
    if (a.n() != b.n() || a.dim() != b.dim())
        return false;
    for (int k = 1; k <= a.n(); ++k)
        if (!agree(a.b(k), b.b(k)))
            return false;
    return true;
}

/// Scalar system a_1 y^(n-1) + ... as m uncoupled copies: B_k = a_k I_m.
inline LinearSystem tensor_identity(const LinearSystem& scalar_system, std::size_t dim)
{
    if (scalar_system.dim() != 1)
        throw Error(ErrorKind::dimension_mismatch, "tensor_identity expects a scalar system");
    std::vector<MatrixJet> b;
    for (int k = 1; k <= scalar_system.n(); ++k)
        b.push_back(MatrixJet::scalar(scalar_system.b(k)(0, 0), dim));
    return LinearSystem(dim, std::move(b));
}

/// Psi[form[y]] = R (form[y])' + S form[y], recollected on derivatives of y.
///
/// New coefficient of y^(n+1-j) is R (K_j + K_{j-1}') + S K_{j-1}.
inline LinearForm apply(const DiffOperator& psi, const LinearForm& form)
{
    MatrixJet::require_same_dim(psi.r(), form.k(0));
    const int n = form.n();
    std::vector<MatrixJet> out;
    out.reserve(static_cast<std::size_t>(n) + 2);
    for (int j = 0; j <= n + 1; ++j) {
        MatrixJet term;
        bool have = false;
        auto add = [&](const MatrixJet& x) {
            term = have ? term + x : x;
            have = true;
        };
        if (j >= 1) {
            const MatrixJet& prev = form.k(j - 1);
            if (prev.order() < 1)
                throw Error(ErrorKind::order_exhausted,
                            "applying the operator needs the derivative of a coefficient of order 0");
            add(psi.r() * (j <= n ? form.k(j) + derive(prev) : derive(prev)));
            add(psi.s() * prev);
        } else {
            add(psi.r() * form.k(0));
        }
        out.push_back(std::move(term));
    }
    return LinearForm(std::move(out));
}

/// Psi^n[y] with K[0] = R^n. Requires the operator's order to be at least
/// n + min_output_order; iteration costs one order per application.
inline LinearForm iterate(const DiffOperator& psi, int n, int min_output_order = 0)
{
    if (n < 0)
        throw Error(ErrorKind::invalid_argument, "iteration count must be non-negative");
    if (n == 0)
        return LinearForm({MatrixJet::identity(psi.dim(), psi.order(), psi.r().base_point())});
    if (psi.order() < n + min_output_order)
        throw Error(ErrorKind::order_exhausted,
                    "operator known to order " + std::to_string(psi.order()) + " cannot be iterated " +
                        std::to_string(n) + " times with output order " + std::to_string(min_output_order));
    LinearForm form({psi.r(), psi.s()});
    for (int i = 1; i < n; ++i)
        form = apply(psi, form);
    return form;
}

/// Closed-form K_n^1 = r^{n-1}[n s + C(n,2) r'] for scalar operators.
inline Jet scalar_k1(const Jet& r, const Jet& s, int n)
{
    if (n < 1)
        throw Error(ErrorKind::invalid_argument, "K_n^1 needs n >= 1");
    return pow(r, n - 1L) * (Rational(n) * s + binomial(n, 2) * derive(r));
}

/// Closed-form K_n^2 = r^{n-2}[C(n,2) Psi s + C(n,3)(3 s r' + r r'' + (3n-5)/4 r'^2)].
inline Jet scalar_k2(const Jet& r, const Jet& s, int n)
{
    if (n < 2)
        throw Error(ErrorKind::invalid_argument, "K_n^2 needs n >= 2");
    const Jet r1 = derive(r);
    const Jet r2 = derive(r1);
    const Jet psi_s = r * derive(s) + s * s;
    const Jet bracket = Rational(3) * s * r1 + r * r2 + ratio(3L * n - 5, 4) * r1 * r1;
    return pow(r, n - 2L) * (binomial(n, 2) * psi_s + binomial(n, 3) * bracket);
}

/// Left-multiplies by K[0]^{-1}: B_k = K_0^{-1} K_k.
inline LinearSystem monicize(const LinearForm& form)
{
    if (form.n() < 1)
        throw Error(ErrorKind::invalid_argument, "cannot monicize a form of order 0");
    if (!form.k(0).is_invertible())
        throw Error(ErrorKind::singular, "leading coefficient is singular at the base point");
    const MatrixJet lead_inv = invert(form.k(0));
    std::vector<MatrixJet> b;
    b.reserve(static_cast<std::size_t>(form.n()));
    for (int j = 1; j <= form.n(); ++j)
        b.push_back(lead_inv * form.k(j));
    return LinearSystem(form.dim(), std::move(b));
}

} // namespace itercanon
