#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "error.hpp"
#include "jet.hpp"
#include "matrix_jet.hpp"
#include "operator.hpp"

namespace itercanon {

/// Equivalence transformation x = f(z), y = T(z) w.
///
/// f is the jet at z0 of the new-to-old variable map, so f(z0) must be the base
/// point of the system it acts on; T lives at z0 as well.
class PointTransformation {
public:
    PointTransformation(Jet f, MatrixJet t) : f_(std::move(f)), t_(std::move(t))
    {
        if (f_.order() < 1)
            throw Error(ErrorKind::order_exhausted, "change of variable needs at least a first-order jet");
        Jet::require_same_base(f_, t_(0, 0));
        if (sgn(f_[1]) == 0)
            throw Error(ErrorKind::singular, "f'(z0) vanishes; the change of variable is not invertible");
        if (!t_.is_invertible())
            throw Error(ErrorKind::singular, "mixing matrix T is singular at the base point");
    }

    static PointTransformation identity(std::size_t dim, int order, const Rational& base_point = 0)
    {
        return PointTransformation(Jet::variable(order, base_point), MatrixJet::identity(dim, order, base_point));
    }

    /// Pure dependent-variable gauge y = T w (f is the identity map).
    static PointTransformation gauge(const MatrixJet& t)
    {
        return PointTransformation(Jet::variable(t.order() + 1, t.base_point()), t);
    }

    /// Normal-form preserving element x = f(z), y = f'(z)^{(n-1)/2} C w.
    /// For even n f'(z0) must be the square of a rational.
    static PointTransformation normal_form(const Jet& f, const RationalMatrix& c, int n)
    {
        RationalMatrix c_inverse;
        if (!try_invert(c, c_inverse))
            throw Error(ErrorKind::singular, "constant matrix C is singular");
        const Jet scale = pow(derive(f), HalfInteger::halves(n - 1));
        return PointTransformation(f, scale * MatrixJet::constant(c, scale.order(), f.base_point()));
    }

    const Jet& f() const noexcept { return f_; }
    const MatrixJet& t() const noexcept { return t_; }
    std::size_t dim() const noexcept { return t_.dim(); }

private:
    Jet f_;
    MatrixJet t_;
};

/// Applying `first` and then `second` equals applying (f1 o f2, (T1 o f2) T2).
inline PointTransformation then(const PointTransformation& first, const PointTransformation& second)
{
    return PointTransformation(compose(first.f(), second.f()), compose(first.t(), second.f()) * second.t());
}

/// Rewrites sys in the new variables and renormalizes to a monic system in w(z).
///
/// y^(k) is expanded as sum_i c[k][i] w^(i) through the recursion
/// c[k] = (1/f') d/dz c[k-1]; the collected leading coefficient is T/f'^n.
inline LinearSystem pushforward(const LinearSystem& sys, const PointTransformation& tr)
{
    if (sys.dim() != tr.dim())
        throw Error(ErrorKind::dimension_mismatch, "transformation and system dimensions differ");
    const int n = sys.n();
    const Jet inv_fp = invert(derive(tr.f()));

    // rows[k][i]: coefficient of w^(i) in y^(k)
    std::vector<std::vector<MatrixJet>> rows;
    rows.push_back({tr.t()});
    for (int k = 1; k <= n; ++k) {
        const auto& prev = rows.back();
        std::vector<MatrixJet> row;
        row.reserve(static_cast<std::size_t>(k) + 1);
        for (int i = 0; i <= k; ++i) {
            MatrixJet acc;
            if (i < k) {
                const MatrixJet& c = prev[static_cast<std::size_t>(i)];
                if (c.order() < 1)
                    throw Error(ErrorKind::order_exhausted, "transformation ran out of order in the chain rule");
                acc = derive(c);
                if (i >= 1)
                    acc = acc + prev[static_cast<std::size_t>(i - 1)];
            } else {
                acc = prev[static_cast<std::size_t>(i - 1)];
            }
            row.push_back(inv_fp * acc);
        }
        rows.push_back(std::move(row));
    }

    std::vector<MatrixJet> composed;
    composed.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        composed.push_back(compose(sys.b(k), tr.f()));

    // collected[i]: coefficient of w^(i) in sum_k B_{n-k}(f) y^(k), B_0 = I
    std::vector<MatrixJet> collected;
    collected.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        MatrixJet acc = rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
        for (int k = i; k < n; ++k)
            acc = acc + composed[static_cast<std::size_t>(n - k - 1)] * rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        collected.push_back(std::move(acc));
    }

    const MatrixJet lead_inv = invert(collected[static_cast<std::size_t>(n)]);
    std::vector<MatrixJet> b;
    b.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
        b.push_back(lead_inv * collected[static_cast<std::size_t>(n - j)]);
    return LinearSystem(sys.dim(), std::move(b));
}

/// Series solution of X' = A X with X(z0) = I, by the coefficient recursion
/// (k+1) X_{k+1} = sum_i A_i X_{k-i}. The result is one order above A.
inline MatrixJet fundamental_series(const MatrixJet& a)
{
    const int order = a.order() + 1;
    std::vector<RationalMatrix> a_coeffs;
    for (int k = 0; k <= a.order(); ++k)
        a_coeffs.push_back(a.coefficient(k));
    std::vector<RationalMatrix> x;
    x.push_back(RationalMatrix::identity(a.dim()));
    for (int k = 0; k < order; ++k) {
        RationalMatrix acc(a.dim());
        for (int i = 0; i <= k; ++i)
            if (!a_coeffs[static_cast<std::size_t>(i)].is_zero())
                acc = acc + a_coeffs[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(k - i)];
        x.push_back(ratio(1, k + 1) * acc);
    }
    return MatrixJet::from_coefficients(x, a.base_point());
}

struct NormalForm {
    MatrixJet gauge;    ///< Q with y = Q w, Q(z0) = I
    LinearSystem system; ///< B_1 = 0
};

/// Gauge y = Q w with B_1 Q + n Q' = 0, Q(z0) = I, and the resulting normal form.
inline NormalForm normal_form_gauge(const LinearSystem& sys)
{
    const MatrixJet q = fundamental_series(ratio(-1, sys.n()) * sys.b(1));
    return {q, pushforward(sys, PointTransformation::gauge(q))};
}

struct ScalarNormalForm {
    Jet gauge;
    LinearSystem system;
};

/// Scalar version: y = g w with K^1 g + n K^0 g' = 0 after monicization (K^0 = 1).
inline ScalarNormalForm scalar_normal_gauge(const LinearSystem& eq)
{
    if (eq.dim() != 1)
        throw Error(ErrorKind::dimension_mismatch, "scalar_normal_gauge expects a scalar equation");
    auto nf = normal_form_gauge(eq);
    return {nf.gauge(0, 0), std::move(nf.system)};
}

} // namespace itercanon
