#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "error.hpp"
#include "jet.hpp"
#include "matrix_jet.hpp"
#include "operator.hpp"

namespace itercanon {

/// A(xi) = 1/4 xi^{-2} (xi'^2 - 2 xi xi'').
inline Jet a_map(const Jet& xi)
{
    const Jet d1 = derive(xi);
    const Jet d2 = derive(d1);
    const Jet inv = invert(xi);
    return ratio(1, 4) * (inv * inv) * (d1 * d1 - Rational(2) * xi * d2);
}

/// Matrix version, evaluated in the left-to-right order xi^{-2} (xi'^2 - 2 xi xi'').
/// Unambiguous only when xi commutes with its derivatives.
inline MatrixJet a_map(const MatrixJet& xi)
{
    const MatrixJet d1 = derive(xi);
    const MatrixJet d2 = derive(d1);
    const MatrixJet inv = invert(xi);
    return ratio(1, 4) * ((inv * inv) * (d1 * d1 - Rational(2) * (xi * d2)));
}

/// Series solution of y'' + q y = 0 with y(z0) = y0, y'(z0) = y1:
/// y_{k+2} = -(sum_i q_i y_{k-i}) / ((k+2)(k+1)). Order is two above q's.
inline Jet source_series(const Jet& q, const Rational& y0, const Rational& y1)
{
    const auto len = static_cast<std::size_t>(q.order()) + 3;
    std::vector<Rational> y(len);
    y[0] = y0;
    y[1] = y1;
    for (std::size_t k = 0; k + 2 < len; ++k) {
        Rational acc = 0;
        for (std::size_t i = 0; i <= k; ++i)
            if (sgn(q[i]) != 0)
                acc += q[i] * y[k - i];
        y[k + 2] = -acc / static_cast<long>((k + 2) * (k + 1));
    }
    return Jet(std::move(y), q.base_point());
}

/// Monic n-th order iterative equation generated by r d/dx - (n-1)/2 r', tensored with I_m.
inline LinearSystem build_iterative_from_r(int n, const Jet& r, std::size_t dim = 1)
{
    if (n < 1)
        throw Error(ErrorKind::invalid_argument, "order n must be at least 1");
    const Jet s = ratio(-(n - 1), 2) * derive(r);
    const LinearForm form = iterate(DiffOperator::scalar(r, s), n);
    return tensor_identity(monicize(form), dim);
}

/// Isotropic normal-form iterative system with source y'' + q y = 0.
///
/// r = u^2 with u the source solution fixed by (u0, u1); the coefficients do not
/// depend on that choice as long as u0 != 0.
inline LinearSystem build_iterative_normal(int n, const Jet& q, std::size_t dim = 1, const Rational& u0 = 1,
                                           const Rational& u1 = 0)
{
    if (sgn(u0) == 0)
        throw Error(ErrorKind::singular, "source solution must not vanish at the base point");
    if (q.order() + 1 < n)
        throw Error(ErrorKind::order_exhausted,
                    "source coefficient of order " + std::to_string(q.order()) + " is too short for n = " +
                        std::to_string(n));
    const Jet u = source_series(q, u0, u1);
    return build_iterative_from_r(n, u * u, dim);
}

/// A_n^2 == C(n+1, 3) q through the tracked order of the generated coefficient.
inline bool check_an2(int n, const Jet& q)
{
    if (n < 2)
        throw Error(ErrorKind::invalid_argument, "A_n^2 exists only for n >= 2");
    const LinearSystem sys = build_iterative_normal(n, q);
    return agree(sys.b(2)(0, 0), binomial(n + 1, 3) * q);
}

/// Psi_nor = R d/dx - (n-1)/2 R'. R must commute with R' (through R' order).
inline DiffOperator psi_nor(const MatrixJet& r, int n)
{
    const MatrixJet d1 = derive(r);
    const MatrixJet rt = r.truncated(d1.order());
    if (!commutator(rt, d1).is_zero())
        throw Error(ErrorKind::non_commuting, "R does not commute with R'");
    return DiffOperator(rt, ratio(-(n - 1), 2) * d1);
}

/// R = (a1, l1 a2; l2 a2, a1 + l3 a2): the 2x2 matrices commuting with their derivative.
struct CommutingFamily2x2 {
    Rational lambda1;
    Rational lambda2;
    Rational lambda3;
    Jet a1;
    Jet a2;
};

inline MatrixJet family_aa2(const CommutingFamily2x2& p)
{
    const int order = std::min(p.a1.order(), p.a2.order());
    const Jet a1 = p.a1.truncated(order);
    const Jet a2 = p.a2.truncated(order);
    return MatrixJet(2, {a1, p.lambda1 * a2, p.lambda2 * a2, a1 + p.lambda3 * a2});
}

/// diag(u_1^2, ..., u_m^2) for nonvanishing source solutions u_i.
inline MatrixJet family_rok_diagonal(std::span<const Jet> us)
{
    if (us.empty())
        throw Error(ErrorKind::invalid_argument, "need at least one source solution");
    int order = us.front().order();
    for (const auto& u : us)
        order = std::min(order, u.order());
    const std::size_t m = us.size();
    std::vector<Jet> e(m * m, Jet::zero(order, us.front().base_point()));
    for (std::size_t i = 0; i < m; ++i) {
        if (!us[i].is_unit())
            throw Error(ErrorKind::singular, "source solution vanishes at the base point");
        const Jet u = us[i].truncated(order);
        e[i * m + i] = u * u;
    }
    return MatrixJet(m, std::move(e));
}

/// u^2 (k_ij) with (k_ij) an invertible constant matrix.
inline MatrixJet family_rok_scaled(const Jet& u, const RationalMatrix& k)
{
    RationalMatrix inverse;
    if (!try_invert(k, inverse))
        throw Error(ErrorKind::singular, "constant matrix (k_ij) must be invertible");
    if (!u.is_unit())
        throw Error(ErrorKind::singular, "source solution vanishes at the base point");
    return (u * u) * MatrixJet::constant(k, u.order(), u.base_point());
}

/// Closed-form entries of A(R) for R = (alpha beta; gamma delta) in the commuting
/// 2x2 family: a_ij = ahat_ij / (4 (beta gamma - alpha delta)^2).
inline MatrixJet a_entries_2x2(const MatrixJet& r)
{
    if (r.dim() != 2)
        throw Error(ErrorKind::dimension_mismatch, "closed-form entries are for 2x2 matrices");
    const Jet &al = r(0, 0), &be = r(0, 1), &ga = r(1, 0), &de = r(1, 1);
    const Jet al1 = derive(al), be1 = derive(be), ga1 = derive(ga), de1 = derive(de);
    const Jet al2 = derive(al1), be2 = derive(be1), ga2 = derive(ga1), de2 = derive(de1);
    const Rational two = 2;

    const Jet h11 = de * de * (al1 * al1 + be1 * ga1 - two * al * al2) - two * be * be * ga * ga2 +
                    be * (-(de * ga1 * (al1 + de1)) + ga * (al1 * al1 + be1 * ga1 + two * de * al2) -
                          al * (al1 * ga1 + ga1 * de1 - two * de * ga2));
    const Jet h12 = de * de * (al1 * be1 + be1 * de1 - two * al * be2) - two * be * be * ga * de2 +
                    be * (-(de * (be1 * ga1 + de1 * de1)) + ga * (al1 * be1 + be1 * de1 + two * de * be2) -
                          al * (be1 * ga1 + de1 * de1 - two * de * de2));
    const Jet h21 = ga * (-(de * (al1 * al1 + be1 * ga1)) + be * (al1 * ga1 + ga1 * de1 - two * ga * al2)) -
                    al * ga * (al1 * al1 + be1 * ga1 - two * de * al2 - two * be * ga2) +
                    al * al * (al1 * ga1 + ga1 * de1 - two * de * ga2);
    const Jet h22 = ga * (-(de * be1 * (al1 + de1)) + be * (be1 * ga1 + de1 * de1 - two * ga * be2)) -
                    al * ga * (al1 * be1 + be1 * de1 - two * de * be2 - two * be * de2) +
                    al * al * (be1 * ga1 + de1 * de1 - two * de * de2);

    const Jet det = be * ga - al * de;
    if (!det.is_unit())
        throw Error(ErrorKind::singular, "beta gamma - alpha delta vanishes at the base point");
    const Jet scale = invert(Rational(4) * det * det);
    return MatrixJet(2, {scale * h11, scale * h12, scale * h21, scale * h22});
}

} // namespace itercanon
