#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "iterative.hpp"
#include "jet.hpp"
#include "operator.hpp"

namespace itercanon {

struct SourcePair {
    Jet u; ///< u(z0) = 1, u'(z0) = 0
    Jet v; ///< v(z0) = 0, v'(z0) = 1
};

/// Two independent series solutions of y'' + q y = 0.
inline SourcePair source_solutions(const Jet& q)
{
    return {source_series(q, 1, 0), source_series(q, 0, 1)};
}

inline Jet wronskian(const Jet& u, const Jet& v) { return u * derive(v) - derive(u) * v; }

/// The n products u^{n-j} v^{j-1}, j = 1..n, spanning the solutions of the
/// order-n iterative equation with source y'' + q y = 0.
struct SolutionBasis {
    int n = 0;
    std::size_t m = 0;
    Jet u;
    Jet v;
    std::vector<Jet> basis;
};

inline SolutionBasis make_basis(const Jet& u, const Jet& v, int n, std::size_t m)
{
    if (n < 1 || m < 1)
        throw Error(ErrorKind::invalid_argument, "solution basis needs n >= 1 and m >= 1");
    const Jet w = wronskian(u, v);
    if (!w.is_unit() || w.valuation() != 0 || !agree(w, Jet::constant(w[0], w.order(), w.base_point())))
        throw Error(ErrorKind::invalid_argument, "u v' - u' v must be a nonzero constant");
    const int order = std::min(u.order(), v.order());
    SolutionBasis out{n, m, u.truncated(order), v.truncated(order), {}};
    for (int j = 1; j <= n; ++j)
        out.basis.push_back(pow(out.u, static_cast<long>(n - j)) * pow(out.v, static_cast<long>(j - 1)));
    return out;
}

inline SolutionBasis make_basis(const Jet& q, int n, std::size_t m)
{
    const auto [u, v] = source_solutions(q);
    return make_basis(u, v, n, m);
}

using CoefficientMatrix = std::vector<std::vector<Rational>>;

/// w_i = sum_j C_ij u^{n-j} v^{j-1}.
inline std::vector<Jet> superpose(const SolutionBasis& basis, const CoefficientMatrix& c)
{
    if (c.size() != basis.m)
        throw Error(ErrorKind::dimension_mismatch, "C must have m rows");
    std::vector<Jet> out;
    for (const auto& row : c) {
        if (row.size() != static_cast<std::size_t>(basis.n))
            throw Error(ErrorKind::dimension_mismatch, "C must have n columns");
        Jet acc = Jet::zero(basis.basis.front().order(), basis.u.base_point());
        for (std::size_t j = 0; j < row.size(); ++j)
            if (sgn(row[j]) != 0)
                acc += row[j] * basis.basis[j];
        out.push_back(std::move(acc));
    }
    return out;
}

/// Exponent range for the single-solution formula w = sum_j C_j u^{n-1} (int u^-2)^e.
enum class ExponentRange {
    printed, ///< e = j for j = 1..n
    shifted, ///< e = j - 1 for j = 1..n, i.e. 0..n-1
};

/// The n functions u^{n-1} phi^e with phi = int u^{-2} (zero constant of integration).
inline std::vector<Jet> single_solution_basis(const Jet& u, int n, ExponentRange range = ExponentRange::printed)
{
    if (!u.is_unit())
        throw Error(ErrorKind::singular, "single-solution formula needs u(z0) != 0");
    if (n < 1)
        throw Error(ErrorKind::invalid_argument, "order n must be at least 1");
    const Jet inv = invert(u);
    const Jet phi = integrate(inv * inv).truncated(u.order());
    const Jet lead = pow(u, static_cast<long>(n - 1));
    const long first = range == ExponentRange::printed ? 1 : 0;
    std::vector<Jet> out;
    for (long e = first; e < first + n; ++e)
        out.push_back(lead * pow(phi, e));
    return out;
}

inline std::vector<Jet> superpose_single(const Jet& u, int n, const CoefficientMatrix& c,
                                         ExponentRange range = ExponentRange::printed)
{
    const auto basis = single_solution_basis(u, n, range);
    std::vector<Jet> out;
    for (const auto& row : c) {
        if (row.size() != static_cast<std::size_t>(n))
            throw Error(ErrorKind::dimension_mismatch, "C must have n columns");
        Jet acc = Jet::zero(basis.front().order(), u.base_point());
        for (std::size_t j = 0; j < row.size(); ++j)
            if (sgn(row[j]) != 0)
                acc += row[j] * basis[j];
        out.push_back(std::move(acc));
    }
    return out;
}

/// Rank of the coefficient matrix of the given jets through `through` (inclusive).
inline std::size_t jet_rank(const std::vector<Jet>& jets, int through)
{
    std::vector<std::vector<Rational>> rows;
    for (const auto& j : jets) {
        const auto t = j.truncated(through);
        rows.emplace_back(t.coefficients().begin(), t.coefficients().end());
    }
    return rank(std::move(rows));
}

struct SpanReport {
    int through = 0;
    std::size_t rank_two_solution = 0; ///< rank of u^{n-j} v^{j-1}
    std::size_t rank_printed = 0;
    std::size_t rank_printed_union = 0;
    std::size_t rank_shifted = 0;
    std::size_t rank_shifted_union = 0;

    bool printed_matches() const { return rank_printed == rank_two_solution && rank_printed_union == rank_two_solution; }
    bool shifted_matches() const { return rank_shifted == rank_two_solution && rank_shifted_union == rank_two_solution; }
};

/// Compares the spans of the single-solution formula (both exponent ranges) with the
/// two-solution basis built from the same q, on Taylor coefficients through `through`.
inline SpanReport compare_spans(const Jet& q, int n, int through)
{
    const SolutionBasis two = make_basis(q, n, 1);
    const auto printed = single_solution_basis(two.u, n, ExponentRange::printed);
    const auto shifted = single_solution_basis(two.u, n, ExponentRange::shifted);
    auto joined = [&](const std::vector<Jet>& other) {
        std::vector<Jet> all = two.basis;
        all.insert(all.end(), other.begin(), other.end());
        return all;
    };
    SpanReport report;
    report.through = through;
    report.rank_two_solution = jet_rank(two.basis, through);
    report.rank_printed = jet_rank(printed, through);
    report.rank_printed_union = jet_rank(joined(printed), through);
    report.rank_shifted = jet_rank(shifted, through);
    report.rank_shifted_union = jet_rank(joined(shifted), through);
    return report;
}

/// L[w] = w^(n) + sum_k B_k w^(n-k), componentwise.
struct Residual {
    std::vector<Jet> components;
    int order = 0;        ///< tracked order of the residual jets
    int zero_through = 0; ///< every coefficient vanishes through this order (-1: constant term nonzero)

    bool is_zero() const { return zero_through >= order; }
};

inline Residual residual(const LinearSystem& sys, const std::vector<Jet>& w)
{
    const std::size_t m = sys.dim();
    const int n = sys.n();
    if (w.size() != m)
        throw Error(ErrorKind::dimension_mismatch, "solution has the wrong number of components");

    // derivs[k][i] = w_i^(k)
    std::vector<std::vector<Jet>> derivs(static_cast<std::size_t>(n) + 1);
    derivs[0] = w;
    for (int k = 1; k <= n; ++k)
        for (const auto& x : derivs[static_cast<std::size_t>(k - 1)]) {
            if (x.order() < 1)
                throw Error(ErrorKind::order_exhausted, "solution jets are too short for an order-n residual");
            derivs[static_cast<std::size_t>(k)].push_back(derive(x));
        }

    Residual out;
    for (std::size_t i = 0; i < m; ++i) {
        Jet acc = derivs[static_cast<std::size_t>(n)][i];
        for (int k = 1; k <= n; ++k) {
            const MatrixJet& bk = sys.b(k);
            for (std::size_t j = 0; j < m; ++j)
                acc += bk(i, j) * derivs[static_cast<std::size_t>(n - k)][j];
        }
        out.components.push_back(std::move(acc));
    }
    out.order = out.components.front().order();
    for (const auto& c : out.components)
        out.order = std::min(out.order, c.order());
    int first_nonzero = out.order + 1;
    for (const auto& c : out.components) {
        const int v = c.truncated(out.order).valuation();
        if (v >= 0)
            first_nonzero = std::min(first_nonzero, v);
    }
    out.zero_through = first_nonzero - 1;
    return out;
}

/// Integrates the system with classical RK4 from the initial data of w at `start`
/// and returns the largest |y_i(t) - w_i(t)| on the step grid up to `stop`.
///
/// Both t and the grid are in the local coordinate; coefficients and w are
/// evaluated exactly at the rational stage points and converted to double once.
inline double numeric_crosscheck(const LinearSystem& sys, const std::vector<Jet>& w, const Rational& start,
                                 const Rational& stop, int steps)
{
    if (steps < 1)
        throw Error(ErrorKind::invalid_argument, "numeric cross-check needs at least one step");
    const std::size_t m = sys.dim();
    const int n = sys.n();
    if (w.size() != m)
        throw Error(ErrorKind::dimension_mismatch, "solution has the wrong number of components");
    const std::size_t state = static_cast<std::size_t>(n) * m;

    // coefficient matrices evaluated at a rational point, memoized per point
    std::map<Rational, std::vector<double>> cache;
    auto coefficients_at = [&](const Rational& t) -> const std::vector<double>& {
        auto it = cache.find(t);
        if (it != cache.end())
            return it->second;
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(n) * m * m);
        for (int k = 1; k <= n; ++k)
            for (const auto& e : sys.b(k).entries())
                values.push_back(to_double(e.evaluate(t)));
        return cache.emplace(t, std::move(values)).first->second;
    };

    // y[k*m + i] = y_i^(k)
    auto rhs = [&](const Rational& t, const std::vector<double>& y) {
        const auto& b = coefficients_at(t);
        std::vector<double> dy(state);
        for (std::size_t idx = 0; idx + m < state; ++idx)
            dy[idx] = y[idx + m];
        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0;
            for (int k = 1; k <= n; ++k) {
                const std::size_t base = static_cast<std::size_t>(k - 1) * m * m;
                for (std::size_t j = 0; j < m; ++j)
                    acc += b[base + i * m + j] * y[static_cast<std::size_t>(n - k) * m + j];
            }
            dy[static_cast<std::size_t>(n - 1) * m + i] = -acc;
        }
        return dy;
    };

    std::vector<double> y(state);
    for (std::size_t i = 0; i < m; ++i) {
        Jet d = w[i];
        for (int k = 0; k < n; ++k) {
            y[static_cast<std::size_t>(k) * m + i] = to_double(d.evaluate(start));
            if (k + 1 < n)
                d = derive(d);
        }
    }

    const Rational h = (stop - start) / steps;
    const double hd = to_double(h);
    const Rational half = h / 2;
    double defect = 0;
    auto record = [&](const Rational& t) {
        for (std::size_t i = 0; i < m; ++i)
            defect = std::max(defect, std::abs(y[i] - to_double(w[i].evaluate(t))));
    };
    auto axpy = [&](const std::vector<double>& base, const std::vector<double>& dir, double scale) {
        std::vector<double> out(base);
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] += scale * dir[k];
        return out;
    };

    Rational t = start;
    record(t);
    for (int step = 0; step < steps; ++step) {
        const Rational mid = t + half;
        const Rational next = t + h;
        const auto k1 = rhs(t, y);
        const auto k2 = rhs(mid, axpy(y, k1, hd / 2));
        const auto k3 = rhs(mid, axpy(y, k2, hd / 2));
        const auto k4 = rhs(next, axpy(y, k3, hd));
        for (std::size_t k = 0; k < state; ++k)
            y[k] += hd / 6 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
        cache.erase(t);
        cache.erase(mid);
        t = next;
        record(t);
    }
    return defect;
}

} // namespace itercanon
