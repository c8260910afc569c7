#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "iterative.hpp"
#include "jet.hpp"
#include "matrix_jet.hpp"
#include "operator.hpp"
#include "transform.hpp"

namespace itercanon {

enum class WitnessReason {
    off_diagonal,      ///< nonzero off-diagonal entry
    diagonal_mismatch, ///< diagonal entry differs from entry (0, 0)
    not_iterative,     ///< isotropic, but the scalar coefficient is off the iterative template
};

inline std::string_view to_string(WitnessReason reason) noexcept
{
    switch (reason) {
    case WitnessReason::off_diagonal: return "off-diagonal";
    case WitnessReason::diagonal_mismatch: return "diagonal-mismatch";
    case WitnessReason::not_iterative: return "not-iterative";
    }
    return "unknown";
}

/// First failing normal-form coefficient: B_j with entry (row, col).
struct CanonicalWitness {
    int j = 0;
    std::size_t row = 0;
    std::size_t col = 0;
    WitnessReason reason = WitnessReason::off_diagonal;
};

struct CanonicalVerdict {
    bool is_canonical_class = false;
    /// Truncation order through which the verdict was decided.
    int order = 0;
    MatrixJet gauge;
    LinearSystem normal_form;
    std::optional<Jet> q;
    std::optional<CanonicalWitness> witness;
};

/// Decides whether sys reduces to y^(n) = 0 by a point transformation, to the
/// tracked truncation order.
///
/// The normal form (B_1 = 0) must be isotropic, a_j I_m, and its scalar part must
/// equal the iterative equation built from q = a_2 / C(n+1, 3).
inline CanonicalVerdict canonical_class_test(const LinearSystem& sys)
{
    const int n = sys.n();
    if (n < 2)
        throw Error(ErrorKind::invalid_argument, "first-order systems are all equivalent to y' = 0");

    NormalForm nf = normal_form_gauge(sys);
    CanonicalVerdict verdict{false, nf.system.order(), nf.gauge, nf.system, std::nullopt, std::nullopt};

    std::vector<Jet> scalars;
    for (int j = 2; j <= n; ++j) {
        const MatrixJet& bj = nf.system.b(j);
        if (auto bad = first_non_scalar_entry(bj)) {
            const auto [row, col] = *bad;
            verdict.witness = CanonicalWitness{
                j, row, col, row == col ? WitnessReason::diagonal_mismatch : WitnessReason::off_diagonal};
            return verdict;
        }
        scalars.push_back(bj(0, 0));
    }

    const Jet q = scalars.front() / binomial(n + 1, 3);
    const LinearSystem tmpl = build_iterative_normal(n, q);
    int order = verdict.order;
    for (int j = 2; j <= n; ++j) {
        const Jet& actual = scalars[static_cast<std::size_t>(j - 2)];
        const Jet& expected = tmpl.b(j)(0, 0);
        order = std::min({order, actual.order(), expected.order()});
        if (!agree(actual, expected)) {
            verdict.witness = CanonicalWitness{j, 0, 0, WitnessReason::not_iterative};
            return verdict;
        }
    }
    verdict.is_canonical_class = true;
    verdict.order = order;
    verdict.q = q;
    return verdict;
}

struct Uncoupled {
    MatrixJet normal_gauge; ///< Q, into the isotropic normal form
    Jet p;                  ///< scalar gauge P = p I_m, p' = (B/n) p, p(z0) = 1
    MatrixJet total_gauge;  ///< y = Q P h
    Jet r;                  ///< source parameters of Psi = r d/dx + s
    Jet s;
    std::vector<LinearSystem> equations; ///< m identical monic scalar equations Psi^n[h_i] = 0
};

/// Splits a canonical-class system into m identical iterative equations.
///
/// `b` is the free scalar function of the uncoupling gauge; the default (zero)
/// keeps the equations in normal form.
inline Uncoupled uncouple(const LinearSystem& sys, const std::optional<Jet>& b = std::nullopt)
{
    const CanonicalVerdict verdict = canonical_class_test(sys);
    if (!verdict.is_canonical_class)
        throw Error(ErrorKind::invalid_argument, "system is not in the canonical class");
    const int n = sys.n();
    const Jet& q = *verdict.q;

    const Jet u = source_series(q, 1, 0);
    const Jet r = u * u;
    Jet s = ratio(-(n - 1), 2) * derive(r);
    Jet beta = b ? *b : Jet::zero(q.order(), q.base_point());
    s = s + r * (ratio(1, n) * beta);

    const Jet p = fundamental_series(MatrixJet::scalar(ratio(1, n) * beta, 1))(0, 0);
    const LinearSystem scalar_eq = monicize(iterate(DiffOperator::scalar(r, s), n));

    Uncoupled out{verdict.gauge,
                  p,
                  verdict.gauge * MatrixJet::scalar(p, sys.dim()),
                  r,
                  s,
                  std::vector<LinearSystem>(sys.dim(), scalar_eq)};
    return out;
}

} // namespace itercanon
