#include <gtest/gtest.h>

#include "test_support.hpp"

namespace itercanon {
namespace {

using test::poly;

TEST(AMap, ConstantAndSquareOfLinear)
{
    EXPECT_TRUE(a_map(Jet::constant(1, 10)).is_zero());
    EXPECT_TRUE(a_map(poly({1, 2, 1})).is_zero());
}

TEST(AMap, SquareOfSourceSolutionGivesSource)
{
    test::Rng rng(107);
    for (int trial = 0; trial < 10; ++trial) {
        const Jet q = test::random_poly(rng, 3);
        const Jet u = source_series(q, 1, test::random_rational(rng));
        EXPECT_TRUE(agree(a_map(u * u), q));
    }
}

TEST(AMap, SingularArgumentRejected)
{
    EXPECT_THROW((void)a_map(poly({0, 1})), Error);
}

TEST(SourceSeries, CosineRecursion)
{
    const Jet u = source_series(Jet::constant(1, 6), 1, 0);
    EXPECT_EQ(u, test::poly_q({1, 0, ratio(-1, 2), 0, ratio(1, 24), 0, ratio(-1, 720), 0, ratio(1, 40320)}, 8));
}

TEST(BuildIterative, ZeroSourceIsCanonical)
{
    for (int n = 1; n <= 6; ++n) {
        const LinearSystem sys = build_iterative_normal(n, Jet::zero(default_truncation), 2);
        for (int k = 1; k <= n; ++k)
            EXPECT_TRUE(sys.b(k).is_zero()) << "n=" << n << " k=" << k;
    }
}

// y''' + 4q y' + 2q' y
TEST(BuildIterative, ThirdOrderTemplate)
{
    test::Rng rng(109);
    for (int trial = 0; trial < 20; ++trial) {
        const Jet q = test::random_poly(rng, 3);
        const LinearSystem sys = build_iterative_normal(3, q);
        EXPECT_TRUE(sys.b(1).is_zero());
        EXPECT_TRUE(agree(sys.b(2)(0, 0), Rational(4) * q));
        EXPECT_TRUE(agree(sys.b(3)(0, 0), Rational(2) * derive(q)));
    }
}

// y'''' + 10q y'' + 10q' y' + (9q^2 + 3q'') y
TEST(BuildIterative, FourthOrderTemplate)
{
    test::Rng rng(113);
    for (int trial = 0; trial < 20; ++trial) {
        const Jet q = test::random_poly(rng, 3);
        const LinearSystem sys = build_iterative_normal(4, q);
        EXPECT_TRUE(sys.b(1).is_zero());
        EXPECT_TRUE(agree(sys.b(2)(0, 0), Rational(10) * q));
        EXPECT_TRUE(agree(sys.b(3)(0, 0), Rational(10) * derive(q)));
        EXPECT_TRUE(agree(sys.b(4)(0, 0), Rational(9) * q * q + Rational(3) * derive(derive(q))));
    }
}

TEST(BuildIterative, SecondCoefficientLaw)
{
    test::Rng rng(127);
    for (int n = 2; n <= 6; ++n)
        for (int trial = 0; trial < 3; ++trial)
            EXPECT_TRUE(check_an2(n, test::random_poly(rng, 3))) << "n=" << n;
    EXPECT_THROW((void)check_an2(1, Jet::zero(8)), Error);
}

TEST(BuildIterative, IsotropicTensorProduct)
{
    test::Rng rng(131);
    const Jet q = test::random_poly(rng, 2);
    const LinearSystem scalar = build_iterative_normal(4, q);
    const LinearSystem vec = build_iterative_normal(4, q, 3);
    for (int k = 1; k <= 4; ++k)
        EXPECT_EQ(vec.b(k), MatrixJet::scalar(scalar.b(k)(0, 0), 3));
}

TEST(BuildIterative, IndependentOfSourceSolution)
{
    test::Rng rng(137);
    for (int n = 2; n <= 6; ++n) {
        const Jet q = test::random_poly(rng, 3);
        EXPECT_TRUE(agree(build_iterative_normal(n, q), build_iterative_normal(n, q, 1, 1, 1))) << "n=" << n;
    }
}

TEST(BuildIterative, ShortSourceRejected)
{
    try {
        (void)build_iterative_normal(6, poly({1, 1}, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::order_exhausted);
    }
    EXPECT_THROW((void)build_iterative_normal(3, Jet::zero(8), 1, 0, 1), Error);
}

TEST(PsiNor, IdentityGivesDerivative)
{
    const DiffOperator psi = psi_nor(MatrixJet::identity(2, 8), 3);
    EXPECT_TRUE(psi.s().is_zero());
    EXPECT_EQ(psi.r(), MatrixJet::identity(2, 7));
}

TEST(PsiNor, CommutingAcceptedNonCommutingRejected)
{
    test::Rng rng(139);
    const Jet u = source_series(test::random_poly(rng, 2), 1, 0);
    EXPECT_NO_THROW((void)psi_nor(family_rok_scaled(u, test::random_invertible_constant(rng, 2)), 3));

    int rejected = 0;
    for (int trial = 0; trial < 5; ++trial) {
        const MatrixJet r = test::random_invertible_matrix(rng, 2, 2);
        if (commutator(r, derive(r)).is_zero())
            continue;
        try {
            (void)psi_nor(r, 3);
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::non_commuting);
            ++rejected;
        }
    }
    EXPECT_GT(rejected, 0);
}

TEST(CommutingFamily, AA2CommutesWithDerivative)
{
    test::Rng rng(149);
    for (int trial = 0; trial < 20; ++trial) {
        const CommutingFamily2x2 p{test::random_rational(rng), test::random_rational(rng), test::random_rational(rng),
                                   test::random_poly(rng, 3), test::random_poly(rng, 3)};
        const MatrixJet r = family_aa2(p);
        EXPECT_TRUE(commutator(r, derive(r)).is_zero());
    }
    const MatrixJet scalar_like = family_aa2({1, 2, 3, poly({1, 1}), Jet::zero(default_truncation)});
    EXPECT_TRUE(scalar_test(scalar_like).has_value());
}

// Normal-form condition: K_n^1 vanishes for commuting R with S = -(n-1)/2 R'.
TEST(CommutingFamily, FirstIteratedCoefficientVanishes)
{
    test::Rng rng(151);
    for (int n = 2; n <= 5; ++n) {
        CommutingFamily2x2 p{test::random_rational(rng), test::random_rational(rng), test::random_rational(rng),
                             test::random_poly(rng, 2, default_truncation, true), test::random_poly(rng, 2)};
        const MatrixJet r = family_aa2(p);
        if (!r.is_invertible())
            continue;
        EXPECT_TRUE(iterate(psi_nor(r, n), n).k(1).is_zero()) << "n=" << n;
    }
}

TEST(CommutingFamily, RokAMapIsSourceTimesIdentity)
{
    test::Rng rng(157);
    for (int trial = 0; trial < 5; ++trial) {
        const Jet q = test::random_poly(rng, 3);
        std::vector<Jet> us;
        for (std::size_t i = 0; i < 3; ++i)
            us.push_back(source_series(q, test::random_nonzero(rng), test::random_rational(rng)));
        for (std::size_t m = 1; m <= 3; ++m) {
            const MatrixJet diag = family_rok_diagonal(std::span<const Jet>(us.data(), m));
            EXPECT_TRUE(agree(a_map(diag), MatrixJet::scalar(q, m)));
        }
        const MatrixJet scaled = family_rok_scaled(us[0], test::random_invertible_constant(rng, 3));
        EXPECT_TRUE(agree(a_map(scaled), MatrixJet::scalar(q, 3)));
    }
}

TEST(CommutingFamily, RokDiagonalOnFreeSolutions)
{
    const std::vector<Jet> us{Jet::constant(1, default_truncation), poly({1, 1})};
    EXPECT_TRUE(a_map(family_rok_diagonal(us)).is_zero());
}

TEST(CommutingFamily, SingularInputsRejected)
{
    RationalMatrix k(2);
    k(0, 0) = 1;
    k(0, 1) = 2;
    k(1, 0) = 2;
    k(1, 1) = 4;
    EXPECT_THROW((void)family_rok_scaled(poly({1, 1}), k), Error);
    const std::vector<Jet> us{poly({0, 1})};
    EXPECT_THROW((void)family_rok_diagonal(us), Error);
}

// R^{-n} Psi_nor^n is isotropic with the scalar iterative equation of the same source.
TEST(CommutingFamily, IteratedRokIsIsotropic)
{
    test::Rng rng(163);
    for (int n = 2; n <= 4; ++n) {
        const Jet q = test::random_poly(rng, 2);
        const LinearSystem expected = build_iterative_normal(n, q);
        const Jet u = source_series(q, 1, test::random_rational(rng));
        const Jet v = source_series(q, test::random_nonzero(rng), test::random_rational(rng));
        const std::vector<Jet> us{u, v};
        for (const MatrixJet& r : {family_rok_diagonal(us), family_rok_scaled(u, test::random_invertible_constant(rng, 2))}) {
            const LinearSystem sys = monicize(iterate(psi_nor(r, n), n));
            for (int k = 1; k <= n; ++k) {
                const auto lambda = scalar_test(sys.b(k));
                ASSERT_TRUE(lambda.has_value()) << "n=" << n << " k=" << k;
                EXPECT_TRUE(agree(*lambda, expected.b(k)(0, 0))) << "n=" << n << " k=" << k;
            }
        }
    }
}

TEST(AEntries2x2, MatchesAMapOnFamily)
{
    test::Rng rng(167);
    int checked = 0;
    while (checked < 30) {
        const CommutingFamily2x2 p{test::random_rational(rng), test::random_rational(rng), test::random_rational(rng),
                                   test::random_dense(rng, default_truncation, true),
                                   test::random_dense(rng, default_truncation)};
        const MatrixJet r = family_aa2(p);
        if (!(r(0, 1) * r(1, 0) - r(0, 0) * r(1, 1)).is_unit())
            continue;
        EXPECT_TRUE(agree(a_entries_2x2(r), a_map(r)));
        ++checked;
    }
}

TEST(AEntries2x2, DiagonalAndFreeCases)
{
    test::Rng rng(173);
    const Jet q = test::random_poly(rng, 2);
    const std::vector<Jet> us{source_series(q, 1, 0), source_series(q, 2, 1)};
    const MatrixJet a = a_entries_2x2(family_rok_diagonal(us));
    EXPECT_TRUE(a(0, 1).is_zero());
    EXPECT_TRUE(a(1, 0).is_zero());
    EXPECT_TRUE(a_entries_2x2(MatrixJet::scalar(poly({1, 2, 1}), 2)).is_zero());
}

} // namespace
} // namespace itercanon
