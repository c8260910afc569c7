#include <gtest/gtest.h>

#include "test_support.hpp"

namespace itercanon {
namespace {

using test::poly;

TEST(Pushforward, IdentityLeavesSystemUnchanged)
{
    test::Rng rng(61);
    const LinearSystem sys = test::random_system(rng, 3, 2, 3);
    const LinearSystem out = pushforward(sys, PointTransformation::identity(2, default_truncation));
    EXPECT_TRUE(agree(out, sys));
}

// y'' = 0 under x = f(z), y = T w:
// w'' + [2 T^-1 T' - (f''/f') I] w' + [T^-1 T'' - (f''/f') T^-1 T'] w = 0.
TEST(Pushforward, SecondOrderFreeFallFormula)
{
    test::Rng rng(67);
    for (std::size_t m : {2u, 3u})
        for (int trial = 0; trial < 3; ++trial) {
            const PointTransformation tr = test::random_transformation(rng, m);
            const LinearSystem out = pushforward(LinearSystem::canonical(2, m, default_truncation), tr);
            const MatrixJet& t = tr.t();
            const MatrixJet t1 = derive(t), t2 = derive(t1), t_inv = invert(t);
            const Jet f1 = derive(tr.f());
            const Jet ratio_f = derive(f1) / f1;
            const MatrixJet expected1 = Rational(2) * (t_inv * t1) - MatrixJet::scalar(ratio_f, m);
            const MatrixJet expected2 = t_inv * t2 - ratio_f * (t_inv * t1);
            EXPECT_TRUE(agree(out.b(1), expected1));
            EXPECT_TRUE(agree(out.b(2), expected2));
        }
}

// y''' = 0 under the normal-form subgroup is isotropic, with scalar part equal
// to the scalar pushforward of y''' = 0 by the same f.
TEST(Pushforward, NormalFormSubgroupOnCanonicalEquation)
{
    test::Rng rng(71);
    for (int trial = 0; trial < 4; ++trial) {
        const Jet f = test::random_change_of_variable(rng);
        const RationalMatrix c = test::random_invertible_constant(rng, 2);
        const LinearSystem vec = pushforward(LinearSystem::canonical(3, 2, default_truncation),
                                             PointTransformation::normal_form(f, c, 3));
        const LinearSystem sca = pushforward(LinearSystem::canonical(3, 1, default_truncation),
                                             PointTransformation::normal_form(f, RationalMatrix::identity(1), 3));
        for (int k = 1; k <= 3; ++k) {
            const auto lambda = scalar_test(vec.b(k));
            ASSERT_TRUE(lambda.has_value()) << "k=" << k;
            EXPECT_TRUE(agree(*lambda, sca.b(k)(0, 0)));
        }
        EXPECT_TRUE(vec.b(1).is_zero());
    }
}

TEST(Pushforward, GroupLaw)
{
    test::Rng rng(73);
    for (int trial = 0; trial < 4; ++trial) {
        const std::size_t m = 1 + static_cast<std::size_t>(trial % 3);
        const LinearSystem sys = test::random_system(rng, 3, m, 2);
        const PointTransformation first = test::random_transformation(rng, m);
        const PointTransformation second = test::random_transformation(rng, m);
        const LinearSystem stepwise = pushforward(pushforward(sys, first), second);
        const LinearSystem direct = pushforward(sys, then(first, second));
        EXPECT_TRUE(agree(stepwise, direct));
    }
}

TEST(Pushforward, NormalFormIsPreservedBySubgroup)
{
    test::Rng rng(79);
    for (int n : {2, 3, 4}) {
        const LinearSystem sys = test::random_system(rng, n, 2, 2).with_coefficient(1, MatrixJet::zero(2, default_truncation));
        const Jet f = test::random_change_of_variable(rng);
        const LinearSystem out = pushforward(sys, PointTransformation::normal_form(f, test::random_invertible_constant(rng, 2), n));
        EXPECT_TRUE(out.b(1).is_zero()) << "n=" << n;
    }
}

// If y solves sys then w = T^{-1} y(f(z)) solves the pushforward.
TEST(Pushforward, SolutionTransport)
{
    test::Rng rng(83);
    for (int trial = 0; trial < 4; ++trial) {
        const int n = 2 + trial % 2;
        const std::size_t m = 2;
        const LinearSystem sys = test::random_system(rng, n, m, 2);
        std::vector<std::vector<Rational>> init(m, std::vector<Rational>(static_cast<std::size_t>(n)));
        for (auto& row : init)
            for (auto& x : row)
                x = test::random_rational(rng);
        const std::vector<Jet> y = test::series_solution(sys, init);
        const PointTransformation tr = test::random_transformation(rng, m);
        const LinearSystem pushed = pushforward(sys, tr);

        const MatrixJet t_inv = invert(tr.t());
        std::vector<Jet> w;
        for (std::size_t i = 0; i < m; ++i) {
            Jet acc = Jet::zero(t_inv.order());
            for (std::size_t j = 0; j < m; ++j)
                acc += t_inv(i, j) * compose(y[j], tr.f());
            w.push_back(acc);
        }
        const Residual res = residual(pushed, w);
        EXPECT_TRUE(res.is_zero()) << "zero through " << res.zero_through << " of " << res.order;
        EXPECT_GE(res.order, 8);
    }
}

TEST(Pushforward, Errors)
{
    const LinearSystem sys = LinearSystem::canonical(2, 2, 8);
    EXPECT_THROW(PointTransformation(poly({0, 0, 1}, 8), MatrixJet::identity(2, 8)), Error);
    EXPECT_THROW(PointTransformation(poly({0, 1}, 8), MatrixJet::zero(2, 8)), Error);
    try {
        (void)pushforward(sys, PointTransformation::identity(3, 8));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::dimension_mismatch);
    }
    // f(z0) = 1 but the system lives at 0
    try {
        (void)pushforward(sys, PointTransformation(poly({1, 1}, 8), MatrixJet::identity(2, 8)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::base_point_mismatch);
    }
    // order exhaustion in the chain rule
    EXPECT_THROW((void)pushforward(LinearSystem::canonical(4, 1, 8),
                                   PointTransformation(poly({0, 1, 1}, 2), MatrixJet::identity(1, 2))),
                 Error);
}

TEST(NormalFormSubgroup, EvenOrderNeedsRationalRoot)
{
    try {
        (void)PointTransformation::normal_form(poly({0, 2, 1}), RationalMatrix::identity(2), 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unsupported_extension);
    }
    EXPECT_NO_THROW((void)PointTransformation::normal_form(poly({0, 2, 1}), RationalMatrix::identity(2), 3));
}

TEST(NormalFormGauge, AlreadyNormal)
{
    test::Rng rng(89);
    const LinearSystem sys = test::random_system(rng, 3, 2, 3).with_coefficient(1, MatrixJet::zero(2, default_truncation));
    const NormalForm nf = normal_form_gauge(sys);
    EXPECT_TRUE(agree(nf.gauge, MatrixJet::identity(2, default_truncation)));
    EXPECT_TRUE(agree(nf.system, sys));
}

TEST(NormalFormGauge, FirstCoefficientVanishes)
{
    test::Rng rng(97);
    for (int n = 2; n <= 5; ++n)
        for (std::size_t m = 1; m <= 3; ++m) {
            const NormalForm nf = normal_form_gauge(test::random_system(rng, n, m, 2));
            EXPECT_TRUE(nf.system.b(1).is_zero());
            EXPECT_EQ(nf.gauge.constant_term(), RationalMatrix::identity(m));
        }
}

// y'' + 2a y' + b y: Q = exp(-int a) and the normal form is w'' + (b - a^2 - a') w.
TEST(NormalFormGauge, ScalarIntegratingFactor)
{
    test::Rng rng(101);
    for (int trial = 0; trial < 5; ++trial) {
        const Jet a = test::random_poly(rng, 2);
        const Jet b = test::random_poly(rng, 2);
        const LinearSystem sys(1, {MatrixJet::scalar(Rational(2) * a, 1), MatrixJet::scalar(b, 1)});
        const NormalForm nf = normal_form_gauge(sys);

        // exp(g) as sum g^k / k!, g without constant term
        const Jet g = -integrate(a);
        Jet expg = Jet::constant(1, g.order());
        Jet term = Jet::constant(1, g.order());
        for (int k = 1; k <= g.order(); ++k) {
            term = term * g / Rational(k);
            expg = expg + term;
        }
        EXPECT_TRUE(agree(nf.gauge(0, 0), expg));
        EXPECT_TRUE(agree(nf.system.b(2)(0, 0), b - a * a - derive(a)));
    }
}

TEST(ScalarNormalGauge, TrivialWhenK1Vanishes)
{
    const LinearSystem eq(1, {MatrixJet::zero(1, 10), MatrixJet::scalar(poly({1, 2}, 10), 1)});
    const ScalarNormalForm nf = scalar_normal_gauge(eq);
    EXPECT_EQ(nf.gauge, Jet::constant(1, 11));
}

// Gauging the iterate of (r, s) lands on the iterate of (r, -(n-1) r'/2).
TEST(ScalarNormalGauge, MatchesImposedSourceRelation)
{
    test::Rng rng(103);
    for (int n = 2; n <= 4; ++n) {
        const Jet r = test::random_poly(rng, 2, default_truncation, true);
        const Jet s = test::random_poly(rng, 2);
        const LinearSystem eq = monicize(iterate(DiffOperator::scalar(r, s), n));
        const ScalarNormalForm nf = scalar_normal_gauge(eq);
        const LinearSystem expected = build_iterative_from_r(n, r);
        EXPECT_TRUE(agree(nf.system, expected)) << "n=" << n;
    }
}

TEST(ScalarNormalGauge, SecondOrderExample)
{
    // y'' + 2x y' + (1 + x^2) y: normal form w'' + (1 + x^2 - x^2 - 1) w = w''.
    const LinearSystem eq(1, {MatrixJet::scalar(poly({0, 2}), 1), MatrixJet::scalar(poly({1, 0, 1}), 1)});
    const ScalarNormalForm nf = scalar_normal_gauge(eq);
    EXPECT_TRUE(nf.system.b(1).is_zero());
    EXPECT_TRUE(nf.system.b(2).is_zero());
}

} // namespace
} // namespace itercanon
