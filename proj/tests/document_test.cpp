#include <gtest/gtest.h>

#include <functional>
#include <string>

#include "itercanon/document.hpp"
#include "test_support.hpp"

namespace itercanon {
namespace {

using test::poly;

std::string error_of(const std::function<void()>& action)
{
    try {
        action();
    } catch (const DocumentError& e) {
        return e.what();
    }
    return "";
}

TEST(JetDocument, TrailingZerosStripped)
{
    EXPECT_EQ(jet_to_document(poly({1, 0, 2}, 8)).dump(), R"(["1","0","2"])");
    EXPECT_EQ(jet_to_document(Jet::zero(5)).dump(), R"(["0"])");
    EXPECT_EQ(jet_to_document(test::poly_q({ratio(6, 4), ratio(-2, 6)}, 3)).dump(), R"(["3/2","-1/3"])");
}

TEST(SystemDocument, RoundTripIsIdentity)
{
    test::Rng rng(283);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 4;
        const std::size_t m = 1 + static_cast<std::size_t>(trial % 3);
        const LinearSystem sys = test::random_system(rng, n, m, 4, 6 + trial % 5);
        const std::string printed = print_document(system_to_document(sys));
        const LinearSystem back = system_from_document(parse_document(printed));
        EXPECT_EQ(back, sys);
        EXPECT_EQ(print_document(system_to_document(back)), printed);
    }
}

TEST(SystemDocument, MissingCoefficientsAreZero)
{
    const Document doc = parse_document(R"({"kind": "system", "order": 1, "dim": 1, "truncation": 4,
                                            "base_point": "1/2", "B": [[[["1", "-2"]]]]})");
    const LinearSystem sys = system_from_document(doc);
    EXPECT_EQ(sys.order(), 4);
    EXPECT_EQ(sys.base_point(), ratio(1, 2));
    EXPECT_EQ(sys.b(1)(0, 0), Jet::from_coefficients(std::vector<Rational>{1, -2}, 4, ratio(1, 2)));
}

TEST(SystemDocument, TruncationOverride)
{
    const Document doc = parse_document(R"({"kind": "system", "order": 1, "dim": 1, "truncation": 3,
                                            "B": [[[["1", "2", "3", "4"]]]]})");
    EXPECT_EQ(system_from_document(doc, 1).b(1)(0, 0), poly({1, 2}, 1));
    EXPECT_EQ(system_from_document(doc, 6).b(1)(0, 0), poly({1, 2, 3, 4}, 6));
}

TEST(SystemDocument, FieldDiagnostics)
{
    auto parse = [](const char* text) { return error_of([&] { (void)system_from_document(parse_document(text)); }); };
    EXPECT_EQ(parse(R"({"kind": "system", "dim": 1, "truncation": 3, "B": []})"), "field order: missing");
    EXPECT_EQ(parse(R"({"kind": "operator"})"), "field kind: expected \"system\"");
    EXPECT_EQ(parse(R"({"kind": "system", "order": 1, "dim": 1, "truncation": 3, "B": [[[["1", "1.5"]]]]})"),
              "field B[0][0][0][1]: \"1.5\" is not a rational \"p/q\"");
    EXPECT_EQ(parse(R"({"kind": "system", "order": 1, "dim": 1, "truncation": 3, "B": [[[[1]]]]})"),
              "field B[0][0][0][0]: expected a rational string \"p/q\"");
    EXPECT_EQ(parse(R"({"kind": "system", "order": 1, "dim": 1, "truncation": 1, "B": [[[["1", "2", "3"]]]]})"),
              "field B[0][0][0]: has 3 coefficients, truncation 1 allows 2");
    EXPECT_EQ(parse(R"({"kind": "system", "order": 2, "dim": 1, "truncation": 3, "B": [[[["1"]]]]})"),
              "field B: expected 2 coefficient matrices");
    EXPECT_EQ(parse(R"({"kind": "system", "order": 1, "dim": 2, "truncation": 3, "B": [[[["1"], ["0"]]]]})"),
              "field B[0]: expected 2 rows");
    EXPECT_EQ(parse(R"({"kind": "system", "order": 0, "dim": 1, "truncation": 3, "B": []})"),
              "field order: must be at least 1");
}

TEST(SystemDocument, SyntaxErrorsCarryLineAndColumn)
{
    const std::string message = error_of([] { (void)parse_document("{\n  \"kind\": \"system\",\n  oops\n}", "doc.json"); });
    EXPECT_EQ(message.rfind("doc.json:3:3: invalid JSON", 0), 0u) << message;
}

TEST(OperatorDocument, RoundTrip)
{
    test::Rng rng(293);
    const DiffOperator psi(test::random_invertible_matrix(rng, 2, 3, 9), test::random_matrix(rng, 2, 3, 9));
    const std::string printed = print_document(operator_to_document(psi));
    const DiffOperator back = operator_from_document(parse_document(printed));
    EXPECT_EQ(back.r(), psi.r());
    EXPECT_EQ(back.s(), psi.s());
    EXPECT_EQ(print_document(operator_to_document(back)), printed);
}

TEST(TransformDocument, GeneralAndNormalFormShorthand)
{
    const PointTransformation general = transform_from_document(
        parse_document(R"({"kind": "transform", "f": ["0", "2", "1"], "T": [[["1", "1"], ["0"]], [["0"], ["1"]]]})"), 8);
    EXPECT_EQ(general.f(), poly({0, 2, 1}, 8));
    EXPECT_EQ(general.t()(0, 0), poly({1, 1}, 8));

    const PointTransformation nf = transform_from_document(
        parse_document(R"({"kind": "transform", "f": ["0", "1", "1"], "C": [["1", "0"], ["0", "2"]], "n": 3})"), 8);
    // T = f' C with f' = 1 + 2z
    const Jet zero = Jet::zero(8);
    EXPECT_TRUE(agree(nf.t(), MatrixJet(2, {poly({1, 2}, 8), zero, zero, poly({2, 4}, 8)})));

    const PointTransformation back = transform_from_document(parse_document(print_document(transform_to_document(general))), 0);
    EXPECT_EQ(back.f(), general.f());
    EXPECT_EQ(back.t(), general.t());
}

TEST(TransformDocument, Diagnostics)
{
    auto parse = [](const char* text) { return error_of([&] { (void)transform_from_document(parse_document(text), 4); }); };
    EXPECT_EQ(parse(R"({"kind": "transform", "f": ["0", "1"]})"), "field T: give exactly one of \"T\" or \"C\" with \"n\"");
    EXPECT_EQ(parse(R"({"kind": "transform", "f": ["0", "1"], "C": [["1", "0"]], "n": 2})"), "field C[0]: expected 1 entries");
    EXPECT_EQ(parse(R"({"kind": "transform", "f": ["0", "1"], "C": [["1"]]})"), "field n: missing");
    // a singular transformation is a domain error, not a parse error
    EXPECT_THROW((void)transform_from_document(parse_document(R"({"kind": "transform", "f": ["0", "0", "1"], "C": [["1"]], "n": 3})"), 4),
                 Error);
}

TEST(SourceDocument, ExactlyOneOfQOrR)
{
    const SourceData q = source_from_document(parse_document(R"({"kind": "source", "truncation": 5, "q": ["0", "2"]})"));
    ASSERT_TRUE(q.q.has_value());
    EXPECT_FALSE(q.r.has_value());
    EXPECT_EQ(*q.q, poly({0, 2}, 5));
    const SourceData r = source_from_document(parse_document(R"({"kind": "source", "truncation": 5, "r": ["1", "0", "1"]})"));
    ASSERT_TRUE(r.r.has_value());
    EXPECT_EQ(error_of([] { (void)source_from_document(parse_document(R"({"kind": "source", "truncation": 5})")); }),
              "field q: give exactly one of \"q\" or \"r\"");
}

TEST(VerdictDocument, Fields)
{
    const CanonicalVerdict yes = canonical_class_test(LinearSystem::canonical(3, 2, 10));
    const Document doc = verdict_to_document(yes);
    EXPECT_TRUE(doc["canonical_class"].get<bool>());
    EXPECT_EQ(doc["q"].dump(), R"(["0"])");
    EXPECT_TRUE(doc["witness"].is_null());

    const Jet zero = Jet::zero(10);
    const LinearSystem bad(2, {MatrixJet::zero(2, 10), MatrixJet(2, {zero, poly({1}, 10), zero, zero})});
    const Document no = verdict_to_document(canonical_class_test(bad));
    EXPECT_FALSE(no["canonical_class"].get<bool>());
    EXPECT_EQ(no["witness"].dump(), R"({"j":2,"row":0,"col":1,"reason":"off-diagonal"})");
}

} // namespace
} // namespace itercanon
