#include <doctest.h>

#include <weavecurv/expr.hpp>
#include <weavecurv/web.hpp>

using namespace weavecurv;

TEST_CASE("built-in family: gauge and components") {
    WebSpec w = WebSpec::builtin_w0(3, false);
    CHECK(w.n() == 3);
    CHECK(w.d() == 6);
    auto ctx = w.ctx();
    CHECK(ctx->num_params() == 0);

    CHECK(w.f(3, 4) == RationalFunction::one(ctx));
    CHECK(w.f(3, 5) == RationalFunction::one(ctx));
    CHECK(w.f(3, 6) == RationalFunction::one(ctx));
    CHECK(w.f(1, 4) == parse_expression("x1/x3", ctx));
    CHECK(w.f(2, 5) == parse_expression("(x2-1)/(x3-1)", ctx));
    CHECK(w.f(1, 6) == parse_expression("x1*(x1-1)/(x3*(x3-1))", ctx));
    // coordinate fields
    CHECK(w.f(1, 1) == RationalFunction::one(ctx));
    CHECK(w.f(2, 1).is_zero());
    CHECK(w.f(2, 2) == RationalFunction::one(ctx));
}

TEST_CASE("built-in family: first integrals are constant along the fields") {
    WebSpec w = WebSpec::builtin_w0(3, false);
    auto ctx = w.ctx();
    // first integrals of the three extra fields
    CHECK(directional_derivative(w, 4, parse_expression("x1/x3", ctx)).is_zero());
    CHECK(directional_derivative(w, 4, parse_expression("x2/x3", ctx)).is_zero());
    CHECK(directional_derivative(w, 5, parse_expression("(x1-1)/(x3-1)", ctx)).is_zero());
    CHECK(directional_derivative(w, 6,
          parse_expression("x1*(x3-1)/(x3*(x1-1))", ctx)).is_zero());
    CHECK(directional_derivative(w, 6,
          parse_expression("x2*(x3-1)/(x3*(x2-1))", ctx)).is_zero());
    // coordinate fields see the complementary coordinates
    CHECK(directional_derivative(w, 1, parse_expression("x2", ctx)).is_zero());
    CHECK(directional_derivative(w, 1, parse_expression("x1", ctx)) ==
          RationalFunction::one(ctx));
    // and a non-integral is not annihilated
    CHECK(!directional_derivative(w, 4, parse_expression("x1", ctx)).is_zero());
}

TEST_CASE("deformed family: parameter enters only the first extra field") {
    WebSpec w = WebSpec::builtin_w0(3, true);
    auto ctx = w.ctx();
    REQUIRE(ctx->num_params() == 1);
    CHECK(ctx->name(3) == "c");
    CHECK(w.f(1, 4) == parse_expression("(x1+c)/(x3+c)", ctx));
    CHECK(w.f(2, 5) == parse_expression("(x2-1)/(x3-1)", ctx));
    CHECK(directional_derivative(w, 4, parse_expression("(x1+c)/(x3+c)", ctx)).is_zero());
    CHECK(directional_derivative(w, 4, parse_expression("(x2+c)/(x3+c)", ctx)).is_zero());

    // pinning the parameter at 0 recovers the undeformed web
    WebSpec w0 = w.with_param(3, Rat(0));
    CHECK(w0.f(1, 4) == parse_expression("x1/x3", ctx));
    CHECK(w0.f(2, 4) == parse_expression("x2/x3", ctx));
    // pinning at another value keeps the deformation
    WebSpec wc = w.with_param(3, Rat(1, 3));
    CHECK(wc.f(1, 4) == parse_expression("(x1+1/3)/(x3+1/3)", ctx));
}

TEST_CASE("gauge normalization divides by the last component") {
    auto ctx = VariableContext::standard(2);
    Poly x1 = Poly::variable(ctx, 0);
    Poly x2 = Poly::variable(ctx, 1);
    // raw column (x1*x2, x2): normalizes to (x1, 1)
    std::vector<std::vector<RationalFunction>> cols{
        {RationalFunction(x1 * x2), RationalFunction(x2)}};
    WebSpec w = WebSpec::make(2, ctx, cols);
    CHECK(w.d() == 3);
    CHECK(w.f(1, 3) == RationalFunction(x1));
    CHECK(w.f(2, 3) == RationalFunction::one(ctx));

    // a vanishing last component cannot be normalized
    std::vector<std::vector<RationalFunction>> bad1{
        {RationalFunction(x1), RationalFunction::zero(ctx)}};
    CHECK_THROWS_AS(WebSpec::make(2, ctx, bad1), DegenerateField);
    // a vanishing other component is rejected as degenerate
    std::vector<std::vector<RationalFunction>> bad2{
        {RationalFunction::zero(ctx), RationalFunction(x2)}};
    CHECK_THROWS_AS(WebSpec::make(2, ctx, bad2), DegenerateField);
}

TEST_CASE("subwebs keep the gauge and relabel") {
    WebSpec w = WebSpec::builtin_w0(3, false);
    WebSpec s = w.subweb({1, 2, 3, 4, 5});
    CHECK(s.d() == 5);
    CHECK(s.f(1, 4) == w.f(1, 4));
    CHECK(s.f(1, 5) == w.f(1, 5));
    CHECK(s.labels() == std::vector<int>{1, 2, 3, 4, 5});

    WebSpec s2 = w.subweb({1, 2, 3, 6});
    CHECK(s2.d() == 4);
    CHECK(s2.f(2, 4) == w.f(2, 6));
    CHECK(s2.labels() == std::vector<int>{1, 2, 3, 6});

    CHECK_THROWS_AS(w.subweb({1, 2, 4, 5}), BadSubset);      // drops a coordinate field
    CHECK_THROWS_AS(w.subweb({1, 2, 3}), BadSubset);         // nothing beyond coordinates
    CHECK_THROWS_AS(w.subweb({1, 2, 3, 4, 4}), BadSubset);   // duplicate
    CHECK_THROWS_AS(w.subweb({1, 2, 3, 9}), BadSubset);      // out of range
}

TEST_CASE("genericity check reports vanishing and dependence") {
    WebSpec w = WebSpec::builtin_w0(3, false);
    // generic point
    CHECK(w.genericity_check({Rat(2), Rat(3), Rat(5)}).empty());
    // a vanishing coordinate kills components of field 4
    auto bad = w.genericity_check({Rat(0), Rat(3), Rat(5)});
    CHECK(!bad.empty());
    // a singular denominator (x3 = 1) is reported rather than thrown
    auto sing = w.genericity_check({Rat(2), Rat(3), Rat(1)});
    CHECK(!sing.empty());
    bool mentions_singular = false;
    for (const auto& s : sing) mentions_singular = mentions_singular || s.find("singular") != std::string::npos;
    CHECK(mentions_singular);

    // two equal direction fields are always dependent
    auto ctx = VariableContext::standard(2);
    Poly x1 = Poly::variable(ctx, 0);
    std::vector<std::vector<RationalFunction>> cols{
        {RationalFunction(x1), RationalFunction::one(ctx)},
        {RationalFunction(x1), RationalFunction::one(ctx)}};
    WebSpec dep = WebSpec::make(2, ctx, cols);
    auto viol = dep.genericity_check({Rat(2), Rat(3)});
    REQUIRE(!viol.empty());
    bool mentions_34 = false;
    for (const auto& s : viol) mentions_34 = mentions_34 || s.find("{3,4}") != std::string::npos;
    CHECK(mentions_34);
    // and such a web has no generic point at all
    CHECK_THROWS_AS(dep.sample_point(1), SingularPoint);
}

TEST_CASE("point sampling is deterministic and respects pinning") {
    WebSpec w = WebSpec::builtin_w0(3, true);
    std::map<std::size_t, Rat> pin{{3, Rat(1, 3)}};
    auto p1 = w.sample_point(42, pin);
    auto p2 = w.sample_point(42, pin);
    CHECK(p1 == p2);
    CHECK(p1.size() == 4);
    CHECK(p1[3] == Rat(1, 3));
    CHECK(w.genericity_check(p1).empty());
    auto p3 = w.sample_point(43, pin);
    CHECK(p1 != p3);
}
