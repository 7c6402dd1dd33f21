#include <doctest.h>

#include <random>

#include <weavecurv/expr.hpp>

using namespace weavecurv;

namespace {

CtxPtr ctx3c() { return VariableContext::standard(3, {"c"}); }

} // namespace

TEST_CASE("parser: literals, variables, precedence") {
    auto ctx = ctx3c();
    Poly x1 = Poly::variable(ctx, 0);
    Poly x2 = Poly::variable(ctx, 1);
    Poly x3 = Poly::variable(ctx, 2);
    Poly one = Poly::constant(ctx, mpq_class(1));

    CHECK(parse_expression("42", ctx) == RationalFunction(Poly::constant(ctx, mpq_class(42))));
    CHECK(parse_expression("x2", ctx) == RationalFunction(x2));
    CHECK(parse_expression("3/4", ctx) ==
          RationalFunction(Poly::constant(ctx, mpq_class(3)), Poly::constant(ctx, mpq_class(4))));

    // product binds tighter than sum
    CHECK(parse_expression("x1 + x2*x3", ctx) == RationalFunction(x1 + x2 * x3));
    // power binds tighter than unary minus
    CHECK(parse_expression("-x1^2", ctx) == RationalFunction(-(x1 * x1)));
    CHECK(parse_expression("(-x1)^2", ctx) == RationalFunction(x1 * x1));
    // left associativity of division
    CHECK(parse_expression("8/2/2", ctx) == RationalFunction(Poly::constant(ctx, mpq_class(2))));
    CHECK(parse_expression("x1/x2/x3", ctx) == RationalFunction(x1, x2 * x3));
    // repeated unary minus
    CHECK(parse_expression("--x1", ctx) == RationalFunction(x1));
    // parentheses
    CHECK(parse_expression("(x1+x2)^2", ctx) == RationalFunction((x1 + x2) * (x1 + x2)));
    // mixed with parameter
    CHECK(parse_expression("(x1+c)/(x3+c)", ctx) ==
          RationalFunction(x1 + Poly::variable(ctx, 3), x3 + Poly::variable(ctx, 3)));
    // whitespace is free
    CHECK(parse_expression("  x1 \t+\n x2 ", ctx) == RationalFunction(x1 + x2));
    // subtraction chains associate left
    CHECK(parse_expression("x1 - x2 - x3", ctx) == RationalFunction(x1 - x2 - x3));
    CHECK(parse_expression("x1*(x1-1)/(x3*(x3-1))", ctx) ==
          RationalFunction(x1 * (x1 - one), x3 * (x3 - one)));
}

TEST_CASE("parser: error reporting") {
    auto ctx = ctx3c();
    CHECK_THROWS_AS(parse_expression("x1 +", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expression("(x1", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expression("x1 x2", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expression("x1^x2", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expression("1.5", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expression("", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expression("y7 + 1", ctx), UnknownIdentifier);
    CHECK_THROWS_AS(parse_expression("1/0", ctx), ZeroDenominator);
    CHECK_THROWS_AS(parse_expression("1/(x1 - x1)", ctx), ZeroDenominator);

    try {
        parse_expression("x1 + (x2 * ", ctx);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 11);
    }
    try {
        parse_expression("x1 + nope", ctx);
        FAIL("expected UnknownIdentifier");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name == "nope");
    }
}

TEST_CASE("rendering round-trips through the parser") {
    auto ctx = ctx3c();
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> coeff(-12, 12);
    std::uniform_int_distribution<int> expo(0, 3);
    auto rand_poly = [&](int terms) {
        Poly p(ctx);
        for (int i = 0; i < terms; ++i) {
            Expo e(ctx->num_vars());
            for (auto& v : e) v = static_cast<std::uint32_t>(expo(rng));
            p.add_term(e, mpq_class(coeff(rng)));
        }
        return p;
    };
    for (int trial = 0; trial < 25; ++trial) {
        Poly num = rand_poly(4);
        Poly den = rand_poly(3);
        if (den.is_zero()) den = Poly::constant(ctx, mpq_class(1));
        RationalFunction f(num, den);
        std::string text = rf_to_string(f);
        CHECK(parse_expression(text, ctx) == f);
    }
    // fixed spot checks
    CHECK(rf_to_string(RationalFunction::zero(ctx)) == "0");
    Poly x1 = Poly::variable(ctx, 0);
    CHECK(rf_to_string(RationalFunction(x1)) == "x1");
    CHECK(parse_expression(rf_to_string(parse_expression("(x1-1)/(x3-1)", ctx)), ctx) ==
          parse_expression("(x1-1)/(x3-1)", ctx));
}
