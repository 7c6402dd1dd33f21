#include <memory>
#include <vector>

#include "doctest.h"
#include "weavecurv/expr.hpp"
#include "weavecurv/flat_section.hpp"

using namespace weavecurv;

namespace {

const std::vector<Rat> kInit{Rat(1), Rat(-2), Rat(1, 2), Rat(3),  Rat(-1, 3),
                             Rat(2), Rat(5),  Rat(-1),   Rat(1, 4), Rat(-3, 2)};

} // namespace

TEST_CASE("series from initial data satisfies every structure equation") {
    const WebSpec w = WebSpec::builtin_w0(3, false);
    const std::vector<Rat> p{Rat(2), Rat(3), Rat(5)};
    const FlatSectionSeries fs = formal_flat_section(w, p, kInit, 6);

    CHECK(fs.n == 3);
    CHECK(fs.d == 6);
    CHECK(fs.h0 == 3);
    CHECK(fs.order == 6);
    CHECK(fs.slots.size() == upto_dim(3, 6));
    REQUIRE(fs.deriv.size() == 3);
    REQUIRE(fs.taylor.size() == 3);

    // the pivot coordinates reproduce the initial data exactly
    const std::vector<int> pivots = pivot_columns(3, 6);
    for (std::size_t j = 0; j < pivots.size(); ++j) {
        const int pc = pivots[j] - 1;
        const int v = pc % 3 + 1;
        const int s = pc / 3;
        CHECK(fs.deriv[static_cast<std::size_t>(v - 1)][static_cast<std::size_t>(s)] == kInit[j]);
    }

    // Taylor coefficients are the derivatives divided by the index factorial:
    // slot of the pure second derivative in x1 has factorial 2
    const IndexTable table(3, 6);
    bool checked = false;
    for (std::size_t t = 0; t < fs.slots.size(); ++t) {
        if (fs.slots[t] != Expo{2, 0, 0}) continue;
        checked = true;
        for (int v = 0; v < 3; ++v)
            CHECK(fs.deriv[static_cast<std::size_t>(v)][t] ==
                  fs.taylor[static_cast<std::size_t>(v)][t] * Rat(2));
    }
    CHECK(checked);

    // substituting the truncated series into all d structure equations
    // leaves residues that vanish through order N-1
    const JetBackend<Rat> jbk(w.ctx(), p, 6);
    CHECK(check_abelian_relation(w, jbk, fs.jets()).empty());
}

TEST_CASE("truncation at the initial order is the kernel combination") {
    const WebSpec w = WebSpec::builtin_w0(3, false);
    const std::vector<Rat> p{Rat(2), Rat(3), Rat(5)};
    const FlatSectionSeries lowfs = formal_flat_section(w, p, kInit, 2);
    CHECK(lowfs.slots.size() == upto_dim(3, 2));

    // growing the same data further does not change the low-order part
    const FlatSectionSeries fullfs = formal_flat_section(w, p, kInit, 5);
    for (std::size_t v = 0; v < 3; ++v)
        for (std::size_t t = 0; t < lowfs.slots.size(); ++t)
            CHECK(lowfs.deriv[v][t] == fullfs.deriv[v][t]);
}

TEST_CASE("closed-form relation of the four-field sub-web is reproduced") {
    const WebSpec w6 = WebSpec::builtin_w0(3, false);
    const WebSpec w = w6.subweb({1, 2, 3, 4});
    const std::vector<Rat> p{Rat(2), Rat(3), Rat(5)};
    // 1/(x1*x2) solves the system; its value at p seeds the series
    const FlatSectionSeries fs = formal_flat_section(w, p, {Rat(1, 6)}, 4);
    const auto base = std::make_shared<const std::vector<Rat>>(p);
    const Jet<Rat> expect = lift_to_jet<Rat>(parse_expression("1/(x1*x2)", w.ctx()), base, 4);
    CHECK(fs.jet(1) == expect);

    // scaling the seed scales the whole series
    const FlatSectionSeries fs5 = formal_flat_section(w, p, {Rat(5, 6)}, 4);
    const Jet<Rat> expect5 =
        lift_to_jet<Rat>(parse_expression("5/(x1*x2)", w.ctx()), base, 4);
    CHECK(fs5.jet(1) == expect5);
}

TEST_CASE("parallel web: constant data stays constant") {
    const CtxPtr ctx = VariableContext::standard(2);
    std::vector<std::vector<RationalFunction>> cols(1);
    cols[0].push_back(parse_expression("2", ctx));
    cols[0].push_back(parse_expression("1", ctx));
    const WebSpec w = WebSpec::make(2, ctx, std::move(cols));
    const std::vector<Rat> p{Rat(1), Rat(2)};
    const FlatSectionSeries fs = formal_flat_section(w, p, {Rat(7)}, 4);
    for (std::size_t t = 0; t < fs.slots.size(); ++t)
        CHECK(fs.deriv[0][t] == (t == 0 ? Rat(7) : Rat(0)));
}

TEST_CASE("obstructed growth reports the failing equation") {
    const WebSpec wc = WebSpec::builtin_w0(3, true).with_param(3, Rat(1, 3));
    const std::vector<Rat> p{Rat(2), Rat(3), Rat(5), Rat(1, 3)};

    // order 3 still integrates: the first leftover equations appear at order 4
    const FlatSectionSeries ok = formal_flat_section(wc, p, kInit, 3);
    CHECK(ok.slots.size() == upto_dim(3, 3));

    try {
        formal_flat_section(wc, p, kInit, 4);
        FAIL("expected an inconsistent prolongation");
    } catch (const InconsistentProlongation& e) {
        CHECK(e.equation_u >= 1);
        CHECK(e.equation_u <= 5);
        // the violated equation sits in the order-3 row band
        CHECK(e.equation_t >= static_cast<int>(upto_dim(3, 2)));
        CHECK(e.equation_t < static_cast<int>(upto_dim(3, 3)));
    }
}

TEST_CASE("flat-section input validation") {
    const WebSpec w = WebSpec::builtin_w0(3, false);
    const std::vector<Rat> p{Rat(2), Rat(3), Rat(5)};
    CHECK_THROWS_AS(formal_flat_section(w, p, {Rat(1)}, 4), Error);
    CHECK_THROWS_AS(formal_flat_section(w, p, kInit, 1), Error);
    CHECK_THROWS_AS(formal_flat_section(w, {Rat(2), Rat(3)}, kInit, 4), Error);
    const std::vector<Rat> singular{Rat(0), Rat(0), Rat(0)};
    CHECK_THROWS_AS(formal_flat_section(w, singular, kInit, 4), SingularPoint);
}
