#include <doctest.h>

#include <weavecurv/connection.hpp>
#include <weavecurv/expr.hpp>

using namespace weavecurv;

namespace {

JetRatBackend jet_backend_at(const WebSpec& w, std::uint64_t seed, int budget,
                             const std::map<std::size_t, Rat>& pin = {}) {
    return JetRatBackend(w.ctx(), w.sample_point(seed, pin), budget);
}

} // namespace

TEST_CASE("initial-data slots") {
    CHECK(pivot_columns(3, 6) == std::vector<int>{1, 5, 8, 11, 15, 18, 21, 24, 27, 30});
    CHECK(pivot_columns(2, 5) == std::vector<int>{1, 5, 8, 12, 15, 18});
    CHECK(pivot_columns(2, 4) == std::vector<int>{1, 4, 6});
    CHECK(pivot_columns(3, 4) == std::vector<int>{1});
    CHECK_THROWS_AS(pivot_columns(3, 3), Error);
    CHECK_THROWS_AS(pivot_columns(1, 3), Error);
}

TEST_CASE("connection over jets: shapes and defining identities") {
    WebSpec w = WebSpec::builtin_w0(3, false);
    auto bk = jet_backend_at(w, 7, 4);
    auto cd = build_connection(w, bk);
    CHECK(cd.h0 == 3);
    CHECK(cd.ro == 10);
    CHECK(cd.N2.rows() == 30);
    CHECK(cd.N2.cols() == 10);
    CHECK(cd.n3.rows() == 30);
    CHECK(cd.n3.cols() == 10);
    REQUIRE(cd.A.size() == 3);
    for (const auto& Ak : cd.A) {
        CHECK(Ak.rows() == 10);
        CHECK(Ak.cols() == 10);
    }

    // pivot rows of the kernel basis form the identity
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j) {
            const auto& v = cd.N2(static_cast<std::size_t>(cd.pivots[i] - 1), j);
            CHECK(is_zero(v - (i == j ? bk.one() : bk.zero())));
        }

    // kernel property and full column rank
    ProlongedSystem<JetRatBackend> sys(w, bk, 3);
    CHECK(mat_is_zero(mat_mul(sys.M(2), cd.N2, bk)));
    CHECK(rank_of(cd.N2, bk) == 10);

    // prolongation identity P(3) n3 = -Q(3) N2, and its operator form
    CHECK(mat_is_zero(mat_sub(mat_mul(sys.P(3), cd.n3, bk),
                              mat_neg(mat_mul(sys.Q(3), cd.N2, bk), bk))));
    auto U = prolongation_operator(w, bk);
    CHECK(U.rows() == 30);
    CHECK(U.cols() == 30);
    CHECK(mat_is_zero(mat_sub(mat_mul(U, cd.N2, bk), cd.n3)));

    // the shift defect lies in the span of the kernel basis, with the
    // connection matrices as coefficients
    for (int k = 0; k < 3; ++k)
        CHECK(mat_is_zero(mat_sub(shift_defect(cd, k), mat_mul(cd.N2, cd.A[k], bk))));
}

TEST_CASE("curvature over jets: antisymmetry and flatness of the plain web") {
    WebSpec w = WebSpec::builtin_w0(3, false);
    for (std::uint64_t seed : {3u, 5u}) {
        auto bk = jet_backend_at(w, seed, 4);
        auto cd = build_connection(w, bk);
        auto kos = curvature_matrices(cd);
        REQUIRE(kos.size() == 3);
        CHECK(kos[0].k == 1);
        CHECK(kos[0].m == 2);
        CHECK(kos[1].k == 1);
        CHECK(kos[1].m == 3);
        CHECK(kos[2].k == 2);
        CHECK(kos[2].m == 3);
        for (const auto& cp : kos) {
            CHECK(cp.Ko.rows() == 10);
            CHECK(mat_is_zero(cp.Ko));
        }
        CHECK(mat_is_zero(mat_add(curvature_pair(cd, 0, 1), curvature_pair(cd, 1, 0))));
    }
}

TEST_CASE("curvature over jets: the deformation breaks flatness") {
    WebSpec wc = WebSpec::builtin_w0(3, true);
    const std::size_t cvar = 3;
    {
        auto bk = jet_backend_at(wc, 11, 4, {{cvar, Rat(1, 3)}});
        auto cd = build_connection(wc, bk);
        for (const auto& cp : curvature_matrices(cd)) CHECK(!mat_is_zero(cp.Ko));
    }
    {
        auto bk = jet_backend_at(wc, 11, 4, {{cvar, Rat(0)}});
        auto cd = build_connection(wc, bk);
        for (const auto& cp : curvature_matrices(cd)) CHECK(mat_is_zero(cp.Ko));
    }
}

TEST_CASE("curvature masks agree between rational and mod-p jets") {
    for (bool deformed : {false, true}) {
        WebSpec w = WebSpec::builtin_w0(3, deformed);
        std::map<std::size_t, Rat> pin;
        if (deformed) pin[3] = Rat(1, 3);
        auto pt = w.sample_point(13, pin);
        JetRatBackend rbk(w.ctx(), pt, 4);
        JetFpBackend fbk(w.ctx(), to_fp_point(pt, 2305843009213693951ULL), 4);
        auto kr = curvature_matrices(build_connection(w, rbk));
        auto kf = curvature_matrices(build_connection(w, fbk));
        REQUIRE(kr.size() == kf.size());
        for (std::size_t p = 0; p < kr.size(); ++p)
            for (std::size_t i = 0; i < kr[p].Ko.rows(); ++i)
                for (std::size_t j = 0; j < kr[p].Ko.cols(); ++j)
                    CHECK(is_zero(kr[p].Ko(i, j)) == is_zero(kf[p].Ko(i, j)));
    }
}

TEST_CASE("symbolic connection of the plain web") {
    WebSpec w = WebSpec::builtin_w0(3, false);
    SymbolicBackend bk(w.ctx());
    auto ctx = w.ctx();
    auto cd = build_connection(w, bk);

    CHECK(cd.A[0](0, 0) == parse_expression("1/x1", ctx));
    CHECK(cd.A[1](0, 0) == parse_expression("1/x2", ctx));
    CHECK(cd.A[2](0, 0).is_zero());
    // rows 5..10 of columns 1..4 vanish for every direction
    for (const auto& Ak : cd.A)
        for (std::size_t i = 4; i < 10; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(Ak(i, j).is_zero());

    // flat: every curvature pair vanishes identically
    for (const auto& cp : curvature_matrices(cd)) CHECK(mat_is_zero(cp.Ko));

    // defining identity, symbolically, for one direction
    CHECK(mat_is_zero(mat_sub(shift_defect(cd, 0), mat_mul(cd.N2, cd.A[0], bk))));
}
