#include <doctest.h>

#include <weavecurv/multiindex.hpp>

using namespace weavecurv;

namespace {

std::vector<std::uint32_t> e3(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    return {a, b, c};
}

} // namespace

TEST_CASE("dimension counts") {
    // c(n,h) = binomial(n-1+h, h)
    CHECK(homog_dim(3, 0) == 1);
    CHECK(homog_dim(3, 1) == 3);
    CHECK(homog_dim(3, 2) == 6);
    CHECK(homog_dim(3, 3) == 10);
    CHECK(homog_dim(2, 5) == 6);
    CHECK(homog_dim(1, 7) == 1);
    CHECK(upto_dim(3, 2) == 10);
    CHECK(upto_dim(3, 3) == 20);
    CHECK(upto_dim(2, 2) == 6);

    // Pascal recurrence and the telescoping sum, over a broad range
    for (int n = 1; n <= 8; ++n) {
        for (int h = 1; h <= 8; ++h) {
            CHECK(homog_dim(n, h) == homog_dim(n - 1, h) + homog_dim(n, h - 1));
            std::uint64_t acc = 0;
            for (int j = 0; j <= h; ++j) acc += homog_dim(n, j);
            CHECK(acc == upto_dim(n, h));
        }
    }
}

TEST_CASE("column-minus-row surplus identity") {
    // With d = n + h0: h0*c(n,h) - (d-1)*c(n,h-1) = (h0-h)*c(n-1,h).
    for (int n = 2; n <= 6; ++n) {
        for (int h0 = 1; h0 <= 6; ++h0) {
            const int d = n + h0;
            for (int h = 0; h <= 8; ++h) {
                long long lhs = static_cast<long long>(h0) * static_cast<long long>(homog_dim(n, h)) -
                                static_cast<long long>(d - 1) *
                                    static_cast<long long>(h >= 1 ? homog_dim(n, h - 1) : 0);
                long long rhs = static_cast<long long>(h0 - h) *
                                static_cast<long long>(homog_dim(n - 1, h));
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("index numbering matches the reverse-lexicographic grading") {
    IndexTable T(3, 3);
    CHECK(T.size() == 20);

    // order 0 and the unit indices
    CHECK(T.index(0) == e3(0, 0, 0));
    CHECK(T.index(1) == e3(1, 0, 0));
    CHECK(T.index(2) == e3(0, 1, 0));
    CHECK(T.index(3) == e3(0, 0, 1));

    // order 2 block (positions 4..9)
    CHECK(T.index(4) == e3(2, 0, 0));
    CHECK(T.index(5) == e3(1, 1, 0));
    CHECK(T.index(6) == e3(0, 2, 0));
    CHECK(T.index(7) == e3(1, 0, 1));
    CHECK(T.index(8) == e3(0, 1, 1));
    CHECK(T.index(9) == e3(0, 0, 2));

    // order 3 block (positions 10..19)
    CHECK(T.index(10) == e3(3, 0, 0));
    CHECK(T.index(11) == e3(2, 1, 0));
    CHECK(T.index(12) == e3(1, 2, 0));
    CHECK(T.index(13) == e3(0, 3, 0));
    CHECK(T.index(14) == e3(2, 0, 1));
    CHECK(T.index(15) == e3(1, 1, 1));
    CHECK(T.index(16) == e3(0, 2, 1));
    CHECK(T.index(17) == e3(1, 0, 2));
    CHECK(T.index(18) == e3(0, 1, 2));
    CHECK(T.index(19) == e3(0, 0, 3));

    // position lookup inverts the numbering
    for (int t = 0; t < T.size(); ++t) CHECK(T.position(T.index(t)) == t);
}

TEST_CASE("increment and decrement maps") {
    IndexTable T(3, 3);
    // ad_k of the empty index is the unit index 1_k
    for (int k = 0; k < 3; ++k) CHECK(T.ad(k, 0) == k + 1);
    // dec undoes ad
    for (int t = 0; t < T.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            if (T.order_of(t) < 3) {
                int up = T.ad(k, t);
                CHECK(T.order_of(up) == T.order_of(t) + 1);
                REQUIRE(T.dec(k, up).has_value());
                CHECK(*T.dec(k, up) == t);
            } else {
                CHECK_THROWS_AS(T.ad(k, t), OrderOverflow);
            }
        }
    }
    // dec is undefined when the slot is empty
    CHECK(!T.dec(0, T.position(e3(0, 1, 1))).has_value());
    CHECK(T.dec(1, T.position(e3(0, 1, 1))).has_value());

    // first positive slot follows the written index
    CHECK(T.first_positive_slot(T.position(e3(0, 1, 1))) == 1);
    CHECK(T.first_positive_slot(T.position(e3(0, 0, 2))) == 2);
    CHECK(T.first_positive_slot(T.position(e3(1, 1, 1))) == 0);
}

TEST_CASE("index table sizes by grade") {
    for (int n = 2; n <= 5; ++n) {
        for (int h = 0; h <= 4; ++h) {
            IndexTable T(n, h);
            CHECK(T.size() == static_cast<int>(upto_dim(n, h)));
            // positions within each grade are contiguous
            int prev_order = 0;
            for (int t = 0; t < T.size(); ++t) {
                CHECK(T.order_of(t) >= prev_order);
                prev_order = T.order_of(t);
            }
        }
    }
}

TEST_CASE("row and column packing") {
    RowColMap m{3, 6};
    CHECK(m.h0() == 3);
    // rows pack equation label u (1..d-1) with derivation index t
    for (int t = 0; t < 10; ++t) {
        for (int u = 1; u <= 5; ++u) {
            int i = m.row(u, t);
            auto [uu, tt] = m.row_decode(i);
            CHECK(uu == u);
            CHECK(tt == t);
        }
    }
    CHECK(m.row(1, 0) == 1);
    CHECK(m.row(5, 0) == 5);
    CHECK(m.row(1, 1) == 6);
    // columns pack unknown label v (1..h0) with derivation index s
    for (int s = 0; s < 10; ++s) {
        for (int v = 1; v <= 3; ++v) {
            int j = m.col(v, s);
            auto [vv, ss] = m.col_decode(j);
            CHECK(vv == v);
            CHECK(ss == s);
        }
    }
    CHECK(m.col(1, 0) == 1);
    CHECK(m.col(3, 9) == 30);
}
