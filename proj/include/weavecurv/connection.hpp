#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "factored.hpp"
#include "parallel.hpp"
#include "prolong.hpp"

namespace weavecurv {

// The solution space of the level-(h0-1) system carries a canonical
// connection once a basis of "initial data" slots is fixed.  The slots
// are one derivative coordinate per derivation index s of order
// <= h0-1, namely (Y_{|s|+1})'_s; in packed column numbers that is
// h0*s + |s| + 1.
inline std::vector<int> pivot_columns(int n, int d) {
    const int h0 = d - n;
    if (n < 2 || h0 < 1) throw Error("need d > n >= 2");
    IndexTable T(n, h0 - 1);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(T.size()));
    for (int s = 0; s < T.size(); ++s) out.push_back(h0 * s + T.order_of(s) + 1);
    return out;
}

// Kernel basis, prolongation operator and connection matrices for one
// web over one backend.
template <class BK>
struct ConnectionData {
    using S = typename BK::Scalar;

    WebSpec web;
    BK backend;
    int h0 = 0;
    int ro = 0;
    std::vector<int> pivots;
    Mat<S> N2;              // kernel basis of M(h0-1), pivot rows = identity
    Mat<S> n3;              // order-h0 derivative coordinates of the kernel
                            // basis, defined by P(h0) n3 = -Q(h0) N2
    std::vector<Mat<S>> A;  // connection matrices, one per coordinate direction

    ConnectionData(WebSpec w, BK bk)
        : web(std::move(w)), backend(std::move(bk)), N2(0, 0, backend.zero()),
          n3(0, 0, backend.zero()) {}
};

// Builds the connection: kernel basis N2 of the order-(h0-1) system
// with the canonical pivots, its prolongation n3 to order h0, and the
// connection matrices A(k) defined by
//     (d/dx_k) N2 - shift_k(N2) = N2 * A(k).
// The pivot rows of N2 are constant (identity), so on those rows the
// derivative term vanishes and A(k) is read off as the negated pivot
// rows of the shifted basis -- no differentiation is needed.
template <class BK>
ConnectionData<BK> build_connection(const WebSpec& web, const BK& backend) {
    using S = typename BK::Scalar;
    const int n = web.n(), d = web.d(), h0 = d - n;
    ConnectionData<BK> cd(web, backend);
    cd.h0 = h0;
    cd.pivots = pivot_columns(n, d);
    cd.ro = static_cast<int>(cd.pivots.size());

    ProlongedSystem<BK> sys(web, backend, h0);
    const IndexTable& T = sys.table();
    const int low = static_cast<int>(upto_dim(n, h0 - 1));  // indices of order <= h0-1

    cd.N2 = kernel_with_pivots(sys.M(h0 - 1), cd.pivots, backend);

    // n3 carries the order-h0 slots of each kernel element.  Solving
    // P(h0) n3 = -Q(h0) N2 directly keeps the system at ro right-hand
    // sides; forming U = -P(h0)^{-1} Q(h0) first and multiplying would
    // triple the solve and add a product of much larger entries.
    try {
        cd.n3 = solve_square(sys.P(h0), mat_neg(mat_mul(sys.Q(h0), cd.N2, backend), backend),
                             backend);
    } catch (const SingularMatrix&) {
        throw RankDeficient("top-level prolongation block is singular; "
                            "the web or the point is not in general position");
    }

    cd.A.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        // pivot i sits at slot (v_i, s_i) with v_i = |s_i| + 1; row i of
        // A(k) is minus row (v_i, s_i + 1_k) of the prolonged basis
        // [N2; n3]
        Mat<S> Ak(static_cast<std::size_t>(cd.ro), static_cast<std::size_t>(cd.ro),
                  backend.zero());
        for (int s = 0; s < low; ++s) {
            const int v = T.order_of(s) + 1;
            const int s2 = T.ad(k, s);
            const Mat<S>& src_mat = s2 < low ? cd.N2 : cd.n3;
            const std::size_t src =
                static_cast<std::size_t>(v - 1 + h0 * (s2 < low ? s2 : s2 - low));
            for (int j = 0; j < cd.ro; ++j)
                Ak(static_cast<std::size_t>(s), static_cast<std::size_t>(j)) =
                    -src_mat(src, static_cast<std::size_t>(j));
        }
        cd.A.push_back(std::move(Ak));
    }
    return cd;
}

// The shifted basis N3(k): row (v, s) equals row (v, s + 1_k) of the
// prolonged basis [N2; n3].
template <class BK>
Mat<typename BK::Scalar> shifted_basis(const ConnectionData<BK>& cd, int k) {
    using S = typename BK::Scalar;
    const int n = cd.web.n(), h0 = cd.h0;
    const IndexTable T(n, h0);
    const int low = static_cast<int>(upto_dim(n, h0 - 1));
    Mat<S> N3(cd.N2.rows(), cd.N2.cols(), cd.backend.zero());
    for (int s = 0; s < low; ++s) {
        const int s2 = T.ad(k, s);
        const Mat<S>& src_mat = s2 < low ? cd.N2 : cd.n3;
        for (int v = 1; v <= h0; ++v) {
            const std::size_t dst = static_cast<std::size_t>(v - 1 + h0 * s);
            const std::size_t src =
                static_cast<std::size_t>(v - 1 + h0 * (s2 < low ? s2 : s2 - low));
            for (std::size_t j = 0; j < N3.cols(); ++j) N3(dst, j) = src_mat(src, j);
        }
    }
    return N3;
}

// The shift defect (d/dx_k) N2 - N3(k).  Its rows lie in the span of
// the kernel basis: defect = N2 * A(k), which is the defining identity
// of the connection and a useful consistency check.
template <class BK>
Mat<typename BK::Scalar> shift_defect(const ConnectionData<BK>& cd, int k) {
    return mat_sub(entrywise_partial(static_cast<std::size_t>(k), cd.N2, cd.backend),
                   shifted_basis(cd, k));
}

// The prolongation operator U = -P(h0)^{-1} Q(h0) taking the slots of
// order <= h0-1 to the order-h0 slots; the kernel satisfies
// n3 = U * N2.  The connection build never forms U (it solves for n3
// directly), so this is exposed separately for inspection.
template <class BK>
Mat<typename BK::Scalar> prolongation_operator(const WebSpec& web, const BK& backend) {
    const int h0 = web.d() - web.n();
    if (h0 < 1) throw Error("need d > n");
    ProlongedSystem<BK> sys(web, backend, h0);
    try {
        return solve_square(sys.P(h0), mat_neg(sys.Q(h0), backend), backend);
    } catch (const SingularMatrix&) {
        throw RankDeficient("top-level prolongation block is singular; "
                            "the web or the point is not in general position");
    }
}

// K(k,m) = d_k A(m) - d_m A(k) + A(k) A(m) - A(m) A(k) over any
// backend, for zero-based directions k, m.
template <class S, class BK>
Mat<S> curvature_formula(const Mat<S>& Ak, const Mat<S>& Am, int k, int m, const BK& backend) {
    Mat<S> r = mat_sub(entrywise_partial(static_cast<std::size_t>(k), Am, backend),
                       entrywise_partial(static_cast<std::size_t>(m), Ak, backend));
    r = mat_add(r, mat_mul(Ak, Am, backend));
    r = mat_sub(r, mat_mul(Am, Ak, backend));
    return r;
}

// Curvature of the connection for one ordered pair of directions, k < m
// zero-based here.  Symbolic entries route through the factored-
// denominator arithmetic: every denominator in sight is a product of a
// few web-specific factors, so refining those into a coprime basis
// replaces all gcd work in the products and sums with exponent
// bookkeeping.
template <class BK>
Mat<typename BK::Scalar> curvature_pair(const ConnectionData<BK>& cd, int k, int m) {
    const Mat<typename BK::Scalar>& Ak = cd.A[static_cast<std::size_t>(k)];
    const Mat<typename BK::Scalar>& Am = cd.A[static_cast<std::size_t>(m)];
    if constexpr (std::is_same_v<typename BK::Scalar, RationalFunction>) {
        FactorBasis basis(cd.web.ctx());
        for (const auto* M : {&Ak, &Am})
            for (std::size_t i = 0; i < M->rows(); ++i)
                for (std::size_t j = 0; j < M->cols(); ++j)
                    if (!is_zero((*M)(i, j))) basis.insert((*M)(i, j).den());
        const FactoredBackend fbk(&basis);
        Mat<FactoredRF> r = curvature_formula(fac_from(basis, Ak), fac_from(basis, Am), k, m, fbk);
        return fac_to(r, cd.web.ctx());
    } else {
        return curvature_formula(Ak, Am, k, m, cd.backend);
    }
}

// All curvature matrices in the fixed pair order (1,2), (1,3), ...,
// i.e. k < m lexicographically (1-based labels in the result).
template <class BK>
struct CurvaturePair {
    int k = 0, m = 0;  // 1-based coordinate labels
    Mat<typename BK::Scalar> Ko;
};

template <class BK>
std::vector<CurvaturePair<BK>> curvature_matrices(const ConnectionData<BK>& cd) {
    const int n = cd.web.n();
    std::vector<std::pair<int, int>> pairs;
    for (int k = 1; k <= n; ++k)
        for (int m = k + 1; m <= n; ++m) pairs.emplace_back(k, m);
    std::vector<CurvaturePair<BK>> out(
        pairs.size(), CurvaturePair<BK>{0, 0, Mat<typename BK::Scalar>(0, 0, cd.backend.zero())});
    parallel_for(pairs.size(), [&](std::size_t idx) {
        auto [k, m] = pairs[idx];
        out[idx].k = k;
        out[idx].m = m;
        out[idx].Ko = curvature_pair(cd, k - 1, m - 1);
    });
    return out;
}

} // namespace weavecurv
