#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "multiindex.hpp"
#include "scalar.hpp"
#include "web.hpp"

namespace weavecurv {

// One linear equation of the prolonged system.  The unknowns are the
// derivative coordinates (Y_v)'_s indexed by pairs (v, s): v in 1..h0
// names a principal unknown and s is a position in the derivation index
// table.  Coefficients are stored sparsely.
template <class S>
struct LinearEq {
    int u = 0;  // equation label in 1..d-1
    int t = 0;  // derivation index position
    std::map<std::pair<int, int>, S> coeffs;

    void add(int v, int s, const S& c) {
        if (is_zero(c)) return;
        auto key = std::make_pair(v, s);
        auto [it, inserted] = coeffs.emplace(key, c);
        if (!inserted) {
            it->second = it->second + c;
            if (is_zero(it->second)) coeffs.erase(it);
        }
    }
};

// The order-zero equation attached to one field.  Labels lam = 1..n give
// the coordinate-field equations, lam = n+1..d the divergence-form
// equations of the remaining fields; the system keeps lam = 1..d-1 and
// the last one is a consequence of the others.
template <class BK>
LinearEq<typename BK::Scalar> base_equation_for_field(const WebSpec& web, const BK& backend,
                                                      int lam) {
    using S = typename BK::Scalar;
    const int n = web.n(), d = web.d();
    if (lam < 1 || lam > d) throw Error("field label out of range");
    LinearEq<S> eq;
    eq.u = lam;
    eq.t = 0;
    if (lam <= n) {
        const int i = lam;
        for (int a = n + 1; a <= d; ++a) {
            const int v = a - n;
            const RationalFunction& fia = web.f(i, a);
            eq.add(v, i, backend.lift(fia));
            RationalFunction dfia = fia.partial(static_cast<std::size_t>(i - 1));
            if (!dfia.is_zero()) eq.add(v, 0, backend.lift(dfia));
        }
    } else {
        const int a = lam;
        const int v = a - n;
        for (int i = 1; i <= n; ++i) {
            const RationalFunction& fia = web.f(i, a);
            eq.add(v, i, backend.lift(fia));
            RationalFunction dfia = fia.partial(static_cast<std::size_t>(i - 1));
            if (!dfia.is_zero()) eq.add(v, 0, backend.lift(dfia));
        }
    }
    return eq;
}

// Formal derivative of an equation in coordinate direction k (0-based):
// each coefficient c at slot (v, s) contributes c at (v, s + 1_k) and
// its derivative at (v, s).
template <class S, class BK>
LinearEq<S> differentiate_eq(const LinearEq<S>& eq, int k, const IndexTable& table,
                             const BK& backend) {
    LinearEq<S> out;
    out.u = eq.u;
    out.t = table.ad(k, eq.t);
    for (const auto& [key, c] : eq.coeffs) {
        const auto& [v, s] = key;
        out.add(v, table.ad(k, s), c);
        S dc = backend.partial(static_cast<std::size_t>(k), c);
        if (!is_zero(dc)) out.add(v, s, dc);
    }
    for (auto& [key, c] : out.coeffs) c = backend.normalize(c);
    return out;
}

// All prolonged equations up to a given level h: equations (u, t) with
// |t| <= h-1, each obtained from the base equations along a canonical
// differentiation path (always increment the first positive slot).
template <class BK>
class ProlongedSystem {
public:
    using S = typename BK::Scalar;

    ProlongedSystem(WebSpec web, BK backend, int level)
        : web_(std::move(web)),
          backend_(std::move(backend)),
          level_(level),
          table_(web_.n(), level),
          map_{web_.n(), web_.d()} {
        if (level < 1) throw Error("prolongation level must be positive");
        const int n = web_.n(), d = web_.d();
        const int rows_t = static_cast<int>(upto_dim(n, level - 1));
        eqs_.reserve(static_cast<std::size_t>(rows_t) * static_cast<std::size_t>(d - 1));
        for (int u = 1; u <= d - 1; ++u)
            eqs_.push_back(base_equation_for_field(web_, backend_, u));
        for (int t = 1; t < rows_t; ++t) {
            const int k = table_.first_positive_slot(t);
            const int src = *table_.dec(k, t);
            for (int u = 1; u <= d - 1; ++u)
                eqs_.push_back(differentiate_eq(eq(u, src), k, table_, backend_));
        }
    }

    const WebSpec& web() const { return web_; }
    const BK& backend() const { return backend_; }
    int level() const { return level_; }
    const IndexTable& table() const { return table_; }
    const RowColMap& index_map() const { return map_; }

    const LinearEq<S>& eq(int u, int t) const {
        const int d = web_.d();
        return eqs_.at(static_cast<std::size_t>(t) * static_cast<std::size_t>(d - 1) +
                       static_cast<std::size_t>(u - 1));
    }

    // Full system matrix of level h: rows (u, t) with |t| <= h-1,
    // columns (v, s) with |s| <= h.  M(0) has no rows.
    Mat<S> M(int h) const {
        check_level(h, 0);
        const int n = web_.n(), d = web_.d(), h0 = d - n;
        const std::size_t rows = static_cast<std::size_t>(d - 1) * upto_dim(n, h - 1);
        const std::size_t cols = static_cast<std::size_t>(h0) * upto_dim(n, h);
        Mat<S> m(rows, cols, backend_.zero());
        const int tmax = static_cast<int>(upto_dim(n, h - 1));
        for (int t = 0; t < tmax; ++t) {
            for (int u = 1; u <= d - 1; ++u) {
                for (const auto& [key, c] : eq(u, t).coeffs) {
                    const auto& [v, s] = key;
                    m(static_cast<std::size_t>(map_.row(u, t) - 1),
                      static_cast<std::size_t>(map_.col(v, s) - 1)) = c;
                }
            }
        }
        return m;
    }

    // Rows of exact level h-1, columns of exact level h.
    Mat<S> P(int h) const {
        check_level(h, 1);
        const int n = web_.n(), d = web_.d(), h0 = d - n;
        const int t_lo = static_cast<int>(upto_dim(n, h - 2));
        const int t_hi = static_cast<int>(upto_dim(n, h - 1));
        const int s_lo = static_cast<int>(upto_dim(n, h - 1));
        const int s_hi = static_cast<int>(upto_dim(n, h));
        Mat<S> m(static_cast<std::size_t>(d - 1) * static_cast<std::size_t>(t_hi - t_lo),
                 static_cast<std::size_t>(h0) * static_cast<std::size_t>(s_hi - s_lo),
                 backend_.zero());
        for (int t = t_lo; t < t_hi; ++t) {
            for (int u = 1; u <= d - 1; ++u) {
                for (const auto& [key, c] : eq(u, t).coeffs) {
                    const auto& [v, s] = key;
                    if (s < s_lo) continue;
                    m(static_cast<std::size_t>(map_.row(u, t - t_lo) - 1),
                      static_cast<std::size_t>(map_.col(v, s - s_lo) - 1)) = c;
                }
            }
        }
        return m;
    }

    // Rows of exact level h-1, columns of level <= h-1.
    Mat<S> Q(int h) const {
        check_level(h, 1);
        const int n = web_.n(), d = web_.d(), h0 = d - n;
        const int t_lo = static_cast<int>(upto_dim(n, h - 2));
        const int t_hi = static_cast<int>(upto_dim(n, h - 1));
        const int s_hi = static_cast<int>(upto_dim(n, h - 1));
        Mat<S> m(static_cast<std::size_t>(d - 1) * static_cast<std::size_t>(t_hi - t_lo),
                 static_cast<std::size_t>(h0) * static_cast<std::size_t>(s_hi),
                 backend_.zero());
        for (int t = t_lo; t < t_hi; ++t) {
            for (int u = 1; u <= d - 1; ++u) {
                for (const auto& [key, c] : eq(u, t).coeffs) {
                    const auto& [v, s] = key;
                    if (s >= s_hi) continue;
                    m(static_cast<std::size_t>(map_.row(u, t - t_lo) - 1),
                      static_cast<std::size_t>(map_.col(v, s) - 1)) = c;
                }
            }
        }
        return m;
    }

private:
    void check_level(int h, int lo) const {
        if (h < lo || h > level_) throw Error("level out of range for this system");
    }

    WebSpec web_;
    BK backend_;
    int level_;
    IndexTable table_;
    RowColMap map_;
    std::vector<LinearEq<S>> eqs_;
};

// Dimension of the solution space R_h of the level-h system for a web
// of maximal rank, and the rank bound (the dimension at h = h0-1).
struct RankBoundTable {
    int n = 0, d = 0, h0 = 0;
    std::vector<std::pair<int, std::uint64_t>> level_dims;  // (h, dim R_h)
    std::uint64_t bound = 0;
};

inline RankBoundTable rank_bound(int n, int d) {
    if (n < 2 || d <= n) throw Error("need d > n >= 2");
    RankBoundTable out;
    out.n = n;
    out.d = d;
    out.h0 = d - n;
    std::uint64_t acc = 0;
    for (int h = 0; h < out.h0; ++h) {
        acc += static_cast<std::uint64_t>(out.h0 - h) * homog_dim(n - 1, h);
        out.level_dims.emplace_back(h, acc);
    }
    out.bound = acc;
    return out;
}

// Verifies that P_h has the rank a position-generic web attains:
// full row rank for h <= h0, full column rank for h >= h0.
struct RankCertificate {
    int h = 0;
    std::size_t rows = 0, cols = 0;
    int expected = 0;
    int actual = 0;
    bool ok() const { return expected == actual; }
};

template <class BK>
RankCertificate rank_certify(const WebSpec& web, const BK& backend, int h) {
    ProlongedSystem<BK> sys(web, backend, h);
    Mat<typename BK::Scalar> p = sys.P(h);
    RankCertificate cert;
    cert.h = h;
    cert.rows = p.rows();
    cert.cols = p.cols();
    cert.expected = static_cast<int>(std::min(p.rows(), p.cols()));
    cert.actual = rank_of(p, backend);
    return cert;
}

// Residues of the d structure equations for candidate principal
// functions Y_1..Y_h0; a genuine abelian relation makes all of them
// vanish.  Returns the labels of violated equations.
template <class BK>
std::vector<std::string> check_abelian_relation(const WebSpec& web, const BK& backend,
                                                const std::vector<typename BK::Scalar>& Y) {
    using S = typename BK::Scalar;
    const int n = web.n(), d = web.d(), h0 = d - n;
    if (Y.size() != static_cast<std::size_t>(h0)) throw Error("expected h0 principal functions");
    std::vector<std::string> violated;
    for (int lam = 1; lam <= d; ++lam) {
        S acc = backend.zero();
        if (lam <= n) {
            const int i = lam;
            for (int a = n + 1; a <= d; ++a) {
                S prod = backend.lift(web.f(i, a)) * Y[static_cast<std::size_t>(a - n - 1)];
                acc = acc + backend.partial(static_cast<std::size_t>(i - 1), prod);
            }
        } else {
            const int a = lam;
            for (int i = 1; i <= n; ++i) {
                S prod = backend.lift(web.f(i, a)) * Y[static_cast<std::size_t>(a - n - 1)];
                acc = acc + backend.partial(static_cast<std::size_t>(i - 1), prod);
            }
        }
        if (!is_zero(acc)) violated.push_back("field " + std::to_string(lam));
    }
    return violated;
}

} // namespace weavecurv
