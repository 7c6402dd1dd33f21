#pragma once

// Formal flat sections: the power-series solution of the full system
// grown from prescribed initial data at a base point.  The initial data
// is one value per pivot coordinate; the remaining derivatives of order
// below h0 follow from the kernel basis at the point, and every order
// from h0 on is obtained by solving that order's block of the prolonged
// system and verifying the equations the solve did not consume.  An
// inconsistent higher-order block is exactly how a curvature obstruction
// shows up along this path, and is reported with the equation label.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "connection.hpp"
#include "errors.hpp"
#include "jet.hpp"
#include "matrix.hpp"
#include "multiindex.hpp"
#include "prolong.hpp"
#include "scalar.hpp"
#include "web.hpp"

namespace weavecurv {

// Truncated Taylor data of the principal functions Y_1..Y_h0 at a base
// point: raw derivative values and Taylor coefficients per derivation
// slot, for all slots of order up to the truncation order.
struct FlatSectionSeries {
    CtxPtr ctx;
    std::vector<Rat> point;  // values of every context variable
    int n = 0, d = 0, h0 = 0;
    int order = 0;                         // truncation order N
    std::vector<Expo> slots;               // multi-index per slot, graded
    std::vector<std::vector<Rat>> deriv;   // deriv[v-1][t] = (Y_v)'_{I_t} at the point
    std::vector<std::vector<Rat>> taylor;  // taylor[v-1][t] = deriv[v-1][t] / I_t!

    // Y_v assembled as a truncated expansion at the base point.
    Jet<Rat> jet(int v) const {
        if (v < 1 || v > h0) throw Error("principal function label out of range");
        auto base = std::make_shared<const std::vector<Rat>>(point);
        Jet<Rat> j(ctx, base, order);
        for (std::size_t t = 0; t < slots.size(); ++t) {
            const Rat& c = taylor[static_cast<std::size_t>(v - 1)][t];
            if (!is_zero(c)) j.set_coeff(slots[t], c);
        }
        return j;
    }

    std::vector<Jet<Rat>> jets() const {
        std::vector<Jet<Rat>> out;
        out.reserve(static_cast<std::size_t>(h0));
        for (int v = 1; v <= h0; ++v) out.push_back(jet(v));
        return out;
    }
};

namespace detail {

inline Mat<Rat> jet_values(const Mat<Jet<Rat>>& J) {
    Mat<Rat> V(J.rows(), J.cols(), Rat(0));
    for (std::size_t i = 0; i < J.rows(); ++i)
        for (std::size_t j = 0; j < J.cols(); ++j) V(i, j) = J(i, j).value();
    return V;
}

inline Rat expo_factorial(const Expo& e) {
    mpz_class f = 1;
    for (std::uint32_t c : e)
        for (std::uint32_t j = 2; j <= c; ++j) f *= j;
    return Rat(mpq_class(f));
}

} // namespace detail

inline FlatSectionSeries formal_flat_section(const WebSpec& w, const std::vector<Rat>& point,
                                             const std::vector<Rat>& initial, int N) {
    const int n = w.n(), d = w.d(), h0 = d - n;
    if (point.size() != w.ctx()->num_vars()) throw Error("base point has wrong arity");
    if (N < h0 - 1) throw Error("truncation order below the initial-data order");
    const std::vector<int> pivots = pivot_columns(n, d);
    if (initial.size() != pivots.size()) throw Error("expected one initial value per pivot");
    {
        const std::vector<std::string> bad = w.genericity_check(point);
        if (!bad.empty()) throw SingularPoint("base point is not generic: " + bad.front());
    }

    const int level = std::max(N, std::max(h0 - 1, 1));
    const JetBackend<Rat> jbk(w.ctx(), point, level);
    const ProlongedSystem<JetBackend<Rat>> sys(w, jbk, level);
    const IndexTable& table = sys.table();
    const RowColMap& map = sys.index_map();
    const RatValueBackend vb;

    // derivatives of order < h0 from the kernel basis at the point
    const Mat<Rat> N2p = kernel_with_pivots(detail::jet_values(sys.M(h0 - 1)), pivots, vb);
    std::vector<Rat> wvec(N2p.rows(), Rat(0));
    for (std::size_t r = 0; r < N2p.rows(); ++r) {
        Rat acc(0);
        for (std::size_t j = 0; j < N2p.cols(); ++j) {
            if (is_zero(N2p(r, j))) continue;
            acc += N2p(r, j) * initial[j];
        }
        wvec[r] = acc;
    }

    // each order h >= h0: solve that order's block against everything known
    for (int h = h0; h <= N; ++h) {
        const Mat<Rat> Ph = detail::jet_values(sys.P(h));
        const Mat<Rat> Qh = detail::jet_values(sys.Q(h));
        std::vector<Rat> rhs(Ph.rows(), Rat(0));
        for (std::size_t i = 0; i < Qh.rows(); ++i) {
            Rat acc(0);
            for (std::size_t j = 0; j < Qh.cols(); ++j) {
                if (is_zero(Qh(i, j))) continue;
                acc += Qh(i, j) * wvec[j];
            }
            rhs[i] = -acc;
        }
        std::vector<Rat> xh;
        try {
            xh = solve_overdetermined(Ph, std::move(rhs), vb);
        } catch (const InconsistentSystem& e) {
            const int t_lo = static_cast<int>(upto_dim(n, h - 2));
            const auto [u, trel] = map.row_decode(static_cast<int>(e.row) + 1);
            throw InconsistentProlongation(u, t_lo + trel);
        }
        wvec.insert(wvec.end(), std::make_move_iterator(xh.begin()),
                    std::make_move_iterator(xh.end()));
    }

    FlatSectionSeries out;
    out.ctx = w.ctx();
    out.point = point;
    out.n = n;
    out.d = d;
    out.h0 = h0;
    out.order = N;
    const std::size_t nslots = upto_dim(n, N);
    out.slots.reserve(nslots);
    for (std::size_t t = 0; t < nslots; ++t) out.slots.push_back(table.index(static_cast<int>(t)));
    out.deriv.assign(static_cast<std::size_t>(h0), std::vector<Rat>(nslots, Rat(0)));
    out.taylor.assign(static_cast<std::size_t>(h0), std::vector<Rat>(nslots, Rat(0)));
    for (int v = 1; v <= h0; ++v) {
        for (std::size_t t = 0; t < nslots; ++t) {
            const Rat& val = wvec[static_cast<std::size_t>(h0) * t + static_cast<std::size_t>(v) -
                                  1];
            out.deriv[static_cast<std::size_t>(v - 1)][t] = val;
            out.taylor[static_cast<std::size_t>(v - 1)][t] =
                val / detail::expo_factorial(out.slots[t]);
        }
    }
    return out;
}

} // namespace weavecurv
