#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"

namespace weavecurv {

// Number of monomials of exact total degree h in n variables.
inline std::uint64_t homog_dim(int n, int h) {
    if (h < 0) return 0;
    if (n == 0) return h == 0 ? 1 : 0;
    return binomial_z(static_cast<unsigned long>(n - 1 + h),
                      static_cast<unsigned long>(h)).get_ui();
}

// Number of monomials of total degree <= h in n variables.
inline std::uint64_t upto_dim(int n, int h) {
    if (h < 0) return 0;
    return homog_dim(n + 1, h);
}

// Global numbering of derivation multi-indices in n coordinates:
// graded by total order, and within each order sorted so that the
// reverse-lexicographically largest index comes first.  Position 0 is
// the empty index, positions 1..n are the unit indices 1_1..1_n.
// The table also stores the increment maps ad_k (add one to slot k) and
// their partial inverses dec_k.
class IndexTable {
public:
    IndexTable(int n, int h_max) : n_(n), h_max_(h_max) {
        if (n < 1) throw Error("need at least one coordinate");
        if (h_max < 0) throw Error("negative maximum order");
        for (int h = 0; h <= h_max; ++h) {
            std::vector<std::vector<std::uint32_t>> grade;
            std::vector<std::uint32_t> cur(static_cast<std::size_t>(n), 0);
            gen_grade(h, 0, cur, grade);
            std::sort(grade.begin(), grade.end(), grade_before);
            for (auto& e : grade) {
                position_.emplace(e, static_cast<int>(indices_.size()));
                indices_.push_back(std::move(e));
            }
        }
        const int sz = static_cast<int>(indices_.size());
        ad_.assign(static_cast<std::size_t>(n), std::vector<int>(sz, -1));
        dec_.assign(static_cast<std::size_t>(n), std::vector<int>(sz, -1));
        for (int t = 0; t < sz; ++t) {
            for (int k = 0; k < n; ++k) {
                std::vector<std::uint32_t> up = indices_[t];
                up[static_cast<std::size_t>(k)] += 1;
                auto it = position_.find(up);
                if (it != position_.end()) {
                    ad_[k][t] = it->second;
                    dec_[k][it->second] = t;
                }
            }
        }
    }

    int n() const { return n_; }
    int h_max() const { return h_max_; }
    int size() const { return static_cast<int>(indices_.size()); }

    const std::vector<std::uint32_t>& index(int t) const {
        return indices_.at(static_cast<std::size_t>(t));
    }

    int order_of(int t) const { return static_cast<int>(expo_total(index(t))); }

    int position(const std::vector<std::uint32_t>& e) const {
        auto it = position_.find(e);
        if (it == position_.end()) throw OrderOverflow();
        return it->second;
    }

    // Position of index(t) + 1_k; throws when that leaves the table.
    int ad(int k, int t) const {
        int r = ad_.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(t));
        if (r < 0) throw OrderOverflow();
        return r;
    }

    // Position of index(t) - 1_k, when slot k is positive.
    std::optional<int> dec(int k, int t) const {
        int r = dec_.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(t));
        if (r < 0) return std::nullopt;
        return r;
    }

    // Smallest coordinate k with a positive entry in index(t); t > 0.
    int first_positive_slot(int t) const {
        const auto& e = index(t);
        for (int k = 0; k < n_; ++k)
            if (e[static_cast<std::size_t>(k)] > 0) return k;
        throw Error("empty index has no positive slot");
    }

private:
    // Whether a is listed before b within a grade: reverse-lex larger
    // first, i.e. at the last differing slot a has the smaller entry.
    static bool grade_before(const std::vector<std::uint32_t>& a,
                             const std::vector<std::uint32_t>& b) {
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return false;
    }

    void gen_grade(int rem, std::size_t pos, std::vector<std::uint32_t>& cur,
                   std::vector<std::vector<std::uint32_t>>& out) const {
        if (pos + 1 == static_cast<std::size_t>(n_)) {
            cur[pos] = static_cast<std::uint32_t>(rem);
            out.push_back(cur);
            cur[pos] = 0;
            return;
        }
        for (int v = rem; v >= 0; --v) {
            cur[pos] = static_cast<std::uint32_t>(v);
            gen_grade(rem - v, pos + 1, cur, out);
        }
        cur[pos] = 0;
    }

    int n_;
    int h_max_;
    std::vector<std::vector<std::uint32_t>> indices_;
    std::map<std::vector<std::uint32_t>, int> position_;
    std::vector<std::vector<int>> ad_;
    std::vector<std::vector<int>> dec_;
};

// Row and column numbering of the prolonged linear systems.  Rows are
// pairs (u, t) with u in 1..d-1 an equation label and t a derivation
// index; columns are pairs (v, s) with v in 1..h0 an unknown label.
// External row/column numbers are 1-based.
struct RowColMap {
    int n;
    int d;

    int h0() const { return d - n; }

    int row(int u, int t) const { return u + (d - 1) * t; }
    std::pair<int, int> row_decode(int i) const {
        int t = (i - 1) / (d - 1);
        int u = i - (d - 1) * t;
        return {u, t};
    }

    int col(int v, int s) const { return v + h0() * s; }
    std::pair<int, int> col_decode(int j) const {
        int s = (j - 1) / h0();
        int v = j - h0() * s;
        return {v, s};
    }
};

} // namespace weavecurv
