#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "rational_function.hpp"

namespace weavecurv {

// A web of curves on an n-dimensional domain, given by d pairwise
// transverse direction fields.  The model is kept in a fixed gauge:
// fields 1..n are the coordinate directions (components delta_ij), and
// every further field a in n+1..d is scaled so that its n-th component
// is identically 1.  Only the columns a > n are stored.
class WebSpec {
public:
    // Raw columns for the non-coordinate fields: cols[a-n-1][i-1] is
    // component i of field a, before gauge normalization.
    static WebSpec make(int n, CtxPtr ctx, std::vector<std::vector<RationalFunction>> cols) {
        if (n < 2) throw Error("need ambient dimension at least 2");
        if (static_cast<std::size_t>(n) != ctx->num_coords())
            throw Error("context coordinate count does not match n");
        const int d = n + static_cast<int>(cols.size());
        if (d <= n) throw Error("need at least one non-coordinate field");
        for (std::size_t c = 0; c < cols.size(); ++c) {
            auto& col = cols[c];
            if (col.size() != static_cast<std::size_t>(n))
                throw Error("field column has wrong arity");
            const RationalFunction& last = col[static_cast<std::size_t>(n - 1)];
            if (last.is_zero())
                throw DegenerateField("component " + std::to_string(n) + " of field " +
                                      std::to_string(n + 1 + c) + " vanishes identically");
            for (std::size_t i = 0; i + 1 < col.size(); ++i)
                col[i] = (col[i] / last).reduced();
            col[static_cast<std::size_t>(n - 1)] = RationalFunction::one(ctx);
            for (std::size_t i = 0; i < col.size(); ++i) {
                if (col[i].is_zero())
                    throw DegenerateField("component " + std::to_string(i + 1) + " of field " +
                                          std::to_string(n + 1 + c) + " vanishes identically");
            }
        }
        std::vector<int> labels(static_cast<std::size_t>(d));
        for (int l = 1; l <= d; ++l) labels[static_cast<std::size_t>(l - 1)] = l;
        return WebSpec(n, d, std::move(ctx), std::move(cols), std::move(labels));
    }

    // The built-in d = n+3 family, optionally with a deformation
    // parameter applied to field n+1:
    //   field n+1: components (x_i + c)/(x_n + c)   (c = 0 if undeformed)
    //   field n+2: components (x_i - 1)/(x_n - 1)
    //   field n+3: components x_i(x_i - 1)/(x_n(x_n - 1))
    static WebSpec builtin_w0(int n, bool deformed) {
        CtxPtr ctx = deformed ? VariableContext::standard(static_cast<std::size_t>(n), {"c"})
                              : VariableContext::standard(static_cast<std::size_t>(n));
        Poly one = Poly::constant(ctx, mpq_class(1));
        std::vector<std::vector<RationalFunction>> cols(3);
        for (int i = 1; i <= n; ++i) {
            Poly xi = Poly::variable(ctx, static_cast<std::size_t>(i - 1));
            Poly xn = Poly::variable(ctx, static_cast<std::size_t>(n - 1));
            if (deformed) {
                Poly c = Poly::variable(ctx, static_cast<std::size_t>(n));
                cols[0].push_back(RationalFunction(xi + c, xn + c));
            } else {
                cols[0].push_back(RationalFunction(xi, xn));
            }
            cols[1].push_back(RationalFunction(xi - one, xn - one));
            cols[2].push_back(RationalFunction(xi * (xi - one), xn * (xn - one)));
        }
        return make(n, ctx, std::move(cols));
    }

    int n() const { return n_; }
    int d() const { return d_; }
    const CtxPtr& ctx() const { return ctx_; }
    const std::vector<int>& labels() const { return labels_; }

    // Component i (1-based) of field lam (1-based).
    const RationalFunction& f(int i, int lam) const {
        if (i < 1 || i > n_ || lam < 1 || lam > d_) throw Error("field index out of range");
        if (lam <= n_) return lam == i ? one_ : zero_;
        return cols_[static_cast<std::size_t>(lam - n_ - 1)][static_cast<std::size_t>(i - 1)];
    }

    // Sub-web keeping the listed field labels (1-based, relative to this
    // web).  The coordinate fields must all be kept so the gauge
    // survives; kept extra fields retain their relative order.
    WebSpec subweb(std::vector<int> keep) const {
        std::sort(keep.begin(), keep.end());
        if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
            throw BadSubset("duplicate field label");
        for (int l : keep)
            if (l < 1 || l > d_) throw BadSubset("field label out of range");
        for (int i = 1; i <= n_; ++i)
            if (!std::binary_search(keep.begin(), keep.end(), i))
                throw BadSubset("coordinate fields must be kept");
        if (keep.size() <= static_cast<std::size_t>(n_))
            throw BadSubset("need at least one non-coordinate field");
        std::vector<std::vector<RationalFunction>> cols;
        std::vector<int> labels;
        for (int i = 1; i <= n_; ++i) labels.push_back(labels_[static_cast<std::size_t>(i - 1)]);
        for (int l : keep) {
            if (l <= n_) continue;
            cols.push_back(cols_[static_cast<std::size_t>(l - n_ - 1)]);
            labels.push_back(labels_[static_cast<std::size_t>(l - 1)]);
        }
        const int d = n_ + static_cast<int>(cols.size());
        return WebSpec(n_, d, ctx_, std::move(cols), std::move(labels));
    }

    // Pin a parameter to a rational value; the variable stays in the
    // context but no longer occurs in any component.
    WebSpec with_param(std::size_t var, const Rat& value) const {
        if (ctx_->is_coord(var)) throw Error("cannot pin a coordinate");
        std::vector<std::vector<RationalFunction>> cols = cols_;
        for (auto& col : cols)
            for (auto& f : col) f = f.substitute(var, value);
        WebSpec w(n_, d_, ctx_, std::move(cols), labels_);
        return w;
    }

    // Genericity of a candidate base point (coordinates and parameter
    // values): every component evaluates, none vanishes, and every
    // n-subset of field directions is linearly independent there.
    std::vector<std::string> genericity_check(const std::vector<Rat>& point) const {
        std::vector<std::string> bad;
        if (point.size() != ctx_->num_vars()) {
            bad.push_back("point arity mismatch");
            return bad;
        }
        // evaluate all non-coordinate columns
        Mat<Rat> vals(static_cast<std::size_t>(n_), static_cast<std::size_t>(d_), Rat(0));
        for (int i = 1; i <= n_; ++i) vals(static_cast<std::size_t>(i - 1),
                                           static_cast<std::size_t>(i - 1)) = Rat(1);
        for (int a = n_ + 1; a <= d_; ++a) {
            for (int i = 1; i <= n_; ++i) {
                try {
                    Rat v = f(i, a).eval_rat(point);
                    vals(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(a - 1)) = v;
                    if (v.sign() == 0)
                        bad.push_back("component " + std::to_string(i) + " of field " +
                                      std::to_string(a) + " vanishes at the point");
                } catch (const SingularPoint&) {
                    bad.push_back("component " + std::to_string(i) + " of field " +
                                  std::to_string(a) + " is singular at the point");
                }
            }
        }
        if (!bad.empty()) return bad;
        // all n-subsets of field directions must be independent
        std::vector<int> subset;
        check_subsets(vals, 1, subset, bad);
        return bad;
    }

    // Deterministic search for a generic rational point.  Coordinates
    // and unpinned parameters are sampled with numerator in [-97, 97]
    // and denominator in [1, 97]; pinned parameters keep their value.
    std::vector<Rat> sample_point(std::uint64_t seed,
                                  const std::map<std::size_t, Rat>& pinned = {}) const {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> num(-97, 97);
        std::uniform_int_distribution<int> den(1, 97);
        for (int attempt = 0; attempt < 100; ++attempt) {
            std::vector<Rat> pt;
            pt.reserve(ctx_->num_vars());
            for (std::size_t v = 0; v < ctx_->num_vars(); ++v) {
                auto it = pinned.find(v);
                if (it != pinned.end()) pt.push_back(it->second);
                else pt.push_back(Rat(num(rng), den(rng)));
            }
            if (genericity_check(pt).empty()) return pt;
        }
        throw SingularPoint("no generic sample point found in 100 attempts");
    }

private:
    WebSpec(int n, int d, CtxPtr ctx, std::vector<std::vector<RationalFunction>> cols,
            std::vector<int> labels)
        : n_(n), d_(d), ctx_(std::move(ctx)), cols_(std::move(cols)), labels_(std::move(labels)),
          zero_(RationalFunction::zero(ctx_)), one_(RationalFunction::one(ctx_)) {}

    void check_subsets(const Mat<Rat>& vals, int start, std::vector<int>& subset,
                       std::vector<std::string>& bad) const {
        if (static_cast<int>(subset.size()) == n_) {
            struct Ops {
                Rat zero() const { return Rat(0); }
                Rat one() const { return Rat(1); }
                Rat normalize(const Rat& a) const { return a; }
            } ops;
            Mat<Rat> m(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_), Rat(0));
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                        vals(static_cast<std::size_t>(i),
                             static_cast<std::size_t>(subset[static_cast<std::size_t>(j)] - 1));
            if (rank_of(m, ops) < n_) {
                std::string s = "fields {";
                for (std::size_t k = 0; k < subset.size(); ++k)
                    s += (k ? "," : "") + std::to_string(subset[k]);
                s += "} are dependent at the point";
                bad.push_back(s);
            }
            return;
        }
        for (int l = start; l <= d_; ++l) {
            if (d_ - l + 1 < n_ - static_cast<int>(subset.size())) break;
            subset.push_back(l);
            check_subsets(vals, l + 1, subset, bad);
            subset.pop_back();
        }
    }

    int n_;
    int d_;
    CtxPtr ctx_;
    std::vector<std::vector<RationalFunction>> cols_;
    std::vector<int> labels_;
    RationalFunction zero_;
    RationalFunction one_;
};

// Derivative of g along field lam of the web.
inline RationalFunction directional_derivative(const WebSpec& w, int lam,
                                               const RationalFunction& g) {
    RationalFunction acc = RationalFunction::zero(w.ctx());
    for (int i = 1; i <= w.n(); ++i) {
        const RationalFunction& fi = w.f(i, lam);
        if (fi.is_zero()) continue;
        acc += fi * g.partial(static_cast<std::size_t>(i - 1));
    }
    return acc;
}

} // namespace weavecurv
