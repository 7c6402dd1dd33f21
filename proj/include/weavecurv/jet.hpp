#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "prime_field.hpp"
#include "rational.hpp"
#include "rational_function.hpp"
#include "variable_context.hpp"

namespace weavecurv {

inline Rat scalar_from_mpq(const Rat&, const mpq_class& q) { return Rat(q); }
inline Fp scalar_from_mpq(const Fp& like, const mpq_class& q) {
    return Fp::from_rat(Rat(q), like.modulus());
}
inline Rat scalar_from_long(const Rat&, long v) { return Rat(v); }
inline Fp scalar_from_long(const Fp& like, long v) { return Fp::from_long(v, like.modulus()); }

// Truncated Taylor expansion at a fixed base point, in the coordinate
// directions only (parameters are frozen at their base values).  The
// coefficient at multi-index I is the Taylor coefficient, i.e. the
// derivative divided by I!.  Each jet carries an order budget: taking a
// derivative costs one order, and a binary operation truncates to the
// smaller budget.
template <class C>
class Jet {
public:
    using Coeffs = std::map<Expo, C>;
    using BasePtr = std::shared_ptr<const std::vector<C>>;

    Jet(CtxPtr ctx, BasePtr base, int budget)
        : ctx_(std::move(ctx)), base_(std::move(base)), budget_(budget) {
        if (budget_ < 0) throw Error("negative jet budget");
        if (base_->size() != ctx_->num_vars()) throw Error("base point has wrong arity");
    }

    static Jet constant(const CtxPtr& ctx, const BasePtr& base, int budget, const C& v) {
        Jet j(ctx, base, budget);
        j.set_coeff(Expo(ctx->num_coords(), 0), v);
        return j;
    }

    static Jet variable(const CtxPtr& ctx, const BasePtr& base, int budget, std::size_t i) {
        Jet j(ctx, base, budget);
        const C& v = (*base)[i];
        j.set_coeff(Expo(ctx->num_coords(), 0), v);
        if (ctx->is_coord(i) && budget >= 1) {
            Expo e(ctx->num_coords(), 0);
            e[i] = 1;
            j.set_coeff(e, scalar_from_long(v, 1));
        }
        return j;
    }

    const CtxPtr& ctx() const { return ctx_; }
    const BasePtr& base() const { return base_; }
    int budget() const { return budget_; }
    const Coeffs& coeffs() const { return coeffs_; }

    // Order-0 coefficient, i.e. the value at the base point.
    C value() const {
        auto it = coeffs_.find(Expo(ctx_->num_coords(), 0));
        if (it != coeffs_.end()) return it->second;
        return scalar_from_long(proto(), 0);
    }

    C coeff(const Expo& e) const {
        auto it = coeffs_.find(e);
        if (it != coeffs_.end()) return it->second;
        return scalar_from_long(proto(), 0);
    }

    void set_coeff(const Expo& e, const C& v) {
        if (static_cast<int>(expo_total(e)) > budget_) throw Error("jet coefficient beyond budget");
        if (is_zero(v)) coeffs_.erase(e);
        else coeffs_.insert_or_assign(e, v);
    }

    bool jet_is_zero() const { return coeffs_.empty(); }
    bool jet_is_unit() const { return !is_zero(value()); }

    Jet truncated(int new_budget) const {
        if (new_budget >= budget_) return *this;
        Jet r(ctx_, base_, new_budget);
        for (const auto& [e, c] : coeffs_) {
            if (static_cast<int>(expo_total(e)) <= new_budget) r.coeffs_.emplace(e, c);
        }
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        a.check(b);
        int budget = std::min(a.budget_, b.budget_);
        Jet r = a.truncated(budget);
        for (const auto& [e, c] : b.coeffs_) {
            if (static_cast<int>(expo_total(e)) > budget) continue;
            auto [it, inserted] = r.coeffs_.emplace(e, c);
            if (!inserted) {
                it->second = it->second + c;
                if (is_zero(it->second)) r.coeffs_.erase(it);
            }
        }
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
    friend Jet operator-(const Jet& a) {
        Jet r(a.ctx_, a.base_, a.budget_);
        for (const auto& [e, c] : a.coeffs_) r.coeffs_.emplace(e, -c);
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check(b);
        int budget = std::min(a.budget_, b.budget_);
        Jet r(a.ctx_, a.base_, budget);
        const std::size_t n = a.ctx_->num_coords();
        Expo e(n);
        for (const auto& [ea, ca] : a.coeffs_) {
            int oa = static_cast<int>(expo_total(ea));
            if (oa > budget) continue;
            for (const auto& [eb, cb] : b.coeffs_) {
                if (oa + static_cast<int>(expo_total(eb)) > budget) continue;
                for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
                auto [it, inserted] = r.coeffs_.emplace(e, ca * cb);
                if (!inserted) {
                    it->second = it->second + ca * cb;
                    if (is_zero(it->second)) r.coeffs_.erase(it);
                }
            }
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        a.check(b);
        return a * b.inverted();
    }

    Jet& operator+=(const Jet& o) { *this = *this + o; return *this; }
    Jet& operator-=(const Jet& o) { *this = *this - o; return *this; }
    Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }
    Jet& operator/=(const Jet& o) { *this = *this / o; return *this; }

    // Multiplicative inverse, defined when the value is nonzero.
    Jet inverted() const {
        C v0 = value();
        if (is_zero(v0)) throw DivisionByZero("jet with vanishing value has no inverse");
        C inv0 = inverse(v0);
        Jet r(ctx_, base_, budget_);
        // order by order: r_I = (delta_{I,0} - sum_{0<J<=I} a_J r_{I-J}) / a_0
        const std::size_t n = ctx_->num_coords();
        for (const Expo& I : all_indices(n, budget_)) {
            C acc = expo_total(I) == 0 ? scalar_from_long(v0, 1) : scalar_from_long(v0, 0);
            for (const auto& [J, aJ] : coeffs_) {
                if (expo_total(J) == 0) continue;
                bool le = true;
                Expo diff(n);
                for (std::size_t i = 0; i < n; ++i) {
                    if (J[i] > I[i]) { le = false; break; }
                    diff[i] = I[i] - J[i];
                }
                if (!le) continue;
                auto it = r.coeffs_.find(diff);
                if (it == r.coeffs_.end()) continue;
                acc = acc - aJ * it->second;
            }
            acc = acc * inv0;
            if (!is_zero(acc)) r.coeffs_.emplace(I, acc);
        }
        return r;
    }

    // Derivative in coordinate direction k; consumes one order of budget.
    Jet partial(std::size_t k) const {
        if (!ctx_->is_coord(k)) throw Error("jet derivative direction must be a coordinate");
        if (budget_ == 0) throw JetOrderExhausted();
        Jet r(ctx_, base_, budget_ - 1);
        for (const auto& [e, c] : coeffs_) {
            if (e[k] == 0) continue;
            Expo d = e;
            d[k] -= 1;
            r.coeffs_.emplace(d, c * scalar_from_long(c, static_cast<long>(e[k])));
        }
        return r;
    }

    friend bool operator==(const Jet& a, const Jet& b) {
        a.check(b);
        return a.budget_ == b.budget_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

    // All coordinate multi-indices of total order <= k, graded.
    static std::vector<Expo> all_indices(std::size_t n, int k) {
        std::vector<Expo> out;
        Expo cur(n, 0);
        for (int h = 0; h <= k; ++h) gen(n, h, 0, cur, out);
        return out;
    }

private:
    static void gen(std::size_t n, int rem, std::size_t pos, Expo& cur, std::vector<Expo>& out) {
        if (pos + 1 == n) {
            cur[pos] = static_cast<std::uint32_t>(rem);
            out.push_back(cur);
            cur[pos] = 0;
            return;
        }
        for (int v = rem; v >= 0; --v) {
            cur[pos] = static_cast<std::uint32_t>(v);
            gen(n, rem - v, pos + 1, cur, out);
        }
        cur[pos] = 0;
    }

    const C& proto() const { return (*base_)[0]; }

    void check(const Jet& o) const {
        require_same_ctx(ctx_, o.ctx_);
        if (base_ != o.base_ && *base_ != *o.base_)
            throw BackendMismatch("jets expanded at different base points");
    }

    CtxPtr ctx_;
    BasePtr base_;
    int budget_;
    Coeffs coeffs_;
};

// Taylor-expand a rational function at the given base point, keeping
// terms up to the order budget.  Throws SingularPoint when the
// denominator vanishes at the point.
template <class C>
Jet<C> lift_to_jet(const RationalFunction& f, const typename Jet<C>::BasePtr& base, int budget) {
    const CtxPtr& ctx = f.ctx();
    std::vector<Jet<C>> vals;
    vals.reserve(ctx->num_vars());
    for (std::size_t i = 0; i < ctx->num_vars(); ++i)
        vals.push_back(Jet<C>::variable(ctx, base, budget, i));
    const C& like = (*base)[0];
    auto conv = [&](const mpq_class& q) {
        return Jet<C>::constant(ctx, base, budget, scalar_from_mpq(like, q));
    };
    Jet<C> num = f.num().template eval<Jet<C>>(vals, conv);
    Jet<C> den = f.den().template eval<Jet<C>>(vals, conv);
    if (is_zero(den.value()))
        throw SingularPoint("denominator vanishes at the expansion point");
    return num / den;
}

template <class C>
bool is_zero(const Jet<C>& a) { return a.jet_is_zero(); }
template <class C>
bool is_unit(const Jet<C>& a) { return a.jet_is_unit(); }
template <class C>
Jet<C> inverse(const Jet<C>& a) { return a.inverted(); }

} // namespace weavecurv
