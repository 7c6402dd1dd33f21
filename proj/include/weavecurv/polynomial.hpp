#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "prime_field.hpp"
#include "rational.hpp"
#include "variable_context.hpp"

namespace weavecurv {

// Exponent vector, one entry per context variable.
using Expo = std::vector<std::uint32_t>;

inline std::uint32_t expo_total(const Expo& e) {
    std::uint32_t s = 0;
    for (auto v : e) s += v;
    return s;
}

// Sparse multivariate polynomial with rational coefficients.  Terms are
// kept in a map ordered by the exponent vector, with no zero
// coefficients, so equal polynomials have identical representations.
class Poly {
public:
    using TermMap = std::map<Expo, mpq_class>;

    explicit Poly(CtxPtr ctx) : ctx_(std::move(ctx)) {}

    static Poly zero(CtxPtr ctx) { return Poly(std::move(ctx)); }

    static Poly constant(CtxPtr ctx, const mpq_class& c) {
        Poly p(std::move(ctx));
        if (c != 0) p.terms_.emplace(Expo(p.ctx_->num_vars(), 0), c);
        return p;
    }
    static Poly constant(CtxPtr ctx, const Rat& c) { return constant(std::move(ctx), c.raw()); }

    static Poly variable(CtxPtr ctx, std::size_t i) {
        Poly p(std::move(ctx));
        if (i >= p.ctx_->num_vars()) throw Error("variable index out of range");
        Expo e(p.ctx_->num_vars(), 0);
        e[i] = 1;
        p.terms_.emplace(std::move(e), mpq_class(1));
        return p;
    }

    const CtxPtr& ctx() const { return ctx_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && expo_total(terms_.begin()->first) == 0);
    }
    // Value as a constant; only valid when is_constant().
    mpq_class constant_value() const {
        if (terms_.empty()) return mpq_class(0);
        return terms_.begin()->second;
    }

    void add_term(const Expo& e, const mpq_class& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        require_same_ctx(ctx_, o.ctx_);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        require_same_ctx(ctx_, o.ctx_);
        for (const auto& [e, c] : o.terms_) add_term(e, mpq_class(-c));
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }

    friend Poly operator-(const Poly& a) {
        Poly r(a.ctx_);
        for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, mpq_class(-c));
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        require_same_ctx(a.ctx_, b.ctx_);
        Poly r(a.ctx_);
        if (a.terms_.empty() || b.terms_.empty()) return r;
        const std::size_t nv = a.ctx_->num_vars();
        Expo e(nv);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < nv; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

    Poly& scale(const mpq_class& c) {
        if (c == 0) { terms_.clear(); return *this; }
        for (auto& [e, v] : terms_) v *= c;
        return *this;
    }

    Poly pow(unsigned k) const {
        Poly r = constant(ctx_, mpq_class(1));
        Poly base = *this;
        while (k > 0) {
            if (k & 1u) r = r * base;
            k >>= 1u;
            if (k > 0) base = base * base;
        }
        return r;
    }

    // Derivative with respect to variable i.
    Poly partial(std::size_t i) const {
        Poly r(ctx_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            Expo d = e;
            d[i] -= 1;
            r.add_term(d, c * e[i]);
        }
        return r;
    }

    // Substitute variable i by a rational constant.
    Poly substitute(std::size_t i, const Rat& value) const {
        Poly r(ctx_);
        for (const auto& [e, c] : terms_) {
            mpq_class coeff = c;
            if (e[i] > 0) {
                mpq_class pw;
                mpz_pow_ui(pw.get_num_mpz_t(), value.raw().get_num_mpz_t(), e[i]);
                mpz_pow_ui(pw.get_den_mpz_t(), value.raw().get_den_mpz_t(), e[i]);
                pw.canonicalize();
                coeff *= pw;
            }
            Expo d = e;
            d[i] = 0;
            r.add_term(d, coeff);
        }
        return r;
    }

    int degree(std::size_t i) const {
        int d = -1;
        for (const auto& [e, c] : terms_)
            d = std::max(d, static_cast<int>(e[i]));
        return d;
    }
    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_)
            d = std::max(d, static_cast<int>(expo_total(e)));
        return d;
    }
    // Smallest exponent of variable i over all terms; 0 for the zero polynomial.
    std::uint32_t valuation(std::size_t i) const {
        if (terms_.empty()) return 0;
        std::uint32_t v = UINT32_MAX;
        for (const auto& [e, c] : terms_) v = std::min(v, e[i]);
        return v;
    }
    // Divide by x_i^k; every term must allow it.
    Poly shift_down(std::size_t i, std::uint32_t k) const {
        Poly r(ctx_);
        for (const auto& [e, c] : terms_) {
            if (e[i] < k) throw Error("shift_down would produce negative exponent");
            Expo d = e;
            d[i] -= k;
            r.terms_.emplace(std::move(d), c);
        }
        return r;
    }

    // Positive rational c with (1/c) * this having integer coefficients
    // whose gcd is 1.  Returns 0 for the zero polynomial.
    mpq_class content() const {
        if (terms_.empty()) return mpq_class(0);
        mpz_class g = 0, l = 1;
        for (const auto& [e, c] : terms_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
        }
        mpq_class r(g, l);
        r.canonicalize();
        return r;
    }

    // Coefficient of the lexicographically largest exponent vector.
    const std::pair<const Expo, mpq_class>& leading() const {
        if (terms_.empty()) throw Error("leading term of zero polynomial");
        return *terms_.rbegin();
    }

    // Exact division: returns the quotient when divisor divides *this
    // exactly, otherwise nullopt.  Long division on the map order.
    std::optional<Poly> try_divide(const Poly& divisor) const {
        require_same_ctx(ctx_, divisor.ctx_);
        if (divisor.terms_.empty()) throw DivisionByZero();
        Poly rem = *this;
        Poly quot(ctx_);
        const auto& [de, dc] = divisor.leading();
        const std::size_t nv = ctx_->num_vars();
        while (!rem.terms_.empty()) {
            const auto& [re, rc] = rem.leading();
            Expo q(nv);
            bool ok = true;
            for (std::size_t i = 0; i < nv; ++i) {
                if (re[i] < de[i]) { ok = false; break; }
                q[i] = re[i] - de[i];
            }
            if (!ok) return std::nullopt;
            mpq_class qc = rc / dc;
            Poly t(ctx_);
            t.terms_.emplace(q, qc);
            quot.add_term(q, qc);
            rem -= t * divisor;
        }
        return quot;
    }

    // Evaluate with variable i mapped to vals[i]; Conv maps a rational
    // coefficient into the target scalar type.
    template <class T, class Conv>
    T eval(const std::vector<T>& vals, Conv conv) const {
        if (vals.size() != ctx_->num_vars()) throw Error("evaluation point has wrong arity");
        T acc = conv(mpq_class(0));
        for (const auto& [e, c] : terms_) {
            T term = conv(c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                for (std::uint32_t k = 0; k < e[i]; ++k) term = term * vals[i];
            }
            acc = acc + term;
        }
        return acc;
    }

    Rat eval_rat(const std::vector<Rat>& vals) const {
        return eval<Rat>(vals, [](const mpq_class& c) { return Rat(c); });
    }

    Fp eval_fp(const std::vector<Fp>& vals, std::uint64_t prime) const {
        return eval<Fp>(vals, [prime](const mpq_class& c) { return Fp::from_rat(Rat(c), prime); });
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        require_same_ctx(a.ctx_, b.ctx_);
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
    CtxPtr ctx_;
    TermMap terms_;
};

} // namespace weavecurv
