#pragma once

#include <string>
#include <utility>

#include "poly_gcd.hpp"
#include "polynomial.hpp"

namespace weavecurv {

// Quotient of two polynomials.  Operations do not cancel common
// polynomial factors; only the integer content is normalized, so that
// numerator and denominator always have integer coefficients with
// overall gcd 1 and the denominator has a positive leading coefficient.
// Explicit reduce() cancels the polynomial gcd.  Zero tests and equality
// are exact regardless of reduction state: the numerator is a canonical
// expanded polynomial, and equality cross-multiplies.
class RationalFunction {
public:
    RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        require_same_ctx(num_.ctx(), den_.ctx());
        if (den_.is_zero()) throw ZeroDenominator();
        normalize_content();
    }

    explicit RationalFunction(Poly num)
        : num_(std::move(num)), den_(Poly::constant(num_.ctx(), mpq_class(1))) {
        normalize_content();
    }

    static RationalFunction zero(const CtxPtr& ctx) { return RationalFunction(Poly::zero(ctx)); }
    static RationalFunction one(const CtxPtr& ctx) {
        return RationalFunction(Poly::constant(ctx, mpq_class(1)));
    }
    static RationalFunction constant(const CtxPtr& ctx, const Rat& c) {
        return RationalFunction(Poly::constant(ctx, c));
    }
    static RationalFunction variable(const CtxPtr& ctx, std::size_t i) {
        return RationalFunction(Poly::variable(ctx, i));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const CtxPtr& ctx() const { return num_.ctx(); }

    bool is_zero() const { return num_.is_zero(); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return combine(a, b, false);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return combine(a, b, true);
    }
    friend RationalFunction operator-(const RationalFunction& a) {
        return RationalFunction(-a.num_, a.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        require_same_ctx(a.ctx(), b.ctx());
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        require_same_ctx(a.ctx(), b.ctx());
        if (b.num_.is_zero()) throw DivisionByZero();
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    RationalFunction& operator+=(const RationalFunction& o) { *this = *this + o; return *this; }
    RationalFunction& operator-=(const RationalFunction& o) { *this = *this - o; return *this; }
    RationalFunction& operator*=(const RationalFunction& o) { *this = *this * o; return *this; }
    RationalFunction& operator/=(const RationalFunction& o) { *this = *this / o; return *this; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        require_same_ctx(a.ctx(), b.ctx());
        return a.num_ * b.den_ == b.num_ * a.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
        return !(a == b);
    }

    // Quotient rule, exact.
    RationalFunction partial(std::size_t i) const {
        return RationalFunction(num_.partial(i) * den_ - num_ * den_.partial(i), den_ * den_);
    }

    // Cancel the polynomial gcd of numerator and denominator.
    RationalFunction reduced() const {
        if (num_.is_zero()) return zero(ctx());
        Poly g = poly_gcd(num_, den_);
        if (g.is_constant()) return *this;
        return RationalFunction(*num_.try_divide(g), *den_.try_divide(g));
    }

    // Substitute variable i by a constant.  Common powers of x_i are
    // cancelled first so substitution points where only the raw
    // representation degenerates still work.
    RationalFunction substitute(std::size_t i, const Rat& value) const {
        Poly n = num_, d = den_;
        std::uint32_t m = std::min(n.is_zero() ? den_.valuation(i) : n.valuation(i),
                                   d.valuation(i));
        if (m > 0) {
            if (!n.is_zero()) n = n.shift_down(i, m);
            d = d.shift_down(i, m);
        }
        Poly dn = d.substitute(i, value);
        if (dn.is_zero())
            throw SingularPoint("denominator vanishes after substituting " +
                                ctx()->name(i) + " = " + value.str());
        return RationalFunction(n.substitute(i, value), dn);
    }

    // Whether the function vanishes identically on the hyperplane where
    // variable i equals zero, i.e. is divisible by that variable.  Sound
    // for unreduced representations: compare valuations.
    bool divisible_by_var(std::size_t i) const {
        if (num_.is_zero()) return true;
        return num_.valuation(i) > den_.valuation(i);
    }

    Rat eval_rat(const std::vector<Rat>& point) const {
        Rat d = den_.eval_rat(point);
        if (d.sign() == 0) throw SingularPoint("denominator vanishes at the sample point");
        return num_.eval_rat(point) / d;
    }

    Fp eval_fp(const std::vector<Fp>& point, std::uint64_t prime) const {
        Fp d = den_.eval_fp(point, prime);
        if (d.value() == 0) throw SingularPoint("denominator vanishes at the sample point");
        return num_.eval_fp(point, prime) / d;
    }

private:
    // Sum or difference over the least common denominator: cancelling
    // the denominator gcd up front keeps iterated row operations from
    // inflating the representation.
    static RationalFunction combine(const RationalFunction& a, const RationalFunction& b,
                                    bool subtract) {
        require_same_ctx(a.ctx(), b.ctx());
        if (a.den_ == b.den_)
            return RationalFunction(subtract ? a.num_ - b.num_ : a.num_ + b.num_, a.den_);
        Poly g = poly_gcd(a.den_, b.den_);
        if (!g.is_constant()) {
            Poly ea = *a.den_.try_divide(g);
            Poly eb = *b.den_.try_divide(g);
            Poly n = subtract ? a.num_ * eb - b.num_ * ea : a.num_ * eb + b.num_ * ea;
            return RationalFunction(std::move(n), a.den_ * eb);
        }
        Poly n = subtract ? a.num_ * b.den_ - b.num_ * a.den_
                          : a.num_ * b.den_ + b.num_ * a.den_;
        return RationalFunction(std::move(n), a.den_ * b.den_);
    }

    void normalize_content() {
        if (num_.is_zero()) {
            den_ = Poly::constant(den_.ctx(), mpq_class(1));
            return;
        }
        mpq_class cn = num_.content();
        mpq_class cd = den_.content();
        // combined content: gcd of numerators over lcm of denominators
        mpz_class g, l;
        mpz_gcd(g.get_mpz_t(), cn.get_num().get_mpz_t(), cd.get_num().get_mpz_t());
        mpz_lcm(l.get_mpz_t(), cn.get_den().get_mpz_t(), cd.get_den().get_mpz_t());
        mpq_class c(g, l);
        c.canonicalize();
        mpq_class t = 1 / c;
        if (den_.leading().second < 0) t = -t;
        num_.scale(t);
        den_.scale(t);
    }

    Poly num_;
    Poly den_;
};

inline bool is_zero(const RationalFunction& f) { return f.is_zero(); }
inline bool is_unit(const RationalFunction& f) { return !f.is_zero(); }
inline RationalFunction inverse(const RationalFunction& f) {
    return RationalFunction::one(f.ctx()) / f;
}

} // namespace weavecurv
