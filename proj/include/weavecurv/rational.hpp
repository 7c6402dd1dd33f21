#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace weavecurv {

// Arbitrary-precision rational number, always kept in canonical form
// (reduced fraction, positive denominator).  Thin wrapper over GMP that
// gives us a type of our own for overloads and guarded division.
class Rat {
public:
    Rat() : q_(0) {}
    Rat(long v) : q_(v) {}             // NOLINT(google-explicit-constructor)
    Rat(long num, long den) : q_(num, den) {
        if (den == 0) throw DivisionByZero();
        q_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    explicit Rat(const mpz_class& z) : q_(z) {}
    Rat(const mpz_class& num, const mpz_class& den) : q_(num, den) {
        if (den == 0) throw DivisionByZero();
        q_.canonicalize();
    }

    // Parses "p", "-p", or "p/q".
    static Rat parse(const std::string& text) {
        mpq_class q;
        if (q.set_str(text, 10) != 0) throw Error("cannot parse rational '" + text + "'");
        if (q.get_den() == 0) throw DivisionByZero();
        q.canonicalize();
        return Rat(q);
    }

    const mpq_class& raw() const { return q_; }
    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }

    std::string str() const { return q_.get_str(); }

    int sign() const { return sgn(q_); }

    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.q_ == 0) throw DivisionByZero();
        q_ /= o.q_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
    friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
    friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
    friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
    friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.q_)); }

    friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.q_ < b.q_; }

private:
    mpq_class q_;
};

inline bool is_zero(const Rat& a) { return a.sign() == 0; }
inline bool is_unit(const Rat& a) { return a.sign() != 0; }
inline Rat inverse(const Rat& a) { return Rat(1) / a; }
inline std::string to_string(const Rat& a) { return a.str(); }

inline mpz_class factorial_z(unsigned k) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), k);
    return r;
}

inline mpz_class binomial_z(unsigned long a, unsigned long b) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), a, b);
    return r;
}

} // namespace weavecurv
