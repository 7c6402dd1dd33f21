#pragma once

#include <cstdint>
#include <string>

#include "errors.hpp"
#include "rational.hpp"

namespace weavecurv {

// Default modulus: the Mersenne prime 2^61 - 1.
inline constexpr std::uint64_t kDefaultPrime = 2305843009213693951ULL;

// Element of Z/p for a word-sized prime p.  Each element carries its
// modulus so that values from differently configured runs cannot be
// mixed silently.
class Fp {
public:
    Fp() : v_(0), p_(kDefaultPrime) {}
    Fp(std::uint64_t value, std::uint64_t prime) : v_(value % prime), p_(prime) {}

    static Fp from_long(long v, std::uint64_t prime) {
        if (v >= 0) return Fp(static_cast<std::uint64_t>(v), prime);
        std::uint64_t m = static_cast<std::uint64_t>(-(v + 1)) + 1;
        return Fp(prime - m % prime, prime);
    }

    static Fp from_mpz(const mpz_class& z, std::uint64_t prime) {
        mpz_class m = z % static_cast<unsigned long>(prime);
        if (m < 0) m += static_cast<unsigned long>(prime);
        return Fp(m.get_ui(), prime);
    }

    // Image of a rational; the denominator must be invertible mod p.
    static Fp from_rat(const Rat& q, std::uint64_t prime) {
        Fp den = from_mpz(q.den(), prime);
        if (den.v_ == 0)
            throw SingularPoint("denominator of " + q.str() + " vanishes modulo the prime");
        return from_mpz(q.num(), prime) / den;
    }

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }

    friend Fp operator+(const Fp& a, const Fp& b) {
        a.check(b);
        std::uint64_t s = a.v_ + b.v_;
        if (s >= a.p_ || s < a.v_) s -= a.p_;
        return Fp(s, a.p_, 0);
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        a.check(b);
        return Fp(a.v_ >= b.v_ ? a.v_ - b.v_ : a.p_ - (b.v_ - a.v_), a.p_, 0);
    }
    friend Fp operator-(const Fp& a) { return Fp(a.v_ == 0 ? 0 : a.p_ - a.v_, a.p_, 0); }
    friend Fp operator*(const Fp& a, const Fp& b) {
        a.check(b);
        unsigned __int128 w = static_cast<unsigned __int128>(a.v_) * b.v_;
        return Fp(static_cast<std::uint64_t>(w % a.p_), a.p_, 0);
    }
    friend Fp operator/(const Fp& a, const Fp& b) {
        a.check(b);
        return a * inverse_of(b);
    }

    Fp& operator+=(const Fp& o) { *this = *this + o; return *this; }
    Fp& operator-=(const Fp& o) { *this = *this - o; return *this; }
    Fp& operator*=(const Fp& o) { *this = *this * o; return *this; }
    Fp& operator/=(const Fp& o) { *this = *this / o; return *this; }

    friend bool operator==(const Fp& a, const Fp& b) { return a.p_ == b.p_ && a.v_ == b.v_; }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

    static Fp inverse_of(const Fp& a) {
        if (a.v_ == 0) throw DivisionByZero();
        // Extended Euclid on (v, p); p is prime so the gcd is 1.
        std::int64_t t = 0, new_t = 1;
        std::uint64_t r = a.p_, new_r = a.v_;
        while (new_r != 0) {
            std::uint64_t quot = r / new_r;
            std::int64_t tmp_t = t - static_cast<std::int64_t>(quot) * new_t;
            t = new_t; new_t = tmp_t;
            std::uint64_t tmp_r = r - quot * new_r;
            r = new_r; new_r = tmp_r;
        }
        std::uint64_t u = t >= 0 ? static_cast<std::uint64_t>(t)
                                 : a.p_ - static_cast<std::uint64_t>(-t);
        return Fp(u, a.p_, 0);
    }

private:
    Fp(std::uint64_t value, std::uint64_t prime, int) : v_(value), p_(prime) {}
    void check(const Fp& o) const {
        if (p_ != o.p_) throw BackendMismatch("prime moduli differ");
    }

    std::uint64_t v_;
    std::uint64_t p_;
};

inline bool is_zero(const Fp& a) { return a.value() == 0; }
inline bool is_unit(const Fp& a) { return a.value() != 0; }
inline Fp inverse(const Fp& a) { return Fp::inverse_of(a); }
inline std::string to_string(const Fp& a) { return std::to_string(a.value()); }

} // namespace weavecurv
