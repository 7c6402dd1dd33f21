#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "poly_gcd.hpp"
#include "rational_function.hpp"

namespace weavecurv {

// Arithmetic for rational functions whose denominators divide products
// of a fixed pool of polynomials.  Connection and curvature entries
// have exactly this shape: every denominator is a product of a few
// web-specific factors.  Refining that pool into a pairwise-coprime
// basis makes common denominators exponent-wise maxima and cancellation
// an exact division by a basis element, so sums and products need no
// polynomial gcd at all -- the dominant cost of the same work done on
// reduced numerator/denominator pairs.

class FactorBasis {
public:
    explicit FactorBasis(CtxPtr ctx) : ctx_(std::move(ctx)) {}

    // Refine the basis so that d becomes a product of basis elements
    // (times a constant).  Must not be called once values referencing
    // this basis exist: splitting invalidates their exponent vectors.
    void insert(Poly d) {
        d = primitive_normalized(d);
        std::size_t i = 0;
        while (i < fs_.size()) {
            if (d.is_constant()) return;
            Poly g = poly_gcd(d, fs_[i]);
            if (g.is_constant()) {
                ++i;
                continue;
            }
            if (g == fs_[i]) {
                while (auto q = d.try_divide(g)) d = *q;
                // the residue may still share a proper factor of g
                continue;
            }
            // proper split: fs_[i] = g * cof with g shared; keep g here
            // and re-insert the cofactor, then revisit the same slot
            Poly cof = *fs_[i].try_divide(g);
            fs_[i] = g;
            insert(cof);
        }
        if (!d.is_constant()) fs_.push_back(std::move(d));
    }

    // Exponents of d over the basis plus the constant left over;
    // insert(d) must have been called earlier so the residual is
    // guaranteed constant.
    std::pair<std::vector<std::uint32_t>, mpq_class> factor(const Poly& d) const {
        std::vector<std::uint32_t> e(fs_.size(), 0);
        Poly r = d;
        for (std::size_t i = 0; i < fs_.size(); ++i) {
            if (r.is_constant()) break;
            while (auto q = r.try_divide(fs_[i])) {
                r = std::move(*q);
                ++e[i];
            }
        }
        if (!r.is_constant())
            throw Error("denominator is not a product of the factor basis");
        return {std::move(e), r.is_zero() ? mpq_class(0) : r.leading().second};
    }

    const std::vector<Poly>& factors() const { return fs_; }
    std::size_t size() const { return fs_.size(); }
    const CtxPtr& ctx() const { return ctx_; }

private:
    CtxPtr ctx_;
    std::vector<Poly> fs_;
};

// Value num / prod_i f_i^{e_i} over a frozen basis.
struct FactoredRF {
    const FactorBasis* basis = nullptr;
    Poly num;
    std::vector<std::uint32_t> e;

    FactoredRF(const FactorBasis* b, Poly n, std::vector<std::uint32_t> exp)
        : basis(b), num(std::move(n)), e(std::move(exp)) {}
};

inline bool is_zero(const FactoredRF& a) { return a.num.is_zero(); }
inline bool is_unit(const FactoredRF& a) { return !a.num.is_zero(); }

namespace detail {

// Cancel basis factors out of the numerator while the denominator
// still carries them.
inline void fac_strip(FactoredRF& a) {
    if (a.num.is_zero()) {
        std::fill(a.e.begin(), a.e.end(), 0);
        return;
    }
    const auto& fs = a.basis->factors();
    for (std::size_t i = 0; i < fs.size(); ++i) {
        while (a.e[i] > 0) {
            auto q = a.num.try_divide(fs[i]);
            if (!q) break;
            a.num = std::move(*q);
            --a.e[i];
        }
    }
}

inline void fac_same_basis(const FactoredRF& a, const FactoredRF& b) {
    if (a.basis != b.basis) throw Error("mixing values from different factor bases");
}

} // namespace detail

// Products and sums do not strip; accumulation loops run much faster
// when cancellation is postponed to the per-entry normalize (or to
// fac_to).  Exponents stay bounded along sums because the common
// denominator is an exponent-wise maximum, not a product.
inline FactoredRF operator*(const FactoredRF& a, const FactoredRF& b) {
    detail::fac_same_basis(a, b);
    std::vector<std::uint32_t> e(a.e.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.e[i] + b.e[i];
    return FactoredRF(a.basis, a.num * b.num, std::move(e));
}

inline FactoredRF fac_combine(const FactoredRF& a, const FactoredRF& b, bool subtract) {
    detail::fac_same_basis(a, b);
    const auto& fs = a.basis->factors();
    std::vector<std::uint32_t> e(a.e.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::max(a.e[i], b.e[i]);
    const Poly* pa = &a.num;
    const Poly* pb = &b.num;
    Poly ta(a.basis->ctx()), tb(a.basis->ctx());
    if (!a.num.is_zero()) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > a.e[i]) {
                ta = (pa == &ta ? ta : a.num) * fs[i].pow(e[i] - a.e[i]);
                pa = &ta;
            }
    }
    if (!b.num.is_zero()) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > b.e[i]) {
                tb = (pb == &tb ? tb : b.num) * fs[i].pow(e[i] - b.e[i]);
                pb = &tb;
            }
    }
    return FactoredRF(a.basis, subtract ? *pa - *pb : *pa + *pb, std::move(e));
}

inline FactoredRF operator+(const FactoredRF& a, const FactoredRF& b) {
    return fac_combine(a, b, false);
}
inline FactoredRF operator-(const FactoredRF& a, const FactoredRF& b) {
    return fac_combine(a, b, true);
}
inline FactoredRF operator-(const FactoredRF& a) {
    FactoredRF r = a;
    r.num = -r.num;
    return r;
}

// Conversion from a reduced pair: the denominator must factor over the
// basis (call FactorBasis::insert on it beforehand).
inline FactoredRF fac_from(const FactorBasis& B, const RationalFunction& f) {
    auto [e, c] = B.factor(f.den());
    FactoredRF r(&B, f.num(), std::move(e));
    r.num.scale(1 / c);
    detail::fac_strip(r);
    return r;
}

inline RationalFunction fac_to(FactoredRF a) {
    detail::fac_strip(a);
    const auto& fs = a.basis->factors();
    Poly den = Poly::constant(a.basis->ctx(), mpq_class(1));
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (a.e[i] > 0) den = den * fs[i].pow(a.e[i]);
    return RationalFunction(std::move(a.num), std::move(den));
}

// Backend adapter so the generic matrix routines run on factored
// values.  Arithmetic defers cancellation; normalize (called by the
// matrix routines once per finished entry) strips shared basis factors
// out of the numerator.
class FactoredBackend {
public:
    using Scalar = FactoredRF;

    explicit FactoredBackend(const FactorBasis* b) : b_(b) {}

    FactoredRF zero() const {
        return FactoredRF(b_, Poly::zero(b_->ctx()),
                          std::vector<std::uint32_t>(b_->size(), 0));
    }
    FactoredRF one() const {
        return FactoredRF(b_, Poly::constant(b_->ctx(), mpq_class(1)),
                          std::vector<std::uint32_t>(b_->size(), 0));
    }
    FactoredRF normalize(FactoredRF s) const {
        detail::fac_strip(s);
        return s;
    }

    // d/dx_k of num / prod f^e over the denominator prod f^{e+1}
    // (present factors only):
    //   [ (d num) F - num * sum_i e_i (d f_i) F/f_i ] / prod f^{e_i+1},
    // where F is the product of the distinct present factors.
    FactoredRF partial(std::size_t k, const FactoredRF& s) const {
        const auto& fs = b_->factors();
        Poly F = Poly::constant(b_->ctx(), mpq_class(1));
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (s.e[i] > 0) F = F * fs[i];
        Poly n = s.num.partial(k) * F;
        std::vector<std::uint32_t> e(s.e.size(), 0);
        for (std::size_t i = 0; i < fs.size(); ++i) {
            if (s.e[i] == 0) continue;
            e[i] = s.e[i] + 1;
            Poly dfi = fs[i].partial(k);
            if (dfi.is_zero()) continue;
            Poly cof = *F.try_divide(fs[i]);
            dfi.scale(mpq_class(s.e[i]));
            n = n - s.num * dfi * cof;
        }
        FactoredRF r(b_, std::move(n), std::move(e));
        detail::fac_strip(r);
        return r;
    }

    const FactorBasis& basis() const { return *b_; }

private:
    const FactorBasis* b_;
};

inline Mat<FactoredRF> fac_from(const FactorBasis& B, const Mat<RationalFunction>& M) {
    FactoredBackend bk(&B);
    Mat<FactoredRF> R(M.rows(), M.cols(), bk.zero());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j)
            if (!is_zero(M(i, j))) R(i, j) = fac_from(B, M(i, j));
    return R;
}

inline Mat<RationalFunction> fac_to(const Mat<FactoredRF>& M, const CtxPtr& ctx) {
    Mat<RationalFunction> R(M.rows(), M.cols(), RationalFunction::zero(ctx));
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j)
            if (!is_zero(M(i, j))) R(i, j) = fac_to(M(i, j));
    return R;
}

} // namespace weavecurv
