#pragma once

#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "jet.hpp"
#include "prime_field.hpp"
#include "rational.hpp"
#include "rational_function.hpp"
#include "variable_context.hpp"

namespace weavecurv {

// A backend fixes the scalar type the pipeline computes with and how a
// rational function enters that scalar world ("lifting").  Three
// backends cover the needs here: exact symbolic rational functions,
// Taylor jets with rational coefficients, and Taylor jets over a prime
// field for fast probabilistic checks.

struct SymbolicBackend {
    using Scalar = RationalFunction;

    CtxPtr ctx;
    // When set, every lift, derivative and normalization pass cancels
    // the polynomial gcd; entries stay small at the price of gcd work.
    bool eager_reduce = true;

    explicit SymbolicBackend(CtxPtr c, bool reduce_eagerly = true)
        : ctx(std::move(c)), eager_reduce(reduce_eagerly) {}

    Scalar lift(const RationalFunction& f) const {
        return eager_reduce ? f.reduced() : f;
    }
    Scalar zero() const { return RationalFunction::zero(ctx); }
    Scalar one() const { return RationalFunction::one(ctx); }
    Scalar from_long(long v) const { return RationalFunction::constant(ctx, Rat(v)); }
    Scalar normalize(const Scalar& s) const { return eager_reduce ? s.reduced() : s; }
    Scalar partial(std::size_t k, const Scalar& s) const {
        Scalar d = s.partial(k);
        return eager_reduce ? d.reduced() : d;
    }
    static std::string name() { return "symbolic"; }
};

// Plain-value backend: scalars are bare rational numbers with no
// symbolic or expansion structure.  Used for linear algebra on matrices
// that have already been evaluated at a point.
struct RatValueBackend {
    using Scalar = Rat;
    Rat zero() const { return Rat(0); }
    Rat one() const { return Rat(1); }
    Rat from_long(long v) const { return Rat(v); }
    Rat normalize(const Rat& a) const { return a; }
    static std::string name() { return "rational-value"; }
};

template <class C>
struct JetBackend {
    using Scalar = Jet<C>;

    CtxPtr ctx;
    typename Jet<C>::BasePtr base;
    int budget;

    JetBackend(CtxPtr c, std::vector<C> point, int order_budget)
        : ctx(std::move(c)),
          base(std::make_shared<const std::vector<C>>(std::move(point))),
          budget(order_budget) {
        if (base->size() != ctx->num_vars()) throw Error("base point has wrong arity");
    }

    Scalar lift(const RationalFunction& f) const { return lift_to_jet<C>(f, base, budget); }
    Scalar zero() const { return Jet<C>(ctx, base, budget); }
    Scalar one() const {
        return Jet<C>::constant(ctx, base, budget, scalar_from_long((*base)[0], 1));
    }
    Scalar from_long(long v) const {
        return Jet<C>::constant(ctx, base, budget, scalar_from_long((*base)[0], v));
    }
    Scalar normalize(const Scalar& s) const { return s; }
    Scalar partial(std::size_t k, const Scalar& s) const { return s.partial(k); }
    static std::string name() {
        if constexpr (std::is_same_v<C, Rat>) return "jet-rational";
        else return "jet-mod-p";
    }
};

using JetRatBackend = JetBackend<Rat>;
using JetFpBackend = JetBackend<Fp>;

// Rational sample point -> prime field point.
inline std::vector<Fp> to_fp_point(const std::vector<Rat>& point, std::uint64_t prime) {
    std::vector<Fp> out;
    out.reserve(point.size());
    for (const Rat& q : point) out.push_back(Fp::from_rat(q, prime));
    return out;
}

} // namespace weavecurv
