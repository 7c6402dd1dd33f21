#pragma once

// Flatness certification.  Runs the kernel/connection/curvature pipeline
// at a chosen certification level and packages the outcome as plain data:
// a zero/nonzero pattern per curvature matrix, witnesses for the nonzero
// entries, and a verdict whose name states how much was proved.
//
//   - Symbolic: entries are exact rational functions; an all-zero result
//     certifies flatness identically.
//   - PointRational / PointPrimeField: entries are evaluated in truncated
//     Taylor arithmetic at several independently sampled generic points;
//     an all-zero result certifies flatness at those points only, while a
//     single nonzero entry at any point refutes flatness outright.

#include <cstdint>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "connection.hpp"
#include "errors.hpp"
#include "prime_field.hpp"
#include "prolong.hpp"
#include "scalar.hpp"
#include "web.hpp"

namespace weavecurv {

enum class Verdict { FlatCertified, FlatAtSampledPoints, NotFlat };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::FlatCertified: return "FlatCertified";
        case Verdict::FlatAtSampledPoints: return "FlatAtSampledPoints";
        default: return "NotFlat";
    }
}

// How the curvature entries are evaluated.
enum class CertLevel { Symbolic, PointRational, PointPrimeField };

inline const char* to_string(CertLevel l) {
    switch (l) {
        case CertLevel::Symbolic: return "symbolic";
        case CertLevel::PointRational: return "point-rational";
        default: return "point-prime-field";
    }
}

struct CertifyOptions {
    CertLevel level = CertLevel::PointPrimeField;
    int samples = 5;                    // number of independent base points
    std::uint64_t seed = 1;             // master seed; all sampling derives from it
    std::uint64_t prime = kDefaultPrime;
    std::map<std::size_t, Rat> pinned;  // variables frozen during sampling
    int extra_order = 0;                // raises the initial jet order budget
};

// Location of a nonzero curvature entry.  Row/column are 1-based;
// sample is the 0-based index of the base point, or -1 when the entry
// is nonzero as a rational function.
struct Witness {
    int k = 0, m = 0;
    int row = 0, col = 0;
    int sample = -1;
};

// Aggregate zero pattern of one curvature matrix: a cell is marked
// nonzero if the entry is nonzero symbolically, or at any sampled point.
struct PairPattern {
    int k = 0, m = 0;  // 1-based coordinate labels, k < m
    int ro = 0;
    std::vector<std::uint8_t> nonzero;  // row-major ro x ro

    bool at(int i, int j) const {  // 0-based
        return nonzero[static_cast<std::size_t>(i) * static_cast<std::size_t>(ro) +
                       static_cast<std::size_t>(j)] != 0;
    }
    bool any() const {
        for (std::uint8_t b : nonzero)
            if (b) return true;
        return false;
    }
};

struct CurvatureReport {
    int n = 0, d = 0, h0 = 0, ro = 0;
    std::vector<int> pivots;  // 1-based column indices
    CertLevel level = CertLevel::Symbolic;
    std::string backend;  // scalar backend that produced the entries
    Verdict verdict = Verdict::NotFlat;
    std::vector<PairPattern> pattern;  // pairs in (1,2), (1,3), ... order
    std::vector<Witness> witnesses;    // first nonzero entry per pair and point

    // Point-evaluation bookkeeping (empty at the symbolic level).
    std::uint64_t seed = 0;
    std::uint64_t prime = 0;  // nonzero only for the prime-field level
    std::vector<std::uint64_t> sample_seeds;
    std::vector<std::vector<Rat>> points;
    std::vector<std::uint8_t> sample_flat;  // per-point all-entries-zero flag

    // Full matrices, kept only at the symbolic level.
    std::vector<Mat<RationalFunction>> Ko;

    bool flat() const { return verdict != Verdict::NotFlat; }
};

namespace detail {

// Fold one batch of curvature matrices into the aggregate pattern and
// witness list.  Returns true when every entry of the batch is zero.
template <class BK>
bool scan_curvature(const std::vector<CurvaturePair<BK>>& pairs, int ro, int sample,
                    CurvatureReport& rep) {
    if (rep.pattern.empty())
        for (const auto& p : pairs)
            rep.pattern.push_back(PairPattern{
                p.k, p.m, ro,
                std::vector<std::uint8_t>(static_cast<std::size_t>(ro) *
                                              static_cast<std::size_t>(ro),
                                          0)});
    bool all_zero = true;
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto& Ko = pairs[q].Ko;
        bool witnessed = false;
        for (std::size_t i = 0; i < Ko.rows(); ++i) {
            for (std::size_t j = 0; j < Ko.cols(); ++j) {
                if (is_zero(Ko(i, j))) continue;
                all_zero = false;
                rep.pattern[q].nonzero[i * static_cast<std::size_t>(ro) + j] = 1;
                if (!witnessed) {
                    rep.witnesses.push_back(Witness{pairs[q].k, pairs[q].m,
                                                    static_cast<int>(i) + 1,
                                                    static_cast<int>(j) + 1, sample});
                    witnessed = true;
                }
            }
        }
    }
    return all_zero;
}

// Evaluate all curvature matrices at one base point in truncated Taylor
// arithmetic with coefficients C, retrying with a larger order budget if
// a division eats too many orders.  Returns true when all entries vanish.
template <class C>
bool curvature_at_point(const WebSpec& w, const std::vector<Rat>& pt, const CertifyOptions& opt,
                        int sample, CurvatureReport& rep) {
    const int h0 = w.d() - w.n();
    const int cap = h0 + 3;
    for (int budget = h0 + 1 + opt.extra_order; budget <= cap; ++budget) {
        try {
            JetBackend<C> bk = [&] {
                if constexpr (std::is_same_v<C, Rat>)
                    return JetBackend<Rat>(w.ctx(), pt, budget);
                else
                    return JetBackend<Fp>(w.ctx(), to_fp_point(pt, opt.prime), budget);
            }();
            if (rep.backend.empty()) rep.backend = bk.name();
            auto cd = build_connection(w, bk);
            return scan_curvature(curvature_matrices(cd), rep.ro, sample, rep);
        } catch (const JetOrderExhausted&) {
            if (budget >= cap) throw;
        }
    }
    throw JetOrderExhausted();
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    return mix64(master + 0x9E3779B97F4A7C15ULL * counter);
}

} // namespace detail

// Full pipeline at the requested certification level.  Deterministic
// given (web, options).  At the point levels, base points are drawn from
// seeds derived from options.seed; points where the pipeline degenerates
// (bad pivots, singular principal part, unlucky prime reduction) are
// skipped and resampled, and every surviving point must report the same
// all-zero outcome for the flat verdict.
inline CurvatureReport check_max_rank(const WebSpec& w, const CertifyOptions& opt = {}) {
    CurvatureReport rep;
    rep.n = w.n();
    rep.d = w.d();
    rep.h0 = w.d() - w.n();
    rep.pivots = pivot_columns(w.n(), w.d());
    rep.ro = static_cast<int>(rep.pivots.size());
    rep.level = opt.level;

    if (opt.level == CertLevel::Symbolic) {
        const SymbolicBackend bk(w.ctx());
        rep.backend = bk.name();
        auto cd = build_connection(w, bk);
        auto pairs = curvature_matrices(cd);
        const bool all_zero = detail::scan_curvature(pairs, rep.ro, -1, rep);
        for (auto& p : pairs) rep.Ko.push_back(std::move(p.Ko));
        rep.verdict = all_zero ? Verdict::FlatCertified : Verdict::NotFlat;
    } else {
        if (opt.samples < 1) throw Error("need at least one sample point");
        rep.seed = opt.seed;
        if (opt.level == CertLevel::PointPrimeField) rep.prime = opt.prime;
        bool all_zero = true;
        std::uint64_t counter = 0;
        std::string last_failure;
        for (int s = 0; s < opt.samples; ++s) {
            for (;;) {
                if (counter >= 100 + static_cast<std::uint64_t>(opt.samples))
                    throw SingularPoint(
                        "no usable sample point after " + std::to_string(counter) +
                        " attempts" +
                        (last_failure.empty() ? "" : "; last failure: " + last_failure));
                const std::uint64_t ds = detail::derive_seed(opt.seed, ++counter);
                std::vector<Rat> pt;
                try {
                    pt = w.sample_point(ds, opt.pinned);
                } catch (const SingularPoint& e) {
                    last_failure = e.what();
                    continue;
                }
                try {
                    const bool flat_here =
                        opt.level == CertLevel::PointRational
                            ? detail::curvature_at_point<Rat>(w, pt, opt, s, rep)
                            : detail::curvature_at_point<Fp>(w, pt, opt, s, rep);
                    rep.sample_seeds.push_back(ds);
                    rep.points.push_back(std::move(pt));
                    rep.sample_flat.push_back(flat_here ? 1 : 0);
                    all_zero = all_zero && flat_here;
                    break;
                } catch (const BadPivots& e) {
                    last_failure = e.what();
                } catch (const RankDeficient& e) {
                    last_failure = e.what();
                } catch (const SingularMatrix& e) {
                    last_failure = e.what();
                } catch (const DivisionByZero& e) {
                    last_failure = e.what();
                }
            }
        }
        rep.verdict = all_zero ? Verdict::FlatAtSampledPoints : Verdict::NotFlat;
    }

    if (rep.verdict != Verdict::NotFlat) {
        // A flat verdict claims the solution space realizes the dimension
        // bound, so the pivot count must reproduce it.
        const RankBoundTable rb = rank_bound(rep.n, rep.d);
        if (static_cast<std::uint64_t>(rep.ro) != rb.bound)
            throw Error("pivot count does not match the rank bound");
    }
    return rep;
}

inline CurvatureReport check_max_rank(const WebSpec& w, CertLevel level, int samples = 5,
                                      std::uint64_t seed = 1) {
    CertifyOptions o;
    o.level = level;
    o.samples = samples;
    o.seed = seed;
    return check_max_rank(w, o);
}

// --- Sub-web nesting -----------------------------------------------------
//
// For a sub-web keeping a prefix of the field list, the solution bundle
// of the sub-web sits inside the ambient one as the span of the leading
// pivot coordinates, and the ambient connection restricts to the
// sub-web's own connection.  Concretely: the sub-web's A'(k) must equal
// the leading ro' x ro' block of the ambient A(k), the complementary
// lower-left (ro - ro') x ro' block of the ambient A(k) must vanish, and
// the sub-web's curvature is computed on its own.

struct SubwebNestingReport {
    std::vector<int> keep;
    int ro_ambient = 0;
    int ro_sub = 0;
    bool block_matches = false;    // A'(k) == leading block of A(k) for every k
    bool complement_zero = false;  // lower-left block of every A(k) vanishes
    bool sub_flat = false;         // sub-web curvature identically zero
    bool ok() const { return block_matches && complement_zero && sub_flat; }
};

inline SubwebNestingReport subweb_nesting_check(const ConnectionData<SymbolicBackend>& ambient,
                                                const std::vector<int>& keep) {
    const WebSpec sub = ambient.web.subweb(keep);
    const SymbolicBackend& bk = ambient.backend;
    const auto sub_cd = build_connection(sub, bk);
    SubwebNestingReport out;
    out.keep = keep;
    out.ro_ambient = ambient.ro;
    out.ro_sub = sub_cd.ro;

    const int n = ambient.web.n();
    const int rs = sub_cd.ro;
    out.block_matches = true;
    out.complement_zero = true;
    for (int k = 0; k < n; ++k) {
        const auto& A = ambient.A[static_cast<std::size_t>(k)];
        const auto& As = sub_cd.A[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < static_cast<std::size_t>(rs); ++i)
            for (std::size_t j = 0; j < static_cast<std::size_t>(rs); ++j)
                if (!is_zero(bk.normalize(A(i, j) - As(i, j)))) out.block_matches = false;
        for (std::size_t i = static_cast<std::size_t>(rs);
             i < static_cast<std::size_t>(ambient.ro); ++i)
            for (std::size_t j = 0; j < static_cast<std::size_t>(rs); ++j)
                if (!is_zero(A(i, j))) out.complement_zero = false;
    }

    out.sub_flat = true;
    for (const auto& p : curvature_matrices(sub_cd))
        if (!mat_is_zero(p.Ko)) out.sub_flat = false;
    return out;
}

inline SubwebNestingReport subweb_nesting_check(const WebSpec& w, const std::vector<int>& keep) {
    const SymbolicBackend bk(w.ctx());
    const auto cd = build_connection(w, bk);
    return subweb_nesting_check(cd, keep);
}

} // namespace weavecurv
