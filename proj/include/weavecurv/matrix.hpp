#pragma once

#include <utility>
#include <vector>

#include "errors.hpp"
#include "poly_gcd.hpp"
#include "rational_function.hpp"

namespace weavecurv {

// Dense matrix over an arbitrary scalar type.  Scalars need not be
// default-constructible (they may carry a context), so construction
// takes a fill element.  Indices are 0-based here; the 1-based layout
// of the prolonged systems lives in the callers.
template <class S>
class Mat {
public:
    Mat(std::size_t rows, std::size_t cols, const S& fill)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    void swap_rows(std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap(a_[i * cols_ + j], a_[k * cols_ + j]);
    }

    Mat submatrix(const std::vector<std::size_t>& row_ids,
                  const std::vector<std::size_t>& col_ids, const S& fill) const {
        Mat r(row_ids.size(), col_ids.size(), fill);
        for (std::size_t i = 0; i < row_ids.size(); ++i)
            for (std::size_t j = 0; j < col_ids.size(); ++j)
                r(i, j) = (*this)(row_ids[i], col_ids[j]);
        return r;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (std::size_t i = 0; i < a.a_.size(); ++i)
            if (!(a.a_[i] == b.a_[i])) return false;
        return true;
    }

private:
    std::size_t rows_, cols_;
    std::vector<S> a_;
};

template <class S, class BK>
Mat<S> mat_mul(const Mat<S>& A, const Mat<S>& B, const BK& backend) {
    if (A.cols() != B.rows()) throw Error("matrix product shape mismatch");
    Mat<S> R(A.rows(), B.cols(), backend.zero());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t k = 0; k < A.cols(); ++k) {
            if (is_zero(A(i, k))) continue;
            for (std::size_t j = 0; j < B.cols(); ++j) {
                if (is_zero(B(k, j))) continue;
                R(i, j) = R(i, j) + A(i, k) * B(k, j);
            }
        }
    for (std::size_t i = 0; i < R.rows(); ++i)
        for (std::size_t j = 0; j < R.cols(); ++j) R(i, j) = backend.normalize(R(i, j));
    return R;
}

template <class S>
Mat<S> mat_add(const Mat<S>& A, const Mat<S>& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw Error("matrix sum shape mismatch");
    Mat<S> R = A;
    for (std::size_t i = 0; i < R.rows(); ++i)
        for (std::size_t j = 0; j < R.cols(); ++j) R(i, j) = R(i, j) + B(i, j);
    return R;
}

template <class S>
Mat<S> mat_sub(const Mat<S>& A, const Mat<S>& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw Error("matrix diff shape mismatch");
    Mat<S> R = A;
    for (std::size_t i = 0; i < R.rows(); ++i)
        for (std::size_t j = 0; j < R.cols(); ++j) R(i, j) = R(i, j) - B(i, j);
    return R;
}

template <class S, class BK>
Mat<S> mat_neg(const Mat<S>& A, const BK& backend) {
    Mat<S> R(A.rows(), A.cols(), backend.zero());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) R(i, j) = -A(i, j);
    return R;
}

template <class S, class BK>
Mat<S> entrywise_partial(std::size_t k, const Mat<S>& A, const BK& backend) {
    Mat<S> R(A.rows(), A.cols(), backend.zero());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) R(i, j) = backend.partial(k, A(i, j));
    return R;
}

template <class S>
bool mat_is_zero(const Mat<S>& A) {
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (!is_zero(A(i, j))) return false;
    return true;
}

// Pivot preference: among the invertible candidates in a column the
// smallest entry wins, which curbs growth of intermediate entries when
// scalars are rational functions.  Value-like scalars all weigh the
// same, so the topmost candidate is taken as before.
template <class S>
inline std::size_t pivot_weight(const S&) { return 1; }

inline std::size_t pivot_weight(const RationalFunction& f) {
    return f.num().num_terms() + f.den().num_terms();
}

// Row echelon by Gaussian elimination with exact division.  Pivots are
// the lightest invertible entries scanning down each column; over jets
// invertibility means a nonzero value at the base point, so the
// computed rank is the rank of the order-0 evaluation.
template <class S, class BK>
int rank_of(Mat<S> M, const BK& backend) {
    const std::size_t rows = M.rows(), cols = M.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = rows, best = 0;
        for (std::size_t i = r; i < rows; ++i) {
            if (!is_unit(M(i, c))) continue;
            const std::size_t w = pivot_weight(M(i, c));
            if (p == rows || w < best) { p = i; best = w; }
            if (best <= 2) break;
        }
        if (p == rows) continue;
        M.swap_rows(p, r);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (is_zero(M(i, c))) continue;
            S f = backend.normalize(M(i, c) / M(r, c));
            M(i, c) = backend.zero();
            for (std::size_t j = c + 1; j < cols; ++j) {
                if (is_zero(M(r, j))) continue;
                M(i, j) = backend.normalize(M(i, j) - f * M(r, j));
            }
        }
        ++r;
    }
    return static_cast<int>(r);
}

// Solve A X = B for square invertible A by Gauss-Jordan elimination.
template <class S, class BK>
Mat<S> solve_square(Mat<S> A, Mat<S> Bm, const BK& backend) {
    if (A.rows() != A.cols()) throw Error("solve_square needs a square matrix");
    if (A.rows() != Bm.rows()) throw Error("right-hand side shape mismatch");
    const std::size_t n = A.rows(), m = Bm.cols();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = n, best = 0;
        for (std::size_t i = c; i < n; ++i) {
            if (!is_unit(A(i, c))) continue;
            const std::size_t w = pivot_weight(A(i, c));
            if (p == n || w < best) { p = i; best = w; }
            if (best <= 2) break;
        }
        if (p == n) throw SingularMatrix();
        A.swap_rows(p, c);
        Bm.swap_rows(p, c);
        S piv = A(c, c);
        A(c, c) = backend.one();
        for (std::size_t j = c + 1; j < n; ++j)
            A(c, j) = backend.normalize(A(c, j) / piv);
        for (std::size_t j = 0; j < m; ++j)
            Bm(c, j) = backend.normalize(Bm(c, j) / piv);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || is_zero(A(i, c))) continue;
            S f = A(i, c);
            A(i, c) = backend.zero();
            for (std::size_t j = c + 1; j < n; ++j) {
                if (is_zero(A(c, j))) continue;
                A(i, j) = backend.normalize(A(i, j) - f * A(c, j));
            }
            for (std::size_t j = 0; j < m; ++j) {
                if (is_zero(Bm(c, j))) continue;
                Bm(i, j) = backend.normalize(Bm(i, j) - f * Bm(c, j));
            }
        }
    }
    return Bm;
}

// Solve A x = b exactly for a system with at least as many equations as
// unknowns and full column rank.  Rows are eliminated with row
// exchanges; once the unknowns are determined, every leftover equation
// is verified.  Throws SingularMatrix when the columns are dependent and
// InconsistentSystem, carrying the 0-based index of the offending input
// row, when an unused equation is violated.
template <class S, class BK>
std::vector<S> solve_overdetermined(Mat<S> A, std::vector<S> b, const BK& backend) {
    const std::size_t rows = A.rows(), cols = A.cols();
    if (b.size() != rows) throw Error("right-hand side shape mismatch");
    if (rows < cols) throw Error("system has fewer equations than unknowns");
    std::vector<std::size_t> orig(rows);
    for (std::size_t i = 0; i < rows; ++i) orig[i] = i;
    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t p = rows, best = 0;
        for (std::size_t i = c; i < rows; ++i) {
            if (!is_unit(A(i, c))) continue;
            const std::size_t w = pivot_weight(A(i, c));
            if (p == rows || w < best) { p = i; best = w; }
            if (best <= 2) break;
        }
        if (p == rows) throw SingularMatrix("columns are linearly dependent");
        A.swap_rows(p, c);
        std::swap(b[p], b[c]);
        std::swap(orig[p], orig[c]);
        S piv = A(c, c);
        A(c, c) = backend.one();
        for (std::size_t j = c + 1; j < cols; ++j) A(c, j) = backend.normalize(A(c, j) / piv);
        b[c] = backend.normalize(b[c] / piv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == c || is_zero(A(i, c))) continue;
            S f = A(i, c);
            A(i, c) = backend.zero();
            for (std::size_t j = c + 1; j < cols; ++j) {
                if (is_zero(A(c, j))) continue;
                A(i, j) = backend.normalize(A(i, j) - f * A(c, j));
            }
            if (!is_zero(b[c])) b[i] = backend.normalize(b[i] - f * b[c]);
        }
    }
    for (std::size_t i = cols; i < rows; ++i)
        if (!is_zero(b[i])) throw InconsistentSystem(orig[i]);
    return std::vector<S>(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(cols));
}

// Kernel basis of a full-row-rank matrix M, normalized so that the rows
// selected by `pivot_cols` (1-based column numbers of M, which index
// rows of the kernel matrix) form the identity.  The complementary
// columns of M must form an invertible square block; otherwise the
// pivot choice is rejected.
template <class S, class BK>
Mat<S> kernel_with_pivots(const Mat<S>& M, const std::vector<int>& pivot_cols, const BK& backend) {
    const std::size_t rows = M.rows(), cols = M.cols();
    if (pivot_cols.size() != cols - rows)
        throw BadPivots("pivot count must equal column count minus row count");
    std::vector<char> is_pivot(cols, 0);
    for (int pc : pivot_cols) {
        if (pc < 1 || static_cast<std::size_t>(pc) > cols)
            throw BadPivots("pivot column out of range");
        if (is_pivot[static_cast<std::size_t>(pc - 1)])
            throw BadPivots("duplicate pivot column");
        is_pivot[static_cast<std::size_t>(pc - 1)] = 1;
    }
    std::vector<std::size_t> comp;
    for (std::size_t j = 0; j < cols; ++j)
        if (!is_pivot[j]) comp.push_back(j);

    Mat<S> N(cols, pivot_cols.size(), backend.zero());
    for (std::size_t j = 0; j < pivot_cols.size(); ++j)
        N(static_cast<std::size_t>(pivot_cols[j] - 1), j) = backend.one();
    if (rows == 0) return N;

    std::vector<std::size_t> all_rows(rows);
    for (std::size_t i = 0; i < rows; ++i) all_rows[i] = i;
    std::vector<std::size_t> piv_ids;
    piv_ids.reserve(pivot_cols.size());
    for (int pc : pivot_cols) piv_ids.push_back(static_cast<std::size_t>(pc - 1));

    Mat<S> Y = M.submatrix(all_rows, comp, backend.zero());
    Mat<S> R = M.submatrix(all_rows, piv_ids, backend.zero());
    Mat<S> X(0, 0, backend.zero());
    try {
        X = solve_square(Y, R, backend);
    } catch (const SingularMatrix&) {
        throw BadPivots("complementary columns are singular for this pivot choice");
    }
    for (std::size_t i = 0; i < comp.size(); ++i)
        for (std::size_t j = 0; j < pivot_cols.size(); ++j)
            N(comp[i], j) = backend.normalize(-X(i, j));
    return N;
}

// Fraction-free rank over rational functions: clear denominators per
// row, then one-step Bareiss elimination on the polynomial matrix.
// Useful as an independent cross-check of the division-based path.
inline int rank_fraction_free(const Mat<RationalFunction>& M) {
    const std::size_t rows = M.rows(), cols = M.cols();
    if (rows == 0 || cols == 0) return 0;
    const CtxPtr& ctx = M(0, 0).ctx();
    Poly one = Poly::constant(ctx, mpq_class(1));
    Mat<Poly> P(rows, cols, Poly::zero(ctx));
    for (std::size_t i = 0; i < rows; ++i) {
        Poly lcm = one;
        for (std::size_t j = 0; j < cols; ++j) {
            const Poly& d = M(i, j).den();
            Poly g = poly_gcd(lcm, d);
            lcm = lcm * *d.try_divide(g);
        }
        for (std::size_t j = 0; j < cols; ++j) {
            const RationalFunction& f = M(i, j);
            P(i, j) = f.num() * *lcm.try_divide(f.den());
        }
    }

    Poly prev = one;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pvt = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (!P(i, c).is_zero()) { pvt = i; break; }
        }
        if (pvt == rows) continue;
        P.swap_rows(pvt, r);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                Poly t = P(r, c) * P(i, j) - P(i, c) * P(r, j);
                auto q = t.try_divide(prev);
                if (!q) throw Error("fraction-free elimination: inexact division");
                P(i, j) = std::move(*q);
            }
            P(i, c) = Poly::zero(ctx);
        }
        prev = P(r, c);
        ++r;
    }
    return static_cast<int>(r);
}

} // namespace weavecurv
