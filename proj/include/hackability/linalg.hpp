#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hackability/errors.hpp"
#include "hackability/rational.hpp"

namespace hackability::core {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

namespace detail {

// Clears denominators row by row; row scaling preserves rank and solution sets.
inline std::vector<std::vector<Int>> integer_rows(const Mat& rows) {
    std::vector<std::vector<Int>> out;
    out.reserve(rows.size());
    for (const Vec& row : rows) {
        Int scale = 1;
        for (const Rational& q : row) scale = lcm(scale, denominator(q));
        std::vector<Int> irow;
        irow.reserve(row.size());
        for (const Rational& q : row) irow.push_back(numerator(q) * (scale / denominator(q)));
        out.push_back(std::move(irow));
    }
    return out;
}

inline Int exact_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (q * b != a) throw Error("internal: fraction-free elimination produced a non-integer");
    return q;
}

}  // namespace detail

// Exact rank by fraction-free (Bareiss) elimination. Empty input has rank 0.
inline int rank_of_vectors(const Mat& vecs) {
    if (vecs.empty()) return 0;
    const std::size_t width = vecs[0].size();
    for (const Vec& v : vecs)
        if (v.size() != width)
            throw DimensionMismatch("rank_of_vectors: vectors have unequal lengths");
    auto m = detail::integer_rows(vecs);
    const std::size_t n = m.size();
    std::size_t r = 0;
    Int prev = 1;
    for (std::size_t col = 0; col < width && r < n; ++col) {
        std::size_t pivot = r;
        for (std::size_t i = r; i < n; ++i) {
            if (m[i][col] == 0) continue;
            if (m[pivot][col] == 0 || abs(m[i][col]) > abs(m[pivot][col])) pivot = i;
        }
        if (m[pivot][col] == 0) continue;
        std::swap(m[r], m[pivot]);
        for (std::size_t i = r + 1; i < n; ++i) {
            for (std::size_t j = col + 1; j < width; ++j)
                m[i][j] = detail::exact_div(m[r][col] * m[i][j] - m[i][col] * m[r][j], prev);
            m[i][col] = 0;
        }
        prev = m[r][col];
        ++r;
    }
    return static_cast<int>(r);
}

// Rank of {p_i - p_0}: the number of independent directions the points span.
inline int rank_of_differences(const Mat& points) {
    if (points.size() <= 1) return 0;
    Mat diffs;
    diffs.reserve(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].size() != points[0].size())
            throw DimensionMismatch("rank_of_differences: points have unequal lengths");
        Vec d(points[0].size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = points[i][k] - points[0][k];
        diffs.push_back(std::move(d));
    }
    return rank_of_vectors(diffs);
}

// Solves a nonsingular square system exactly: fraction-free forward elimination
// with partial pivoting, rational back-substitution.
inline Vec solve_linear(const Mat& a, const Vec& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw DimensionMismatch("solve_linear: matrix/vector size mismatch");
    Mat aug(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw DimensionMismatch("solve_linear: matrix is not square");
        aug[i] = a[i];
        aug[i].push_back(b[i]);
    }
    auto m = detail::integer_rows(aug);
    Int prev = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t i = col; i < n; ++i) {
            if (m[i][col] == 0) continue;
            if (m[pivot][col] == 0 || abs(m[i][col]) > abs(m[pivot][col])) pivot = i;
        }
        if (m[pivot][col] == 0) throw Error("solve_linear: singular system");
        std::swap(m[col], m[pivot]);
        for (std::size_t i = col + 1; i < n; ++i) {
            for (std::size_t j = col + 1; j <= n; ++j)
                m[i][j] = detail::exact_div(m[col][col] * m[i][j] - m[i][col] * m[col][j], prev);
            m[i][col] = 0;
        }
        prev = m[col][col];
    }
    Vec x(n);
    for (std::size_t k = n; k-- > 0;) {
        Rational acc(m[k][n]);
        for (std::size_t j = k + 1; j < n; ++j) acc -= Rational(m[k][j]) * x[j];
        x[k] = acc / Rational(m[k][k]);
    }
    return x;
}

}  // namespace hackability::core
