#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hackability/errors.hpp"
#include "hackability/linalg.hpp"
#include "hackability/rational.hpp"

namespace hackability::lp {

using core::Mat;
using core::Rational;
using core::Vec;

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Vec x;               // size n, meaningful when optimal
    Rational objective;  // c . x, meaningful when optimal
};

namespace detail {

struct Tableau {
    Mat rows;                 // m x (width + 1); last column is the rhs
    std::vector<int> basis;   // basic column per row
    int width = 0;

    void pivot(int row, int col) {
        Vec& r = rows[row];
        const Rational piv = r[col];
        for (auto& v : r) v /= piv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<int>(i) == row) continue;
            const Rational factor = rows[i][col];
            if (factor == 0) continue;
            for (int j = 0; j <= width; ++j) rows[i][j] -= factor * r[j];
        }
        basis[row] = col;
    }
};

// Bland's rule: lowest-index entering column with negative reduced cost,
// lowest basic index among minimum-ratio rows. Terminates without cycling.
inline LpStatus run_simplex(Tableau& t, const Vec& cost, int allowed_width,
                            std::uint64_t& pivots_left) {
    const int m = static_cast<int>(t.rows.size());
    for (;;) {
        int enter = -1;
        for (int j = 0; j < allowed_width && enter == -1; ++j) {
            Rational z = cost[j];
            for (int i = 0; i < m; ++i) {
                if (cost[t.basis[i]] == 0 || t.rows[i][j] == 0) continue;
                z -= cost[t.basis[i]] * t.rows[i][j];
            }
            if (z < 0) enter = j;
        }
        if (enter == -1) return LpStatus::optimal;

        int leave = -1;
        Rational best_ratio;
        for (int i = 0; i < m; ++i) {
            if (t.rows[i][enter] <= 0) continue;
            Rational ratio = t.rows[i][t.width] / t.rows[i][enter];
            if (leave == -1 || ratio < best_ratio ||
                (ratio == best_ratio && t.basis[i] < t.basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == -1) return LpStatus::unbounded;
        if (pivots_left == 0) throw CapExceeded("lp: pivot cap exhausted");
        --pivots_left;
        t.pivot(leave, enter);
    }
}

}  // namespace detail

// min c.x subject to a x = b, x >= 0. Dense two-phase exact simplex.
inline LpResult solve_lp(Mat a, Vec b, Vec c, std::uint64_t max_pivots = 200000) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(c.size());
    if (static_cast<int>(b.size()) != m)
        throw DimensionMismatch("solve_lp: rhs does not match row count");
    for (const auto& row : a)
        if (static_cast<int>(row.size()) != n)
            throw DimensionMismatch("solve_lp: row does not match cost vector");

    detail::Tableau t;
    t.width = n + m;  // artificial column per row
    t.rows.assign(m, Vec(t.width + 1, Rational(0)));
    t.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        const bool flip = b[i] < 0;
        for (int j = 0; j < n; ++j) t.rows[i][j] = flip ? -a[i][j] : a[i][j];
        t.rows[i][t.width] = flip ? -b[i] : b[i];
        t.rows[i][n + i] = 1;
        t.basis[i] = n + i;
    }

    std::uint64_t pivots_left = max_pivots;
    Vec phase1_cost(t.width, Rational(0));
    for (int j = n; j < t.width; ++j) phase1_cost[j] = 1;
    if (detail::run_simplex(t, phase1_cost, t.width, pivots_left) != LpStatus::optimal)
        throw Error("internal: phase-1 objective is bounded below by zero");

    Rational artificial_mass(0);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] >= n) artificial_mass += t.rows[i][t.width];
    if (artificial_mass > 0) return LpResult{LpStatus::infeasible, {}, Rational(0)};

    // Pivot leftover artificials out; rows with no real coefficients are
    // redundant and dropped.
    for (int i = static_cast<int>(t.rows.size()) - 1; i >= 0; --i) {
        if (t.basis[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n && col == -1; ++j)
            if (t.rows[i][j] != 0) col = j;
        if (col != -1) {
            t.pivot(i, col);
        } else {
            t.rows.erase(t.rows.begin() + i);
            t.basis.erase(t.basis.begin() + i);
        }
    }

    Vec phase2_cost(t.width, Rational(0));
    for (int j = 0; j < n; ++j) phase2_cost[j] = c[j];
    LpStatus status = detail::run_simplex(t, phase2_cost, n, pivots_left);
    if (status == LpStatus::unbounded) return LpResult{LpStatus::unbounded, {}, Rational(0)};

    LpResult result;
    result.status = LpStatus::optimal;
    result.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.basis[i] < n) result.x[t.basis[i]] = t.rows[i][t.width];
    for (int j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
    return result;
}

}  // namespace hackability::lp
