#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cmaccm/errors.hpp"

namespace cmaccm {

namespace lp_detail {

// Phase-1 simplex feasibility for a small equality system A x = b, x >= 0,
// with m rows given as dense columns. Dense tableau, Bland's rule.
inline bool phase1_feasible(std::vector<double>& t, std::size_t m, std::size_t ns,
                            double feas_tol) {
    const std::size_t ncols = ns + m;
    const double eps = 1e-11;
    auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * (ncols + 1) + c]; };
    const std::size_t rhs = ncols;

    // Make rhs non-negative, then install the artificial identity basis.
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        if (at(r, rhs) < 0.0)
            for (std::size_t c = 0; c <= ncols; ++c) at(r, c) = -at(r, c);
        at(r, ns + r) = 1.0;
        basis[r] = ns + r;
    }
    // Reduced costs for minimizing the artificial sum.
    for (std::size_t c = 0; c < ns; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m; ++r) s += at(r, c);
        at(m, c) = -s;
    }
    double obj = 0.0;
    for (std::size_t r = 0; r < m; ++r) obj += at(r, rhs);
    at(m, rhs) = -obj;

    const std::size_t max_iters = 50 * (ncols + m);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        std::size_t enter = ncols;
        for (std::size_t c = 0; c < ncols; ++c)
            if (at(m, c) < -eps) {
                enter = c;
                break;
            }
        if (enter == ncols) break;

        std::size_t leave = m;
        double best_ratio = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            if (at(r, enter) > eps) {
                double ratio = at(r, rhs) / at(r, enter);
                if (leave == m || ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps && basis[r] < basis[leave])) {
                    leave = r;
                    best_ratio = ratio;
                }
            }
        }
        if (leave == m) break;

        const double piv = at(leave, enter);
        for (std::size_t c = 0; c <= ncols; ++c) at(leave, c) /= piv;
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == leave) continue;
            const double f = at(r, enter);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= ncols; ++c) at(r, c) -= f * at(leave, c);
        }
        basis[leave] = enter;
    }
    return -at(m, rhs) <= feas_tol;
}

}  // namespace lp_detail

// Feasibility of the downward-closed-hull membership program:
//
//   exists lambda >= 0 :  sum_i lambda_i = 1,
//                         sum_i lambda_i * v_i >= q   (componentwise, 3-D)
//
// Rows are few (4) and columns are the candidate vertices, so a dense
// tableau with Bland's rule is plenty.
inline bool convex_dominating_combination_exists(const std::vector<std::array<double, 3>>& verts,
                                                 const std::array<double, 3>& q,
                                                 double feas_tol = 1e-9) {
    const std::size_t n = verts.size();
    if (n == 0) return false;

    // Cheap screens before setting up the tableau.
    {
        bool all_free = true;
        for (int k = 0; k < 3; ++k)
            if (q[k] > 0.0) all_free = false;
        if (all_free) return true;  // any convex combination is >= 0 >= q
        for (int k = 0; k < 3; ++k) {
            double mx = verts[0][k];
            for (const auto& v : verts) mx = v[k] > mx ? v[k] : mx;
            if (q[k] > mx + feas_tol) return false;
        }
    }

    constexpr std::size_t m = 4;              // 3 dominance rows + convexity row
    const std::size_t ns = n + 3;             // structural: lambdas + surpluses
    const std::size_t ncols = ns + m;         // + artificials

    // Row-major tableau, m+1 rows, ncols+1 columns (last column = rhs).
    std::vector<double> t((m + 1) * (ncols + 1), 0.0);
    auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * (ncols + 1) + c]; };
    const std::size_t rhs = ncols;

    // Dominance rows: sum lambda_i v_i[k] - s_k = q[k].
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < n; ++i) at(k, i) = verts[i][k];
        at(k, n + k) = -1.0;
        at(k, rhs) = q[k];
    }
    // Convexity row: sum lambda_i = 1.
    for (std::size_t i = 0; i < n; ++i) at(3, i) = 1.0;
    at(3, rhs) = 1.0;

    return lp_detail::phase1_feasible(t, m, ns, feas_tol);
}

// Feasibility of exact convex representation:
//
//   exists lambda >= 0 :  sum_i lambda_i = 1,  sum_i lambda_i * v_i = p
//
// Used to prune non-extreme boundary points out of hull vertex sets.
inline bool convex_combination_exists(const std::vector<std::array<double, 3>>& verts,
                                      const std::array<double, 3>& p, double feas_tol = 1e-9) {
    const std::size_t n = verts.size();
    if (n == 0) return false;
    constexpr std::size_t m = 4;  // 3 coordinate rows + convexity row
    const std::size_t ns = n;
    const std::size_t ncols = ns + m;

    std::vector<double> t((m + 1) * (ncols + 1), 0.0);
    auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * (ncols + 1) + c]; };
    const std::size_t rhs = ncols;
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < n; ++i) at(k, i) = verts[i][k];
        at(k, rhs) = p[k];
    }
    for (std::size_t i = 0; i < n; ++i) at(3, i) = 1.0;
    at(3, rhs) = 1.0;
    return lp_detail::phase1_feasible(t, m, ns, feas_tol);
}

}  // namespace cmaccm
