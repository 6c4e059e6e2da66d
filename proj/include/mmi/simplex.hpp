#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mmi {

struct InfeasibleLP : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnboundedObjective : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr double kLpTol = 1e-9;

// Dense two-phase simplex for  max c.x  s.t.  A x <= b, x >= 0.
// Bland's rule throughout: tiny degenerate problems must not cycle, and the
// pivot order must be deterministic.
struct SimplexTableau {
    std::size_t m, n;                    // constraints, structural vars
    std::vector<std::vector<double>> t;  // (m+1) x (n+m+1) tableau
    std::vector<std::size_t> basis;

    SimplexTableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                   const std::vector<double>& c)
        : m(A.size()), n(c.size()), t(m + 1, std::vector<double>(n + m + 1, 0.0)), basis(m) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
            t[i][n + i] = 1.0;
            t[i][n + m] = b[i];
            basis[i] = n + i;
        }
        for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];
    }

    void pivot(std::size_t row, std::size_t col) {
        double p = t[row][col];
        for (auto& v : t[row]) v /= p;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == row) continue;
            double f = t[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[row][j];
        }
        basis[row] = col;
    }

    // Returns false when unbounded.
    bool run() {
        while (true) {
            std::size_t col = n + m;
            for (std::size_t j = 0; j < n + m; ++j)
                if (t[m][j] < -kLpTol) {  // Bland: lowest eligible index
                    col = j;
                    break;
                }
            if (col == n + m) return true;
            std::size_t row = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i)
                if (t[i][col] > kLpTol) {
                    double ratio = t[i][n + m] / t[i][col];
                    if (ratio < best - kLpTol ||
                        (ratio < best + kLpTol && (row == m || basis[i] < basis[row]))) {
                        best = ratio;
                        row = i;
                    }
                }
            if (row == m) return false;
            pivot(row, col);
        }
    }
};

}  // namespace detail

struct SimplexSolution {
    double value;
    std::vector<double> x;
};

// max c.x  s.t.  A x <= b, x >= 0. Handles negative b via a phase-1 pass
// driving the most-violated slack out of the basis.
inline SimplexSolution simplex_max(const std::vector<std::vector<double>>& A,
                                   const std::vector<double>& b, const std::vector<double>& c) {
    detail::SimplexTableau tab(A, b, c);
    const std::size_t m = tab.m, n = tab.n;
    // Phase 1: if some b_i < 0, pivot toward feasibility (dual-style Bland walk).
    while (true) {
        std::size_t row = m;
        for (std::size_t i = 0; i < m; ++i)
            if (tab.t[i][n + m] < -detail::kLpTol) {
                row = i;
                break;
            }
        if (row == m) break;
        std::size_t col = n + m;
        for (std::size_t j = 0; j < n + m; ++j)
            if (tab.t[row][j] < -detail::kLpTol) {
                col = j;
                break;
            }
        if (col == n + m) throw InfeasibleLP("simplex_max: infeasible constraints");
        tab.pivot(row, col);
    }
    if (!tab.run()) throw UnboundedObjective("simplex_max: unbounded objective");
    SimplexSolution sol;
    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] < n) sol.x[tab.basis[i]] = tab.t[i][n + m];
    sol.value = tab.t[m][n + m];
    return sol;
}

// A maximin program: maximize the pointwise minimum of linear pieces over
// {x : A x <= b}, with free variables.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<std::vector<double>> constraint_coeffs;  // rows of A
    std::vector<double> constraint_bounds;               // b
    std::vector<std::vector<double>> pieces;             // linear functionals (coeff vectors)
    std::vector<double> piece_offsets;                   // constant term per piece
};

struct MaximinSolution {
    double value;
    std::vector<double> point;
};

// Reduction: one auxiliary variable t with t <= piece_k(x); free variables
// split as x = x+ - x-.
inline MaximinSolution lp_maximin(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars;
    const std::size_t nn = 2 * n + 1;  // x+, x-, t
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t i = 0; i < lp.constraint_coeffs.size(); ++i) {
        std::vector<double> row(nn, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = lp.constraint_coeffs[i][j];
            row[n + j] = -lp.constraint_coeffs[i][j];
        }
        A.push_back(std::move(row));
        b.push_back(lp.constraint_bounds[i]);
    }
    for (std::size_t k = 0; k < lp.pieces.size(); ++k) {
        std::vector<double> row(nn, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = -lp.pieces[k][j];
            row[n + j] = lp.pieces[k][j];
        }
        row[2 * n] = 1.0;  // t - piece(x) <= offset
        A.push_back(std::move(row));
        double off = lp.piece_offsets.empty() ? 0.0 : lp.piece_offsets[k];
        b.push_back(off);
    }
    // t is free in general; shift by bounding below is unnecessary because the
    // tableau treats t >= 0. Allow negative optima by splitting t as well.
    for (auto& row : A) row.push_back(-row[2 * n]);
    std::vector<double> c(nn + 1, 0.0);
    c[2 * n] = 1.0;
    c[2 * n + 1] = -1.0;
    auto sol = simplex_max(A, b, c);
    MaximinSolution out;
    out.value = sol.value;
    out.point.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) out.point[j] = sol.x[j] - sol.x[n + j];
    return out;
}

}  // namespace mmi
