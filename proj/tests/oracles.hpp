// Independent brute-force oracles shared by the unit tests and the
// acceptance harness. These deliberately re-derive each quantity from its
// definition instead of reusing the library's algorithms.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "mmi/diameters.hpp"
#include "mmi/space.hpp"

namespace oracles {

using mmi::FiniteMMSpace;
using mmi::Mass;
using mmi::Measure1D;

// Minimum window length over all atom subsets of mass >= alpha.
inline double brute_window(const Measure1D& m, const Mass& alpha) {
    const auto& at = m.atoms;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 1; mask < (std::size_t(1) << at.size()); ++mask) {
        Mass w = 0;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t k = 0; k < at.size(); ++k)
            if (mask & (std::size_t(1) << k)) {
                w += at[k].mass;
                lo = std::min(lo, at[k].position);
                hi = std::max(hi, at[k].position);
            }
        if (w >= alpha) best = std::min(best, hi - lo);
    }
    return best;
}

// Dense-grid maximization over 1-Lipschitz fields (f_0 pinned to 0).
// The inner window scan uses double weights with a small slack toward
// inclusion; the grid sampling error already dominates rounding here.
inline double obsdiam_grid(const FiniteMMSpace& X, const Mass& alpha, double step) {
    auto sup = X.support();
    const std::size_t n = sup.size();
    double diam = X.diameter();
    if (n <= 1 || diam == 0.0) return 0.0;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = mmi::to_double(X.mu(sup[i]));
    const double alpha_d = mmi::to_double(alpha) - 1e-9;
    const long R = std::lround(diam / step);
    std::vector<long> g(n - 1, -R);
    double best = 0.0;
    std::vector<std::pair<double, double>> atoms(n);
    while (true) {
        std::vector<double> f(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) f[i] = g[i - 1] * step;
        bool lip = true;
        for (std::size_t i = 0; i < n && lip; ++i)
            for (std::size_t j = i + 1; j < n && lip; ++j)
                if (std::abs(f[i] - f[j]) > X.d(sup[i], sup[j]) + 1e-12) lip = false;
        if (lip) {
            for (std::size_t i = 0; i < n; ++i) atoms[i] = {f[i], w[i]};
            std::sort(atoms.begin(), atoms.end());
            // minimum window [atoms[a].first, atoms[b].first] holding alpha
            double win = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < n; ++a) {
                double mass = 0.0;
                for (std::size_t b = a; b < n; ++b) {
                    mass += atoms[b].second;
                    if (mass >= alpha_d) {
                        win = std::min(win, atoms[b].first - atoms[a].first);
                        break;
                    }
                }
            }
            if (win < std::numeric_limits<double>::infinity())
                best = std::max(best, win);
        }
        std::size_t i = 0;
        while (i + 1 < n && g[i] == R) g[i++] = -R;
        if (i + 1 == n) break;
        ++g[i];
    }
    return best;
}

// Definition-based Prokhorov condition with closed eps-neighborhoods.
inline bool prokhorov_condition(const std::vector<std::vector<double>>& dist,
                                const std::vector<Mass>& mu, const std::vector<Mass>& nu,
                                double eps) {
    const std::size_t n = dist.size();
    Mass eps_m = mmi::mass_from_double(eps);
    for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
        Mass ma = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t(1) << i)) ma += mu[i];
        Mass nb = 0;
        for (std::size_t j = 0; j < n; ++j) {
            bool close = false;
            for (std::size_t i = 0; i < n && !close; ++i)
                if ((mask & (std::size_t(1) << i)) && dist[i][j] <= eps + 1e-12) close = true;
            if (close) nb += nu[j];
        }
        if (ma > nb + eps_m + Mass(1, 1000000000000L)) return false;
    }
    return true;
}

inline double prokhorov_bisect(const std::vector<std::vector<double>>& dist,
                               const std::vector<Mass>& mu, const std::vector<Mass>& nu) {
    double lo = 0.0, hi = 1.0;
    for (auto& row : dist)
        for (double v : row) hi = std::max(hi, v);
    if (prokhorov_condition(dist, mu, nu, 0.0) && prokhorov_condition(dist, nu, mu, 0.0))
        return 0.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (prokhorov_condition(dist, mu, nu, mid) && prokhorov_condition(dist, nu, mu, mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Interval-parameter discretization oracle for the box distance between
// spaces of at most two points each. Parameters are encoded as K equal cells
// of [0,1) (K = lcm of the mass denominators); distortion depends only on
// the (x, y) atom pair of each cell, so couplings reduce to 2x2 count
// matrices with fixed margins and kept sets to subsets of the cell types.
inline double box_parameter(const FiniteMMSpace& X, const FiniteMMSpace& Y, long K) {
    std::vector<long> rx, ry;
    for (std::size_t i = 0; i < X.size(); ++i)
        rx.push_back(static_cast<long>(mmi::to_double(X.mu(i) * K) + 0.5));
    for (std::size_t j = 0; j < Y.size(); ++j)
        ry.push_back(static_cast<long>(mmi::to_double(Y.mu(j) * K) + 0.5));
    double best = 1.0;  // eps = 1 always works (empty kept set)
    long lo = std::max(0L, rx[0] + ry[0] - K), hi = std::min(rx[0], ry[0]);
    if (X.size() == 1) lo = hi = ry.size() > 1 ? ry[0] : K;
    if (Y.size() == 1) lo = hi = rx[0];
    for (long a = lo; a <= hi; ++a) {
        long n[2][2] = {{a, rx[0] - a}, {ry[0] - a, 0}};
        if (X.size() == 2 && Y.size() == 2) n[1][1] = K - n[0][0] - n[0][1] - n[1][0];
        if (X.size() == 1) { n[0][0] = ry[0]; n[0][1] = K - ry[0]; n[1][0] = n[1][1] = 0; }
        if (Y.size() == 1) { n[0][0] = rx[0]; n[1][0] = K - rx[0]; n[0][1] = n[1][1] = 0; }
        std::vector<std::pair<std::size_t, std::size_t>> types;
        std::vector<long> cnt;
        for (std::size_t i = 0; i < X.size(); ++i)
            for (std::size_t j = 0; j < Y.size(); ++j)
                if (n[i][j] > 0) {
                    types.emplace_back(i, j);
                    cnt.push_back(n[i][j]);
                }
        for (std::size_t sub = 1; sub < (std::size_t(1) << types.size()); ++sub) {
            double dist = 0;
            long kept = 0;
            for (std::size_t t = 0; t < types.size(); ++t)
                if (sub & (std::size_t(1) << t)) {
                    kept += cnt[t];
                    for (std::size_t u = 0; u <= t; ++u)
                        if (sub & (std::size_t(1) << u))
                            dist = std::max(
                                dist, std::abs(X.d(types[t].first, types[u].first) -
                                               Y.d(types[t].second, types[u].second)));
                }
            best = std::min(best, std::max(dist, 1.0 - static_cast<double>(kept) / K));
        }
    }
    return best;
}

}  // namespace oracles
