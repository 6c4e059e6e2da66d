#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmi/diameters.hpp"
#include "mmi/flow.hpp"
#include "mmi/obsdiam.hpp"
#include "mmi/space.hpp"

namespace mmi {

struct NotDefinedOnSupport : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kBoxExactCap = 12;      // |supp X| * |supp Y|
inline constexpr std::size_t kIsoExhaustiveCap = 16;  // support size for subset search

// Exact Prokhorov distance between two measures on a shared finite metric.
// For eps in a segment between consecutive pairwise distances the arc set
// d <= eps is constant, so by the marriage/flow duality the smallest feasible
// eps in the segment is max(segment start, 1 - maxflow); the answer is the
// minimum over segments.
inline double prokhorov(const std::vector<std::vector<double>>& dist,
                        const std::vector<Mass>& mu, const std::vector<Mass>& nu) {
    const std::size_t n = dist.size();
    if (mu.size() != n || nu.size() != n)
        throw DimensionMismatch("prokhorov: weight length mismatch");
    if (mu == nu) return 0.0;
    std::vector<double> levels{0.0};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if ((mu[i] > 0 && nu[j] > 0) || (mu[j] > 0 && nu[i] > 0))
                levels.push_back(dist[i][j]);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    double best = std::numeric_limits<double>::infinity();
    for (double t : levels) {
        std::vector<std::vector<bool>> arcs(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) arcs[i][j] = dist[i][j] <= t;
        auto r = maxflow_feasible({mu, nu, arcs});
        double candidate = std::max(t, 1.0 - to_double(r.max_flow_value));
        best = std::min(best, candidate);
    }
    return best;
}

// Exact Ky Fan distance between two fields under a common weight vector.
inline double ky_fan(const std::vector<Mass>& weights, const std::vector<double>& f,
                     const std::vector<double>& g) {
    if (f.size() != weights.size() || g.size() != weights.size())
        throw DimensionMismatch("ky_fan: field length mismatch");
    std::vector<std::pair<double, Mass>> dev;
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (weights[i] > 0) dev.emplace_back(std::abs(f[i] - g[i]), weights[i]);
    return ky_fan_deviation(dev);
}

struct BoxEstimate {
    double lower = 0.0;
    double upper = 0.0;
    enum class Mode { Exact, Bounds } mode = Mode::Exact;
    // exact-mode witness: coupling mass per (x, y) cell and the kept cells
    std::vector<std::vector<Mass>> coupling;
    std::vector<std::pair<std::size_t, std::size_t>> kept_cells;
};

namespace detail {

// distortion between two coupled cells: |d_X(x,x') - d_Y(y,y')|
inline double cell_distortion(const FiniteMMSpace& X, const FiniteMMSpace& Y,
                              std::pair<std::size_t, std::size_t> a,
                              std::pair<std::size_t, std::size_t> b) {
    return std::abs(X.d(a.first, b.first) - Y.d(a.second, b.second));
}

}  // namespace detail

// Exact box distance on tiny instances via the coupling reformulation: a set
// S of coupled cells with pairwise distortion <= eps and a coupling putting
// mass >= 1 - eps on S. The cell-compatibility graph is constant between
// consecutive distortion values, so a segment sweep over maximal cliques with
// a flow feasibility check at each is exact. The reformulation itself is
// checked against a direct parameter-discretization oracle in the test suite.
inline BoxEstimate box_exact_tiny(const FiniteMMSpace& X, const FiniteMMSpace& Y) {
    auto sx = X.support(), sy = Y.support();
    if (sx.size() * sy.size() > kBoxExactCap)
        throw SizeLimitExceeded("box_exact_tiny: support product exceeds cap");
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (auto x : sx)
        for (auto y : sy) cells.emplace_back(x, y);
    const std::size_t m = cells.size();

    std::vector<double> levels{0.0};
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b)
            levels.push_back(detail::cell_distortion(X, Y, cells[a], cells[b]));
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<Mass> wx, wy;
    for (auto x : sx) wx.push_back(X.mu(x));
    for (auto y : sy) wy.push_back(Y.mu(y));

    BoxEstimate out;
    out.mode = BoxEstimate::Mode::Exact;
    double best = std::numeric_limits<double>::infinity();
    for (double t : levels) {
        if (t >= best) break;
        std::vector<detail::Bits> adj(m, 0);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b)
                if (detail::cell_distortion(X, Y, cells[a], cells[b]) <= t) {
                    adj[a] |= detail::Bits(1) << b;
                    adj[b] |= detail::Bits(1) << a;
                }
        // self-compatibility: a cell pairs with itself at distortion 0
        for (auto clique : detail::maximal_cliques(adj)) {
            std::vector<std::vector<bool>> arcs(sx.size(), std::vector<bool>(sy.size(), false));
            for (std::size_t c = 0; c < m; ++c)
                if (clique & (detail::Bits(1) << c)) {
                    std::size_t xi = c / sy.size(), yi = c % sy.size();
                    arcs[xi][yi] = true;
                }
            auto r = maxflow_feasible({wx, wy, arcs});
            double candidate = std::max(t, 1.0 - to_double(r.max_flow_value));
            if (candidate < best) {
                best = candidate;
                out.kept_cells.clear();
                for (std::size_t c = 0; c < m; ++c)
                    if (clique & (detail::Bits(1) << c)) out.kept_cells.push_back(cells[c]);
                out.coupling = r.flow;
            }
        }
    }
    // eps = 1 always works (discard everything), so the distance caps at 1.
    if (best > 1.0) {
        best = 1.0;
        out.kept_cells.clear();
        out.coupling.clear();
    }
    out.lower = out.upper = best;
    return out;
}

struct IsoReport {
    bool ok = false;
    bool subset_found = false;     // conditions (1)+(2): heavy low-distortion subset
    bool pushforward_ok = false;   // condition (3): d_P(f_* mu_X, mu_Y) <= eps
    bool heuristic = false;        // greedy subset search was used
    std::vector<std::size_t> subset;
    double pushforward_dp = 0.0;
};

// Check whether `map` is an eps-mm-isomorphism: some subset of mass >= 1-eps
// with pairwise distortion <= eps, and pushforward measure Prokhorov-close.
inline IsoReport eps_mm_iso_check(const FiniteMMSpace& X, const FiniteMMSpace& Y,
                                  const std::vector<std::size_t>& map, double eps) {
    auto sup = X.support();
    if (map.size() != X.size()) throw NotDefinedOnSupport("eps_mm_iso_check: map length mismatch");
    for (auto i : sup)
        if (map[i] >= Y.size()) throw NotDefinedOnSupport("eps_mm_iso_check: image out of range");

    IsoReport rep;
    Mass need = Mass(1) - mass_from_double(eps);
    auto ok_pair = [&](std::size_t a, std::size_t b) {
        return std::abs(X.d(a, b) - Y.d(map[a], map[b])) <= eps + kMetricTol;
    };
    if (sup.size() <= kIsoExhaustiveCap) {
        std::vector<detail::Bits> adj(sup.size(), 0);
        for (std::size_t a = 0; a < sup.size(); ++a)
            for (std::size_t b = a + 1; b < sup.size(); ++b)
                if (ok_pair(sup[a], sup[b])) {
                    adj[a] |= detail::Bits(1) << b;
                    adj[b] |= detail::Bits(1) << a;
                }
        std::vector<Mass> w;
        for (auto i : sup) w.push_back(X.mu(i));
        rep.subset_found = need <= 0 || detail::clique_weight_reaches(adj, w, need);
        if (rep.subset_found) {
            // record one witness subset greedily inside the clique structure
            for (auto i : sup) {
                bool fits = true;
                for (auto j : rep.subset)
                    if (!ok_pair(i, j)) {
                        fits = false;
                        break;
                    }
                if (fits) rep.subset.push_back(i);
            }
        }
    } else {
        rep.heuristic = true;
        Mass got(0);
        for (const auto& [i, wi] : atoms(X)) {
            bool fits = true;
            for (auto j : rep.subset)
                if (!ok_pair(i, j)) {
                    fits = false;
                    break;
                }
            if (fits) {
                rep.subset.push_back(i);
                got += wi;
            }
        }
        rep.subset_found = got >= need;
    }

    std::vector<Mass> pushed(Y.size(), Mass(0));
    for (auto i : sup) pushed[map[i]] += X.mu(i);
    rep.pushforward_dp = prokhorov(Y.dist, pushed, Y.weight);
    rep.pushforward_ok = rep.pushforward_dp <= eps + kMetricTol;
    rep.ok = rep.subset_found && rep.pushforward_ok;
    return rep;
}

// Two-sided box-distance bounds for spaces of any finite size.
inline BoxEstimate box_bounds(const FiniteMMSpace& X, const FiniteMMSpace& Y) {
    BoxEstimate out;
    out.mode = BoxEstimate::Mode::Bounds;

    // ---- upper bounds ----
    double upper = 1.0;  // a single kept cell always works at eps = 1
    // shared metric: box <= 2 d_P (after bounded rescaling, the safe form)
    if (X.size() == Y.size()) {
        bool shared = true;
        for (std::size_t i = 0; i < X.size() && shared; ++i)
            for (std::size_t j = 0; j < X.size(); ++j)
                if (std::abs(X.d(i, j) - Y.d(i, j)) > kMetricTol) {
                    shared = false;
                    break;
                }
        if (shared) upper = std::min(upper, 2.0 * prokhorov(X.dist, X.weight, Y.weight));
    }
    // greedy matching as an eps-mm-isomorphism candidate: box <= 3 eps
    {
        auto ax = atoms(X);
        auto ay = atoms(Y);
        if (!ay.empty()) {
            std::vector<std::size_t> map(X.size(), ay.front().first);
            for (std::size_t k = 0; k < ax.size(); ++k)
                map[ax[k].first] = ay[std::min(k, ay.size() - 1)].first;
            double lo = 0.0, hi = 1.0;
            if (eps_mm_iso_check(X, Y, map, hi).ok) {
                for (int it = 0; it < 24; ++it) {
                    double mid = (lo + hi) / 2;
                    if (eps_mm_iso_check(X, Y, map, mid).ok)
                        hi = mid;
                    else
                        lo = mid;
                }
                upper = std::min(upper, 3.0 * hi);
            }
        }
    }
    // full-support coupling: box <= worst distortion across all cell pairs
    {
        auto sx = X.support(), sy = Y.support();
        double worst = 0.0;
        for (auto x1 : sx)
            for (auto x2 : sx)
                for (auto y1 : sy)
                    for (auto y2 : sy)
                        worst = std::max(worst, std::abs(X.d(x1, x2) - Y.d(y1, y2)));
        upper = std::min(upper, worst);
    }

    // ---- lower bound from partial-diameter stability:
    // box(X,Y) < eps implies diam(X; a - eps) <= diam(Y; a) + eps ----
    double lower = 0.0;
    bool small = X.support().size() <= kPartialDiameterCap &&
                 Y.support().size() <= kPartialDiameterCap;
    if (small) {
        for (int anum : {1, 2, 3}) {
            Mass a(anum, 4);  // alpha in {1/4, 1/2, 3/4}
            for (int j = 63; j >= 1; --j) {
                Mass e(j, 64);
                if (e >= a) continue;
                double ed = to_double(e);
                double dxa = partial_diameter(X, a), dya = partial_diameter(Y, a);
                double dxs = partial_diameter(X, a - e), dys = partial_diameter(Y, a - e);
                if (dxs > dya + ed + kMetricTol || dys > dxa + ed + kMetricTol) {
                    lower = std::max(lower, ed);
                    break;
                }
            }
        }
    }
    out.lower = std::min(lower, upper);
    out.upper = upper;
    return out;
}

// Certified interval for the observable distance to a one-point space.
inline std::pair<double, double> dconc_interval_vs_point(const FiniteMMSpace& X) {
    double agg = obsdiam_aggregate(X);
    return {agg / 2.0, agg};
}

}  // namespace mmi
