#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmi/diameters.hpp"
#include "mmi/rational.hpp"
#include "mmi/space.hpp"

namespace mmi {

struct CapacityViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidDecomposition : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kDominatesCap = 16;
inline constexpr std::size_t kIsomorphismCap = 12;

struct DominationWitness {
    std::vector<std::size_t> map;  // Y point index -> X point index
    bool checked = false;
};

struct DominationResult {
    bool dominated = false;
    DominationWitness witness;
    std::size_t explored = 0;  // search certificate for refutations
};

// Check that map is 1-Lipschitz on supp Y and pushes mu_Y to mu_X exactly.
inline bool verify_domination(const FiniteMMSpace& Y, const FiniteMMSpace& X,
                              const std::vector<std::size_t>& map) {
    if (map.size() != Y.size()) return false;
    auto sup = Y.support();
    for (auto y : sup)
        if (map[y] >= X.size()) return false;
    for (std::size_t a = 0; a < sup.size(); ++a)
        for (std::size_t b = a + 1; b < sup.size(); ++b)
            if (X.d(map[sup[a]], map[sup[b]]) > Y.d(sup[a], sup[b]) + kMetricTol) return false;
    std::vector<Mass> fiber(X.size(), Mass(0));
    for (auto y : sup) fiber[map[y]] += Y.mu(y);
    for (std::size_t x = 0; x < X.size(); ++x)
        if (fiber[x] != X.mu(x)) return false;
    return true;
}

// Decide Y > X in the Lipschitz order: a 1-Lipschitz map F: Y -> X with
// F_* mu_Y = mu_X. Exact backtracking over support assignments, heaviest
// Y-points first, pruning on Lipschitz violations and fiber overflow.
inline DominationResult dominates(const FiniteMMSpace& Y, const FiniteMMSpace& X) {
    auto sy = Y.support();
    auto sx = X.support();
    if (sy.size() > kDominatesCap)
        throw SizeLimitExceeded("dominates: Y support exceeds search cap");
    DominationResult res;
    std::vector<std::size_t> ys = sy;
    std::stable_sort(ys.begin(), ys.end(),
                     [&](std::size_t a, std::size_t b) { return Y.mu(a) > Y.mu(b); });
    std::vector<std::size_t> assign(Y.size(), 0);
    std::vector<Mass> load(X.size(), Mass(0));

    auto rec = [&](auto&& self, std::size_t k) -> bool {
        ++res.explored;
        if (k == ys.size()) {
            for (auto x : sx)
                if (load[x] != X.mu(x)) return false;
            return true;
        }
        std::size_t y = ys[k];
        for (auto x : sx) {
            if (load[x] + Y.mu(y) > X.mu(x)) continue;
            bool lip = true;
            for (std::size_t j = 0; j < k; ++j)
                if (X.d(x, assign[ys[j]]) > Y.d(y, ys[j]) + kMetricTol) {
                    lip = false;
                    break;
                }
            if (!lip) continue;
            assign[y] = x;
            load[x] += Y.mu(y);
            if (self(self, k + 1)) return true;
            load[x] -= Y.mu(y);
        }
        return false;
    };
    if (rec(rec, 0)) {
        res.dominated = true;
        res.witness.map = assign;
        // park zero-weight Y points on some support image for a total map
        std::size_t fallback = sx.empty() ? 0 : assign[ys.empty() ? 0 : ys.front()];
        for (std::size_t y = 0; y < Y.size(); ++y)
            if (Y.mu(y) == 0) res.witness.map[y] = fallback;
        res.witness.checked = verify_domination(Y, X, res.witness.map);
    }
    return res;
}

struct IsomorphismResult {
    bool isomorphic = false;
    std::vector<std::size_t> map;  // supp X point -> supp Y point
};

// Weight-preserving isometric bijection between supports, exhaustive.
inline IsomorphismResult mm_isomorphic(const FiniteMMSpace& X, const FiniteMMSpace& Y) {
    auto sx = X.support(), sy = Y.support();
    if (sx.size() > kIsomorphismCap || sy.size() > kIsomorphismCap)
        throw SizeLimitExceeded("mm_isomorphic: support exceeds cap");
    IsomorphismResult res;
    if (sx.size() != sy.size()) return res;
    std::vector<std::size_t> img(X.size(), 0);
    std::vector<bool> used(Y.size(), false);
    auto rec = [&](auto&& self, std::size_t k) -> bool {
        if (k == sx.size()) return true;
        for (auto y : sy) {
            if (used[y] || Y.mu(y) != X.mu(sx[k])) continue;
            bool iso = true;
            for (std::size_t j = 0; j < k && iso; ++j)
                if (std::abs(Y.d(y, img[sx[j]]) - X.d(sx[k], sx[j])) > kMetricTol) iso = false;
            if (!iso) continue;
            img[sx[k]] = y;
            used[y] = true;
            if (self(self, k + 1)) return true;
            used[y] = false;
        }
        return false;
    };
    if (rec(rec, 0)) {
        res.isomorphic = true;
        for (auto x : sx) res.map.push_back(img[x]);
    }
    return res;
}

struct DominatingSpace {
    FiniteMMSpace Y;
    DominationWitness witness;            // projection Y -> X
    std::vector<std::size_t> marked;      // Y indices of the n marked atoms
    std::vector<std::vector<std::size_t>> family;  // per-index disjoint family
};

namespace detail {

// Layered point set X x {0..n} restricted to level 0 plus the used levels;
// d((x,i),(y,j)) = d_X(x,y) + |i-j|.
inline FiniteMMSpace layered_space(const FiniteMMSpace& X,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& pts,
                                   const std::vector<Mass>& w) {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> dist(pts.size(), std::vector<double>(pts.size(), 0.0));
    for (std::size_t a = 0; a < pts.size(); ++a) {
        labels.push_back(X.labels[pts[a].first] + "@" + std::to_string(pts[a].second));
        for (std::size_t b = 0; b < pts.size(); ++b)
            dist[a][b] = X.d(pts[a].first, pts[b].first) +
                         std::abs(double(pts[a].second) - double(pts[b].second));
    }
    return FiniteMMSpace{std::move(labels), std::move(dist), w, {}};
}

}  // namespace detail

// Sum-metric construction showing a feasible atom assignment yields a
// marked atom of mass alpha_i at level i over its assigned point, keep the
// leftover measure at level 0.
inline DominatingSpace build_dominating_atoms(const FiniteMMSpace& X,
                                              const std::vector<std::size_t>& assignment,
                                              const AlphaVector& abar) {
    const std::size_t n = abar.size();
    if (assignment.size() != n)
        throw DimensionMismatch("build_dominating_atoms: assignment length mismatch");
    std::vector<Mass> residual = X.weight;
    for (std::size_t i = 0; i < n; ++i) {
        if (assignment[i] >= X.size())
            throw CapacityViolated("build_dominating_atoms: assigned point out of range");
        residual[assignment[i]] -= abar.alphas[i];
        if (residual[assignment[i]] < 0)
            throw CapacityViolated("build_dominating_atoms: per-point capacity exceeded");
    }
    std::vector<std::pair<std::size_t, std::size_t>> pts;
    std::vector<Mass> w;
    for (std::size_t x = 0; x < X.size(); ++x) {
        pts.emplace_back(x, 0);
        w.push_back(residual[x]);
    }
    DominatingSpace out{FiniteMMSpace{}, {}, {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        out.marked.push_back(pts.size());
        pts.emplace_back(assignment[i], i + 1);
        w.push_back(abar.alphas[i]);
    }
    out.Y = detail::layered_space(X, pts, w);
    out.witness.map.resize(pts.size());
    for (std::size_t a = 0; a < pts.size(); ++a) out.witness.map[a] = pts[a].first;
    out.witness.checked = verify_domination(out.Y, X, out.witness.map);
    for (auto m : out.marked) out.family.push_back({m});
    return out;
}

// The layered construction realizing a sub-probability decomposition: level i
// carries alpha_i mu_i, and A_i = supp mu_i x {i} is a disjoint family whose
// worst diameter equals the decomposition's worst support diameter.
inline DominatingSpace build_dominating_from_decomposition(const FiniteMMSpace& X,
                                                           const SubProbDecomposition& dec,
                                                           const AlphaVector& abar) {
    if (!dec.valid_for(X, abar))
        throw InvalidDecomposition("build_dominating_from_decomposition: invalid decomposition");
    const std::size_t n = abar.size();
    std::vector<Mass> residual = X.weight;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t x = 0; x < X.size(); ++x) residual[x] -= dec.mass[i][x];
    std::vector<std::pair<std::size_t, std::size_t>> pts;
    std::vector<Mass> w;
    for (std::size_t x = 0; x < X.size(); ++x) {
        pts.emplace_back(x, 0);
        w.push_back(residual[x]);
    }
    DominatingSpace out{FiniteMMSpace{}, {}, {}, {}};
    out.family.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t x = 0; x < X.size(); ++x)
            if (dec.mass[i][x] > 0) {
                out.family[i].push_back(pts.size());
                pts.emplace_back(x, i + 1);
                w.push_back(dec.mass[i][x]);
            }
    out.Y = detail::layered_space(X, pts, w);
    out.witness.map.resize(pts.size());
    for (std::size_t a = 0; a < pts.size(); ++a) out.witness.map[a] = pts[a].first;
    out.witness.checked = verify_domination(out.Y, X, out.witness.map);
    return out;
}

}  // namespace mmi
