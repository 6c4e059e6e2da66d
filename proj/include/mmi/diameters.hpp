#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "mmi/flow.hpp"
#include "mmi/rational.hpp"
#include "mmi/space.hpp"

namespace mmi {

// Finite nonnegative value or +infinity (the empty-family convention).
struct ExtendedReal {
    double value = 0.0;
    bool infinite = false;

    static ExtendedReal inf() { return {0.0, true}; }
    static ExtendedReal finite(double v) { return {v, false}; }

    bool operator==(const ExtendedReal&) const = default;
};

inline constexpr std::size_t kPartialDiameterCap = 64;
inline constexpr std::size_t kMultiDiameterPointCap = 14;
inline constexpr std::size_t kMultiDiameterIndexCap = 5;
inline constexpr std::size_t kDoublePrimePointCap = 10;

namespace detail {

using Bits = std::uint64_t;

// Adjacency of the threshold graph (edges with dist <= d) on the support.
inline std::vector<Bits> threshold_adjacency(const FiniteMMSpace& X,
                                             const std::vector<std::size_t>& sup, double d) {
    std::vector<Bits> adj(sup.size(), 0);
    for (std::size_t a = 0; a < sup.size(); ++a)
        for (std::size_t b = a + 1; b < sup.size(); ++b)
            if (X.d(sup[a], sup[b]) <= d) {
                adj[a] |= Bits(1) << b;
                adj[b] |= Bits(1) << a;
            }
    return adj;
}

// Branch-and-bound: does the graph contain a clique of total weight >= alpha?
inline bool clique_weight_reaches(const std::vector<Bits>& adj, const std::vector<Mass>& w,
                                  const Mass& alpha) {
    const std::size_t n = w.size();
    // suffix[k] = total weight of vertices k..n-1, for the bound.
    std::vector<Mass> suffix(n + 1, Mass(0));
    for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + w[k];
    if (suffix[0] < alpha) return false;

    auto rec = [&](auto&& self, std::size_t k, Bits cand, const Mass& cur) -> bool {
        if (cur >= alpha) return true;
        if (k == n) return false;
        Mass avail = cur;
        for (std::size_t j = k; j < n; ++j)
            if (cand & (Bits(1) << j)) avail += w[j];
        if (avail < alpha) return false;
        Bits bit = Bits(1) << k;
        if (cand & bit) {
            if (self(self, k + 1, cand & adj[k], cur + w[k])) return true;
        }
        return self(self, k + 1, cand & ~bit, cur);
    };
    Bits all = n == 64 ? ~Bits(0) : (Bits(1) << n) - 1;
    return rec(rec, 0, all, Mass(0));
}

// All maximal cliques (Bron-Kerbosch with pivoting).
inline std::vector<Bits> maximal_cliques(const std::vector<Bits>& adj) {
    const std::size_t n = adj.size();
    std::vector<Bits> out;
    auto rec = [&](auto&& self, Bits r, Bits p, Bits x) -> void {
        if (p == 0 && x == 0) {
            out.push_back(r);
            return;
        }
        // pivot: vertex in p|x with most neighbors in p
        std::size_t pivot = 64;
        int best = -1;
        Bits px = p | x;
        for (std::size_t v = 0; v < n; ++v)
            if (px & (Bits(1) << v)) {
                int deg = std::popcount(p & adj[v]);
                if (deg > best) {
                    best = deg;
                    pivot = v;
                }
            }
        Bits candidates = pivot == 64 ? p : p & ~adj[pivot];
        for (std::size_t v = 0; v < n; ++v) {
            Bits bit = Bits(1) << v;
            if (!(candidates & bit)) continue;
            self(self, r | bit, p & adj[v], x & adj[v]);
            p &= ~bit;
            x |= bit;
        }
    };
    Bits all = n == 0 ? 0 : (n == 64 ? ~Bits(0) : (Bits(1) << n) - 1);
    rec(rec, 0, all, 0);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// Smallest diameter of a set carrying measure at least alpha. Exact: sweeps
// the sorted pairwise-distance candidates and decides each threshold with a
// weighted-clique search.
inline double partial_diameter(const FiniteMMSpace& X, const Mass& alpha) {
    if (alpha <= 0 || alpha > 1) throw AlphaOutOfRange("partial_diameter: alpha not in (0,1]");
    auto sup = X.support();
    if (sup.size() > kPartialDiameterCap)
        throw SizeLimitExceeded("partial_diameter: support exceeds exact-solver cap");
    std::vector<Mass> w;
    for (auto i : sup) w.push_back(X.mu(i));
    auto cands = X.threshold_candidates();
    // Feasibility is monotone in the threshold, so binary search.
    std::size_t lo = 0, hi = cands.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        auto adj = detail::threshold_adjacency(X, sup, cands[mid]);
        if (detail::clique_weight_reaches(adj, w, alpha))
            hi = mid;
        else
            lo = mid + 1;
    }
    return cands[lo];
}

// Minimal window length of mass >= alpha over a sorted atom list; on the line
// the optimal sets are intervals, so a two-pointer sweep is exact.
inline double window_diameter(const Measure1D& m, const Mass& alpha) {
    if (alpha <= 0 || alpha > 1) throw AlphaOutOfRange("window_diameter: alpha not in (0,1]");
    double best = std::numeric_limits<double>::infinity();
    Mass cur(0);
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < m.atoms.size(); ++hi) {
        cur += m.atoms[hi].mass;
        while (cur - m.atoms[lo].mass >= alpha) {
            cur -= m.atoms[lo].mass;
            ++lo;
        }
        if (cur >= alpha) best = std::min(best, m.atoms[hi].position - m.atoms[lo].position);
    }
    return best;
}

namespace detail {

// Does the threshold graph admit n DISJOINT cliques meeting the quotas?
// DFS over support points (heaviest first) assigned to parts or skipped.
inline bool disjoint_family_feasible(const FiniteMMSpace& X, const std::vector<std::size_t>& sup,
                                     const std::vector<Mass>& quotas, double d) {
    const std::size_t n = quotas.size();
    std::vector<std::size_t> pts = sup;
    std::stable_sort(pts.begin(), pts.end(),
                     [&](std::size_t a, std::size_t b) { return X.mu(a) > X.mu(b); });
    std::vector<Mass> cur(n, Mass(0));
    std::vector<std::vector<std::size_t>> members(n);
    std::vector<Mass> suffix(pts.size() + 1, Mass(0));
    for (std::size_t k = pts.size(); k-- > 0;) suffix[k] = suffix[k + 1] + X.mu(pts[k]);

    auto rec = [&](auto&& self, std::size_t k) -> bool {
        Mass need(0);
        bool done = true;
        for (std::size_t i = 0; i < n; ++i)
            if (cur[i] < quotas[i]) {
                need += quotas[i] - cur[i];
                done = false;
            }
        if (done) return true;
        if (k == pts.size() || need > suffix[k]) return false;
        std::size_t p = pts[k];
        for (std::size_t i = 0; i < n; ++i) {
            if (cur[i] >= quotas[i]) continue;
            // identical unfilled empty parts are interchangeable
            bool dup = false;
            for (std::size_t j = 0; j < i; ++j)
                if (members[j].empty() && members[i].empty() && quotas[j] == quotas[i]) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            bool compat = true;
            for (auto q : members[i])
                if (X.d(p, q) > d) {
                    compat = false;
                    break;
                }
            if (!compat) continue;
            members[i].push_back(p);
            cur[i] += X.mu(p);
            if (self(self, k + 1)) return true;
            cur[i] -= X.mu(p);
            members[i].pop_back();
        }
        return self(self, k + 1);
    };
    return rec(rec, 0);
}

}  // namespace detail

// Multivariable partial diameter: min over families of disjoint subsets with
// mu(A_i) >= alpha_i of the largest diameter; +infinity when no family exists.
inline ExtendedReal multi_partial_diameter(const FiniteMMSpace& X, const AlphaVector& abar) {
    auto sup = X.support();
    const std::size_t n = abar.size();
    if (sup.size() > kMultiDiameterPointCap || n > kMultiDiameterIndexCap)
        throw SizeLimitExceeded("multi_partial_diameter: beyond exact cap");
    if (abar.sum() > 1) return ExtendedReal::inf();
    auto cands = X.threshold_candidates();
    if (!detail::disjoint_family_feasible(X, sup, abar.alphas, cands.back()))
        return ExtendedReal::inf();
    std::size_t lo = 0, hi = cands.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (detail::disjoint_family_feasible(X, sup, abar.alphas, cands[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return ExtendedReal::finite(cands[lo]);
}

namespace detail {

// Feasibility core of the underline diameter: supports may overlap, so each
// index picks a maximal clique of the threshold graph and the quotas must be
// routable into the point masses (sub-probability condition) by max-flow.
inline bool overlapping_family_feasible(const FiniteMMSpace& X,
                                        const std::vector<std::size_t>& sup,
                                        const std::vector<Mass>& alphas, double d) {
    const std::size_t n = alphas.size();
    auto adj = threshold_adjacency(X, sup, d);
    auto cliques = maximal_cliques(adj);
    std::vector<Mass> cw(cliques.size(), Mass(0));
    for (std::size_t c = 0; c < cliques.size(); ++c)
        for (std::size_t v = 0; v < sup.size(); ++v)
            if (cliques[c] & (Bits(1) << v)) cw[c] += X.mu(sup[v]);

    std::vector<Mass> caps;
    for (auto i : sup) caps.push_back(X.mu(i));

    // indices sorted by alpha descending; equal alphas take nondecreasing
    // clique ids (interchangeable).
    std::vector<Mass> a = alphas;
    std::sort(a.begin(), a.end(), std::greater<>());
    std::vector<std::size_t> choice(n);

    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == n) return true;
        std::size_t start = (i > 0 && a[i] == a[i - 1]) ? choice[i - 1] : 0;
        for (std::size_t c = start; c < cliques.size(); ++c) {
            if (cw[c] < a[i]) continue;
            choice[i] = c;
            // flow check on the partial assignment (monotone necessary and,
            // at the leaf, sufficient)
            std::vector<Mass> dem(a.begin(), a.begin() + i + 1);
            std::vector<std::vector<bool>> arcs(i + 1, std::vector<bool>(sup.size(), false));
            for (std::size_t k = 0; k <= i; ++k)
                for (std::size_t v = 0; v < sup.size(); ++v)
                    if (cliques[choice[k]] & (Bits(1) << v)) arcs[k][v] = true;
            if (flow_feasible(dem, caps, arcs) && self(self, i + 1)) return true;
        }
        return false;
    };
    return rec(rec, 0);
}

}  // namespace detail

// u-diam via sub-probability decompositions: min over families {mu_i} with
// sum alpha_i mu_i <= mu_X of the largest support diameter. +infinity when
// the family set is empty (sum alpha_i > 1).
inline ExtendedReal underline_diam(const FiniteMMSpace& X, const AlphaVector& abar) {
    auto sup = X.support();
    if (sup.size() > kMultiDiameterPointCap || abar.size() > kMultiDiameterIndexCap)
        throw SizeLimitExceeded("underline_diam: beyond exact cap");
    if (abar.sum() > 1) return ExtendedReal::inf();
    auto cands = X.threshold_candidates();
    std::size_t lo = 0, hi = cands.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (detail::overlapping_family_feasible(X, sup, abar.alphas, cands[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    // At the full diameter every support lives in one clique; feasibility
    // there is exactly sum alpha_i <= 1, which holds here.
    return ExtendedReal::finite(cands[lo]);
}

namespace detail {

// Pareto-maximal quota vectors achievable as (min(mu(B_i), alpha_i))_i over
// disjoint families B of nonempty support subsets. Works on a common
// denominator so the search runs in integer arithmetic, dedupes states
// (clipped partial-quota vectors) per point, and Pareto-filters once at
// the end.
inline std::vector<std::vector<Mass>> maximal_quota_vectors(const FiniteMMSpace& X,
                                                            const AlphaVector& abar) {
    auto sup = X.support();
    const std::size_t n = abar.size();
    std::vector<std::vector<Mass>> front;
    if (sup.size() < n) return front;

    BigInt L = 1;
    for (auto i : sup) L = boost::multiprecision::lcm(L, denominator(X.mu(i)));
    for (const auto& a : abar.alphas) L = boost::multiprecision::lcm(L, denominator(a));
    std::vector<BigInt> w(sup.size()), cap(n);
    for (std::size_t k = 0; k < sup.size(); ++k)
        w[k] = numerator(X.mu(sup[k])) * (L / denominator(X.mu(sup[k])));
    for (std::size_t i = 0; i < n; ++i)
        cap[i] = numerator(abar.alphas[i]) * (L / denominator(abar.alphas[i]));

    // states after placing points 0..k-1: quota vectors clipped at the caps
    // (extra mass beyond alpha_i never matters); support masses are positive,
    // so a zero component means the part is still empty
    std::set<std::vector<BigInt>> states{std::vector<BigInt>(n, BigInt(0))};
    for (std::size_t k = 0; k < sup.size(); ++k) {
        std::set<std::vector<BigInt>> next;
        for (const auto& st : states) {
            next.insert(st);  // leave the point out
            for (std::size_t i = 0; i < n; ++i) {
                if (st[i] >= cap[i] && st[i] > 0) continue;  // saturated
                auto t = st;
                t[i] = std::min(BigInt(st[i] + w[k]), cap[i]);
                next.insert(std::move(t));
            }
        }
        states = std::move(next);
    }

    auto dominates = [n](const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
        for (std::size_t i = 0; i < n; ++i)
            if (a[i] < b[i]) return false;
        return true;
    };
    std::vector<std::vector<BigInt>> pareto;
    for (const auto& st : states) {
        bool empty_part = false;
        for (const auto& v : st)
            if (v == 0) empty_part = true;
        if (empty_part) continue;
        bool dominated = false;
        for (const auto& f : pareto)
            if (dominates(f, st)) {
                dominated = true;
                break;
            }
        if (dominated) continue;
        std::erase_if(pareto, [&](const auto& f) { return dominates(st, f); });
        pareto.push_back(st);
    }
    for (const auto& q : pareto) {
        std::vector<Mass> m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = Mass(q[i], L);
        front.push_back(std::move(m));
    }
    return front;
}

}  // namespace detail

// diam'' = sup over componentwise-smaller positive vectors alpha' of diam'
// (the zero-on-empty variant). The quota grid is the finite set of achievable
// subset measures; only Pareto-maximal feasible quota vectors can attain the
// sup because the finite multidiameter is monotone.
inline double diam_doubleprime(const FiniteMMSpace& X, const AlphaVector& abar) {
    auto sup = X.support();
    if (sup.size() > kDoublePrimePointCap || abar.size() > kMultiDiameterIndexCap)
        throw SizeLimitExceeded("diam_doubleprime: beyond exact cap");
    // If abar itself is feasible it dominates every candidate.
    auto full = multi_partial_diameter(X, abar);
    if (!full.infinite) return full.value;
    double best = 0.0;
    for (const auto& q : detail::maximal_quota_vectors(X, abar)) {
        auto v = multi_partial_diameter(X, AlphaVector(q));
        if (!v.infinite) best = std::max(best, v.value);
    }
    return best;
}

// Measure1D as a one-dimensional mm-space (positions with |.| metric).
inline FiniteMMSpace line_space(const Measure1D& m) {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> dist(m.atoms.size(),
                                          std::vector<double>(m.atoms.size(), 0.0));
    std::vector<Mass> w;
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        labels.push_back("p" + std::to_string(i));
        w.push_back(m.atoms[i].mass);
        for (std::size_t j = 0; j < m.atoms.size(); ++j)
            dist[i][j] = std::abs(m.atoms[i].position - m.atoms[j].position);
    }
    return validate_space_or_throw(std::move(labels), std::move(dist), std::move(w));
}

}  // namespace mmi
