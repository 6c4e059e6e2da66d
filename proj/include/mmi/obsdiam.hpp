#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "mmi/diameters.hpp"
#include "mmi/rng.hpp"
#include "mmi/simplex.hpp"
#include "mmi/space.hpp"

namespace mmi {

inline constexpr std::size_t kObsExactCap = 8;

struct ObsResult {
    double value = 0.0;
    enum class Mode { Exact, LowerBound } mode = Mode::Exact;
    LipschitzField witness;
    double upper_bound = 0.0;
};

namespace detail {

// McShane extension of values given on the support to the whole space.
inline LipschitzField extend_from_support(const FiniteMMSpace& X,
                                          const std::vector<std::size_t>& sup,
                                          const std::vector<double>& vals) {
    LipschitzField f;
    f.values.assign(X.size(), 0.0);
    for (std::size_t x = 0; x < X.size(); ++x) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < sup.size(); ++k)
            best = std::min(best, vals[k] + X.d(x, sup[k]));
        f.values[x] = best;
    }
    return f;
}

// diam(f_*mu; alpha): the partial diameter of the pushforward line measure.
inline double pushforward_partial(const FiniteMMSpace& X, const LipschitzField& f,
                                  const Mass& alpha) {
    return window_diameter(pushforward(X, f), alpha);
}

// A 1-Lipschitz field that separates all support points: a generic convex
// combination of distance fields. Coefficient sum <= 1 keeps it 1-Lipschitz.
inline LipschitzField generic_injective_field(const FiniteMMSpace& X,
                                              const std::vector<std::size_t>& sup,
                                              std::uint64_t seed = 12345) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<double> coef(sup.size());
        double norm = 0.0;
        for (auto& c : coef) {
            c = rng.uniform();
            norm += c;
        }
        LipschitzField f;
        f.values.assign(X.size(), 0.0);
        for (std::size_t x = 0; x < X.size(); ++x)
            for (std::size_t k = 0; k < sup.size(); ++k)
                f.values[x] += coef[k] / norm * X.d(x, sup[k]);
        bool injective = true;
        for (std::size_t a = 0; a < sup.size() && injective; ++a)
            for (std::size_t b = a + 1; b < sup.size(); ++b)
                if (f.values[sup[a]] == f.values[sup[b]]) {
                    injective = false;
                    break;
                }
        if (injective) return f;
    }
    // fall back to a single distance field (still a valid 1-Lipschitz field)
    LipschitzField f;
    f.values.assign(X.size(), 0.0);
    for (std::size_t x = 0; x < X.size(); ++x) f.values[x] = X.d(x, sup.front());
    return f;
}

struct ConeObjective {
    // one LP per order cone; returns the optimal value and gap vector
    double value = 0.0;
    std::vector<double> gaps;
};

// Maximize the minimal mass->=alpha window length over the gap polytope of a
// fixed ordering of the support points.
inline std::optional<ConeObjective> solve_cone(const FiniteMMSpace& X,
                                               const std::vector<std::size_t>& order,
                                               const Mass& alpha, double prune_below) {
    const std::size_t m = order.size();
    // minimal windows: for each left end, the shortest prefix reaching alpha
    std::vector<std::pair<std::size_t, std::size_t>> windows;
    double cheap_upper = std::numeric_limits<double>::infinity();
    {
        Mass cur(0);
        std::size_t lo = 0;
        for (std::size_t hi = 0; hi < m; ++hi) {
            cur += X.mu(order[hi]);
            while (cur - X.mu(order[lo]) >= alpha) {
                cur -= X.mu(order[lo]);
                ++lo;
            }
            if (cur >= alpha) {
                if (lo == hi) return ConeObjective{0.0, std::vector<double>(m ? m - 1 : 0, 0.0)};
                windows.emplace_back(lo, hi);
                cheap_upper = std::min(cheap_upper, X.d(order[lo], order[hi]));
            }
        }
    }
    if (windows.empty()) return std::nullopt;  // alpha exceeds total mass
    if (cheap_upper <= prune_below) return std::nullopt;

    // variables: t, g_0..g_{m-2}
    const std::size_t nv = m;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (auto [i, j] : windows) {
        std::vector<double> row(nv, 0.0);
        row[0] = 1.0;
        for (std::size_t k = i; k < j; ++k) row[1 + k] = -1.0;
        A.push_back(std::move(row));
        b.push_back(0.0);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            std::vector<double> row(nv, 0.0);
            for (std::size_t k = i; k < j; ++k) row[1 + k] = 1.0;
            A.push_back(std::move(row));
            b.push_back(X.d(order[i], order[j]));
        }
    std::vector<double> c(nv, 0.0);
    c[0] = 1.0;
    auto sol = simplex_max(A, b, c);
    ConeObjective out;
    out.value = sol.value;
    out.gaps.assign(sol.x.begin() + 1, sol.x.end());
    return out;
}

}  // namespace detail

// Exact alpha-observable diameter by order-cone enumeration (support <= 8).
inline ObsResult obsdiam_exact(const FiniteMMSpace& X, const Mass& alpha) {
    if (alpha <= 0 || alpha >= 1) throw AlphaOutOfRange("obsdiam_exact: alpha not in (0,1)");
    auto sup = X.support();
    if (sup.size() > kObsExactCap)
        throw SizeLimitExceeded("obsdiam_exact: support exceeds exact cap");

    ObsResult res;
    res.upper_bound = partial_diameter(X, alpha);
    res.witness.values.assign(X.size(), 0.0);
    // An atom of mass >= alpha forces a zero-length window in every
    // pushforward, so the supremum is 0 and the constant field attains it.
    if (X.max_atom() >= alpha) {
        res.value = 0.0;
        res.mode = ObsResult::Mode::Exact;
        return res;
    }
    std::vector<std::size_t> perm(sup.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    std::vector<std::size_t> best_order;
    std::vector<double> best_gaps;
    std::vector<std::size_t> order(sup.size());
    do {
        if (sup.size() > 1 && perm.front() > perm.back()) continue;  // reversal symmetry
        for (std::size_t k = 0; k < sup.size(); ++k) order[k] = sup[perm[k]];
        auto cone = detail::solve_cone(X, order, alpha, best);
        if (cone && cone->value > best + detail::kLpTol) {
            best = cone->value;
            best_order = order;
            best_gaps = cone->gaps;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    res.value = best;
    res.mode = ObsResult::Mode::Exact;
    if (!best_order.empty()) {
        std::vector<double> vals(best_order.size(), 0.0);
        for (std::size_t k = 1; k < best_order.size(); ++k)
            vals[k] = vals[k - 1] + best_gaps[k - 1];
        res.witness = detail::extend_from_support(X, best_order, vals);
    }
    return res;
}

// Exact zero test for Obsdiam(X;alpha), valid for any support size: an atom
// of mass >= alpha collapses every pushforward window; otherwise an injective
// 1-Lipschitz field spreads every mass->=alpha window over a positive gap.
inline bool obsdiam_is_zero(const FiniteMMSpace& X, const Mass& alpha) {
    if (alpha <= 0 || alpha > 1) throw AlphaOutOfRange("obsdiam_is_zero: alpha not in (0,1]");
    if (X.max_atom() >= alpha) return true;
    auto sup = X.support();
    auto f = detail::generic_injective_field(X, sup);
    return detail::pushforward_partial(X, f, alpha) <= 0.0;
}

// Heuristic lower bound: distance-field anchors, coordinate projections, and
// seeded projected coordinate ascent.
inline ObsResult obsdiam_lower(const FiniteMMSpace& X, const Mass& alpha,
                               std::size_t budget = 16, std::uint64_t seed = 1) {
    if (alpha <= 0 || alpha >= 1) throw AlphaOutOfRange("obsdiam_lower: alpha not in (0,1)");
    ObsResult res;
    res.mode = ObsResult::Mode::LowerBound;
    res.upper_bound = X.diameter();
    res.witness.values.assign(X.size(), 0.0);
    res.value = 0.0;

    auto consider = [&](const LipschitzField& f) {
        double v = detail::pushforward_partial(X, f, alpha);
        if (v > res.value) {
            res.value = v;
            res.witness = f;
        }
    };

    const std::size_t N = X.size();
    // (a) distance fields to singletons and sampled anchor subsets
    for (std::size_t i = 0; i < N; ++i) {
        LipschitzField f;
        f.values.assign(N, 0.0);
        for (std::size_t x = 0; x < N; ++x) f.values[x] = X.d(x, i);
        consider(f);
    }
    Rng rng(seed);
    for (std::size_t t = 0; t < budget; ++t) {
        std::size_t sz = 1 + rng.below(std::max<std::size_t>(1, N / 2));
        std::vector<std::size_t> anchor;
        for (std::size_t k = 0; k < sz; ++k) anchor.push_back(rng.below(N));
        LipschitzField f;
        f.values.assign(N, 0.0);
        for (std::size_t x = 0; x < N; ++x) {
            double m = std::numeric_limits<double>::infinity();
            for (auto a : anchor) m = std::min(m, X.d(x, a));
            f.values[x] = m;
        }
        consider(f);
    }
    // (b) coordinate projections
    if (!X.coords.empty()) {
        std::size_t dim = X.coords.front().size();
        for (std::size_t c = 0; c < dim; ++c) {
            LipschitzField f;
            f.values.assign(N, 0.0);
            for (std::size_t x = 0; x < N; ++x) f.values[x] = X.coords[x][c];
            if (f.valid_for(X)) consider(f);
        }
    }
    // (c) projected coordinate ascent from random starts
    double diam = X.diameter();
    auto project = [&](std::vector<double>& v) {
        for (int sweep = 0; sweep < 200; ++sweep) {
            double worst = 0.0;
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = i + 1; j < N; ++j) {
                    double excess = std::abs(v[i] - v[j]) - X.d(i, j);
                    if (excess > 0) {
                        worst = std::max(worst, excess);
                        double shift = excess / 2 + 1e-15;
                        if (v[i] > v[j]) {
                            v[i] -= shift;
                            v[j] += shift;
                        } else {
                            v[i] += shift;
                            v[j] -= shift;
                        }
                    }
                }
            if (worst <= 0) break;
        }
    };
    for (std::size_t t = 0; t < budget; ++t) {
        LipschitzField f;
        f.values.assign(N, 0.0);
        for (auto& v : f.values) v = rng.uniform() * diam;
        project(f.values);
        if (!f.valid_for(X)) continue;
        double cur = detail::pushforward_partial(X, f, alpha);
        double step = diam / 4;
        while (step > 1e-4 * (diam > 0 ? diam : 1.0)) {
            bool improved = false;
            for (std::size_t i = 0; i < N; ++i)
                for (double s : {step, -step}) {
                    LipschitzField g = f;
                    g.values[i] += s;
                    project(g.values);
                    if (!g.valid_for(X)) continue;
                    double v = detail::pushforward_partial(X, g, alpha);
                    if (v > cur + 1e-12) {
                        cur = v;
                        f = g;
                        improved = true;
                    }
                }
            if (!improved) step /= 2;
        }
        consider(f);
    }
    return res;
}

namespace detail {

// Obsdiam(X;alpha) extended to alpha = 1, where it equals diam(X).
inline double obsdiam_value_closed(const FiniteMMSpace& X, const Mass& alpha) {
    if (alpha == 1) return X.diameter();
    return obsdiam_exact(X, alpha).value;
}

}  // namespace detail

// Aggregate observable diameter inf_alpha((1-alpha) v Obsdiam(X;alpha)).
// Obsdiam(X;.) is constant on the intervals between achievable subset sums of
// atom masses and right-continuous there, so the infimum is attained on the
// finite breakpoint set; the max of a decreasing and a nondecreasing function
// is minimized at their crossing, located by binary search.
inline double obsdiam_aggregate(const FiniteMMSpace& X) {
    auto sup = X.support();
    if (sup.size() > kObsExactCap)
        throw SizeLimitExceeded("obsdiam_aggregate: support exceeds exact cap");
    if (sup.size() == 1) return 0.0;
    std::vector<Mass> sums{Mass(0)};
    for (auto i : sup) {
        std::vector<Mass> next = sums;
        for (const auto& s : sums) next.push_back(s + X.mu(i));
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        sums = std::move(next);
    }
    std::erase_if(sums, [](const Mass& s) { return s <= 0; });

    auto gap = [&](std::size_t k) {
        return detail::obsdiam_value_closed(X, sums[k]) - (1.0 - to_double(sums[k]));
    };
    // smallest k with V(s_k) >= 1 - s_k (exists: k = last gives diam >= 0)
    std::size_t lo = 0, hi = sums.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (gap(mid) >= 0)
            hi = mid;
        else
            lo = mid + 1;
    }
    auto h = [&](std::size_t k) {
        return std::max(1.0 - to_double(sums[k]), detail::obsdiam_value_closed(X, sums[k]));
    };
    double best = h(lo);
    if (lo > 0) best = std::min(best, h(lo - 1));
    return best;
}

namespace detail {

// Can demands abar be packed into distinct bins of the given masses,
// several demands per bin, respecting bin capacity? (per-point form)
inline bool mass_assignment_feasible(std::vector<Mass> masses, std::vector<Mass> alphas) {
    if (mass_sum(alphas) > mass_sum(masses)) return false;
    std::sort(alphas.begin(), alphas.end(), std::greater<>());
    std::sort(masses.begin(), masses.end(), std::greater<>());
    auto rec = [&](auto&& self, std::size_t i, std::vector<Mass>& rem) -> bool {
        if (i == alphas.size()) return true;
        for (std::size_t b = 0; b < rem.size(); ++b) {
            if (rem[b] < alphas[i]) continue;
            if (b > 0 && rem[b] == rem[b - 1]) continue;  // identical bins
            rem[b] -= alphas[i];
            bool ok = self(self, i + 1, rem);
            rem[b] += alphas[i];
            if (ok) return true;
        }
        return false;
    };
    return rec(rec, 0, masses);
}

// Injective version: each index needs its own bin with mass >= alpha_i.
// Sorted greedy matching is exact for this structure.
inline bool distinct_mass_matching(std::vector<Mass> masses, std::vector<Mass> alphas) {
    if (alphas.size() > masses.size()) return false;
    std::sort(alphas.begin(), alphas.end(), std::greater<>());
    std::sort(masses.begin(), masses.end(), std::greater<>());
    for (std::size_t i = 0; i < alphas.size(); ++i)
        if (masses[i] < alphas[i]) return false;
    return true;
}

// Can the masses be grouped into n disjoint groups with group i total
// >= alpha_i? (D-nonemptiness depends only on the mass multiset.)
inline bool disjoint_group_feasible(const std::vector<Mass>& masses,
                                    const std::vector<Mass>& alphas) {
    const std::size_t n = alphas.size();
    std::vector<Mass> cur(n, Mass(0));
    std::vector<Mass> suffix(masses.size() + 1, Mass(0));
    for (std::size_t k = masses.size(); k-- > 0;) suffix[k] = suffix[k + 1] + masses[k];
    auto rec = [&](auto&& self, std::size_t k) -> bool {
        Mass need(0);
        bool done = true;
        for (std::size_t i = 0; i < n; ++i)
            if (cur[i] < alphas[i]) {
                need += alphas[i] - cur[i];
                done = false;
            }
        if (done) return true;
        if (k == masses.size() || need > suffix[k]) return false;
        for (std::size_t i = 0; i < n; ++i) {
            bool dup = false;
            for (std::size_t j = 0; j < i; ++j)
                if (cur[j] == cur[i] && alphas[j] == alphas[i]) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            cur[i] += masses[k];
            if (self(self, k + 1)) {
                cur[i] -= masses[k];
                return true;
            }
            cur[i] -= masses[k];
        }
        return self(self, k + 1);
    };
    return rec(rec, 0);
}

// Zero condition for diam'' of a line measure with the given atom masses:
// either an injective matching of indices to atoms with mass >= alpha_i, or
// no disjoint family exists at all and the support has at most n atoms.
inline bool doubleprime_zero_by_masses(const std::vector<Mass>& masses,
                                       const std::vector<Mass>& alphas) {
    if (distinct_mass_matching(masses, alphas)) return true;
    return !disjoint_group_feasible(masses, alphas) && masses.size() <= alphas.size();
}

// Enumerate partitions of the support (as fiber patterns of 1-Lipschitz
// functions) and test a mass-multiset predicate on each; returns the first
// violating partition, if any. Partitions are generated in restricted-growth
// order, so the result is deterministic.
template <typename Pred>
inline std::optional<std::vector<std::vector<std::size_t>>> first_violating_partition(
    const FiniteMMSpace& X, const std::vector<std::size_t>& sup, Pred&& zero_ok) {
    std::vector<std::size_t> part(sup.size(), 0);
    std::map<std::vector<Mass>, bool> memo;
    std::optional<std::vector<std::vector<std::size_t>>> hit;
    auto rec = [&](auto&& self, std::size_t k, std::size_t blocks) -> bool {
        if (k == sup.size()) {
            std::vector<Mass> masses(blocks, Mass(0));
            for (std::size_t i = 0; i < sup.size(); ++i) masses[part[i]] += X.mu(sup[i]);
            std::sort(masses.begin(), masses.end());
            auto it = memo.find(masses);
            bool ok = it != memo.end() ? it->second : (memo[masses] = zero_ok(masses));
            if (!ok) {
                std::vector<std::vector<std::size_t>> groups(blocks);
                for (std::size_t i = 0; i < sup.size(); ++i) groups[part[i]].push_back(sup[i]);
                hit = std::move(groups);
                return true;
            }
            return false;
        }
        for (std::size_t b = 0; b <= blocks; ++b) {
            part[k] = b;
            if (self(self, k + 1, std::max(blocks, b + 1))) return true;
        }
        return false;
    };
    rec(rec, 0, 0);
    return hit;
}

// A 1-Lipschitz field realizing a support partition as its fiber pattern:
// distinct block values spaced by (min cross-block distance)/(#blocks-1).
inline LipschitzField partition_field(const FiniteMMSpace& X,
                                      const std::vector<std::vector<std::size_t>>& groups) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < groups.size(); ++a)
        for (std::size_t b = a + 1; b < groups.size(); ++b)
            for (auto x : groups[a])
                for (auto y : groups[b]) dmin = std::min(dmin, X.d(x, y));
    double scale = groups.size() > 1 ? dmin / double(groups.size() - 1) : 0.0;
    LipschitzField f;
    f.values.assign(X.size(), 0.0);
    std::vector<std::size_t> sup;
    std::vector<double> vals;
    for (std::size_t b = 0; b < groups.size(); ++b)
        for (auto x : groups[b]) {
            sup.push_back(x);
            vals.push_back(scale * double(b));
        }
    return extend_from_support(X, sup, vals);
}

}  // namespace detail

// u-Obsdiam(X;abar): exact when zero (or when a witness meets the u-diam
// upper bound); otherwise a certified lower bound with u-diam as the upper
// bound. Zero test: the finest fiber pattern (an injective field) is the
// hardest case for the per-point packing condition, and packing feasibility
// survives every coarsening, so u-Obsdiam = 0 iff the point masses can absorb
// the alpha_i directly.
inline ObsResult underline_obsdiam(const FiniteMMSpace& X, const AlphaVector& abar) {
    auto sup = X.support();
    if (sup.size() > kObsExactCap)
        throw SizeLimitExceeded("underline_obsdiam: support exceeds exact cap");
    ObsResult res;
    res.witness.values.assign(X.size(), 0.0);
    if (abar.sum() > 1) {
        res.value = std::numeric_limits<double>::infinity();
        res.upper_bound = std::numeric_limits<double>::infinity();
        res.mode = ObsResult::Mode::Exact;
        return res;
    }
    auto udiam = underline_diam(X, abar);
    res.upper_bound = udiam.value;

    std::vector<Mass> masses;
    for (auto i : sup) masses.push_back(X.mu(i));
    if (detail::mass_assignment_feasible(masses, abar.alphas)) {
        res.value = 0.0;
        res.mode = ObsResult::Mode::Exact;
        return res;
    }

    // positive: certified lower bound over a witness portfolio
    auto line_value = [&](const LipschitzField& f) {
        auto nu = pushforward(X, f);
        if (nu.atoms.size() == 1) return 0.0;
        return underline_diam(line_space(nu), abar).value;
    };
    double best = 0.0;
    LipschitzField bw;
    bw.values.assign(X.size(), 0.0);
    auto consider = [&](const LipschitzField& f) {
        double v = line_value(f);
        if (v > best) {
            best = v;
            bw = f;
        }
    };
    for (std::size_t i = 0; i < X.size(); ++i) {
        LipschitzField f;
        f.values.assign(X.size(), 0.0);
        for (std::size_t x = 0; x < X.size(); ++x) f.values[x] = X.d(x, i);
        consider(f);
    }
    consider(detail::generic_injective_field(X, sup));
    // the exact witness at the largest single alpha guarantees the lower
    // sandwich inequality numerically
    if (abar.max() < 1) consider(obsdiam_exact(X, abar.max()).witness);
    res.value = best;
    res.witness = bw;
    res.mode = (best + detail::kLpTol >= res.upper_bound) ? ObsResult::Mode::Exact
                                                  : ObsResult::Mode::LowerBound;
    if (res.mode == ObsResult::Mode::Exact) res.value = res.upper_bound;
    return res;
}

// Obsdiam''(X;abar): zero-ness decided exactly by enumerating fiber patterns
// (every partition of the support is realizable by a 1-Lipschitz field, and
// the zero condition for the line diam'' depends only on the fiber masses);
// positive values reported as certified lower bounds.
inline ObsResult obsdiam_doubleprime(const FiniteMMSpace& X, const AlphaVector& abar) {
    auto sup = X.support();
    if (sup.size() > kObsExactCap)
        throw SizeLimitExceeded("obsdiam_doubleprime: support exceeds exact cap");
    ObsResult res;
    res.witness.values.assign(X.size(), 0.0);
    res.upper_bound = X.diameter();

    auto violating = detail::first_violating_partition(X, sup, [&](const std::vector<Mass>& m) {
        return detail::doubleprime_zero_by_masses(m, abar.alphas);
    });
    if (!violating) {
        res.value = 0.0;
        res.upper_bound = 0.0;
        res.mode = ObsResult::Mode::Exact;
        return res;
    }
    auto line_value = [&](const LipschitzField& f) {
        auto nu = pushforward(X, f);
        return diam_doubleprime(line_space(nu), abar);
    };
    double best = 0.0;
    LipschitzField bw = detail::partition_field(X, *violating);
    best = line_value(bw);
    auto consider = [&](const LipschitzField& f) {
        double v = line_value(f);
        if (v > best) {
            best = v;
            bw = f;
        }
    };
    for (std::size_t i = 0; i < X.size(); ++i) {
        LipschitzField f;
        f.values.assign(X.size(), 0.0);
        for (std::size_t x = 0; x < X.size(); ++x) f.values[x] = X.d(x, i);
        consider(f);
    }
    consider(detail::generic_injective_field(X, sup));
    res.value = best;
    res.witness = bw;
    res.mode = ObsResult::Mode::LowerBound;
    return res;
}

struct RepairResult {
    LipschitzField field;
    double achieved_ky_fan = 0.0;
    bool met_eps = false;
};

// Repair an arbitrary field to a 1-Lipschitz one: greedily keep a heaviest
// defect-free subset and take the McShane extension of the kept values.
inline RepairResult lipschitz_repair(const FiniteMMSpace& X, const std::vector<double>& f,
                                     double eps) {
    if (f.size() != X.size()) throw DimensionMismatch("lipschitz_repair: field length mismatch");
    auto order = atoms(X);  // support sorted by mass desc, label-order ties
    std::vector<std::size_t> kept;
    for (const auto& [i, w] : order) {
        bool ok = true;
        for (auto j : kept)
            if (std::abs(f[i] - f[j]) > X.d(i, j) + eps + kMetricTol) {
                ok = false;
                break;
            }
        if (ok) kept.push_back(i);
    }
    RepairResult out;
    std::vector<double> vals;
    for (auto i : kept) vals.push_back(f[i]);
    out.field = detail::extend_from_support(X, kept, vals);
    std::vector<std::pair<double, Mass>> dev;
    for (std::size_t i = 0; i < X.size(); ++i)
        if (X.mu(i) > 0) dev.emplace_back(std::abs(f[i] - out.field.values[i]), X.mu(i));
    out.achieved_ky_fan = ky_fan_deviation(dev);
    out.met_eps = out.achieved_ky_fan <= eps + kMetricTol;
    return out;
}

}  // namespace mmi
