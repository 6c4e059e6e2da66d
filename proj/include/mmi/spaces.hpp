#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmi/rational.hpp"
#include "mmi/rng.hpp"
#include "mmi/space.hpp"

namespace mmi {

struct DeltaTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kGridCap = 4096;
inline constexpr std::size_t kRandomDiscreteCap = 64;

// N points sampled uniformly on the n-sphere of radius r (Gaussian
// normalization), geodesic metric, uniform weights. The angle uses the
// numerically stable 2*atan2(|u-v|, |u+v|) form so the triangle inequality
// survives floating point even near antipodes.
inline FiniteMMSpace sphere_sample(std::size_t n, double r, std::size_t N, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> unit(N, std::vector<double>(n + 1, 0.0));
    for (auto& u : unit) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& c : u) {
                c = rng.gaussian();
                norm += c * c;
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        for (auto& c : u) c /= norm;
    }
    std::vector<std::string> labels;
    std::vector<std::vector<double>> dist(N, std::vector<double>(N, 0.0));
    std::vector<std::vector<double>> coords(N, std::vector<double>(n + 1, 0.0));
    std::vector<Mass> w(N, Mass(1, static_cast<long>(N)));
    for (std::size_t i = 0; i < N; ++i) {
        labels.push_back("s" + std::to_string(i));
        for (std::size_t c = 0; c <= n; ++c) coords[i][c] = r * unit[i][c];
        for (std::size_t j = 0; j < i; ++j) {
            double dm = 0.0, dp = 0.0;
            for (std::size_t c = 0; c <= n; ++c) {
                dm += (unit[i][c] - unit[j][c]) * (unit[i][c] - unit[j][c]);
                dp += (unit[i][c] + unit[j][c]) * (unit[i][c] + unit[j][c]);
            }
            double ang = 2.0 * std::atan2(std::sqrt(dm), std::sqrt(dp));
            dist[i][j] = dist[j][i] = r * ang;
        }
    }
    return FiniteMMSpace{std::move(labels), std::move(dist), std::move(w), std::move(coords)};
}

// Uniform measure on the grid {0..k-1}^m scaled into [0,1]^m, sup-metric.
inline FiniteMMSpace grid_cube(std::size_t m, std::size_t k) {
    std::size_t total = 1;
    for (std::size_t j = 0; j < m; ++j) {
        total *= k;
        if (total > kGridCap) throw SizeLimitExceeded("grid_cube: k^m exceeds cap");
    }
    double denom = k > 1 ? double(k - 1) : 1.0;
    std::vector<std::vector<double>> coords;
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t t = 0; t < total; ++t) {
        std::vector<double> p(m);
        for (std::size_t j = 0; j < m; ++j) p[j] = double(idx[j]) / denom;
        coords.push_back(std::move(p));
        for (std::size_t j = 0; j < m; ++j) {
            if (++idx[j] < k) break;
            idx[j] = 0;
        }
    }
    std::vector<std::string> labels;
    std::vector<std::vector<double>> dist(total, std::vector<double>(total, 0.0));
    std::vector<Mass> w(total, Mass(1, static_cast<long>(total)));
    for (std::size_t a = 0; a < total; ++a) {
        labels.push_back("g" + std::to_string(a));
        for (std::size_t b = 0; b < a; ++b) {
            double d = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                d = std::max(d, std::abs(coords[a][j] - coords[b][j]));
            dist[a][b] = dist[b][a] = d;
        }
    }
    return FiniteMMSpace{std::move(labels), std::move(dist), std::move(w), std::move(coords)};
}

// Random finite mm-space: shortest-path completion of a random symmetric
// matrix for the metric; rational-grid weights (exact boundary alphas in
// tests); with probability atomic_bias one atom is inflated above 1/2.
inline FiniteMMSpace random_discrete(std::size_t N, std::uint64_t seed, double atomic_bias = 0.0) {
    if (N > kRandomDiscreteCap) throw SizeLimitExceeded("random_discrete: N exceeds cap");
    Rng rng(seed);
    std::vector<std::vector<double>> dist(N, std::vector<double>(N, 0.0));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) dist[i][j] = dist[j][i] = rng.uniform(0.1, 1.0);
    for (std::size_t k = 0; k < N; ++k)  // Floyd-Warshall completion
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);

    // integer ticks on a common denominator keep the weights exact
    std::vector<long> ticks(N, 0);
    for (auto& t : ticks) t = 1 + long(rng.below(16));
    if (N > 1)
        for (auto& t : ticks)
            if (rng.uniform() < 0.15) t = 0;  // occasional off-support point
    bool any = false;
    for (auto t : ticks) any = any || t > 0;
    if (!any) ticks[rng.below(N)] = 1;
    if (atomic_bias > 0 && rng.uniform() < atomic_bias) {
        long rest = 0;
        for (auto t : ticks) rest += t;
        std::size_t big = rng.below(N);
        ticks[big] += rest + 1;  // guarantees mass > 1/2
    }
    long total = 0;
    for (auto t : ticks) total += t;
    std::vector<Mass> w;
    for (auto t : ticks) w.push_back(Mass(t, total));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < N; ++i) labels.push_back("x" + std::to_string(i));
    return FiniteMMSpace{std::move(labels), std::move(dist), std::move(w), {}};
}

// Move at most delta of mass (total variation) between two support atoms;
// the metric and the support are unchanged.
inline FiniteMMSpace perturb_weights(const FiniteMMSpace& X, double delta, std::uint64_t seed) {
    auto sup = X.support();
    Mass minw = X.mu(sup.front());
    for (auto i : sup) minw = std::min(minw, X.mu(i));
    Mass d = mass_from_double(delta);
    if (d >= minw) throw DeltaTooLarge("perturb_weights: delta reaches the smallest weight");
    FiniteMMSpace Y = X;
    if (sup.size() < 2 || d == 0) return Y;
    Rng rng(seed);
    std::size_t a = sup[rng.below(sup.size())];
    std::size_t b = sup[rng.below(sup.size())];
    while (b == a) b = sup[rng.below(sup.size())];
    Mass moved = d / 2;
    Y.weight[a] -= moved;
    Y.weight[b] += moved;
    return Y;
}

}  // namespace mmi
