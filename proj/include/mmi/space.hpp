#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmi/rational.hpp"

namespace mmi {

inline constexpr double kMetricTol = 1e-9;
inline constexpr double kWeightTol = 1e-12;
inline constexpr double kMergeTol = 1e-12;

struct SizeLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AlphaOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A finitely supported probability measure on the real line.
struct Measure1D {
    struct Atom {
        double position;
        Mass mass;
    };
    std::vector<Atom> atoms;  // strictly increasing positions, masses > 0

    Mass total() const {
        Mass s(0);
        for (const auto& a : atoms) s += a.mass;
        return s;
    }
};

// A tuple of positive reals; the multivariable diameter parameter.
struct AlphaVector {
    std::vector<Mass> alphas;

    explicit AlphaVector(std::vector<Mass> a) : alphas(std::move(a)) {
        if (alphas.empty()) throw AlphaOutOfRange("alpha vector must be nonempty");
        for (const auto& x : alphas)
            if (x <= 0) throw AlphaOutOfRange("alpha entries must be positive");
    }

    std::size_t size() const { return alphas.size(); }
    Mass sum() const { return mass_sum(alphas); }
    Mass max() const { return *std::max_element(alphas.begin(), alphas.end()); }
};

// A finite metric space with a probability weight vector. Construct via
// validate_space; the raw struct carries the unchecked description.
struct FiniteMMSpace {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> dist;
    std::vector<Mass> weight;
    // Optional coordinate embedding (one vector per point); empty if absent.
    std::vector<std::vector<double>> coords;

    std::size_t size() const { return labels.size(); }

    const Mass& mu(std::size_t i) const { return weight[i]; }

    double d(std::size_t i, std::size_t j) const { return dist[i][j]; }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < weight.size(); ++i)
            if (weight[i] > 0) s.push_back(i);
        return s;
    }

    double diameter() const {
        double m = 0;
        auto s = support();
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = a + 1; b < s.size(); ++b) m = std::max(m, dist[s[a]][s[b]]);
        return m;
    }

    Mass max_atom() const {
        Mass m(0);
        for (const auto& w : weight) m = std::max(m, w);
        return m;
    }

    // Sorted distinct candidate thresholds: 0 and all support pairwise distances.
    std::vector<double> threshold_candidates() const {
        std::vector<double> c{0.0};
        auto s = support();
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = a + 1; b < s.size(); ++b) c.push_back(dist[s[a]][s[b]]);
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        return c;
    }
};

struct Violation {
    enum class Code {
        AsymmetricMatrix,
        TriangleViolation,
        WeightsNotProbability,
        NegativeEntry,
        ZeroDistance,
        BadShape,
    };
    Code code;
    std::size_t x = 0, y = 0, z = 0;
    std::string message;
};

struct ValidationResult {
    std::optional<FiniteMMSpace> space;
    std::vector<Violation> violations;
    bool ok() const { return space.has_value(); }
};

// Checks every invariant and reports all violations at once. The triangle
// inequality is validated, never repaired. Weight sums within 1e-12 of 1 are
// rescaled exactly so the internal invariant is an exact sum of 1.
inline ValidationResult validate_space(std::vector<std::string> labels,
                                       std::vector<std::vector<double>> dist,
                                       std::vector<Mass> weight,
                                       std::vector<std::vector<double>> coords = {}) {
    ValidationResult res;
    const std::size_t n = labels.size();
    if (dist.size() != n || weight.size() != n) {
        res.violations.push_back({Violation::Code::BadShape, 0, 0, 0,
                                  "labels, dist, and weights must have matching sizes"});
        return res;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (dist[i].size() != n) {
            res.violations.push_back(
                {Violation::Code::BadShape, i, 0, 0, "distance matrix is not square"});
            return res;
        }
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i][i] != 0.0)
            res.violations.push_back(
                {Violation::Code::NegativeEntry, i, i, 0, "nonzero diagonal entry"});
        for (std::size_t j = 0; j < n; ++j) {
            if (dist[i][j] < 0.0)
                res.violations.push_back(
                    {Violation::Code::NegativeEntry, i, j, 0, "negative distance"});
            if (i != j && dist[i][j] == 0.0)
                res.violations.push_back({Violation::Code::ZeroDistance, i, j, 0,
                                          "distinct points at distance zero (pseudo-metric)"});
            if (j > i && std::abs(dist[i][j] - dist[j][i]) > kMetricTol)
                res.violations.push_back(
                    {Violation::Code::AsymmetricMatrix, i, j, 0, "asymmetric distance matrix"});
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (i != j && j != k && i != k &&
                    dist[i][k] > dist[i][j] + dist[j][k] + kMetricTol)
                    res.violations.push_back({Violation::Code::TriangleViolation, i, j, k,
                                              "triangle inequality violated"});
    Mass sum(0);
    bool neg = false;
    for (const auto& w : weight) {
        if (w < 0) neg = true;
        sum += w;
    }
    if (neg)
        res.violations.push_back(
            {Violation::Code::WeightsNotProbability, 0, 0, 0, "negative weight"});
    if (std::abs(to_double(sum - 1)) > kWeightTol)
        res.violations.push_back(
            {Violation::Code::WeightsNotProbability, 0, 0, 0, "weights do not sum to 1"});
    if (!coords.empty() && coords.size() != n) {
        res.violations.push_back(
            {Violation::Code::BadShape, 0, 0, 0, "coords size mismatch"});
    }
    if (!res.violations.empty()) return res;

    if (sum != 1)
        for (auto& w : weight) w /= sum;
    res.space = FiniteMMSpace{std::move(labels), std::move(dist), std::move(weight),
                              std::move(coords)};
    return res;
}

inline FiniteMMSpace validate_space_or_throw(std::vector<std::string> labels,
                                             std::vector<std::vector<double>> dist,
                                             std::vector<Mass> weight,
                                             std::vector<std::vector<double>> coords = {}) {
    auto r = validate_space(std::move(labels), std::move(dist), std::move(weight),
                            std::move(coords));
    if (!r.ok()) throw std::invalid_argument("invalid space: " + r.violations.front().message);
    return *r.space;
}

// A real value per point, constrained by the distance matrix.
struct LipschitzField {
    std::vector<double> values;
    double lipschitz_bound = 1.0;

    double defect(const FiniteMMSpace& X) const {
        double worst = 0;
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t j = i + 1; j < values.size(); ++j)
                worst = std::max(worst, std::abs(values[i] - values[j]) -
                                            lipschitz_bound * X.d(i, j));
        return worst;
    }

    bool valid_for(const FiniteMMSpace& X) const {
        return values.size() == X.size() && defect(X) <= kMetricTol;
    }
};

// Pushforward f_*mu: merge masses of near-equal values (absolute tolerance
// 1e-12, then exact merge), drop zero-weight points, sort ascending.
inline Measure1D pushforward(const FiniteMMSpace& X, const LipschitzField& f) {
    if (f.values.size() != X.size())
        throw DimensionMismatch("pushforward: field length mismatch");
    std::vector<std::pair<double, Mass>> vals;
    for (std::size_t i = 0; i < X.size(); ++i)
        if (X.mu(i) > 0) vals.emplace_back(f.values[i], X.mu(i));
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Measure1D m;
    for (auto& [pos, mass] : vals) {
        if (!m.atoms.empty() && pos - m.atoms.back().position <= kMergeTol)
            m.atoms.back().mass += mass;
        else
            m.atoms.push_back({pos, std::move(mass)});
    }
    return m;
}

// Positive-weight points sorted by mass descending, ties by label order.
inline std::vector<std::pair<std::size_t, Mass>> atoms(const FiniteMMSpace& X) {
    std::vector<std::pair<std::size_t, Mass>> out;
    for (std::size_t i = 0; i < X.size(); ++i)
        if (X.mu(i) > 0) out.emplace_back(i, X.mu(i));
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return X.labels[a.first] < X.labels[b.first];
    });
    return out;
}

// A family of sub-probability pieces alpha_i * mu_i with supports; witnesses
// membership in the decomposition set behind the underline diameter.
struct SubProbDecomposition {
    std::vector<std::vector<std::size_t>> supports;  // point indices per row
    std::vector<std::vector<Mass>> mass;             // mass[i][x] = alpha_i * mu_i({x})

    // Row sums must equal the alphas; column sums must stay below the weights.
    bool valid_for(const FiniteMMSpace& X, const AlphaVector& abar) const {
        if (supports.size() != abar.size() || mass.size() != abar.size()) return false;
        std::vector<Mass> col(X.size(), Mass(0));
        for (std::size_t i = 0; i < mass.size(); ++i) {
            if (mass[i].size() != X.size()) return false;
            Mass row(0);
            for (std::size_t x = 0; x < X.size(); ++x) {
                if (mass[i][x] < 0) return false;
                if (mass[i][x] > 0 &&
                    std::find(supports[i].begin(), supports[i].end(), x) == supports[i].end())
                    return false;
                row += mass[i][x];
                col[x] += mass[i][x];
            }
            if (row != abar.alphas[i]) return false;
        }
        for (std::size_t x = 0; x < X.size(); ++x)
            if (col[x] > X.mu(x)) return false;
        return true;
    }
};

// Smallest rho >= 0 with mu({deviation > rho}) <= rho, for a weighted list of
// nonnegative deviations. The step function rho -> mu(> rho) is piecewise
// constant, so the optimum lies in the finite candidate set of deviation
// values and tail masses; each candidate is checked directly.
inline double ky_fan_deviation(const std::vector<std::pair<double, Mass>>& dev) {
    std::vector<double> cands{0.0};
    for (const auto& [v, m] : dev) cands.push_back(v);
    for (const auto& [v, m] : dev) {
        Mass tail(0);
        for (const auto& [w, mm] : dev)
            if (w > v) tail += mm;
        cands.push_back(to_double(tail));
    }
    double best = std::numeric_limits<double>::infinity();
    for (double rho : cands) {
        Mass above(0);
        for (const auto& [v, m] : dev)
            if (v > rho) above += m;
        if (to_double(above) <= rho) best = std::min(best, rho);
    }
    return best;
}

}  // namespace mmi
