#pragma once

#include <cstddef>
#include <optional>
#include <queue>
#include <vector>

#include "mmi/rational.hpp"

namespace mmi {

// Bipartite transport feasibility: route every left demand through allowed
// arcs into right-side capacities.
struct FlowProblem {
    std::vector<Mass> demands;                   // left side, must be fully shipped
    std::vector<Mass> capacities;                // right side, upper bounds
    std::vector<std::vector<bool>> allowed;      // demands.size() x capacities.size()
};

struct FlowResult {
    bool feasible = false;
    // On success: flow[i][j] with row sums == demands, column sums <= capacities.
    std::vector<std::vector<Mass>> flow;
    // On failure: a left subset whose total demand exceeds the capacity of its
    // reachable right neighborhood (Hall certificate).
    std::vector<std::size_t> deficit_set;
    Mass max_flow_value = Mass(0);
};

// Edmonds-Karp on the bipartite graph with a super source/sink. Exact
// rational arithmetic; the augmentation count is bounded by V*E regardless of
// capacity values, so termination does not depend on the numerics.
inline FlowResult maxflow_feasible(const FlowProblem& p) {
    const std::size_t L = p.demands.size();
    const std::size_t R = p.capacities.size();
    // Node ids: 0 = source, 1..L = left, L+1..L+R = right, L+R+1 = sink.
    const std::size_t S = 0, T = L + R + 1, V = L + R + 2;

    // cap[u][v] residual capacities (dense; problems are tiny).
    std::vector<std::vector<Mass>> cap(V, std::vector<Mass>(V, Mass(0)));
    for (std::size_t i = 0; i < L; ++i) cap[S][1 + i] = p.demands[i];
    for (std::size_t j = 0; j < R; ++j) cap[L + 1 + j][T] = p.capacities[j];
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < R; ++j)
            if (p.allowed[i][j]) cap[1 + i][L + 1 + j] = p.demands[i];  // row demand caps the arc

    Mass total(0);
    while (true) {
        std::vector<std::size_t> parent(V, V);
        parent[S] = S;
        std::queue<std::size_t> q;
        q.push(S);
        while (!q.empty() && parent[T] == V) {
            auto u = q.front();
            q.pop();
            for (std::size_t v = 0; v < V; ++v)
                if (parent[v] == V && cap[u][v] > 0) {
                    parent[v] = u;
                    q.push(v);
                }
        }
        if (parent[T] == V) break;
        Mass aug = cap[parent[T]][T];
        for (std::size_t v = T; v != S; v = parent[v]) aug = std::min(aug, cap[parent[v]][v]);
        for (std::size_t v = T; v != S; v = parent[v]) {
            cap[parent[v]][v] -= aug;
            cap[v][parent[v]] += aug;
        }
        total += aug;
    }

    FlowResult res;
    res.max_flow_value = total;
    Mass demand_total = mass_sum(p.demands);
    if (total == demand_total) {
        res.feasible = true;
        res.flow.assign(L, std::vector<Mass>(R, Mass(0)));
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = 0; j < R; ++j)
                if (p.allowed[i][j]) res.flow[i][j] = cap[L + 1 + j][1 + i];  // back edge
        return res;
    }
    // Min-cut side reachable from the source in the residual graph gives the
    // violating left subset.
    std::vector<bool> seen(V, false);
    seen[S] = true;
    std::queue<std::size_t> q;
    q.push(S);
    while (!q.empty()) {
        auto u = q.front();
        q.pop();
        for (std::size_t v = 0; v < V; ++v)
            if (!seen[v] && cap[u][v] > 0) {
                seen[v] = true;
                q.push(v);
            }
    }
    for (std::size_t i = 0; i < L; ++i)
        if (seen[1 + i]) res.deficit_set.push_back(i);
    return res;
}

// Convenience: can demands be shipped at all (value only, no witness)?
inline bool flow_feasible(const std::vector<Mass>& demands, const std::vector<Mass>& capacities,
                          const std::vector<std::vector<bool>>& allowed) {
    return maxflow_feasible({demands, capacities, allowed}).feasible;
}

}  // namespace mmi
