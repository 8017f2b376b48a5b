#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "scnsim/metrics.hpp"
#include "scnsim/rng.hpp"

namespace scnsim {

namespace {

struct WeightedGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj; // no self entries, sorted
    std::vector<double> self_weight;
    std::vector<double> wdeg; // adj weights + 2 * self_weight
    double total_weight = 0.0;
};

WeightedGraph from_view(const UndirectedView& g) {
    WeightedGraph w;
    w.n = g.n;
    w.adj.assign(g.n, {});
    w.self_weight.assign(g.n, 0.0);
    w.wdeg.assign(g.n, 0.0);
    for (const auto& [u, v] : g.edges) {
        w.adj[u].emplace_back(v, 1.0);
        w.adj[v].emplace_back(u, 1.0);
        w.wdeg[u] += 1.0;
        w.wdeg[v] += 1.0;
    }
    for (auto& nbrs : w.adj) std::sort(nbrs.begin(), nbrs.end());
    w.total_weight = static_cast<double>(g.edges.size());
    return w;
}

// One local-move phase; first positive-gain community in neighbor-scan order
// wins. Returns whether any node changed community.
bool local_moves(const WeightedGraph& g, std::vector<std::uint32_t>& comm,
                 std::vector<double>& comm_tot, Rng& rng) {
    std::vector<std::uint32_t> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    std::vector<double> weight_to(g.n, 0.0);
    std::vector<std::uint32_t> touched;
    const double m2 = 2.0 * g.total_weight;

    bool any_move = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (const std::uint32_t u : order) {
            if (g.adj[u].empty()) continue;
            const std::uint32_t c0 = comm[u];

            touched.clear();
            for (const auto& [v, w] : g.adj[u]) {
                const std::uint32_t c = comm[v];
                if (weight_to[c] == 0.0) touched.push_back(c);
                weight_to[c] += w;
            }
            if (weight_to[c0] == 0.0) touched.push_back(c0);

            comm_tot[c0] -= g.wdeg[u];
            const double stay_gain = weight_to[c0] - comm_tot[c0] * g.wdeg[u] / m2;

            std::uint32_t best = c0;
            for (const auto& [v, w] : g.adj[u]) {
                const std::uint32_t c = comm[v];
                if (c == c0) continue;
                const double gain = weight_to[c] - comm_tot[c] * g.wdeg[u] / m2;
                if (gain > stay_gain + 1e-12) {
                    best = c;
                    break;
                }
            }

            comm_tot[best] += g.wdeg[u];
            comm[u] = best;
            if (best != c0) {
                moved = true;
                any_move = true;
            }
            for (const std::uint32_t c : touched) weight_to[c] = 0.0;
        }
    }
    return any_move;
}

// Collapses communities to super-nodes; labels compacted in first-member order.
WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::uint32_t>& comm,
                        std::vector<std::uint32_t>& compact) {
    compact.assign(g.n, 0);
    std::vector<std::uint32_t> label(g.n, UINT32_MAX);
    std::uint32_t next = 0;
    for (std::uint32_t u = 0; u < g.n; ++u) {
        if (label[comm[u]] == UINT32_MAX) label[comm[u]] = next++;
        compact[u] = label[comm[u]];
    }

    WeightedGraph out;
    out.n = next;
    out.adj.assign(next, {});
    out.self_weight.assign(next, 0.0);
    out.wdeg.assign(next, 0.0);
    out.total_weight = g.total_weight;

    std::vector<std::vector<std::pair<std::uint32_t, double>>> buckets(next);
    for (std::uint32_t u = 0; u < g.n; ++u) {
        const std::uint32_t cu = compact[u];
        out.self_weight[cu] += g.self_weight[u];
        for (const auto& [v, w] : g.adj[u]) {
            const std::uint32_t cv = compact[v];
            if (cu == cv) {
                if (u < v) out.self_weight[cu] += w;
            } else {
                buckets[cu].emplace_back(cv, w);
            }
        }
    }
    for (std::uint32_t c = 0; c < next; ++c) {
        auto& bucket = buckets[c];
        std::sort(bucket.begin(), bucket.end());
        for (std::size_t i = 0; i < bucket.size();) {
            double sum = 0.0;
            std::size_t j = i;
            while (j < bucket.size() && bucket[j].first == bucket[i].first) {
                sum += bucket[j].second;
                ++j;
            }
            out.adj[c].emplace_back(bucket[i].first, sum);
            i = j;
        }
        double deg = 2.0 * out.self_weight[c];
        for (const auto& [v, w] : out.adj[c]) deg += w;
        out.wdeg[c] = deg;
    }
    return out;
}

} // namespace

CommunityResult detect_communities(const UndirectedView& g, std::uint64_t seed) {
    CommunityResult result;
    if (g.n == 0) return result;

    Rng rng(seed);
    WeightedGraph level = from_view(g);
    std::vector<std::uint32_t> node_to_level(g.n);
    std::iota(node_to_level.begin(), node_to_level.end(), 0);
    std::vector<std::uint32_t> comm(level.n);
    std::iota(comm.begin(), comm.end(), 0);

    if (!g.edges.empty()) {
        while (true) {
            std::vector<double> comm_tot = level.wdeg;
            comm.resize(level.n);
            std::iota(comm.begin(), comm.end(), 0);
            if (!local_moves(level, comm, comm_tot, rng)) break;

            std::vector<std::uint32_t> compact;
            WeightedGraph next = aggregate(level, comm, compact);
            for (auto& c : node_to_level) c = compact[c];
            if (next.n == level.n) break;
            level = std::move(next);
        }
    }

    // Compact final labels over original nodes in first-appearance order.
    std::vector<std::uint32_t> label(level.n, UINT32_MAX);
    std::uint32_t next_label = 0;
    result.assignment.assign(g.n, 0);
    for (std::size_t v = 0; v < g.n; ++v) {
        const std::uint32_t c = node_to_level[v];
        if (label[c] == UINT32_MAX) label[c] = next_label++;
        result.assignment[v] = label[c];
    }
    result.community_count = next_label;
    result.modularity = modularity_of_partition(g, result.assignment);
    return result;
}

} // namespace scnsim
