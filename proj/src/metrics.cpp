#include "scnsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <numeric>

#include "json.hpp"
#include "scnsim/rng.hpp"

namespace scnsim {

UndirectedView UndirectedView::project(const SupplyNetwork& net) {
    UndirectedView g;
    g.n = net.firm_count();
    g.adj.assign(g.n, {});
    for (const auto& e : net.edges()) {
        const FirmIndex u = std::min(e.supplier, e.customer);
        const FirmIndex v = std::max(e.supplier, e.customer);
        g.edges.emplace_back(u, v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    for (const auto& [u, v] : g.edges) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& nbrs : g.adj) std::sort(nbrs.begin(), nbrs.end());
    return g;
}

double density(const SupplyNetwork& net) {
    const auto n = net.firm_count();
    if (n < 2) throw ScnError("degenerate network: density needs at least 2 firms");
    return static_cast<double>(net.edge_count()) / (static_cast<double>(n) * (n - 1));
}

std::optional<double> degree_assortativity(const UndirectedView& g) {
    if (g.edges.empty()) return std::nullopt;
    // Exact integer moments over both orientations of every edge.
    unsigned __int128 sx = 0, sxx = 0, sxy = 0;
    for (const auto& [u, v] : g.edges) {
        const unsigned __int128 du = g.degree(u);
        const unsigned __int128 dv = g.degree(v);
        sx += du + dv;
        sxx += du * du + dv * dv;
        sxy += 2 * du * dv;
    }
    const unsigned __int128 m2 = 2 * static_cast<unsigned __int128>(g.edges.size());
    // var = (m2*sxx - sx^2) / m2^2, cov likewise; the denominators cancel.
    const __int128 var_num = static_cast<__int128>(m2 * sxx) - static_cast<__int128>(sx * sx);
    const __int128 cov_num = static_cast<__int128>(m2 * sxy) - static_cast<__int128>(sx * sx);
    if (var_num == 0) return std::nullopt;
    return static_cast<double>(cov_num) / static_cast<double>(var_num);
}

std::optional<double> location_assortativity(const SupplyNetwork& net, const UndirectedView& g) {
    if (g.edges.empty()) return std::nullopt;
    std::map<std::string, std::size_t> endpoint_counts;
    std::size_t same = 0;
    for (const auto& [u, v] : g.edges) {
        const auto& cu = net.firm(u).country;
        const auto& cv = net.firm(v).country;
        ++endpoint_counts[cu];
        ++endpoint_counts[cv];
        if (cu == cv) ++same;
    }
    const double m = static_cast<double>(g.edges.size());
    double sum_ab = 0.0;
    for (const auto& [country, count] : endpoint_counts) {
        const double a = static_cast<double>(count) / (2.0 * m);
        sum_ab += a * a;
    }
    const double trace = static_cast<double>(same) / m;
    const double denom = 1.0 - sum_ab;
    if (denom <= 0.0) return std::nullopt;
    return (trace - sum_ab) / denom;
}

double clustering_coefficient(const UndirectedView& g) {
    if (g.n == 0) return 0.0;
    std::vector<std::size_t> wedge_triangles(g.n, 0); // 2 * triangles through node
    for (const auto& [u, v] : g.edges) {
        const auto& a = g.adj[u];
        const auto& b = g.adj[v];
        std::size_t common = 0;
        for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
            if (a[i] < b[j]) {
                ++i;
            } else if (a[i] > b[j]) {
                ++j;
            } else {
                ++common;
                ++i;
                ++j;
            }
        }
        wedge_triangles[u] += common;
        wedge_triangles[v] += common;
    }
    double total = 0.0;
    for (FirmIndex v = 0; v < g.n; ++v) {
        const std::size_t d = g.degree(v);
        if (d < 2) continue;
        total += static_cast<double>(wedge_triangles[v]) / (static_cast<double>(d) * (d - 1));
    }
    return total / static_cast<double>(g.n);
}

std::vector<FirmIndex> largest_component(const UndirectedView& g) {
    std::vector<int> seen(g.n, 0);
    std::vector<FirmIndex> best, current, queue;
    for (FirmIndex s = 0; s < g.n; ++s) {
        if (seen[s]) continue;
        current.clear();
        queue.assign(1, s);
        seen[s] = 1;
        while (!queue.empty()) {
            const FirmIndex u = queue.back();
            queue.pop_back();
            current.push_back(u);
            for (FirmIndex w : g.adj[u]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
            }
        }
        if (current.size() > best.size()) best = current;
    }
    std::sort(best.begin(), best.end());
    return best;
}

namespace {

// Sum of BFS distances from source to every other node of its component,
// restricted to the given membership mask.
std::uint64_t bfs_distance_sum(const UndirectedView& g, FirmIndex source,
                               std::vector<std::int32_t>& dist) {
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<FirmIndex> queue;
    dist[source] = 0;
    queue.push_back(source);
    std::uint64_t total = 0;
    while (!queue.empty()) {
        const FirmIndex u = queue.front();
        queue.pop_front();
        total += static_cast<std::uint64_t>(dist[u]);
        for (FirmIndex w : g.adj[u]) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return total;
}

} // namespace

double avg_shortest_path(const UndirectedView& g, PathMode mode, std::size_t samples,
                         std::uint64_t seed) {
    std::vector<FirmIndex> lcc = largest_component(g);
    if (lcc.size() < 2) throw ScnError("no paths: largest component has fewer than 2 firms");

    std::vector<FirmIndex> sources;
    if (mode == PathMode::exact || samples >= lcc.size()) {
        sources = lcc;
    } else {
        Rng rng(seed);
        sources = rng.sample(lcc, samples);
    }

    std::vector<std::int32_t> dist(g.n);
    std::uint64_t total = 0;
    for (FirmIndex s : sources) total += bfs_distance_sum(g, s, dist);
    return static_cast<double>(total) /
           (static_cast<double>(sources.size()) * static_cast<double>(lcc.size() - 1));
}

std::pair<double, double> avg_connection_split(const SupplyNetwork& net, const UndirectedView& g) {
    if (g.n == 0) return {0.0, 0.0};
    std::uint64_t domestic = 0, international = 0;
    for (FirmIndex v = 0; v < g.n; ++v) {
        const auto& country = net.firm(v).country;
        for (FirmIndex w : g.adj[v]) {
            if (net.firm(w).country == country) {
                ++domestic;
            } else {
                ++international;
            }
        }
    }
    const double n = static_cast<double>(g.n);
    return {static_cast<double>(domestic) / n, static_cast<double>(international) / n};
}

double modularity_of_partition(const UndirectedView& g,
                               const std::vector<std::uint32_t>& assignment) {
    if (assignment.size() != g.n) {
        throw ScnError("partition not total: assignment covers " +
                       std::to_string(assignment.size()) + " of " + std::to_string(g.n) +
                       " firms");
    }
    if (g.edges.empty()) return 0.0;
    std::map<std::uint32_t, std::uint64_t> intra, degree_sum;
    for (const auto& [u, v] : g.edges) {
        if (assignment[u] == assignment[v]) ++intra[assignment[u]];
    }
    for (FirmIndex v = 0; v < g.n; ++v) {
        degree_sum[assignment[v]] += g.degree(v);
    }
    const double m = static_cast<double>(g.edges.size());
    double q = 0.0;
    for (const auto& [comm, dsum] : degree_sum) {
        const double e = intra.count(comm) ? static_cast<double>(intra.at(comm)) / m : 0.0;
        const double a = static_cast<double>(dsum) / (2.0 * m);
        q += e - a * a;
    }
    return q;
}

std::vector<double> eigenvector_centrality(const UndirectedView& g, double tol,
                                           std::size_t max_iter) {
    std::vector<double> result(g.n, 0.0);
    const std::vector<FirmIndex> lcc = largest_component(g);
    if (lcc.empty()) return result;
    if (lcc.size() == 1) {
        result[lcc[0]] = 1.0;
        return result;
    }

    std::vector<double> x(g.n, 0.0), next(g.n, 0.0);
    const double init = 1.0 / std::sqrt(static_cast<double>(lcc.size()));
    for (FirmIndex v : lcc) x[v] = init;

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        // Shifted iteration (A + I) keeps bipartite components from oscillating.
        for (FirmIndex v : lcc) {
            double sum = x[v];
            for (FirmIndex w : g.adj[v]) sum += x[w];
            next[v] = sum;
        }
        double norm = 0.0;
        for (FirmIndex v : lcc) norm += next[v] * next[v];
        norm = std::sqrt(norm);
        double delta = 0.0;
        for (FirmIndex v : lcc) {
            next[v] /= norm;
            delta = std::max(delta, std::fabs(next[v] - x[v]));
            x[v] = next[v];
        }
        if (delta < tol) {
            for (FirmIndex v : lcc) result[v] = x[v];
            return result;
        }
    }
    throw ScnError("no convergence: eigenvector centrality exceeded max iterations");
}

std::vector<double> closeness_centrality(const UndirectedView& g) {
    std::vector<double> result(g.n, 0.0);
    std::vector<std::int32_t> dist(g.n);
    for (FirmIndex s = 0; s < g.n; ++s) {
        if (g.degree(s) == 0) continue;
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<FirmIndex> queue;
        dist[s] = 0;
        queue.push_back(s);
        std::uint64_t total = 0;
        std::size_t reachable = 0;
        while (!queue.empty()) {
            const FirmIndex u = queue.front();
            queue.pop_front();
            total += static_cast<std::uint64_t>(dist[u]);
            ++reachable;
            for (FirmIndex w : g.adj[u]) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if (total > 0) {
            result[s] = static_cast<double>(reachable - 1) / static_cast<double>(total);
        }
    }
    return result;
}

std::vector<double> betweenness_centrality(const UndirectedView& g) {
    std::vector<double> result(g.n, 0.0);
    if (g.n < 3) return result;

    std::vector<std::vector<FirmIndex>> pred(g.n);
    std::vector<std::int64_t> sigma(g.n);
    std::vector<std::int32_t> dist(g.n);
    std::vector<double> delta(g.n);
    std::vector<FirmIndex> order;
    order.reserve(g.n);

    for (FirmIndex s = 0; s < g.n; ++s) {
        for (auto& p : pred) p.clear();
        std::fill(sigma.begin(), sigma.end(), 0);
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(delta.begin(), delta.end(), 0.0);
        order.clear();

        sigma[s] = 1;
        dist[s] = 0;
        std::deque<FirmIndex> queue{s};
        while (!queue.empty()) {
            const FirmIndex u = queue.front();
            queue.pop_front();
            order.push_back(u);
            for (FirmIndex w : g.adj[u]) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[u] + 1) {
                    sigma[w] += sigma[u];
                    pred[w].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const FirmIndex w = *it;
            for (FirmIndex u : pred[w]) {
                delta[u] += (static_cast<double>(sigma[u]) / static_cast<double>(sigma[w])) *
                            (1.0 + delta[w]);
            }
            if (w != s) result[w] += delta[w];
        }
    }

    // Each unordered pair was accumulated from both endpoints; halve, then
    // normalize by the pair count (n-1)(n-2)/2 with the global node count.
    const double norm = static_cast<double>(g.n - 1) * static_cast<double>(g.n - 2) / 2.0;
    for (auto& value : result) value = value / 2.0 / norm;
    return result;
}

MetricReport metric_report(const SupplyNetwork& net, const MetricOptions& opts) {
    MetricReport r;
    const std::size_t n = net.firm_count();
    r.edge_count = net.edge_count();
    if (n >= 2) {
        r.density = density(net);
    }
    const UndirectedView g = UndirectedView::project(net);
    r.degree_assortativity = degree_assortativity(g);
    r.location_assortativity = location_assortativity(net, g);
    try {
        r.avg_shortest_path = avg_shortest_path(g, opts.path_mode, opts.path_samples,
                                                derive_seed(opts.seed, SeedStream::paths));
    } catch (const ScnError&) {
        r.avg_shortest_path = std::nullopt;
    }
    std::tie(r.avg_domestic, r.avg_international) = avg_connection_split(net, g);
    r.clustering_coefficient = clustering_coefficient(g);
    if (n > 0) {
        const CommunityResult communities =
            detect_communities(g, derive_seed(opts.seed, SeedStream::communities));
        r.modularity = communities.modularity;
        r.community_count = communities.community_count;
    }
    return r;
}

const char* const kMetricRowLabels[10] = {
    "Avg. No. Edges",
    "Density",
    "Degree Assortativity",
    "Location Assortativity",
    "Avg. Shortest Path Length",
    "Avg. Domestic connections",
    "Avg. International Connections",
    "Clustering Coefficient",
    "Modularity",
    "No. Communities",
};

namespace {

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_real(*value) : "undefined";
}

} // namespace

std::vector<std::string> metric_row_values(const MetricReport& r) {
    return {
        std::to_string(r.edge_count),
        format_real(r.density),
        format_optional(r.degree_assortativity),
        format_optional(r.location_assortativity),
        format_optional(r.avg_shortest_path),
        format_real(r.avg_domestic),
        format_real(r.avg_international),
        format_real(r.clustering_coefficient),
        format_real(r.modularity),
        std::to_string(r.community_count),
    };
}

std::string metrics_to_json(const MetricReport& r) {
    nlohmann::json doc;
    doc["edge_count"] = r.edge_count;
    doc["density"] = r.density;
    doc["degree_assortativity"] =
        r.degree_assortativity ? nlohmann::json(*r.degree_assortativity) : nlohmann::json();
    doc["location_assortativity"] =
        r.location_assortativity ? nlohmann::json(*r.location_assortativity) : nlohmann::json();
    doc["avg_shortest_path"] =
        r.avg_shortest_path ? nlohmann::json(*r.avg_shortest_path) : nlohmann::json();
    doc["avg_domestic"] = r.avg_domestic;
    doc["avg_international"] = r.avg_international;
    doc["clustering_coefficient"] = r.clustering_coefficient;
    doc["modularity"] = r.modularity;
    doc["community_count"] = r.community_count;
    return doc.dump(2) + "\n";
}

} // namespace scnsim
