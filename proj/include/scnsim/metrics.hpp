#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scnsim/network.hpp"

namespace scnsim {

// Undirected simple projection of the supply network: one edge per unordered
// firm pair with at least one directed edge between them. Every metric except
// edge_count and density runs on this view.
struct UndirectedView {
    std::size_t n = 0;
    std::vector<std::vector<FirmIndex>> adj;             // sorted neighbor lists
    std::vector<std::pair<FirmIndex, FirmIndex>> edges;  // u < v, sorted

    static UndirectedView project(const SupplyNetwork& net);
    std::size_t degree(FirmIndex v) const { return adj[v].size(); }
};

enum class PathMode { exact, sampled };

struct MetricOptions {
    PathMode path_mode = PathMode::exact;
    std::size_t path_samples = 512; // BFS sources in sampled mode
    std::uint64_t seed = 0;         // master seed; paths and communities draw child streams
};

// One row of the before/after tables. Assortativities and path length are
// undefined on degenerate networks and stay unset rather than defaulting to 0.
struct MetricReport {
    std::size_t edge_count = 0;                    // directed edges after dedup
    double density = 0.0;                          // m / (n*(n-1))
    std::optional<double> degree_assortativity;
    std::optional<double> location_assortativity;
    std::optional<double> avg_shortest_path;       // largest component only
    double avg_domestic = 0.0;                     // mean same-country undirected partners
    double avg_international = 0.0;                // mean other-country undirected partners
    double clustering_coefficient = 0.0;           // mean local clustering, deg<2 counts 0
    double modularity = 0.0;                       // Newman Q of the detected partition
    std::size_t community_count = 0;
};

// Bundles every metric; component errors become unset fields, never aborts.
MetricReport metric_report(const SupplyNetwork& net, const MetricOptions& opts = {});

double density(const SupplyNetwork& net); // throws "degenerate network" when n < 2
std::optional<double> degree_assortativity(const UndirectedView& g);
std::optional<double> location_assortativity(const SupplyNetwork& net, const UndirectedView& g);
double clustering_coefficient(const UndirectedView& g);
double avg_shortest_path(const UndirectedView& g, PathMode mode = PathMode::exact,
                         std::size_t samples = 512, std::uint64_t seed = 0); // throws "no paths"
std::pair<double, double> avg_connection_split(const SupplyNetwork& net, const UndirectedView& g);

std::vector<FirmIndex> largest_component(const UndirectedView& g);

struct CommunityResult {
    std::vector<std::uint32_t> assignment; // community id per firm, 0..k-1 compacted
    std::size_t community_count = 0;
    double modularity = 0.0;
};

// Seeded greedy multilevel modularity maximization on the undirected
// projection; isolated firms end up singleton communities.
CommunityResult detect_communities(const UndirectedView& g, std::uint64_t seed = 0);

// Newman Q of an explicit partition; throws "partition not total" when some
// firm has no in-range assignment.
double modularity_of_partition(const UndirectedView& g, const std::vector<std::uint32_t>& assignment);

std::vector<double> eigenvector_centrality(const UndirectedView& g, double tol = 1e-10,
                                           std::size_t max_iter = 1000); // throws "no convergence"
std::vector<double> closeness_centrality(const UndirectedView& g);
std::vector<double> betweenness_centrality(const UndirectedView& g);

std::string metrics_to_json(const MetricReport& r);

extern const char* const kMetricRowLabels[10]; // table row order == field order
std::vector<std::string> metric_row_values(const MetricReport& r); // formatted, "undefined" when unset

} // namespace scnsim
