#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scnsim/generator.hpp"
#include "scnsim/metrics.hpp"
#include "scnsim/policy.hpp"
#include "scnsim/scopes.hpp"

namespace scnsim {

struct FileSource {
    std::string firms;
    std::string products;
    std::string edges;
};

struct NetworkSource {
    std::optional<FileSource> files;
    std::optional<GeneratorConfig> generator;
};

// Cluster names and/or explicit country codes, minus optional exclusions.
// Names may combine clusters with " & " ("Low & Medium Risk").
struct ScopeSelector {
    std::vector<std::string> clusters;
    std::vector<std::string> countries;
    std::vector<std::string> exclude_clusters;
    std::vector<std::string> exclude_countries;

    bool empty() const {
        return clusters.empty() && countries.empty();
    }
};

struct Scenario {
    std::string name;
    NetworkSource source;
    std::string scope_set = "builtin"; // "builtin" or a scope config path
    PolicyKind policy = PolicyKind::country_plus_one;
    ScopeSelector S;
    ScopeSelector X; // country_plus_one only
    SelectionStrategy selection;
    std::size_t iterations = 5;
    std::uint64_t master_seed = 0;
    PathMode path_mode = PathMode::exact;
    std::size_t path_samples = 512;
};

std::vector<Scenario> load_scenarios(const std::string& json_text); // single object or {"scenarios": [...]}
std::vector<Scenario> load_scenarios_file(const std::string& path);

// One JSON value: a cluster-name string or a selector object.
ScopeSelector parse_selector_json(const std::string& json_value_text, const std::string& where);

CountryCluster resolve_selector(const ScopeSelector& sel, const ScopeSet& scopes, std::string name);

struct Distribution {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    std::size_t samples = 0;

    static Distribution of(std::vector<double> values); // linear-interpolation quartiles
};

struct IterationSummary {
    std::uint64_t seed = 0;
    std::size_t edges_added = 0;
    std::size_t edges_removed = 0;
    std::size_t ns_products = 0;
    std::size_t ns_companies = 0;
    MetricReport metrics;
};

struct AggregateResult {
    std::string scenario_name;
    std::string error; // run_suite: non-empty marks a failed scenario
    MetricReport baseline;
    std::map<std::string, Distribution> metric_distributions; // MetricReport field -> spread over iterations
    double mean_ns_products = 0.0;
    double mean_ns_companies = 0.0;
    std::vector<std::string> ns_products_union;        // product ids, sorted
    std::vector<std::string> ns_products_intersection; // product ids, sorted
    std::vector<IterationSummary> iterations;
    // NS-derived reports; identical across iterations since substitutability
    // is portfolio-based.
    std::map<std::string, std::size_t> affected_by_country;
    std::map<std::string, std::size_t> affected_by_industry;
    std::vector<std::pair<std::string, std::size_t>> top_industries;
    std::vector<std::pair<std::string, std::size_t>> top_products;
    double mining_share = 0.0;
    std::vector<std::size_t> affected_degrees;
};

AggregateResult run_scenario(const Scenario& sc);
std::vector<AggregateResult> run_suite(const std::vector<Scenario>& scenarios);

std::string aggregate_to_json(const AggregateResult& r);
std::string suite_summary_json(const std::vector<AggregateResult>& results);

// Per-scenario files under dir/<scenario_name>/: metric_table.csv,
// affected_by_country.csv, affected_by_industry.csv, top_industries.csv,
// top_products.csv, boxplot.csv, affected_degrees.csv, aggregate.json;
// plus dir/summary.json across the suite.
void write_reports(const std::vector<AggregateResult>& results, const std::string& dir);

std::string boxplot_csv(const AggregateResult& r);
std::string scenario_metric_table_csv(const AggregateResult& r);

} // namespace scnsim
