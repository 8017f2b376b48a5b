#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace scnsim {

struct CountryCluster {
    std::string name;
    std::set<std::string> countries; // ISO alpha-2, normalized
};

enum class ScopeKind { geographical, geopolitical, custom };

struct ScopeSet {
    ScopeKind kind = ScopeKind::custom;
    std::map<std::string, CountryCluster> clusters;

    const CountryCluster& resolve(const std::string& name) const; // throws "unknown cluster"
    bool contains(const std::string& name) const { return clusters.count(name) != 0; }
};

// Country name/code normalization. Accepts ISO alpha-2 codes as-is
// (uppercased) and maps known country names (including the variants that
// show up in cluster listings, e.g. "Czechia" and "Czech Republic") to one
// code. Returns nullopt for anything unrecognized.
std::optional<std::string> normalize_country(std::string_view raw);

// The six built-in clusters: geographical (Asian, American, European) and
// geopolitical risk tiers (Low Risk, Medium Risk, High Risk). The combined
// "Low & Medium Risk" scope is derived with union_cluster.
ScopeSet builtin_scopes();

// Loads a scope config document (JSON). Accepts either
//   {"kind": "custom", "clusters": {"Name": ["Germany", "FR", ...], ...}}
// or the array form
//   {"clusters": [{"name": "Name", "countries": [...]}, ...]}
// Country entries may be names or alpha-2 codes; unknown names are rejected
// with cluster context. Duplicate cluster names (array form) are an error.
// For geopolitical scope sets a country listed in two tiers is kept in the
// lower-risk tier, with a warning.
ScopeSet load_scopes(const std::string& json_text, std::vector<std::string>* warnings = nullptr);
ScopeSet load_scopes_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

std::string scopes_to_json(const ScopeSet& scopes);

CountryCluster union_cluster(const CountryCluster& a, const CountryCluster& b, std::string name);

} // namespace scnsim
