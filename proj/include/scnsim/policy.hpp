#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scnsim/network.hpp"
#include "scnsim/scopes.hpp"

namespace scnsim {

enum class PolicyKind { country_plus_one, friendshoring, reshoring };

PolicyKind parse_policy(const std::string& name); // throws "unknown policy"
std::string policy_name(PolicyKind kind);

// How many alternative suppliers get attached per (customer, product) that
// needs one: every alternative found, or a seeded uniform sample of k of them.
// Selection never affects NS sets or edge removals, only which additions are
// made.
struct SelectionStrategy {
    bool all = true;
    std::size_t sample_k = 1;

    static SelectionStrategy everything() { return {}; }
    static SelectionStrategy sample(std::size_t k) { return {false, k}; }
};

SelectionStrategy parse_selection(const std::string& text); // "all" | "sample:K"
std::string selection_name(const SelectionStrategy& sel);

// Scope of a policy run. S is the acting cluster (S1 for reshoring); X is the
// risky set, Country+1 only.
struct PolicyScope {
    PolicyKind policy = PolicyKind::country_plus_one;
    CountryCluster S;
    std::optional<CountryCluster> X;
};

struct PolicyOutcome {
    SupplyNetwork network_after;
    std::set<ProductIndex> ns_products;  // NS_p
    std::set<FirmIndex> ns_companies;    // NS_c
    std::vector<SupplyEdge> added_edges;   // sorted (supplier, customer)
    std::vector<SupplyEdge> removed_edges; // sorted (supplier, customer)
    std::set<std::pair<FirmIndex, ProductIndex>> flagged_pairs;
    std::map<std::string, std::size_t> affected_by_country;  // country -> NS_c firms
    std::map<std::string, std::size_t> affected_by_industry; // industry -> NS_p products
};

// {k in candidates : k != exclude and p in k.products}; pure portfolio check.
std::vector<FirmIndex> alternative_suppliers(const SupplyNetwork& net, ProductIndex p,
                                             const std::vector<FirmIndex>& candidates,
                                             FirmIndex exclude);

PolicyOutcome apply_country_plus_one(const SupplyNetwork& net, const PolicyScope& scope,
                                     const SelectionStrategy& sel, std::uint64_t seed);
PolicyOutcome apply_friendshoring(const SupplyNetwork& net, const PolicyScope& scope,
                                  const SelectionStrategy& sel, std::uint64_t seed);
PolicyOutcome apply_reshoring(const SupplyNetwork& net, const PolicyScope& scope,
                              const SelectionStrategy& sel, std::uint64_t seed);
PolicyOutcome apply_policy(const SupplyNetwork& net, const PolicyScope& scope,
                           const SelectionStrategy& sel, std::uint64_t seed);

// Industries ranked by distinct NS_p products carrying the label; products by
// distinct flagged customers. Ties lexicographic by label.
std::vector<std::pair<std::string, std::size_t>> rank_vulnerable_industries(
    const SupplyNetwork& net, const PolicyOutcome& outcome, std::size_t k);
std::vector<std::pair<std::string, std::size_t>> rank_vulnerable_products(
    const SupplyNetwork& net, const PolicyOutcome& outcome, std::size_t k);

double mining_share(const SupplyNetwork& net, const PolicyOutcome& outcome);

// Pre-policy total degrees (in + out) of the NS_c firms, sorted ascending.
std::vector<std::size_t> affected_degrees(const SupplyNetwork& net_before,
                                          const PolicyOutcome& outcome);

} // namespace scnsim
