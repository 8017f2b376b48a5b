#pragma once

// Hand-built fixture networks and a bounded random-network source shared by
// the test binaries.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scnsim/network.hpp"
#include "scnsim/policy.hpp"
#include "scnsim/rng.hpp"

namespace scnsim::test {

inline Product product(std::string id, std::string category = "",
                       std::string industry = "General", bool mining = false) {
    Product p;
    p.id = std::move(id);
    p.category = category.empty() ? p.id : std::move(category);
    p.industry = std::move(industry);
    p.is_mining = mining;
    return p;
}

inline FirmInput firm(std::string id, std::string country,
                      std::vector<std::string> products,
                      std::string industry = "General",
                      std::optional<double> market_cap = std::nullopt) {
    FirmInput f;
    f.id = std::move(id);
    f.name = f.id;
    f.country = std::move(country);
    f.industry = std::move(industry);
    f.products = std::move(products);
    f.market_cap = market_cap;
    return f;
}

inline EdgeInput edge(std::string supplier, std::string customer,
                      std::vector<std::string> products = {},
                      std::optional<double> weight = std::nullopt) {
    EdgeInput e;
    e.supplier = std::move(supplier);
    e.customer = std::move(customer);
    e.products = std::move(products);
    e.weight = weight;
    return e;
}

// One shared product, all firms in one country; edge list defines the shape.
inline SupplyNetwork shape(std::size_t n_firms,
                           const std::vector<std::pair<std::size_t, std::size_t>>& arcs,
                           const std::vector<std::string>& countries = {}) {
    std::vector<Product> catalog{product("P0")};
    std::vector<FirmInput> firms;
    for (std::size_t i = 0; i < n_firms; ++i) {
        const std::string country = countries.empty() ? "US" : countries[i];
        firms.push_back(firm("F" + std::to_string(i), country, {"P0"}));
    }
    std::vector<EdgeInput> edges;
    for (const auto& [s, c] : arcs) {
        edges.push_back(edge("F" + std::to_string(s), "F" + std::to_string(c)));
    }
    return SupplyNetwork::build(catalog, firms, edges);
}

// a - b - c as an undirected path.
inline SupplyNetwork path3() { return shape(3, {{0, 1}, {1, 2}}); }

inline SupplyNetwork triangle() { return shape(3, {{0, 1}, {1, 2}, {2, 0}}); }

// Hub F0 with n-1 leaves.
inline SupplyNetwork star(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t i = 1; i < n; ++i) arcs.emplace_back(0, i);
    return shape(n, arcs);
}

inline SupplyNetwork complete(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) arcs.emplace_back(i, j);
    }
    return shape(n, arcs);
}

inline SupplyNetwork two_triangles() {
    return shape(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
}

// Id-string views of outcome pieces, for order-free comparisons.
inline std::set<std::string> product_ids(const SupplyNetwork& net,
                                         const std::set<ProductIndex>& products) {
    std::set<std::string> out;
    for (ProductIndex p : products) out.insert(net.product(p).id);
    return out;
}

inline std::set<std::string> firm_ids(const SupplyNetwork& net,
                                      const std::set<FirmIndex>& firms) {
    std::set<std::string> out;
    for (FirmIndex f : firms) out.insert(net.firm(f).id);
    return out;
}

inline std::set<std::pair<std::string, std::string>> edge_pairs(
    const SupplyNetwork& net, const std::vector<SupplyEdge>& edges) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& e : edges) out.emplace(net.firm(e.supplier).id, net.firm(e.customer).id);
    return out;
}

inline std::set<std::pair<std::string, std::string>> edge_pairs(const SupplyNetwork& net) {
    return edge_pairs(net, net.edges());
}

inline std::set<std::pair<std::string, std::string>> flagged_pairs_ids(
    const SupplyNetwork& net, const std::set<std::pair<FirmIndex, ProductIndex>>& flagged) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [c, p] : flagged) out.emplace(net.firm(c).id, net.product(p).id);
    return out;
}

struct RandomNetOptions {
    std::size_t max_firms = 50;
    std::size_t max_countries = 10;
    std::size_t max_products = 30;
};

// Bounded random network: every firm carries at least one product, edges are
// duplicate-free with no self-loops, and roughly a third of the edges pin an
// explicit product subset.
inline SupplyNetwork random_network(Rng& rng, const RandomNetOptions& opt = {}) {
    const std::size_t n = 2 + rng.bounded(opt.max_firms - 1);
    const std::size_t n_countries = 1 + rng.bounded(opt.max_countries);
    const std::size_t n_products = 1 + rng.bounded(opt.max_products);

    std::vector<Product> catalog;
    for (std::size_t i = 0; i < n_products; ++i) {
        catalog.push_back(product("P" + std::to_string(i), "category " + std::to_string(i),
                                  "Ind" + std::to_string(i % 3), rng.bounded(5) == 0));
    }

    std::vector<FirmInput> firms;
    for (std::size_t i = 0; i < n; ++i) {
        std::set<std::string> portfolio;
        const std::size_t k = 1 + rng.bounded(4);
        for (std::size_t j = 0; j < k; ++j) {
            portfolio.insert("P" + std::to_string(rng.bounded(n_products)));
        }
        firms.push_back(firm("F" + std::to_string(i),
                             "C" + std::to_string(rng.bounded(n_countries)),
                             {portfolio.begin(), portfolio.end()},
                             "Ind" + std::to_string(rng.bounded(3))));
    }

    std::vector<EdgeInput> edges;
    std::set<std::pair<std::size_t, std::size_t>> used;
    const std::size_t target = n + rng.bounded(2 * n + 1);
    for (std::size_t attempt = 0; attempt < 10 * target; ++attempt) {
        if (edges.size() >= target) break;
        const std::size_t s = rng.bounded(n);
        const std::size_t c = rng.bounded(n);
        if (s == c || !used.emplace(s, c).second) continue;
        std::vector<std::string> traded;
        if (rng.bounded(3) == 0) {
            const auto& portfolio = firms[s].products;
            traded.push_back(portfolio[rng.bounded(portfolio.size())]);
        }
        edges.push_back(edge(firms[s].id, firms[c].id, std::move(traded)));
    }
    return SupplyNetwork::build(catalog, firms, edges);
}

// Countries present in the network, sorted.
inline std::vector<std::string> countries_of(const SupplyNetwork& net) {
    std::set<std::string> seen;
    for (FirmIndex f = 0; f < net.firm_count(); ++f) seen.insert(net.firm(f).country);
    return {seen.begin(), seen.end()};
}

inline CountryCluster cluster_of(std::string name, const std::set<std::string>& countries) {
    CountryCluster c;
    c.name = std::move(name);
    c.countries = countries;
    return c;
}

// Random nonempty S; for country_plus_one also a nonempty disjoint X (returns
// nullopt when the network has a single country, since X would be empty).
inline std::optional<PolicyScope> random_scope(Rng& rng, const SupplyNetwork& net,
                                               PolicyKind policy) {
    const std::vector<std::string> countries = countries_of(net);
    if (policy == PolicyKind::country_plus_one && countries.size() < 2) return std::nullopt;

    std::set<std::string> s_set;
    const std::size_t max_s = policy == PolicyKind::country_plus_one ? countries.size() - 1
                                                                     : countries.size();
    const std::size_t s_size = 1 + rng.bounded(max_s);
    std::vector<std::string> pool = countries;
    rng.shuffle(pool);
    for (std::size_t i = 0; i < s_size; ++i) s_set.insert(pool[i]);

    PolicyScope scope;
    scope.policy = policy;
    scope.S = cluster_of("S", s_set);
    if (policy == PolicyKind::country_plus_one) {
        std::set<std::string> x_set;
        for (std::size_t i = s_size; i < pool.size(); ++i) {
            if (x_set.empty() || rng.bounded(2) == 0) x_set.insert(pool[i]);
        }
        scope.X = cluster_of("X", x_set);
    }
    return scope;
}

} // namespace scnsim::test
