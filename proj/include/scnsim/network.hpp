#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scnsim/types.hpp"

namespace scnsim {

struct BuildReport {
    std::size_t duplicate_edges = 0;
    std::vector<std::string> warnings;
};

enum class EdgeClass { domestic, international };

// Immutable firm-to-firm supply network. Firms, products and portfolios live
// in a shared base so policy rewiring can produce a new network that differs
// only in its edge set.
class SupplyNetwork {
public:
    SupplyNetwork() = default;

    // Builds the network, assigning dense indices in sorted-id order so the
    // result is independent of input order. Throws ScnError on duplicate
    // firm/product ids, dangling edge endpoints ("unknown firm id"),
    // self-loops ("self-supply rejected"), edge products outside the
    // supplier's portfolio ("edge-product mismatch") and unknown portfolio
    // products ("unknown product"). Duplicate (supplier, customer) edges
    // collapse to one: weights are summed and product lists unioned (an
    // empty list means the full portfolio and absorbs any union).
    static SupplyNetwork build(const std::vector<Product>& catalog,
                               const std::vector<FirmInput>& firms,
                               const std::vector<EdgeInput>& edges,
                               BuildReport* report = nullptr);

    std::size_t firm_count() const { return base_ ? base_->firms.size() : 0; }
    std::size_t product_count() const { return base_ ? base_->products.size() : 0; }
    std::size_t edge_count() const { return edges_.size(); }

    const Firm& firm(FirmIndex f) const { return base_->firms[f]; }
    const Product& product(ProductIndex p) const { return base_->products[p]; }
    const std::vector<SupplyEdge>& edges() const { return edges_; }

    FirmIndex firm_index(std::string_view id) const;        // throws "unknown firm id"
    ProductIndex product_index(std::string_view id) const;  // throws "unknown product"
    bool has_firm(std::string_view id) const;

    // Firms whose portfolio contains p (portfolio inverse, not edge-based).
    std::span<const FirmIndex> producers_of(ProductIndex p) const;

    // In-neighbors / out-neighbors by edge direction supplier -> customer.
    std::span<const FirmIndex> suppliers_of(FirmIndex f) const;
    std::span<const FirmIndex> customers_of(FirmIndex f) const;

    bool has_edge(FirmIndex supplier, FirmIndex customer) const;

    EdgeClass classify_edge(const SupplyEdge& e) const;

    // Firms whose country is in the given set. Throws "empty scope" on an
    // empty country set. Result is sorted by firm index.
    std::vector<FirmIndex> firms_in_countries(const std::set<std::string>& countries) const;

    // New network sharing this network's firms/products, with a replacement
    // edge set (deduplicated and index-validated).
    SupplyNetwork with_edges(std::vector<SupplyEdge> new_edges) const;

    // Total degree (in + out edge count) per firm.
    std::size_t in_degree(FirmIndex f) const { return in_adj_[f].size(); }
    std::size_t out_degree(FirmIndex f) const { return out_adj_[f].size(); }

private:
    struct Base {
        std::vector<Firm> firms;
        std::vector<Product> products;
        std::unordered_map<std::string, FirmIndex> firm_by_id;
        std::unordered_map<std::string, ProductIndex> product_by_id;
        std::vector<std::vector<FirmIndex>> producers; // product -> sorted firms
    };

    void rebuild_adjacency();

    std::shared_ptr<const Base> base_;
    std::vector<SupplyEdge> edges_;                 // sorted by (supplier, customer)
    std::vector<std::vector<FirmIndex>> in_adj_;    // suppliers per firm, sorted
    std::vector<std::vector<FirmIndex>> out_adj_;   // customers per firm, sorted
};

} // namespace scnsim
