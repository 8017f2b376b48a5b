#include "scnsim/network.hpp"

#include <algorithm>
#include <utility>

namespace scnsim {

namespace {

void merge_edge(SupplyEdge& into, const SupplyEdge& other) {
    if (other.weight) {
        into.weight = into.weight ? *into.weight + *other.weight : *other.weight;
    }
    // An empty product list stands for the full portfolio and absorbs the union.
    if (into.products.empty() || other.products.empty()) {
        into.products.clear();
        return;
    }
    into.products.insert(into.products.end(), other.products.begin(), other.products.end());
    std::sort(into.products.begin(), into.products.end());
    into.products.erase(std::unique(into.products.begin(), into.products.end()),
                        into.products.end());
}

// Deduplicates (supplier, customer) pairs in place; returns merge count.
std::size_t dedupe_edges(std::vector<SupplyEdge>& edges) {
    std::sort(edges.begin(), edges.end(), [](const SupplyEdge& a, const SupplyEdge& b) {
        return std::tie(a.supplier, a.customer) < std::tie(b.supplier, b.customer);
    });
    std::size_t duplicates = 0;
    std::size_t out = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (out > 0 && edges[out - 1].supplier == edges[i].supplier &&
            edges[out - 1].customer == edges[i].customer) {
            merge_edge(edges[out - 1], edges[i]);
            ++duplicates;
        } else {
            if (out != i) edges[out] = std::move(edges[i]);
            ++out;
        }
    }
    edges.resize(out);
    return duplicates;
}

} // namespace

SupplyNetwork SupplyNetwork::build(const std::vector<Product>& catalog,
                                   const std::vector<FirmInput>& firms,
                                   const std::vector<EdgeInput>& edges, BuildReport* report) {
    auto base = std::make_shared<Base>();

    base->products = catalog;
    std::sort(base->products.begin(), base->products.end(),
              [](const Product& a, const Product& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < base->products.size(); ++i) {
        if (!base->product_by_id.emplace(base->products[i].id, static_cast<ProductIndex>(i)).second) {
            throw ScnError("duplicate product id: '" + base->products[i].id + "'");
        }
    }

    std::vector<const FirmInput*> ordered;
    ordered.reserve(firms.size());
    for (const auto& f : firms) ordered.push_back(&f);
    std::sort(ordered.begin(), ordered.end(),
              [](const FirmInput* a, const FirmInput* b) { return a->id < b->id; });

    base->firms.reserve(firms.size());
    for (const FirmInput* in : ordered) {
        const auto index = static_cast<FirmIndex>(base->firms.size());
        if (!base->firm_by_id.emplace(in->id, index).second) {
            throw ScnError("duplicate firm id: '" + in->id + "'");
        }
        Firm firm;
        firm.id = in->id;
        firm.name = in->name;
        firm.country = in->country;
        firm.industry = in->industry;
        firm.market_cap = in->market_cap;
        firm.products.reserve(in->products.size());
        for (const auto& pid : in->products) {
            auto it = base->product_by_id.find(pid);
            if (it == base->product_by_id.end()) {
                throw ScnError("unknown product: '" + pid + "' in portfolio of firm '" + in->id +
                               "'");
            }
            firm.products.push_back(it->second);
        }
        std::sort(firm.products.begin(), firm.products.end());
        firm.products.erase(std::unique(firm.products.begin(), firm.products.end()),
                            firm.products.end());
        base->firms.push_back(std::move(firm));
    }

    base->producers.assign(base->products.size(), {});
    for (FirmIndex f = 0; f < base->firms.size(); ++f) {
        for (ProductIndex p : base->firms[f].products) base->producers[p].push_back(f);
    }

    SupplyNetwork net;
    net.base_ = std::move(base);

    std::vector<SupplyEdge> built;
    built.reserve(edges.size());
    for (const auto& in : edges) {
        SupplyEdge edge;
        edge.supplier = net.firm_index(in.supplier);
        edge.customer = net.firm_index(in.customer);
        if (edge.supplier == edge.customer) {
            throw ScnError("self-supply rejected: firm '" + in.supplier + "'");
        }
        const Firm& supplier = net.firm(edge.supplier);
        if (supplier.products.empty()) {
            throw ScnError("edge-product mismatch: supplier '" + in.supplier +
                           "' has no products");
        }
        for (const auto& pid : in.products) {
            auto it = net.base_->product_by_id.find(pid);
            if (it == net.base_->product_by_id.end()) {
                throw ScnError("unknown product: '" + pid + "' on edge " + in.supplier + "->" +
                               in.customer);
            }
            if (!std::binary_search(supplier.products.begin(), supplier.products.end(),
                                    it->second)) {
                throw ScnError("edge-product mismatch: '" + pid + "' not in portfolio of '" +
                               in.supplier + "'");
            }
            edge.products.push_back(it->second);
        }
        std::sort(edge.products.begin(), edge.products.end());
        edge.products.erase(std::unique(edge.products.begin(), edge.products.end()),
                            edge.products.end());
        edge.weight = in.weight;
        built.push_back(std::move(edge));
    }

    const std::size_t duplicates = dedupe_edges(built);
    if (report) report->duplicate_edges = duplicates;
    net.edges_ = std::move(built);
    net.rebuild_adjacency();
    return net;
}

FirmIndex SupplyNetwork::firm_index(std::string_view id) const {
    if (base_) {
        auto it = base_->firm_by_id.find(std::string(id));
        if (it != base_->firm_by_id.end()) return it->second;
    }
    throw ScnError("unknown firm id: '" + std::string(id) + "'");
}

ProductIndex SupplyNetwork::product_index(std::string_view id) const {
    if (base_) {
        auto it = base_->product_by_id.find(std::string(id));
        if (it != base_->product_by_id.end()) return it->second;
    }
    throw ScnError("unknown product: '" + std::string(id) + "'");
}

bool SupplyNetwork::has_firm(std::string_view id) const {
    return base_ && base_->firm_by_id.count(std::string(id)) != 0;
}

std::span<const FirmIndex> SupplyNetwork::producers_of(ProductIndex p) const {
    if (!base_ || p >= base_->products.size()) throw ScnError("unknown product: index out of range");
    return base_->producers[p];
}

std::span<const FirmIndex> SupplyNetwork::suppliers_of(FirmIndex f) const {
    if (f >= firm_count()) throw ScnError("unknown firm id: index out of range");
    return in_adj_[f];
}

std::span<const FirmIndex> SupplyNetwork::customers_of(FirmIndex f) const {
    if (f >= firm_count()) throw ScnError("unknown firm id: index out of range");
    return out_adj_[f];
}

bool SupplyNetwork::has_edge(FirmIndex supplier, FirmIndex customer) const {
    if (supplier >= firm_count() || customer >= firm_count()) return false;
    const auto& out = out_adj_[supplier];
    return std::binary_search(out.begin(), out.end(), customer);
}

EdgeClass SupplyNetwork::classify_edge(const SupplyEdge& e) const {
    if (e.supplier >= firm_count() || e.customer >= firm_count()) {
        throw ScnError("unknown firm id: edge endpoint out of range");
    }
    return firm(e.supplier).country == firm(e.customer).country ? EdgeClass::domestic
                                                                : EdgeClass::international;
}

std::vector<FirmIndex> SupplyNetwork::firms_in_countries(
    const std::set<std::string>& countries) const {
    if (countries.empty()) throw ScnError("empty scope");
    std::vector<FirmIndex> out;
    for (FirmIndex f = 0; f < firm_count(); ++f) {
        if (countries.count(firm(f).country)) out.push_back(f);
    }
    return out;
}

SupplyNetwork SupplyNetwork::with_edges(std::vector<SupplyEdge> new_edges) const {
    for (const auto& e : new_edges) {
        if (e.supplier >= firm_count() || e.customer >= firm_count()) {
            throw ScnError("unknown firm id: edge endpoint out of range");
        }
        if (e.supplier == e.customer) {
            throw ScnError("self-supply rejected: firm '" + firm(e.supplier).id + "'");
        }
    }
    SupplyNetwork net;
    net.base_ = base_;
    net.edges_ = std::move(new_edges);
    dedupe_edges(net.edges_);
    net.rebuild_adjacency();
    return net;
}

void SupplyNetwork::rebuild_adjacency() {
    in_adj_.assign(firm_count(), {});
    out_adj_.assign(firm_count(), {});
    for (const auto& e : edges_) {
        out_adj_[e.supplier].push_back(e.customer);
        in_adj_[e.customer].push_back(e.supplier);
    }
    for (auto& v : in_adj_) std::sort(v.begin(), v.end());
}

} // namespace scnsim
