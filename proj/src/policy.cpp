#include "scnsim/policy.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "scnsim/rng.hpp"

namespace scnsim {

PolicyKind parse_policy(const std::string& name) {
    if (name == "country_plus_one" || name == "country+1") return PolicyKind::country_plus_one;
    if (name == "friendshoring") return PolicyKind::friendshoring;
    if (name == "reshoring") return PolicyKind::reshoring;
    throw ScnError("unknown policy: '" + name + "'");
}

std::string policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::country_plus_one: return "country_plus_one";
        case PolicyKind::friendshoring: return "friendshoring";
        case PolicyKind::reshoring: return "reshoring";
    }
    return "country_plus_one";
}

SelectionStrategy parse_selection(const std::string& text) {
    if (text == "all") return SelectionStrategy::everything();
    if (text.rfind("sample:", 0) == 0) {
        const std::string count = text.substr(7);
        std::size_t pos = 0;
        unsigned long k = 0;
        try {
            k = std::stoul(count, &pos);
        } catch (const std::exception&) {
            throw ScnError("unknown selection: '" + text + "'");
        }
        if (pos != count.size() || k < 1) throw ScnError("unknown selection: '" + text + "'");
        return SelectionStrategy::sample(k);
    }
    throw ScnError("unknown selection: '" + text + "'");
}

std::string selection_name(const SelectionStrategy& sel) {
    return sel.all ? "all" : "sample:" + std::to_string(sel.sample_k);
}

std::vector<FirmIndex> alternative_suppliers(const SupplyNetwork& net, ProductIndex p,
                                             const std::vector<FirmIndex>& candidates,
                                             FirmIndex exclude) {
    std::vector<FirmIndex> out;
    for (FirmIndex k : candidates) {
        if (k == exclude) continue;
        const auto& portfolio = net.firm(k).products;
        if (std::binary_search(portfolio.begin(), portfolio.end(), p)) out.push_back(k);
    }
    return out;
}

namespace {

struct RunState {
    const SupplyNetwork& net;
    SelectionStrategy sel;
    Rng rng;
    PolicyOutcome outcome;
    // (supplier, customer) -> triggering products of edges added so far
    std::map<std::pair<FirmIndex, FirmIndex>, std::vector<ProductIndex>> added;
    std::vector<std::pair<FirmIndex, FirmIndex>> removed;

    RunState(const SupplyNetwork& n, const SelectionStrategy& s, std::uint64_t seed)
        : net(n), sel(s), rng(seed) {}

    void flag(FirmIndex c, ProductIndex p) {
        outcome.flagged_pairs.emplace(c, p);
        outcome.ns_products.insert(p);
        outcome.ns_companies.insert(c);
    }

    // Attaches selected alternatives as suppliers of c for product p;
    // current_suppliers tracks the evolving supplier set of c.
    void attach(FirmIndex c, ProductIndex p, const std::vector<FirmIndex>& alternatives,
                std::unordered_set<FirmIndex>& current_suppliers) {
        std::vector<FirmIndex> chosen;
        if (sel.all) {
            chosen = alternatives;
        } else {
            chosen = rng.sample(alternatives, sel.sample_k);
            std::sort(chosen.begin(), chosen.end());
        }
        for (FirmIndex k : chosen) {
            if (current_suppliers.count(k)) continue;
            current_suppliers.insert(k);
            added[{k, c}].push_back(p);
        }
    }

    PolicyOutcome finish() {
        std::vector<SupplyEdge> edges;
        std::unordered_set<std::uint64_t> removed_keys;
        removed_keys.reserve(removed.size() * 2);
        for (const auto& [s, c] : removed) {
            removed_keys.insert((static_cast<std::uint64_t>(s) << 32) | c);
        }
        edges.reserve(net.edges().size() + added.size());
        for (const auto& e : net.edges()) {
            const std::uint64_t key = (static_cast<std::uint64_t>(e.supplier) << 32) | e.customer;
            if (removed_keys.count(key)) {
                outcome.removed_edges.push_back(e);
            } else {
                edges.push_back(e);
            }
        }
        for (auto& [pair, products] : added) {
            SupplyEdge e;
            e.supplier = pair.first;
            e.customer = pair.second;
            std::sort(products.begin(), products.end());
            products.erase(std::unique(products.begin(), products.end()), products.end());
            e.products = products;
            outcome.added_edges.push_back(e);
            edges.push_back(std::move(e));
        }
        outcome.network_after = net.with_edges(std::move(edges));

        for (FirmIndex c : outcome.ns_companies) {
            ++outcome.affected_by_country[net.firm(c).country];
        }
        for (ProductIndex p : outcome.ns_products) {
            ++outcome.affected_by_industry[net.product(p).industry];
        }
        std::sort(outcome.removed_edges.begin(), outcome.removed_edges.end(),
                  [](const SupplyEdge& a, const SupplyEdge& b) {
                      return std::tie(a.supplier, a.customer) < std::tie(b.supplier, b.customer);
                  });
        return std::move(outcome);
    }
};

std::vector<int> country_ids(const SupplyNetwork& net, std::map<std::string, int>& index) {
    std::vector<int> ids(net.firm_count());
    for (FirmIndex f = 0; f < net.firm_count(); ++f) {
        auto [it, inserted] = index.emplace(net.firm(f).country, static_cast<int>(index.size()));
        ids[f] = it->second;
    }
    return ids;
}

std::vector<char> membership_mask(const SupplyNetwork& net, const std::vector<FirmIndex>& firms) {
    std::vector<char> mask(net.firm_count(), 0);
    for (FirmIndex f : firms) mask[f] = 1;
    return mask;
}

// Alternatives for (c, p) through the producer index, restricted by mask and
// an optional country requirement.
std::vector<FirmIndex> masked_alternatives(const SupplyNetwork& net, ProductIndex p, FirmIndex c,
                                           const std::vector<char>& in_scope,
                                           const std::vector<int>* countries = nullptr,
                                           int home = -1) {
    std::vector<FirmIndex> out;
    for (FirmIndex k : net.producers_of(p)) {
        if (k == c || !in_scope[k]) continue;
        if (countries && (*countries)[k] != home) continue;
        out.push_back(k);
    }
    return out;
}

void validate_scope(const PolicyScope& scope) {
    if (scope.policy == PolicyKind::country_plus_one) {
        if (!scope.X) {
            throw ScnError("invalid scope: country_plus_one requires a risky set X");
        }
        for (const auto& code : scope.X->countries) {
            if (scope.S.countries.count(code)) {
                throw ScnError("scope overlap: '" + code + "' is in both X and S");
            }
        }
    } else if (scope.X) {
        throw ScnError("invalid scope: " + policy_name(scope.policy) + " takes no risky set X");
    }
}

} // namespace

PolicyOutcome apply_country_plus_one(const SupplyNetwork& net, const PolicyScope& scope,
                                     const SelectionStrategy& sel, std::uint64_t seed) {
    PolicyScope checked = scope;
    checked.policy = PolicyKind::country_plus_one;
    validate_scope(checked);

    const std::vector<FirmIndex> customers = net.firms_in_countries(scope.S.countries);
    const std::vector<FirmIndex> risky = net.firms_in_countries(scope.X->countries);
    const std::vector<char> in_scope = membership_mask(net, customers);
    const std::vector<char> in_risky = membership_mask(net, risky);

    RunState state(net, sel, seed);
    for (FirmIndex c : customers) {
        const auto suppliers = net.suppliers_of(c);
        std::unordered_set<FirmIndex> current(suppliers.begin(), suppliers.end());
        for (FirmIndex x : suppliers) {
            if (!in_risky[x]) continue;
            for (ProductIndex p : net.firm(x).products) {
                const auto alternatives = masked_alternatives(net, p, c, in_scope);
                if (alternatives.empty()) {
                    state.flag(c, p);
                } else {
                    state.attach(c, p, alternatives, current);
                }
            }
        }
    }
    return state.finish();
}

PolicyOutcome apply_friendshoring(const SupplyNetwork& net, const PolicyScope& scope,
                                  const SelectionStrategy& sel, std::uint64_t seed) {
    PolicyScope checked = scope;
    checked.policy = PolicyKind::friendshoring;
    validate_scope(checked);

    const std::vector<FirmIndex> customers = net.firms_in_countries(scope.S.countries);
    const std::vector<char> in_scope = membership_mask(net, customers);

    RunState state(net, sel, seed);
    for (FirmIndex c : customers) {
        const auto suppliers = net.suppliers_of(c);
        std::unordered_set<FirmIndex> current(suppliers.begin(), suppliers.end());
        for (FirmIndex s : suppliers) {
            if (in_scope[s]) continue;
            bool substitutable = true;
            for (ProductIndex p : net.firm(s).products) {
                const auto alternatives = masked_alternatives(net, p, c, in_scope);
                if (alternatives.empty()) {
                    state.flag(c, p);
                    substitutable = false;
                } else {
                    state.attach(c, p, alternatives, current);
                }
            }
            if (substitutable) state.removed.emplace_back(s, c);
        }
    }
    return state.finish();
}

PolicyOutcome apply_reshoring(const SupplyNetwork& net, const PolicyScope& scope,
                              const SelectionStrategy& sel, std::uint64_t seed) {
    PolicyScope checked = scope;
    checked.policy = PolicyKind::reshoring;
    validate_scope(checked);

    const std::vector<FirmIndex> customers = net.firms_in_countries(scope.S.countries);
    std::map<std::string, int> country_index;
    const std::vector<int> countries = country_ids(net, country_index);
    // Candidates must sit in the customer's own country; anyone there is
    // admissible, scope only selects which customers act.
    const std::vector<char> everyone(net.firm_count(), 1);

    RunState state(net, sel, seed);
    for (FirmIndex c : customers) {
        const int home = countries[c];
        const auto suppliers = net.suppliers_of(c);
        std::unordered_set<FirmIndex> current(suppliers.begin(), suppliers.end());
        for (FirmIndex s : suppliers) {
            if (countries[s] == home) continue;
            bool substitutable = true;
            for (ProductIndex p : net.firm(s).products) {
                const auto alternatives =
                    masked_alternatives(net, p, c, everyone, &countries, home);
                if (alternatives.empty()) {
                    state.flag(c, p);
                    substitutable = false;
                } else {
                    state.attach(c, p, alternatives, current);
                }
            }
            if (substitutable) state.removed.emplace_back(s, c);
        }
    }
    return state.finish();
}

PolicyOutcome apply_policy(const SupplyNetwork& net, const PolicyScope& scope,
                           const SelectionStrategy& sel, std::uint64_t seed) {
    switch (scope.policy) {
        case PolicyKind::country_plus_one: return apply_country_plus_one(net, scope, sel, seed);
        case PolicyKind::friendshoring: return apply_friendshoring(net, scope, sel, seed);
        case PolicyKind::reshoring: return apply_reshoring(net, scope, sel, seed);
    }
    throw ScnError("unknown policy");
}

namespace {

std::vector<std::pair<std::string, std::size_t>> top_k(
    std::map<std::string, std::size_t> counts, std::size_t k) {
    if (k < 1) throw ScnError("invalid k: must be >= 1");
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

} // namespace

std::vector<std::pair<std::string, std::size_t>> rank_vulnerable_industries(
    const SupplyNetwork& net, const PolicyOutcome& outcome, std::size_t k) {
    std::map<std::string, std::size_t> counts;
    for (ProductIndex p : outcome.ns_products) ++counts[net.product(p).industry];
    return top_k(std::move(counts), k);
}

std::vector<std::pair<std::string, std::size_t>> rank_vulnerable_products(
    const SupplyNetwork& net, const PolicyOutcome& outcome, std::size_t k) {
    std::map<std::string, std::size_t> counts;
    for (const auto& [c, p] : outcome.flagged_pairs) ++counts[net.product(p).category];
    return top_k(std::move(counts), k);
}

double mining_share(const SupplyNetwork& net, const PolicyOutcome& outcome) {
    if (outcome.ns_products.empty()) return 0.0;
    std::size_t mining = 0;
    for (ProductIndex p : outcome.ns_products) {
        if (net.product(p).is_mining) ++mining;
    }
    return static_cast<double>(mining) / static_cast<double>(outcome.ns_products.size());
}

std::vector<std::size_t> affected_degrees(const SupplyNetwork& net_before,
                                          const PolicyOutcome& outcome) {
    std::vector<std::size_t> degrees;
    degrees.reserve(outcome.ns_companies.size());
    for (FirmIndex c : outcome.ns_companies) {
        degrees.push_back(net_before.in_degree(c) + net_before.out_degree(c));
    }
    std::sort(degrees.begin(), degrees.end());
    return degrees;
}

} // namespace scnsim
