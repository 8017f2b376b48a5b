#include <algorithm>
#include <set>

#include "doctest.h"
#include "scnsim/policy.hpp"
#include "support/testnet.hpp"

using namespace scnsim;
using namespace scnsim::test;

namespace {

PolicyScope scope_of(PolicyKind policy, std::set<std::string> s,
                     std::optional<std::set<std::string>> x = std::nullopt) {
    PolicyScope scope;
    scope.policy = policy;
    scope.S = cluster_of("S", std::move(s));
    if (x) scope.X = cluster_of("X", std::move(*x));
    return scope;
}

// Customer "cust" in US buys product "p" from risky "risk" in CN; "alt" in JP
// also makes "p". A second product "q" is made only by "risk".
SupplyNetwork plus_one_net(bool with_alternative, bool extra_product = false) {
    std::vector<Product> catalog{product("p"), product("q")};
    std::vector<FirmInput> firms{
        firm("cust", "US", {"p"}),
        firm("risk", "CN", extra_product ? std::vector<std::string>{"p", "q"}
                                         : std::vector<std::string>{"p"}),
    };
    if (with_alternative) firms.push_back(firm("alt", "JP", {"p"}));
    std::vector<EdgeInput> edges{edge("risk", "cust", {"p"})};
    return SupplyNetwork::build(catalog, firms, edges);
}

} // namespace

TEST_CASE("policy and selection names parse both ways") {
    CHECK(parse_policy("country_plus_one") == PolicyKind::country_plus_one);
    CHECK(parse_policy("country+1") == PolicyKind::country_plus_one);
    CHECK(parse_policy("friendshoring") == PolicyKind::friendshoring);
    CHECK(parse_policy("reshoring") == PolicyKind::reshoring);
    CHECK(policy_name(PolicyKind::reshoring) == "reshoring");
    CHECK_THROWS_WITH_AS(parse_policy("offshoring"), doctest::Contains("unknown policy"),
                         ScnError);

    CHECK(parse_selection("all").all);
    const auto sampled = parse_selection("sample:3");
    CHECK_FALSE(sampled.all);
    CHECK(sampled.sample_k == 3);
    CHECK(selection_name(sampled) == "sample:3");
    CHECK_THROWS_AS(parse_selection("sample:0"), ScnError);
    CHECK_THROWS_AS(parse_selection("sample:x"), ScnError);
    CHECK_THROWS_AS(parse_selection("half"), ScnError);
}

TEST_CASE("scope validation catches misuse") {
    const auto net = plus_one_net(true);
    CHECK_THROWS_WITH_AS(
        apply_country_plus_one(net, scope_of(PolicyKind::country_plus_one, {"US"}),
                               SelectionStrategy::everything(), 1),
        doctest::Contains("invalid scope"), ScnError);
    CHECK_THROWS_WITH_AS(
        apply_country_plus_one(net,
                               scope_of(PolicyKind::country_plus_one, {"US", "CN"},
                                        std::set<std::string>{"CN"}),
                               SelectionStrategy::everything(), 1),
        doctest::Contains("scope overlap"), ScnError);
    CHECK_THROWS_WITH_AS(
        apply_friendshoring(net,
                            scope_of(PolicyKind::friendshoring, {"US"},
                                     std::set<std::string>{"CN"}),
                            SelectionStrategy::everything(), 1),
        doctest::Contains("invalid scope"), ScnError);
}

TEST_CASE("alternative_suppliers is a pure portfolio scan") {
    std::vector<Product> catalog{product("p"), product("q")};
    std::vector<FirmInput> firms{
        firm("a", "US", {"p"}),
        firm("b", "US", {"q"}),
        firm("c", "US", {"p", "q"}),
    };
    const auto net = SupplyNetwork::build(catalog, firms, {});
    const auto p = net.product_index("p");
    const auto a = net.firm_index("a");
    const auto b = net.firm_index("b");
    const auto c = net.firm_index("c");

    const std::vector<FirmIndex> everyone{a, b, c};
    CHECK(alternative_suppliers(net, p, everyone, b) == std::vector<FirmIndex>{a, c});
    CHECK(alternative_suppliers(net, p, everyone, a) == std::vector<FirmIndex>{c});
    CHECK(alternative_suppliers(net, net.product_index("q"), {a}, b).empty());
}

TEST_CASE("country_plus_one attaches an alternative and keeps the risky edge") {
    const auto net = plus_one_net(true);
    const auto outcome = apply_country_plus_one(
        net, scope_of(PolicyKind::country_plus_one, {"US", "JP"}, std::set<std::string>{"CN"}),
        SelectionStrategy::everything(), 1);

    CHECK(outcome.ns_products.empty());
    CHECK(outcome.ns_companies.empty());
    CHECK(outcome.removed_edges.empty());
    CHECK(edge_pairs(net, outcome.added_edges) ==
          std::set<std::pair<std::string, std::string>>{{"alt", "cust"}});
    CHECK(edge_pairs(outcome.network_after) ==
          std::set<std::pair<std::string, std::string>>{{"risk", "cust"}, {"alt", "cust"}});

    REQUIRE(outcome.added_edges.size() == 1);
    REQUIRE(outcome.added_edges[0].products.size() == 1);
    CHECK(net.product(outcome.added_edges[0].products[0]).id == "p");
}

TEST_CASE("country_plus_one flags products with no in-scope producer") {
    const auto net = plus_one_net(false);
    const auto outcome = apply_country_plus_one(
        net, scope_of(PolicyKind::country_plus_one, {"US", "JP"}, std::set<std::string>{"CN"}),
        SelectionStrategy::everything(), 1);

    CHECK(product_ids(net, outcome.ns_products) == std::set<std::string>{"p"});
    CHECK(firm_ids(net, outcome.ns_companies) == std::set<std::string>{"cust"});
    CHECK(flagged_pairs_ids(net, outcome.flagged_pairs) ==
          std::set<std::pair<std::string, std::string>>{{"cust", "p"}});
    CHECK(outcome.added_edges.empty());
    CHECK(edge_pairs(outcome.network_after) == edge_pairs(net));
}

TEST_CASE("country_plus_one checks the full risky portfolio, not just traded products") {
    // "risk" also makes q, which nobody in scope can substitute, even though
    // the existing edge only trades p.
    const auto net = plus_one_net(true, true);
    const auto outcome = apply_country_plus_one(
        net, scope_of(PolicyKind::country_plus_one, {"US", "JP"}, std::set<std::string>{"CN"}),
        SelectionStrategy::everything(), 1);

    CHECK(product_ids(net, outcome.ns_products) == std::set<std::string>{"q"});
    CHECK(edge_pairs(net, outcome.added_edges) ==
          std::set<std::pair<std::string, std::string>>{{"alt", "cust"}});
}

TEST_CASE("friendshoring replaces a fully substitutable outside supplier") {
    std::vector<Product> catalog{product("p")};
    std::vector<FirmInput> firms{
        firm("cust", "US", {"p"}),
        firm("out", "CN", {"p"}),
        firm("friend", "US", {"p"}),
    };
    const auto net =
        SupplyNetwork::build(catalog, firms, {edge("out", "cust", {"p"})});
    const auto outcome = apply_friendshoring(net, scope_of(PolicyKind::friendshoring, {"US"}),
                                             SelectionStrategy::everything(), 1);

    CHECK(outcome.ns_products.empty());
    CHECK(edge_pairs(net, outcome.removed_edges) ==
          std::set<std::pair<std::string, std::string>>{{"out", "cust"}});
    CHECK(edge_pairs(net, outcome.added_edges) ==
          std::set<std::pair<std::string, std::string>>{{"friend", "cust"}});
    CHECK(edge_pairs(outcome.network_after) ==
          std::set<std::pair<std::string, std::string>>{{"friend", "cust"}});
}

TEST_CASE("friendshoring keeps a partially substitutable supplier") {
    std::vector<Product> catalog{product("p"), product("q")};
    std::vector<FirmInput> firms{
        firm("cust", "US", {"p"}),
        firm("out", "CN", {"p", "q"}),
        firm("friend", "US", {"p"}),
    };
    const auto net =
        SupplyNetwork::build(catalog, firms, {edge("out", "cust", {"p", "q"})});
    const auto outcome = apply_friendshoring(net, scope_of(PolicyKind::friendshoring, {"US"}),
                                             SelectionStrategy::everything(), 1);

    CHECK(product_ids(net, outcome.ns_products) == std::set<std::string>{"q"});
    CHECK(firm_ids(net, outcome.ns_companies) == std::set<std::string>{"cust"});
    CHECK(outcome.removed_edges.empty());
    // The substitutable half still gains its alternative.
    CHECK(edge_pairs(net, outcome.added_edges) ==
          std::set<std::pair<std::string, std::string>>{{"friend", "cust"}});
    CHECK(edge_pairs(outcome.network_after) ==
          std::set<std::pair<std::string, std::string>>{{"out", "cust"}, {"friend", "cust"}});
}

TEST_CASE("reshoring pulls supply back into the customer's country") {
    std::vector<Product> catalog{product("p")};
    std::vector<FirmInput> firms{
        firm("cust", "FR", {"p"}),
        firm("abroad", "DE", {"p"}),
        firm("local", "FR", {"p"}),
    };
    const auto net =
        SupplyNetwork::build(catalog, firms, {edge("abroad", "cust", {"p"})});
    const auto outcome = apply_reshoring(net, scope_of(PolicyKind::reshoring, {"FR"}),
                                         SelectionStrategy::everything(), 1);

    CHECK(outcome.ns_products.empty());
    CHECK(edge_pairs(net, outcome.removed_edges) ==
          std::set<std::pair<std::string, std::string>>{{"abroad", "cust"}});
    CHECK(edge_pairs(outcome.network_after) ==
          std::set<std::pair<std::string, std::string>>{{"local", "cust"}});
}

TEST_CASE("reshoring flags products with no domestic producer") {
    std::vector<Product> catalog{product("p")};
    std::vector<FirmInput> firms{
        firm("cust", "FR", {"p"}),
        firm("abroad", "DE", {"p"}),
    };
    const auto net =
        SupplyNetwork::build(catalog, firms, {edge("abroad", "cust", {"p"})});
    const auto outcome = apply_reshoring(net, scope_of(PolicyKind::reshoring, {"FR"}),
                                         SelectionStrategy::everything(), 1);

    CHECK(product_ids(net, outcome.ns_products) == std::set<std::string>{"p"});
    CHECK(outcome.removed_edges.empty());
    CHECK(edge_pairs(outcome.network_after) == edge_pairs(net));
    CHECK(outcome.affected_by_country.at("FR") == 1);
    CHECK(outcome.affected_by_industry.at("General") == 1);
}

TEST_CASE("ns sets and removals ignore the selection strategy") {
    Rng rng(31);
    for (int round = 0; round < 30; ++round) {
        const auto net = random_network(rng);
        for (PolicyKind policy : {PolicyKind::country_plus_one, PolicyKind::friendshoring,
                                  PolicyKind::reshoring}) {
            const auto scope = random_scope(rng, net, policy);
            if (!scope) continue;
            const auto everything = apply_policy(net, *scope, SelectionStrategy::everything(), 1);
            const auto one = apply_policy(net, *scope, SelectionStrategy::sample(1), 77);
            const auto two = apply_policy(net, *scope, SelectionStrategy::sample(2), 78);

            CHECK(one.ns_products == everything.ns_products);
            CHECK(two.ns_products == everything.ns_products);
            CHECK(one.ns_companies == everything.ns_companies);
            CHECK(one.flagged_pairs == everything.flagged_pairs);
            CHECK(edge_pairs(net, one.removed_edges) == edge_pairs(net, everything.removed_edges));

            // Sampled additions are a subset of the full attachment set.
            const auto full_added = edge_pairs(net, everything.added_edges);
            for (const auto& pair : edge_pairs(net, one.added_edges)) {
                CHECK(full_added.count(pair) == 1);
            }
        }
    }
}

TEST_CASE("policy runs are reproducible per seed") {
    Rng rng(17);
    SupplyNetwork net;
    std::optional<PolicyScope> scope;
    while (!scope) {
        net = random_network(rng);
        scope = random_scope(rng, net, PolicyKind::country_plus_one);
    }

    const auto a = apply_policy(net, *scope, SelectionStrategy::sample(1), 5);
    const auto b = apply_policy(net, *scope, SelectionStrategy::sample(1), 5);
    CHECK(edge_pairs(a.network_after) == edge_pairs(b.network_after));
    CHECK(a.ns_products == b.ns_products);
}

TEST_CASE("vulnerability rankings count distinct products and customers") {
    std::vector<Product> catalog{
        product("p1", "widget one", "Electronics"),
        product("p2", "widget two", "Electronics"),
        product("p3", "ore", "Mining", true),
    };
    std::vector<FirmInput> firms{
        firm("c1", "US", {"p1"}),
        firm("c2", "US", {"p1"}),
        firm("x", "CN", {"p1", "p2", "p3"}),
    };
    const auto net = SupplyNetwork::build(
        catalog, firms, {edge("x", "c1", {"p1"}), edge("x", "c2", {"p1"})});
    const auto outcome = apply_country_plus_one(
        net, scope_of(PolicyKind::country_plus_one, {"US"}, std::set<std::string>{"CN"}),
        SelectionStrategy::everything(), 1);

    // Nobody in scope makes p2 or p3; p1 is made by the customers themselves.
    CHECK(product_ids(net, outcome.ns_products) == std::set<std::string>{"p2", "p3"});

    const auto industries = rank_vulnerable_industries(net, outcome, 5);
    REQUIRE(industries.size() == 2);
    CHECK(industries[0] == std::pair<std::string, std::size_t>{"Electronics", 1});
    CHECK(industries[1] == std::pair<std::string, std::size_t>{"Mining", 1});

    const auto products = rank_vulnerable_products(net, outcome, 1);
    REQUIRE(products.size() == 1);
    CHECK(products[0].second == 2); // both customers flagged the same category

    CHECK_THROWS_WITH_AS(rank_vulnerable_industries(net, outcome, 0),
                         doctest::Contains("invalid k"), ScnError);

    CHECK(mining_share(net, outcome) == doctest::Approx(0.5));

    const auto degrees = affected_degrees(net, outcome);
    REQUIRE(degrees.size() == 2);
    CHECK(degrees[0] == 1);
    CHECK(degrees[1] == 1);
}

TEST_CASE("mining share is zero without flagged products") {
    const auto net = plus_one_net(true);
    const auto outcome = apply_country_plus_one(
        net, scope_of(PolicyKind::country_plus_one, {"US", "JP"}, std::set<std::string>{"CN"}),
        SelectionStrategy::everything(), 1);
    CHECK(mining_share(net, outcome) == doctest::Approx(0.0));
    CHECK(affected_degrees(net, outcome).empty());
}

TEST_CASE("outcome edge lists are sorted by supplier then customer") {
    Rng rng(23);
    for (int round = 0; round < 10; ++round) {
        const auto net = random_network(rng);
        const auto scope = random_scope(rng, net, PolicyKind::friendshoring);
        if (!scope) continue;
        const auto outcome =
            apply_policy(net, *scope, SelectionStrategy::everything(), 1);
        const auto sorted_by_pair = [](const std::vector<SupplyEdge>& edges) {
            return std::is_sorted(edges.begin(), edges.end(),
                                  [](const SupplyEdge& a, const SupplyEdge& b) {
                                      return std::tie(a.supplier, a.customer) <
                                             std::tie(b.supplier, b.customer);
                                  });
        };
        CHECK(sorted_by_pair(outcome.added_edges));
        CHECK(sorted_by_pair(outcome.removed_edges));
    }
}

TEST_CASE("applying a policy twice changes nothing under full selection") {
    Rng rng(41);
    for (int round = 0; round < 10; ++round) {
        const auto net = random_network(rng);
        for (PolicyKind policy : {PolicyKind::country_plus_one, PolicyKind::friendshoring,
                                  PolicyKind::reshoring}) {
            const auto scope = random_scope(rng, net, policy);
            if (!scope) continue;
            const auto first = apply_policy(net, *scope, SelectionStrategy::everything(), 1);
            const auto second =
                apply_policy(first.network_after, *scope, SelectionStrategy::everything(), 2);
            CHECK(second.added_edges.empty());
            CHECK(second.removed_edges.empty());
            CHECK(edge_pairs(second.network_after) == edge_pairs(first.network_after));
            CHECK(second.ns_products == first.ns_products);
        }
    }
}
