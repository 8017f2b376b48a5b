#include <cmath>
#include <set>

#include "doctest.h"
#include "scnsim/generator.hpp"
#include "scnsim/metrics.hpp"
#include "support/testnet.hpp"

using namespace scnsim;
using namespace scnsim::test;

namespace {

GeneratorConfig small_config(std::uint64_t seed, std::size_t n = 1000) {
    GeneratorConfig cfg;
    cfg.n_firms = n;
    cfg.n_products = 150;
    cfg.n_planted_communities = 20;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("generator config round-trips through json") {
    GeneratorConfig cfg = default_generator_config();
    cfg.n_firms = 777;
    cfg.degree_exponent = 2.7;
    cfg.products_per_firm.mean = 4.5;
    cfg.products_per_firm.dispersion = 1.5;
    cfg.country_weights = {{"US", 2.0}, {"DE", 1.0}};
    cfg.seed = 99;

    const auto reloaded = load_generator_config(generator_config_to_json(cfg));
    CHECK(reloaded.n_firms == 777);
    CHECK(reloaded.n_products == cfg.n_products);
    CHECK(reloaded.degree_exponent == doctest::Approx(2.7));
    CHECK(reloaded.products_per_firm.mean == doctest::Approx(4.5));
    CHECK(reloaded.products_per_firm.dispersion == doctest::Approx(1.5));
    CHECK(reloaded.country_weights == cfg.country_weights);
    CHECK(reloaded.seed == 99);
}

TEST_CASE("generator config rejects unknown fields") {
    CHECK_THROWS_WITH_AS(load_generator_config(R"({"n_firms": 10, "n_bogus": 1})"),
                         doctest::Contains("unknown field"), ScnError);
}

TEST_CASE("generation is deterministic per seed") {
    const auto cfg = small_config(5, 400);
    const auto a = generate(cfg);
    const auto b = generate(cfg);
    CHECK(edge_pairs(a) == edge_pairs(b));
    REQUIRE(a.firm_count() == b.firm_count());
    for (FirmIndex f = 0; f < a.firm_count(); ++f) {
        CHECK(a.firm(f).country == b.firm(f).country);
        CHECK(a.firm(f).products == b.firm(f).products);
    }

    const auto c = generate(small_config(6, 400));
    CHECK(edge_pairs(a) != edge_pairs(c));
}

TEST_CASE("generated networks respect the requested sizes") {
    const auto cfg = small_config(3, 1200);
    const auto net = generate(cfg);
    CHECK(net.firm_count() == 1200);
    CHECK(net.product_count() == 150);

    double portfolio_total = 0;
    for (FirmIndex f = 0; f < net.firm_count(); ++f) {
        CHECK(!net.firm(f).products.empty());
        portfolio_total += static_cast<double>(net.firm(f).products.size());
    }
    const double mean = portfolio_total / static_cast<double>(net.firm_count());
    CHECK(mean == doctest::Approx(cfg.products_per_firm.mean).epsilon(0.10));

    const double edges_per_firm =
        static_cast<double>(net.edge_count()) / static_cast<double>(net.firm_count());
    CHECK(edges_per_firm == doctest::Approx(cfg.edges_per_firm).epsilon(0.10));
}

TEST_CASE("mining products land in the mining industry") {
    const auto net = generate(small_config(8, 500));
    std::size_t mining = 0;
    for (ProductIndex p = 0; p < net.product_count(); ++p) {
        if (net.product(p).is_mining) {
            ++mining;
            CHECK(net.product(p).industry == "Mining, Refining & Smelting");
        }
    }
    CHECK(mining == static_cast<std::size_t>(
                        std::llround(0.08 * static_cast<double>(net.product_count()))));
}

TEST_CASE("degree tails are heavier than a uniform random graph") {
    const auto net = generate(small_config(12, 3000));
    const auto g = UndirectedView::project(net);

    std::size_t heavy = 0;
    for (FirmIndex v = 0; v < g.n; ++v) {
        if (g.degree(v) >= 20) ++heavy;
    }

    // Uniform pairing with the same node and edge count.
    Rng rng(999);
    std::vector<std::size_t> degree(g.n, 0);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    while (seen.size() < g.edges.size()) {
        const std::size_t u = rng.bounded(g.n);
        const std::size_t v = rng.bounded(g.n);
        if (u == v) continue;
        if (!seen.emplace(std::min(u, v), std::max(u, v)).second) continue;
        ++degree[u];
        ++degree[v];
    }
    std::size_t uniform_heavy = 0;
    for (auto d : degree) {
        if (d >= 20) ++uniform_heavy;
    }
    CHECK(heavy > uniform_heavy);
}

TEST_CASE("domestic preference raises location assortativity") {
    double low_sum = 0, high_sum = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto cfg = small_config(seed, 800);
        cfg.domestic_preference = 0.05;
        const auto low_net = generate(cfg);
        cfg.domestic_preference = 0.90;
        const auto high_net = generate(cfg);

        const auto gl = UndirectedView::project(low_net);
        const auto gh = UndirectedView::project(high_net);
        low_sum += location_assortativity(low_net, gl).value_or(0.0);
        high_sum += location_assortativity(high_net, gh).value_or(0.0);
    }
    CHECK(high_sum / 20.0 > low_sum / 20.0);
}

TEST_CASE("more planted communities does not lower detected modularity") {
    double coarse_sum = 0, fine_sum = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto cfg = small_config(seed, 1500);
        cfg.n_products = 200;
        cfg.n_planted_communities = 10;
        const auto coarse = generate(cfg);
        cfg.n_planted_communities = 60;
        const auto fine = generate(cfg);

        coarse_sum += detect_communities(UndirectedView::project(coarse), seed).modularity;
        fine_sum += detect_communities(UndirectedView::project(fine), seed).modularity;
    }
    CHECK(fine_sum / 20.0 >= coarse_sum / 20.0);
}

TEST_CASE("infeasible configs are rejected up front") {
    auto tiny = default_generator_config();
    tiny.n_firms = 1;
    CHECK_THROWS_WITH_AS(generate(tiny), doctest::Contains("cannot satisfy"), ScnError);

    auto no_products = default_generator_config();
    no_products.n_products = 0;
    CHECK_THROWS_WITH_AS(generate(no_products), doctest::Contains("cannot satisfy"), ScnError);

    auto flat = default_generator_config();
    flat.degree_exponent = 1.0;
    CHECK_THROWS_WITH_AS(generate(flat), doctest::Contains("cannot satisfy"), ScnError);

    auto starving = default_generator_config();
    starving.products_per_firm.mean = 0.5;
    CHECK_THROWS_WITH_AS(generate(starving), doctest::Contains("cannot satisfy"), ScnError);

    auto negative = default_generator_config();
    negative.country_weights = {{"US", -1.0}};
    CHECK_THROWS_WITH_AS(generate(negative), doctest::Contains("cannot satisfy"), ScnError);

    auto zeroed = default_generator_config();
    zeroed.country_weights = {{"US", 0.0}};
    CHECK_THROWS_WITH_AS(generate(zeroed), doctest::Contains("cannot satisfy"), ScnError);

    auto improbable = default_generator_config();
    improbable.community_locality = 1.5;
    CHECK_THROWS_WITH_AS(generate(improbable), doctest::Contains("cannot satisfy"), ScnError);
}

TEST_CASE("a two-firm single-product config still generates") {
    GeneratorConfig cfg;
    cfg.n_firms = 2;
    cfg.n_products = 1;
    cfg.n_planted_communities = 1;
    cfg.products_per_firm.mean = 1.0;
    cfg.edges_per_firm = 0.5;
    cfg.domestic_preference = 0.0;
    cfg.triangle_closure = 0.0;
    cfg.seed = 1;
    const auto net = generate(cfg);
    CHECK(net.firm_count() == 2);
    CHECK(net.product_count() == 1);
    CHECK(net.edge_count() == 1);
    CHECK(net.firm(0).products.size() == 1);
}

TEST_CASE("triangle closure adds wedge-closing edges") {
    auto open_cfg = small_config(4, 1200);
    open_cfg.triangle_closure = 0.0;
    auto closed_cfg = open_cfg;
    closed_cfg.triangle_closure = 0.5;

    const auto open_net = generate(open_cfg);
    const auto closed_net = generate(closed_cfg);
    CHECK(closed_net.edge_count() > open_net.edge_count());
    CHECK(clustering_coefficient(UndirectedView::project(closed_net)) >
          clustering_coefficient(UndirectedView::project(open_net)));
}

TEST_CASE("calibrate_check reports achieved values against targets") {
    const auto net = generate(small_config(2, 2000));

    std::vector<CalibrationTarget> targets{
        {"products_per_firm", 5.0, 0.5},
        {"edge_count", static_cast<double>(net.edge_count()), 0.5},
        {"modularity", 0.0, 1.0},
    };
    const auto report = calibrate_check(net, targets, 1);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].name == "products_per_firm");
    CHECK(report.rows[0].within_tolerance);
    CHECK(report.rows[1].achieved == doctest::Approx(static_cast<double>(net.edge_count())));
    CHECK(report.rows[1].within_tolerance);
    CHECK(report.all_within());

    std::vector<CalibrationTarget> miss{{"products_per_firm", 50.0, 0.5}};
    CHECK_FALSE(calibrate_check(net, miss, 1).all_within());

    CHECK_THROWS_WITH_AS(calibrate_check(net, {{"nope", 1.0, 1.0}}, 1),
                         doctest::Contains("unknown target"), ScnError);
}

TEST_CASE("default calibration targets carry the reference profile") {
    const auto targets = default_calibration_targets();
    REQUIRE(targets.size() == 5);
    std::set<std::string> names;
    for (const auto& t : targets) names.insert(t.name);
    CHECK(names == std::set<std::string>{"modularity", "clustering_coefficient",
                                         "avg_shortest_path", "domestic_international_ratio",
                                         "products_per_firm"});
}
