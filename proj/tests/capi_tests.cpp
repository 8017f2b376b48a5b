// Exercises the shared-library C interface the way an external binding
// would: through scnsim.h only, never the C++ headers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "scnsim.h"

namespace fs = std::filesystem;

namespace {

struct Out {
    char* value = nullptr;
    ~Out() { scn_string_free(value); }
    std::string str() const { return value ? value : ""; }
};

struct Net {
    scn_network_t* value = nullptr;
    ~Net() { scn_network_free(value); }
};

struct Scopes {
    scn_scopes_t* value = nullptr;
    ~Scopes() { scn_scopes_free(value); }
};

fs::path fixture_dir() {
    static fs::path dir = [] {
        const auto d = fs::temp_directory_path() / "scnsim-capi-fixture";
        fs::remove_all(d);
        fs::create_directories(d);
        std::ofstream(d / "products.csv")
            << "id,category,industry,is_mining\nP1,widget,Ind,false\n";
        std::ofstream(d / "firms.csv")
            << "id,name,country,industry,market_cap,products\n"
            << "cust,Customer,FR,Ind,,P1\n"
            << "abroad,Abroad,DE,Ind,,P1\n"
            << "local,Local,FR,Ind,,P1\n";
        std::ofstream(d / "edges.csv")
            << "supplier_id,customer_id,product_ids,weight\nabroad,cust,P1,1.0\n";
        return d;
    }();
    return dir;
}

scn_network_t* load_fixture(char** ingest_json = nullptr) {
    const auto dir = fixture_dir();
    scn_network_t* net = nullptr;
    const auto status = scn_network_load((dir / "firms.csv").c_str(),
                                         (dir / "products.csv").c_str(),
                                         (dir / "edges.csv").c_str(), &net, ingest_json);
    REQUIRE(status == SCN_OK);
    return net;
}

} // namespace

TEST_CASE("load and inspect a network through the c api") {
    Out ingest;
    Net net;
    net.value = load_fixture(&ingest.value);

    CHECK(scn_network_firm_count(net.value) == 3);
    CHECK(scn_network_product_count(net.value) == 1);
    CHECK(scn_network_edge_count(net.value) == 1);
    CHECK(ingest.str().find("\"rejected\": 0") != std::string::npos);
}

TEST_CASE("null arguments come back as invalid-argument errors") {
    CHECK(scn_network_load(nullptr, nullptr, nullptr, nullptr, nullptr) ==
          SCN_ERROR_INVALID_ARGUMENT);
    const std::string message = scn_last_error();
    CHECK(message.find("null argument") != std::string::npos);

    CHECK(scn_network_metrics(nullptr, nullptr, nullptr) == SCN_ERROR_INVALID_ARGUMENT);
    CHECK(scn_scopes_builtin(nullptr) == SCN_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("io failures carry the io status") {
    scn_network_t* net = nullptr;
    const auto status = scn_network_load("/nope/firms.csv", "/nope/products.csv",
                                         "/nope/edges.csv", &net, nullptr);
    CHECK(status == SCN_ERROR_IO);
    CHECK(std::string(scn_last_error()).find("unreadable file") != std::string::npos);
    CHECK(net == nullptr);
}

TEST_CASE("generate and measure through the c api") {
    Net net;
    REQUIRE(scn_network_generate(R"({"n_firms": 300, "n_products": 60,
                                     "n_planted_communities": 6})",
                                 11, &net.value) == SCN_OK);
    CHECK(scn_network_firm_count(net.value) == 300);

    Out metrics;
    REQUIRE(scn_network_metrics(net.value, R"({"path_mode": "sampled", "path_samples": 64,
                                               "seed": 5})",
                                &metrics.value) == SCN_OK);
    CHECK(metrics.str().find("\"edge_count\"") != std::string::npos);
    CHECK(metrics.str().find("\"modularity\"") != std::string::npos);

    Out table;
    REQUIRE(scn_network_metrics_table(net.value, nullptr, "baseline", &table.value) == SCN_OK);
    CHECK(table.str().find("Avg. No. Edges") != std::string::npos);
    CHECK(table.str().find("baseline") != std::string::npos);

    Out config_error;
    scn_network_t* bad = nullptr;
    CHECK(scn_network_generate(R"({"n_firms": 1})", -1, &bad) == SCN_ERROR_RUNTIME);
    CHECK(std::string(scn_last_error()).find("cannot satisfy") != std::string::npos);
    CHECK(scn_network_generate("{not json", -1, &bad) == SCN_ERROR_PARSE);
}

TEST_CASE("write then reload round-trips through the c api") {
    Net net;
    REQUIRE(scn_network_generate(R"({"n_firms": 120, "n_products": 30,
                                     "n_planted_communities": 4})",
                                 3, &net.value) == SCN_OK);

    const auto dir = fs::temp_directory_path() / "scnsim-capi-roundtrip";
    fs::remove_all(dir);
    REQUIRE(scn_network_write(net.value, dir.c_str()) == SCN_OK);

    Net reloaded;
    REQUIRE(scn_network_load((dir / "firms.csv").c_str(), (dir / "products.csv").c_str(),
                             (dir / "edges.csv").c_str(), &reloaded.value, nullptr) == SCN_OK);
    CHECK(scn_network_firm_count(reloaded.value) == scn_network_firm_count(net.value));
    CHECK(scn_network_edge_count(reloaded.value) == scn_network_edge_count(net.value));
    fs::remove_all(dir);
}

TEST_CASE("builtin scopes list six clusters") {
    Scopes scopes;
    REQUIRE(scn_scopes_builtin(&scopes.value) == SCN_OK);

    Out json;
    REQUIRE(scn_scopes_to_json(scopes.value, &json.value) == SCN_OK);
    for (const char* name : {"Low Risk", "Medium Risk", "High Risk", "Asian", "American",
                             "European"}) {
        CAPTURE(name);
        CHECK(json.str().find(name) != std::string::npos);
    }

    Out listing;
    REQUIRE(scn_scopes_list(scopes.value, &listing.value) == SCN_OK);
    CHECK(listing.str().find("American: 3 countries") != std::string::npos);
    CHECK(listing.str().find("Medium Risk: 105 countries") != std::string::npos);
}

TEST_CASE("apply a policy through the c api") {
    Net net;
    net.value = load_fixture();
    Scopes scopes;
    REQUIRE(scn_scopes_builtin(&scopes.value) == SCN_OK);

    Net after;
    Out outcome;
    REQUIRE(scn_apply_policy(net.value, scopes.value,
                             R"({"policy": "reshoring", "S": {"countries": ["FR"]},
                                 "selection": "all", "seed": 1})",
                             &after.value, &outcome.value) == SCN_OK);
    CHECK(scn_network_edge_count(after.value) == 1);
    CHECK(outcome.str().find("\"edges_removed\"") != std::string::npos);

    Net bad;
    CHECK(scn_apply_policy(net.value, scopes.value, R"({"policy": "nope", "S": "Asian"})",
                           &bad.value, nullptr) != SCN_OK);
    CHECK(std::string(scn_last_error()).find("unknown policy") != std::string::npos);
}

TEST_CASE("calibration check through the c api") {
    Net net;
    REQUIRE(scn_network_generate(R"({"n_firms": 400, "n_products": 80,
                                     "n_planted_communities": 8})",
                                 9, &net.value) == SCN_OK);

    Out rows;
    int all_within = -1;
    REQUIRE(scn_calibrate_check(net.value,
                                R"([{"name": "products_per_firm", "target": 5.0,
                                     "tolerance": 1.0}])",
                                1, &rows.value, &all_within) == SCN_OK);
    CHECK(rows.str().find("products_per_firm") != std::string::npos);
    CHECK(all_within == 1);

    CHECK(scn_calibrate_check(net.value, R"([{"name": "bogus", "target": 0, "tolerance": 1}])",
                              1, &rows.value, &all_within) == SCN_ERROR_RUNTIME);
}

TEST_CASE("run a scenario suite through the c api") {
    const auto out_dir = fs::temp_directory_path() / "scnsim-capi-suite";
    fs::remove_all(out_dir);

    const std::string scenarios = R"({
        "name": "capi",
        "source": {"generator": {"n_firms": 200, "n_products": 40,
                                 "n_planted_communities": 5, "seed": 3}},
        "policy": "reshoring",
        "S": "Asian",
        "iterations": 1
    })";

    Out summary;
    REQUIRE(scn_run_scenarios(scenarios.c_str(), R"({"iterations": 2, "selection": "sample:1"})",
                              out_dir.c_str(), &summary.value) == SCN_OK);
    CHECK(summary.str().find("\"capi\"") != std::string::npos);
    CHECK(fs::exists(out_dir / "capi" / "metric_table.csv"));
    CHECK(fs::exists(out_dir / "summary.json"));

    CHECK(scn_run_scenarios(scenarios.c_str(), R"({"iterations": 0})", out_dir.c_str(),
                            &summary.value) != SCN_OK);
    fs::remove_all(out_dir);
}
