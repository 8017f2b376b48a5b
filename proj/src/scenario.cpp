#include "scnsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "json.hpp"
#include "scnsim/dataio.hpp"
#include "scnsim/rng.hpp"

namespace scnsim {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// metric_distributions keys, aligned with kMetricRowLabels.
constexpr const char* kFieldKeys[10] = {
    "edge_count",        "density",
    "degree_assortativity", "location_assortativity",
    "avg_shortest_path", "avg_domestic",
    "avg_international", "clustering_coefficient",
    "modularity",        "community_count",
};

std::optional<double> field_value(const MetricReport& r, std::size_t field) {
    switch (field) {
    case 0: return static_cast<double>(r.edge_count);
    case 1: return r.density;
    case 2: return r.degree_assortativity;
    case 3: return r.location_assortativity;
    case 4: return r.avg_shortest_path;
    case 5: return r.avg_domestic;
    case 6: return r.avg_international;
    case 7: return r.clustering_coefficient;
    case 8: return r.modularity;
    case 9: return static_cast<double>(r.community_count);
    }
    return std::nullopt;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

ScopeSelector selector_from_json(const json& value, const std::string& where) {
    ScopeSelector sel;
    if (value.is_string()) {
        sel.clusters.push_back(value.get<std::string>());
        return sel;
    }
    if (!value.is_object()) {
        throw ScnError("parse failure: " + where + " must be a cluster name or an object");
    }
    for (const auto& [key, v] : value.items()) {
        auto as_list = [&](std::vector<std::string>& out) {
            if (v.is_string()) {
                out.push_back(v.get<std::string>());
            } else if (v.is_array()) {
                for (const auto& item : v) out.push_back(item.get<std::string>());
            } else {
                throw ScnError("parse failure: " + where + "." + key +
                               " must be a string or array");
            }
        };
        if (key == "clusters") as_list(sel.clusters);
        else if (key == "countries") as_list(sel.countries);
        else if (key == "exclude_clusters") as_list(sel.exclude_clusters);
        else if (key == "exclude_countries") as_list(sel.exclude_countries);
        else throw ScnError("parse failure: unknown field '" + where + "." + key + "'");
    }
    return sel;
}

void parse_path_mode(const std::string& text, Scenario& sc) {
    if (text == "exact") {
        sc.path_mode = PathMode::exact;
        return;
    }
    if (text == "sampled") {
        sc.path_mode = PathMode::sampled;
        return;
    }
    if (text.rfind("sampled:", 0) == 0) {
        sc.path_mode = PathMode::sampled;
        const std::string k = text.substr(8);
        char* end = nullptr;
        const unsigned long long v = std::strtoull(k.c_str(), &end, 10);
        if (k.empty() || *end != '\0' || v == 0) {
            throw ScnError("parse failure: bad path_mode '" + text + "'");
        }
        sc.path_samples = static_cast<std::size_t>(v);
        return;
    }
    throw ScnError("parse failure: bad path_mode '" + text + "'");
}

Scenario scenario_from_json(const json& doc, std::size_t index) {
    if (!doc.is_object()) throw ScnError("parse failure: scenario must be an object");
    Scenario sc;
    sc.name = "scenario-" + std::to_string(index + 1);
    bool saw_policy = false;

    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "name") sc.name = value.get<std::string>();
            else if (key == "source") {
                if (!value.is_object()) throw ScnError("parse failure: source must be an object");
                for (const auto& [sk, sv] : value.items()) {
                    if (sk == "files") {
                        FileSource files;
                        for (const auto& [fk, fv] : sv.items()) {
                            if (fk == "firms") files.firms = fv.get<std::string>();
                            else if (fk == "products") files.products = fv.get<std::string>();
                            else if (fk == "edges") files.edges = fv.get<std::string>();
                            else throw ScnError("parse failure: unknown field 'source.files." +
                                                fk + "'");
                        }
                        if (files.firms.empty() || files.products.empty() || files.edges.empty()) {
                            throw ScnError("parse failure: source.files needs firms, products "
                                           "and edges paths");
                        }
                        sc.source.files = std::move(files);
                    } else if (sk == "generator") {
                        sc.source.generator = load_generator_config(sv.dump());
                    } else {
                        throw ScnError("parse failure: unknown field 'source." + sk + "'");
                    }
                }
            } else if (key == "scope_set") sc.scope_set = value.get<std::string>();
            else if (key == "policy") {
                sc.policy = parse_policy(value.get<std::string>());
                saw_policy = true;
            } else if (key == "S") sc.S = selector_from_json(value, "S");
            else if (key == "X") sc.X = selector_from_json(value, "X");
            else if (key == "selection") sc.selection = parse_selection(value.get<std::string>());
            else if (key == "iterations") sc.iterations = value.get<std::size_t>();
            else if (key == "master_seed") sc.master_seed = value.get<std::uint64_t>();
            else if (key == "path_mode") parse_path_mode(value.get<std::string>(), sc);
            else if (key == "path_samples") sc.path_samples = value.get<std::size_t>();
            else throw ScnError("parse failure: unknown field '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ScnError(std::string("parse failure: ") + e.what());
    }

    if (!saw_policy) throw ScnError("parse failure: scenario '" + sc.name + "' missing policy");
    if (sc.source.files.has_value() == sc.source.generator.has_value()) {
        throw ScnError("parse failure: scenario '" + sc.name +
                       "' needs exactly one of source.files or source.generator");
    }
    if (sc.S.empty()) throw ScnError("parse failure: scenario '" + sc.name + "' missing S");
    if (sc.iterations == 0) {
        throw ScnError("parse failure: scenario '" + sc.name + "' needs iterations >= 1");
    }
    return sc;
}

json distribution_to_json(const Distribution& d) {
    return json{{"mean", d.mean}, {"stddev", d.stddev}, {"min", d.min},   {"q1", d.q1},
                {"median", d.median}, {"q3", d.q3},     {"max", d.max},   {"samples", d.samples}};
}

Distribution ns_distribution(const std::vector<IterationSummary>& iterations, bool products) {
    std::vector<double> values;
    values.reserve(iterations.size());
    for (const auto& it : iterations) {
        values.push_back(static_cast<double>(products ? it.ns_products : it.ns_companies));
    }
    return Distribution::of(std::move(values));
}

std::string sanitize_name(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
        out += ok ? c : '_';
    }
    return out.empty() ? "scenario" : out;
}

} // namespace

std::vector<Scenario> load_scenarios(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ScnError(std::string("parse failure: ") + e.what());
    }

    std::vector<Scenario> out;
    if (doc.is_object() && doc.contains("scenarios")) {
        const json& list = doc["scenarios"];
        if (!list.is_array()) throw ScnError("parse failure: 'scenarios' must be an array");
        for (const auto& [key, value] : doc.items()) {
            if (key != "scenarios") {
                throw ScnError("parse failure: unknown field '" + key + "'");
            }
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            out.push_back(scenario_from_json(list[i], i));
        }
    } else {
        out.push_back(scenario_from_json(doc, 0));
    }

    std::set<std::string> names;
    for (const auto& sc : out) {
        if (!names.insert(sc.name).second) {
            throw ScnError("duplicate scenario name: '" + sc.name + "'");
        }
    }
    return out;
}

std::vector<Scenario> load_scenarios_file(const std::string& path) {
    return load_scenarios(read_file(path));
}

CountryCluster resolve_selector(const ScopeSelector& sel, const ScopeSet& scopes,
                                std::string name) {
    if (sel.empty()) throw ScnError("empty cluster: '" + name + "' selects nothing");

    CountryCluster out;
    std::vector<std::string> parts_used;

    auto add_cluster_name = [&](const std::string& label) {
        // A label may union tiers: "Low & Medium Risk" means Low Risk + Medium
        // Risk. Try verbatim first, then split on " & " (re-appending the
        // trailing word of the full label for shorthand parts).
        try {
            const CountryCluster& c = scopes.resolve(label);
            out.countries.insert(c.countries.begin(), c.countries.end());
            parts_used.push_back(c.name);
            return;
        } catch (const ScnError&) {
            if (label.find(" & ") == std::string::npos) throw;
        }
        const std::string tail = label.substr(label.rfind(' ') + 1);
        std::size_t start = 0;
        while (start < label.size()) {
            const std::size_t amp = label.find(" & ", start);
            const std::size_t stop = amp == std::string::npos ? label.size() : amp;
            std::string part = label.substr(start, stop - start);
            try {
                const CountryCluster& c = scopes.resolve(part);
                out.countries.insert(c.countries.begin(), c.countries.end());
                parts_used.push_back(c.name);
            } catch (const ScnError&) {
                const CountryCluster& c = scopes.resolve(part + " " + tail);
                out.countries.insert(c.countries.begin(), c.countries.end());
                parts_used.push_back(c.name);
            }
            if (amp == std::string::npos) break;
            start = amp + 3;
        }
    };

    for (const std::string& label : sel.clusters) add_cluster_name(label);
    for (const std::string& code : sel.countries) {
        const auto normalized = normalize_country(code);
        if (!normalized) throw ScnError("unknown country: '" + code + "'");
        out.countries.insert(*normalized);
        parts_used.push_back(*normalized);
    }

    for (const std::string& label : sel.exclude_clusters) {
        const CountryCluster& c = scopes.resolve(label);
        for (const auto& code : c.countries) out.countries.erase(code);
    }
    for (const std::string& code : sel.exclude_countries) {
        const auto normalized = normalize_country(code);
        if (!normalized) throw ScnError("unknown country: '" + code + "'");
        out.countries.erase(*normalized);
    }

    if (!name.empty()) {
        out.name = std::move(name);
    } else {
        for (std::size_t i = 0; i < parts_used.size(); ++i) {
            if (i) out.name += " & ";
            out.name += parts_used[i];
        }
    }
    if (out.countries.empty()) throw ScnError("empty cluster: '" + out.name + "'");
    return out;
}

Distribution Distribution::of(std::vector<double> values) {
    Distribution d;
    d.samples = values.size();
    if (values.empty()) return d;

    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    d.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - d.mean) * (v - d.mean);
        d.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }

    auto quantile = [&](double p) {
        const double h = p * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(h);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    d.min = values.front();
    d.q1 = quantile(0.25);
    d.median = quantile(0.5);
    d.q3 = quantile(0.75);
    d.max = values.back();
    return d;
}

namespace {

AggregateResult run_scenario_body(const Scenario& sc) {
    AggregateResult out;
    out.scenario_name = sc.name;

    const ScopeSet scopes =
        sc.scope_set == "builtin" ? builtin_scopes() : load_scopes_file(sc.scope_set);

    SupplyNetwork net;
    if (sc.source.files) {
        net = load_tables(sc.source.files->firms, sc.source.files->products,
                          sc.source.files->edges)
                  .first;
    } else {
        GeneratorConfig cfg = *sc.source.generator;
        cfg.seed = derive_seed(sc.master_seed, SeedStream::generation, 0);
        net = generate(cfg);
    }

    PolicyScope pscope;
    pscope.policy = sc.policy;
    pscope.S = resolve_selector(sc.S, scopes, "");
    if (!sc.X.empty()) pscope.X = resolve_selector(sc.X, scopes, "");

    MetricOptions mopts;
    mopts.path_mode = sc.path_mode;
    mopts.path_samples = sc.path_samples;
    mopts.seed = derive_seed(sc.master_seed, SeedStream::metrics, 0);
    out.baseline = metric_report(net, mopts);

    std::set<ProductIndex> ns_union;
    std::set<ProductIndex> ns_intersection;

    for (std::size_t i = 0; i < sc.iterations; ++i) {
        const std::uint64_t iter_seed = derive_seed(sc.master_seed, SeedStream::iteration, i);
        const PolicyOutcome outcome =
            apply_policy(net, pscope, sc.selection, derive_seed(iter_seed, SeedStream::policy, 0));

        mopts.seed = derive_seed(iter_seed, SeedStream::metrics, 0);

        IterationSummary summary;
        summary.seed = iter_seed;
        summary.edges_added = outcome.added_edges.size();
        summary.edges_removed = outcome.removed_edges.size();
        summary.ns_products = outcome.ns_products.size();
        summary.ns_companies = outcome.ns_companies.size();
        summary.metrics = metric_report(outcome.network_after, mopts);
        out.iterations.push_back(std::move(summary));

        if (i == 0) {
            ns_intersection = outcome.ns_products;
            out.affected_by_country = outcome.affected_by_country;
            out.affected_by_industry = outcome.affected_by_industry;
            out.top_industries = rank_vulnerable_industries(net, outcome, 5);
            out.top_products = rank_vulnerable_products(net, outcome, 5);
            out.mining_share = mining_share(net, outcome);
            out.affected_degrees = affected_degrees(net, outcome);
        } else {
            std::set<ProductIndex> kept;
            std::set_intersection(ns_intersection.begin(), ns_intersection.end(),
                                  outcome.ns_products.begin(), outcome.ns_products.end(),
                                  std::inserter(kept, kept.begin()));
            ns_intersection = std::move(kept);
        }
        ns_union.insert(outcome.ns_products.begin(), outcome.ns_products.end());
    }

    for (ProductIndex p : ns_union) out.ns_products_union.push_back(net.product(p).id);
    for (ProductIndex p : ns_intersection) out.ns_products_intersection.push_back(net.product(p).id);
    std::sort(out.ns_products_union.begin(), out.ns_products_union.end());
    std::sort(out.ns_products_intersection.begin(), out.ns_products_intersection.end());

    double ns_p_sum = 0.0;
    double ns_c_sum = 0.0;
    for (const auto& it : out.iterations) {
        ns_p_sum += static_cast<double>(it.ns_products);
        ns_c_sum += static_cast<double>(it.ns_companies);
    }
    out.mean_ns_products = ns_p_sum / static_cast<double>(out.iterations.size());
    out.mean_ns_companies = ns_c_sum / static_cast<double>(out.iterations.size());

    for (std::size_t field = 0; field < 10; ++field) {
        std::vector<double> values;
        for (const auto& it : out.iterations) {
            if (const auto v = field_value(it.metrics, field)) values.push_back(*v);
        }
        if (!values.empty()) {
            out.metric_distributions.emplace(kFieldKeys[field], Distribution::of(std::move(values)));
        }
    }
    return out;
}

} // namespace

AggregateResult run_scenario(const Scenario& sc) {
    try {
        return run_scenario_body(sc);
    } catch (const std::exception& e) {
        throw ScnError("scenario '" + sc.name + "': " + e.what());
    }
}

std::vector<AggregateResult> run_suite(const std::vector<Scenario>& scenarios) {
    std::vector<AggregateResult> results;
    results.reserve(scenarios.size());
    for (const Scenario& sc : scenarios) {
        try {
            results.push_back(run_scenario(sc));
        } catch (const std::exception& e) {
            AggregateResult failed;
            failed.scenario_name = sc.name;
            failed.error = e.what();
            results.push_back(std::move(failed));
        }
    }
    return results;
}

std::string aggregate_to_json(const AggregateResult& r) {
    json doc;
    doc["scenario"] = r.scenario_name;
    if (!r.error.empty()) {
        doc["error"] = r.error;
        return doc.dump(2) + "\n";
    }
    doc["baseline"] = json::parse(metrics_to_json(r.baseline));

    json dists = json::object();
    for (const auto& [key, dist] : r.metric_distributions) dists[key] = distribution_to_json(dist);
    dists["ns_products"] = distribution_to_json(ns_distribution(r.iterations, true));
    dists["ns_companies"] = distribution_to_json(ns_distribution(r.iterations, false));
    doc["metric_distributions"] = std::move(dists);

    doc["mean_ns_products"] = r.mean_ns_products;
    doc["mean_ns_companies"] = r.mean_ns_companies;
    doc["ns_products_union"] = r.ns_products_union;
    doc["ns_products_intersection"] = r.ns_products_intersection;

    json iterations = json::array();
    for (const auto& it : r.iterations) {
        json row;
        row["seed"] = it.seed;
        row["edges_added"] = it.edges_added;
        row["edges_removed"] = it.edges_removed;
        row["ns_products"] = it.ns_products;
        row["ns_companies"] = it.ns_companies;
        row["metrics"] = json::parse(metrics_to_json(it.metrics));
        iterations.push_back(std::move(row));
    }
    doc["iterations"] = std::move(iterations);

    doc["affected_by_country"] = r.affected_by_country;
    doc["affected_by_industry"] = r.affected_by_industry;
    json top_ind = json::array();
    for (const auto& [label, count] : r.top_industries) top_ind.push_back({label, count});
    doc["top_industries"] = std::move(top_ind);
    json top_prod = json::array();
    for (const auto& [label, count] : r.top_products) top_prod.push_back({label, count});
    doc["top_products"] = std::move(top_prod);
    doc["mining_share"] = r.mining_share;
    doc["affected_degrees"] = r.affected_degrees;
    return doc.dump(2) + "\n";
}

std::string scenario_metric_table_csv(const AggregateResult& r) {
    std::string out = csv_row({"metric", "baseline", "post_mean", "post_stddev"});
    const std::vector<std::string> baseline = metric_row_values(r.baseline);
    for (std::size_t field = 0; field < 10; ++field) {
        const auto it = r.metric_distributions.find(kFieldKeys[field]);
        std::string mean = "undefined";
        std::string stddev = "undefined";
        if (it != r.metric_distributions.end() && it->second.samples > 0) {
            mean = fmt6(it->second.mean);
            stddev = fmt6(it->second.stddev);
        }
        out += csv_row({kMetricRowLabels[field], baseline[field], mean, stddev});
    }
    return out;
}

std::string boxplot_csv(const AggregateResult& r) {
    std::string out = csv_row({"metric", "min", "q1", "median", "q3", "max"});
    auto row = [&](const char* label, const Distribution& d) {
        if (d.samples == 0) return;
        out += csv_row({label, fmt6(d.min), fmt6(d.q1), fmt6(d.median), fmt6(d.q3), fmt6(d.max)});
    };
    for (std::size_t field = 0; field < 10; ++field) {
        const auto it = r.metric_distributions.find(kFieldKeys[field]);
        if (it != r.metric_distributions.end()) row(kFieldKeys[field], it->second);
    }
    row("ns_products", ns_distribution(r.iterations, true));
    row("ns_companies", ns_distribution(r.iterations, false));
    return out;
}

std::string suite_summary_json(const std::vector<AggregateResult>& results) {
    json summary = json::array();
    for (const AggregateResult& r : results) {
        json row;
        row["scenario"] = r.scenario_name;
        if (!r.error.empty()) {
            row["error"] = r.error;
            summary.push_back(std::move(row));
            continue;
        }
        row["baseline_edge_count"] = r.baseline.edge_count;
        row["baseline_modularity"] = r.baseline.modularity;
        const auto edges_it = r.metric_distributions.find("edge_count");
        if (edges_it != r.metric_distributions.end()) {
            row["post_edge_count_mean"] = edges_it->second.mean;
        }
        const auto mod_it = r.metric_distributions.find("modularity");
        if (mod_it != r.metric_distributions.end()) {
            row["post_modularity_mean"] = mod_it->second.mean;
        }
        row["mean_ns_products"] = r.mean_ns_products;
        row["mean_ns_companies"] = r.mean_ns_companies;
        summary.push_back(std::move(row));
    }
    return json(summary).dump(2) + "\n";
}

ScopeSelector parse_selector_json(const std::string& json_value_text, const std::string& where) {
    json doc;
    try {
        doc = json::parse(json_value_text);
    } catch (const json::exception& e) {
        throw ScnError(std::string("parse failure: ") + e.what());
    }
    try {
        return selector_from_json(doc, where);
    } catch (const json::exception& e) {
        throw ScnError(std::string("parse failure: ") + e.what());
    }
}

void write_reports(const std::vector<AggregateResult>& results, const std::string& dir) {
    fs::create_directories(dir);

    for (const AggregateResult& r : results) {
        if (!r.error.empty()) {
            const fs::path sub = fs::path(dir) / sanitize_name(r.scenario_name);
            write_file((sub / "aggregate.json").string(), aggregate_to_json(r));
            continue;
        }

        const fs::path sub = fs::path(dir) / sanitize_name(r.scenario_name);
        write_file((sub / "metric_table.csv").string(), scenario_metric_table_csv(r));
        write_file((sub / "boxplot.csv").string(), boxplot_csv(r));
        write_file((sub / "aggregate.json").string(), aggregate_to_json(r));

        std::string countries = csv_row({"country", "ns_companies"});
        {
            std::vector<std::pair<std::string, std::size_t>> rows(r.affected_by_country.begin(),
                                                                  r.affected_by_country.end());
            std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
                return a.second != b.second ? a.second > b.second : a.first < b.first;
            });
            for (const auto& [country, count] : rows) {
                countries += csv_row({country, std::to_string(count)});
            }
        }
        write_file((sub / "affected_by_country.csv").string(), countries);

        std::string industries = csv_row({"industry", "ns_products"});
        {
            std::vector<std::pair<std::string, std::size_t>> rows(r.affected_by_industry.begin(),
                                                                  r.affected_by_industry.end());
            std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
                return a.second != b.second ? a.second > b.second : a.first < b.first;
            });
            for (const auto& [industry, count] : rows) {
                industries += csv_row({industry, std::to_string(count)});
            }
        }
        write_file((sub / "affected_by_industry.csv").string(), industries);

        std::string top_ind = csv_row({"industry", "ns_products"});
        for (const auto& [label, count] : r.top_industries) {
            top_ind += csv_row({label, std::to_string(count)});
        }
        write_file((sub / "top_industries.csv").string(), top_ind);

        std::string top_prod = csv_row({"product", "affected_customers"});
        for (const auto& [label, count] : r.top_products) {
            top_prod += csv_row({label, std::to_string(count)});
        }
        write_file((sub / "top_products.csv").string(), top_prod);

        std::string degrees = csv_row({"degree"});
        for (std::size_t d : r.affected_degrees) degrees += csv_row({std::to_string(d)});
        write_file((sub / "affected_degrees.csv").string(), degrees);
    }
    write_file((fs::path(dir) / "summary.json").string(), suite_summary_json(results));
}

} // namespace scnsim
