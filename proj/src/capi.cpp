#include "scnsim.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"
#include "scnsim/dataio.hpp"
#include "scnsim/generator.hpp"
#include "scnsim/metrics.hpp"
#include "scnsim/network.hpp"
#include "scnsim/policy.hpp"
#include "scnsim/rng.hpp"
#include "scnsim/scenario.hpp"
#include "scnsim/scopes.hpp"

struct scn_network {
    scnsim::SupplyNetwork net;
};

struct scn_scopes {
    scnsim::ScopeSet scopes;
};

namespace {

using nlohmann::json;

thread_local std::string t_error;

bool starts_with(const std::string& text, const char* prefix) {
    return text.rfind(prefix, 0) == 0;
}

scn_status classify(const std::string& message) {
    if (starts_with(message, "parse failure") || starts_with(message, "unparseable file") ||
        starts_with(message, "unknown field")) {
        return SCN_ERROR_PARSE;
    }
    if (starts_with(message, "unreadable file") || starts_with(message, "cannot write") ||
        starts_with(message, "missing required column")) {
        return SCN_ERROR_IO;
    }
    return SCN_ERROR_RUNTIME;
}

template <typename Fn>
scn_status guarded(Fn&& fn) {
    try {
        fn();
        t_error.clear();
        return SCN_OK;
    } catch (const scnsim::ScnError& e) {
        t_error = e.what();
        return classify(t_error);
    } catch (const std::exception& e) {
        t_error = e.what();
        return SCN_ERROR_RUNTIME;
    }
}

scn_status invalid(const char* message) {
    t_error = message;
    return SCN_ERROR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

scnsim::MetricOptions metric_options_from(const char* options_json) {
    scnsim::MetricOptions opts;
    if (!options_json || !*options_json) return opts;
    json doc;
    try {
        doc = json::parse(options_json);
    } catch (const json::exception& e) {
        throw scnsim::ScnError(std::string("parse failure: ") + e.what());
    }
    if (!doc.is_object()) throw scnsim::ScnError("parse failure: options must be an object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "path_mode") {
                const auto text = value.get<std::string>();
                if (text == "exact") opts.path_mode = scnsim::PathMode::exact;
                else if (text == "sampled") opts.path_mode = scnsim::PathMode::sampled;
                else throw scnsim::ScnError("parse failure: bad path_mode '" + text + "'");
            } else if (key == "path_samples") {
                opts.path_samples = value.get<std::size_t>();
            } else if (key == "seed") {
                opts.seed = value.get<std::uint64_t>();
            } else {
                throw scnsim::ScnError("parse failure: unknown field '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw scnsim::ScnError(std::string("parse failure: ") + e.what());
    }
    return opts;
}

} // namespace

extern "C" {

const char* scn_last_error(void) { return t_error.c_str(); }

void scn_string_free(char* s) { std::free(s); }
void scn_network_free(scn_network_t* net) { delete net; }
void scn_scopes_free(scn_scopes_t* scopes) { delete scopes; }

scn_status scn_network_load(const char* firms_csv, const char* products_csv,
                            const char* edges_csv, scn_network_t** out,
                            char** ingest_json_out) {
    if (!firms_csv || !products_csv || !edges_csv || !out) {
        return invalid("null argument to scn_network_load");
    }
    return guarded([&] {
        auto [net, report] = scnsim::load_tables(firms_csv, products_csv, edges_csv);
        if (ingest_json_out) {
            json doc;
            auto table = [](const scnsim::TableCounts& c) {
                return json{{"read", c.read}, {"accepted", c.accepted}, {"rejected", c.rejected}};
            };
            doc["firms"] = table(report.firms);
            doc["products"] = table(report.products);
            doc["edges"] = table(report.edges);
            doc["duplicate_edges"] = report.duplicate_edges;
            json rejects = json::array();
            for (const auto& r : report.reject_reasons) {
                rejects.push_back({{"table", r.table}, {"line", r.line}, {"reason", r.reason}});
            }
            doc["rejects"] = std::move(rejects);
            *ingest_json_out = dup_string(doc.dump(2) + "\n");
        }
        *out = new scn_network{std::move(net)};
    });
}

scn_status scn_network_generate(const char* config_json, int64_t seed_override,
                                scn_network_t** out) {
    if (!out) return invalid("null argument to scn_network_generate");
    return guarded([&] {
        scnsim::GeneratorConfig cfg = (config_json && *config_json)
                                          ? scnsim::load_generator_config(config_json)
                                          : scnsim::default_generator_config();
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        *out = new scn_network{scnsim::generate(cfg)};
    });
}

scn_status scn_network_write(const scn_network_t* net, const char* dir) {
    if (!net || !dir) return invalid("null argument to scn_network_write");
    return guarded([&] { scnsim::write_tables(net->net, dir); });
}

size_t scn_network_firm_count(const scn_network_t* net) {
    return net ? net->net.firm_count() : 0;
}

size_t scn_network_product_count(const scn_network_t* net) {
    return net ? net->net.product_count() : 0;
}

size_t scn_network_edge_count(const scn_network_t* net) {
    return net ? net->net.edge_count() : 0;
}

scn_status scn_network_metrics(const scn_network_t* net, const char* options_json,
                               char** json_out) {
    if (!net || !json_out) return invalid("null argument to scn_network_metrics");
    return guarded([&] {
        const scnsim::MetricReport report =
            scnsim::metric_report(net->net, metric_options_from(options_json));
        *json_out = dup_string(scnsim::metrics_to_json(report));
    });
}

scn_status scn_network_metrics_table(const scn_network_t* net, const char* options_json,
                                     const char* label, char** csv_out) {
    if (!net || !csv_out) return invalid("null argument to scn_network_metrics_table");
    return guarded([&] {
        const scnsim::MetricReport report =
            scnsim::metric_report(net->net, metric_options_from(options_json));
        const std::string name = label && *label ? label : "network";
        *csv_out = dup_string(scnsim::metric_table_csv({{name, report}}));
    });
}

scn_status scn_calibrate_check(const scn_network_t* net, const char* targets_json,
                               uint64_t metric_seed, char** json_out, int* all_within) {
    if (!net || !json_out) return invalid("null argument to scn_calibrate_check");
    return guarded([&] {
        std::vector<scnsim::CalibrationTarget> targets;
        if (targets_json && *targets_json) {
            json doc;
            try {
                doc = json::parse(targets_json);
            } catch (const json::exception& e) {
                throw scnsim::ScnError(std::string("parse failure: ") + e.what());
            }
            if (!doc.is_array()) {
                throw scnsim::ScnError("parse failure: targets must be an array");
            }
            try {
                for (const auto& item : doc) {
                    targets.push_back({item.at("name").get<std::string>(),
                                       item.at("target").get<double>(),
                                       item.at("tolerance").get<double>()});
                }
            } catch (const json::exception& e) {
                throw scnsim::ScnError(std::string("parse failure: ") + e.what());
            }
        } else {
            targets = scnsim::default_calibration_targets();
        }
        const scnsim::CalibrationReport report =
            scnsim::calibrate_check(net->net, targets, metric_seed);
        json rows = json::array();
        for (const auto& row : report.rows) {
            rows.push_back({{"name", row.name},
                            {"target", row.target},
                            {"tolerance", row.tolerance},
                            {"achieved", row.achieved},
                            {"within_tolerance", row.within_tolerance}});
        }
        json doc;
        doc["rows"] = std::move(rows);
        doc["all_within"] = report.all_within();
        *json_out = dup_string(doc.dump(2) + "\n");
        if (all_within) *all_within = report.all_within() ? 1 : 0;
    });
}

scn_status scn_scopes_builtin(scn_scopes_t** out) {
    if (!out) return invalid("null argument to scn_scopes_builtin");
    return guarded([&] { *out = new scn_scopes{scnsim::builtin_scopes()}; });
}

scn_status scn_scopes_load(const char* path, scn_scopes_t** out) {
    if (!path || !out) return invalid("null argument to scn_scopes_load");
    return guarded([&] { *out = new scn_scopes{scnsim::load_scopes_file(path)}; });
}

scn_status scn_scopes_to_json(const scn_scopes_t* scopes, char** json_out) {
    if (!scopes || !json_out) return invalid("null argument to scn_scopes_to_json");
    return guarded([&] { *json_out = dup_string(scnsim::scopes_to_json(scopes->scopes)); });
}

scn_status scn_scopes_list(const scn_scopes_t* scopes, char** text_out) {
    if (!scopes || !text_out) return invalid("null argument to scn_scopes_list");
    return guarded([&] {
        std::string text;
        for (const auto& [name, cluster] : scopes->scopes.clusters) {
            text += name;
            text += ": ";
            text += std::to_string(cluster.countries.size());
            text += " countries\n";
        }
        *text_out = dup_string(text);
    });
}

scn_status scn_apply_policy(const scn_network_t* net, const scn_scopes_t* scopes,
                            const char* request_json, scn_network_t** net_after,
                            char** outcome_json) {
    if (!net || !scopes || !request_json || !net_after) {
        return invalid("null argument to scn_apply_policy");
    }
    return guarded([&] {
        json doc;
        try {
            doc = json::parse(request_json);
        } catch (const json::exception& e) {
            throw scnsim::ScnError(std::string("parse failure: ") + e.what());
        }
        if (!doc.is_object()) throw scnsim::ScnError("parse failure: request must be an object");

        scnsim::PolicyScope pscope;
        scnsim::SelectionStrategy selection;
        std::uint64_t seed = 0;
        bool saw_policy = false;
        bool saw_s = false;
        try {
            for (const auto& [key, value] : doc.items()) {
                if (key == "policy") {
                    pscope.policy = scnsim::parse_policy(value.get<std::string>());
                    saw_policy = true;
                } else if (key == "S") {
                    pscope.S = scnsim::resolve_selector(
                        scnsim::parse_selector_json(value.dump(), "S"), scopes->scopes, "");
                    saw_s = true;
                } else if (key == "X") {
                    pscope.X = scnsim::resolve_selector(
                        scnsim::parse_selector_json(value.dump(), "X"), scopes->scopes, "");
                } else if (key == "selection") {
                    selection = scnsim::parse_selection(value.get<std::string>());
                } else if (key == "seed") {
                    seed = value.get<std::uint64_t>();
                } else {
                    throw scnsim::ScnError("parse failure: unknown field '" + key + "'");
                }
            }
        } catch (const json::exception& e) {
            throw scnsim::ScnError(std::string("parse failure: ") + e.what());
        }
        if (!saw_policy) throw scnsim::ScnError("parse failure: request missing policy");
        if (!saw_s) throw scnsim::ScnError("parse failure: request missing S");

        scnsim::PolicyOutcome outcome =
            scnsim::apply_policy(net->net, pscope, selection, seed);

        if (outcome_json) {
            json out;
            out["policy"] = scnsim::policy_name(pscope.policy);
            out["edges_added"] = outcome.added_edges.size();
            out["edges_removed"] = outcome.removed_edges.size();
            json ns_products = json::array();
            for (scnsim::ProductIndex p : outcome.ns_products) {
                ns_products.push_back(net->net.product(p).id);
            }
            out["ns_products"] = std::move(ns_products);
            json ns_companies = json::array();
            for (scnsim::FirmIndex f : outcome.ns_companies) {
                ns_companies.push_back(net->net.firm(f).id);
            }
            out["ns_companies"] = std::move(ns_companies);
            out["affected_by_country"] = outcome.affected_by_country;
            out["affected_by_industry"] = outcome.affected_by_industry;
            json top_ind = json::array();
            for (const auto& [label, count] :
                 scnsim::rank_vulnerable_industries(net->net, outcome, 5)) {
                top_ind.push_back({label, count});
            }
            out["top_industries"] = std::move(top_ind);
            json top_prod = json::array();
            for (const auto& [label, count] :
                 scnsim::rank_vulnerable_products(net->net, outcome, 5)) {
                top_prod.push_back({label, count});
            }
            out["top_products"] = std::move(top_prod);
            out["mining_share"] = scnsim::mining_share(net->net, outcome);
            *outcome_json = dup_string(out.dump(2) + "\n");
        }
        *net_after = new scn_network{std::move(outcome.network_after)};
    });
}

scn_status scn_run_scenarios(const char* scenarios_json, const char* overrides_json,
                             const char* out_dir, char** summary_json) {
    if (!scenarios_json) return invalid("null argument to scn_run_scenarios");
    return guarded([&] {
        std::vector<scnsim::Scenario> scenarios = scnsim::load_scenarios(scenarios_json);

        if (overrides_json && *overrides_json) {
            json doc;
            try {
                doc = json::parse(overrides_json);
            } catch (const json::exception& e) {
                throw scnsim::ScnError(std::string("parse failure: ") + e.what());
            }
            if (!doc.is_object()) {
                throw scnsim::ScnError("parse failure: overrides must be an object");
            }
            try {
                for (const auto& [key, value] : doc.items()) {
                    for (scnsim::Scenario& sc : scenarios) {
                        if (key == "master_seed") {
                            sc.master_seed = value.get<std::uint64_t>();
                        } else if (key == "iterations") {
                            sc.iterations = value.get<std::size_t>();
                        } else if (key == "selection") {
                            sc.selection = scnsim::parse_selection(value.get<std::string>());
                        } else if (key == "path_mode") {
                            const auto text = value.get<std::string>();
                            if (text == "exact") {
                                sc.path_mode = scnsim::PathMode::exact;
                            } else if (text == "sampled" || text.rfind("sampled:", 0) == 0) {
                                sc.path_mode = scnsim::PathMode::sampled;
                                if (text.size() > 8 && text[7] == ':') {
                                    sc.path_samples = std::strtoull(text.c_str() + 8, nullptr, 10);
                                }
                            } else {
                                throw scnsim::ScnError("parse failure: bad path_mode '" + text +
                                                       "'");
                            }
                        } else if (key == "path_samples") {
                            sc.path_samples = value.get<std::size_t>();
                        } else {
                            throw scnsim::ScnError("parse failure: unknown field '" + key + "'");
                        }
                    }
                }
            } catch (const json::exception& e) {
                throw scnsim::ScnError(std::string("parse failure: ") + e.what());
            }
            for (const scnsim::Scenario& sc : scenarios) {
                if (sc.iterations == 0) {
                    throw scnsim::ScnError("parse failure: iterations must be >= 1");
                }
            }
        }

        std::vector<scnsim::AggregateResult> results = scnsim::run_suite(scenarios);
        if (out_dir && *out_dir) scnsim::write_reports(results, out_dir);
        if (summary_json) *summary_json = dup_string(scnsim::suite_summary_json(results));
    });
}

} // extern "C"
