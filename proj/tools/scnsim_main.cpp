// Command-line front end over the scnsim C API.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "scnsim.h"

namespace {

struct StringGuard {
    char* value = nullptr;
    ~StringGuard() { scn_string_free(value); }
};

struct NetworkGuard {
    scn_network_t* value = nullptr;
    ~NetworkGuard() { scn_network_free(value); }
};

struct ScopesGuard {
    scn_scopes_t* value = nullptr;
    ~ScopesGuard() { scn_scopes_free(value); }
};

int fail(scn_status status) {
    std::cerr << "error: " << scn_last_error() << "\n";
    return status == SCN_ERROR_INVALID_ARGUMENT ? 2 : 1;
}

bool read_text(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    out = buffer.str();
    return true;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out += buf;
        } else {
            out += c;
        }
    }
    return out;
}

std::string metric_options(const std::string& path_mode, std::uint64_t seed) {
    std::string opts = "{\"seed\": " + std::to_string(seed);
    if (path_mode == "exact") {
        opts += ", \"path_mode\": \"exact\"";
    } else if (path_mode.rfind("sampled", 0) == 0) {
        opts += ", \"path_mode\": \"sampled\"";
        if (path_mode.size() > 8 && path_mode[7] == ':') {
            opts += ", \"path_samples\": " + path_mode.substr(8);
        }
    } else if (!path_mode.empty()) {
        throw CLI::ValidationError("--path-mode", "expected exact or sampled:K");
    }
    opts += "}";
    return opts;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"supply-chain network rewiring simulator"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "synthesize a network and write its tables");
    std::string gen_config;
    std::int64_t gen_seed = -1;
    std::string gen_out;
    bool gen_metrics = false;
    bool gen_calibrate = false;
    std::string gen_path_mode = "sampled:512";
    gen->add_option("--config", gen_config, "generator config JSON file");
    gen->add_option("--seed", gen_seed, "seed override");
    gen->add_option("--out", gen_out, "output directory for the CSV tables")->required();
    gen->add_flag("--metrics", gen_metrics, "print a metric report for the generated network");
    gen->add_flag("--check-calibration", gen_calibrate,
                  "check the network against the built-in calibration targets");
    gen->add_option("--path-mode", gen_path_mode, "exact or sampled:K (metric reports)");

    // metrics
    auto* met = app.add_subcommand("metrics", "metric report for a network loaded from tables");
    std::string met_firms, met_products, met_edges;
    std::string met_path_mode = "exact";
    std::uint64_t met_seed = 0;
    bool met_json = false;
    met->add_option("--firms", met_firms, "firms.csv")->required();
    met->add_option("--products", met_products, "products.csv")->required();
    met->add_option("--edges", met_edges, "edges.csv")->required();
    met->add_option("--path-mode", met_path_mode, "exact or sampled:K");
    met->add_option("--seed", met_seed, "seed for seeded metrics");
    met->add_flag("--json", met_json, "print JSON instead of the CSV table");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a scenario suite and write reports");
    std::string sim_scenarios;
    std::string sim_out;
    std::int64_t sim_seed = -1;
    std::int64_t sim_iterations = -1;
    std::string sim_selection;
    std::string sim_path_mode;
    sim->add_option("--scenarios", sim_scenarios, "scenario suite JSON file")->required();
    sim->add_option("--out", sim_out, "report output directory");
    sim->add_option("--seed", sim_seed, "override every scenario's master seed");
    sim->add_option("--iterations", sim_iterations, "override every scenario's iteration count");
    sim->add_option("--selection", sim_selection, "override selection: all or sample:K");
    sim->add_option("--path-mode", sim_path_mode, "override path mode: exact or sampled:K");

    // scopes
    auto* sco = app.add_subcommand("scopes", "print scope clusters as JSON");
    std::string sco_file;
    bool sco_list = false;
    sco->add_option("--file", sco_file, "scope config JSON (default: built-in clusters)");
    sco->add_flag("--list", sco_list, "print one 'name: N countries' line per cluster");

    // validate
    auto* val = app.add_subcommand("validate", "ingest tables and print the ingest report");
    std::string val_firms, val_products, val_edges;
    bool val_strict = false;
    val->add_option("--firms", val_firms, "firms.csv")->required();
    val->add_option("--products", val_products, "products.csv")->required();
    val->add_option("--edges", val_edges, "edges.csv")->required();
    val->add_flag("--strict", val_strict, "exit nonzero when any row was rejected");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            std::string config_text;
            if (!gen_config.empty() && !read_text(gen_config, config_text)) {
                std::cerr << "error: unreadable file: '" << gen_config << "'\n";
                return 1;
            }
            NetworkGuard net;
            scn_status status = scn_network_generate(
                config_text.empty() ? nullptr : config_text.c_str(), gen_seed, &net.value);
            if (status != SCN_OK) return fail(status);

            status = scn_network_write(net.value, gen_out.c_str());
            if (status != SCN_OK) return fail(status);
            std::cout << "wrote " << scn_network_firm_count(net.value) << " firms, "
                      << scn_network_product_count(net.value) << " products, "
                      << scn_network_edge_count(net.value) << " edges to " << gen_out << "\n";

            const std::uint64_t metric_seed = gen_seed >= 0 ? static_cast<std::uint64_t>(gen_seed)
                                                            : 42;
            if (gen_metrics) {
                StringGuard table;
                status = scn_network_metrics_table(
                    net.value, metric_options(gen_path_mode, metric_seed).c_str(), "generated",
                    &table.value);
                if (status != SCN_OK) return fail(status);
                std::cout << table.value;
            }
            if (gen_calibrate) {
                StringGuard report;
                int all_within = 0;
                status = scn_calibrate_check(net.value, nullptr, metric_seed, &report.value,
                                             &all_within);
                if (status != SCN_OK) return fail(status);
                std::cout << report.value;
                if (!all_within) return 1;
            }
            return 0;
        }

        if (met->parsed()) {
            NetworkGuard net;
            scn_status status = scn_network_load(met_firms.c_str(), met_products.c_str(),
                                                 met_edges.c_str(), &net.value, nullptr);
            if (status != SCN_OK) return fail(status);
            const std::string opts = metric_options(met_path_mode, met_seed);
            StringGuard out;
            status = met_json
                         ? scn_network_metrics(net.value, opts.c_str(), &out.value)
                         : scn_network_metrics_table(net.value, opts.c_str(), "network",
                                                     &out.value);
            if (status != SCN_OK) return fail(status);
            std::cout << out.value;
            return 0;
        }

        if (sim->parsed()) {
            std::string scenarios_text;
            if (!read_text(sim_scenarios, scenarios_text)) {
                std::cerr << "error: unreadable file: '" << sim_scenarios << "'\n";
                return 1;
            }
            std::string overrides = "{";
            bool first = true;
            auto append = [&](const std::string& item) {
                if (!first) overrides += ", ";
                overrides += item;
                first = false;
            };
            if (sim_seed >= 0) append("\"master_seed\": " + std::to_string(sim_seed));
            if (sim_iterations >= 0) append("\"iterations\": " + std::to_string(sim_iterations));
            if (!sim_selection.empty()) {
                append("\"selection\": \"" + json_escape(sim_selection) + "\"");
            }
            if (!sim_path_mode.empty()) {
                append("\"path_mode\": \"" + json_escape(sim_path_mode) + "\"");
            }
            overrides += "}";

            StringGuard summary;
            const scn_status status = scn_run_scenarios(
                scenarios_text.c_str(), first ? nullptr : overrides.c_str(),
                sim_out.empty() ? nullptr : sim_out.c_str(), &summary.value);
            if (status != SCN_OK) return fail(status);
            std::cout << summary.value;
            return 0;
        }

        if (sco->parsed()) {
            ScopesGuard scopes;
            scn_status status = sco_file.empty() ? scn_scopes_builtin(&scopes.value)
                                                 : scn_scopes_load(sco_file.c_str(), &scopes.value);
            if (status != SCN_OK) return fail(status);
            StringGuard out;
            status = sco_list ? scn_scopes_list(scopes.value, &out.value)
                              : scn_scopes_to_json(scopes.value, &out.value);
            if (status != SCN_OK) return fail(status);
            std::cout << out.value;
            return 0;
        }

        if (val->parsed()) {
            NetworkGuard net;
            StringGuard report;
            const scn_status status = scn_network_load(val_firms.c_str(), val_products.c_str(),
                                                       val_edges.c_str(), &net.value,
                                                       &report.value);
            if (status != SCN_OK) return fail(status);
            std::cout << report.value;
            if (val_strict) {
                // Strict mode fails unless every table reports zero rejected rows.
                const std::string text = report.value;
                std::size_t pos = 0;
                int rejected_zero = 0;
                while ((pos = text.find("\"rejected\": ", pos)) != std::string::npos) {
                    pos += 12;
                    const bool zero =
                        pos < text.size() && text[pos] == '0' &&
                        (pos + 1 >= text.size() ||
                         !std::isdigit(static_cast<unsigned char>(text[pos + 1])));
                    if (zero) ++rejected_zero;
                }
                if (rejected_zero != 3) return 1;
            }
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
