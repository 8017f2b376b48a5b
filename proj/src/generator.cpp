#include "scnsim/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "json.hpp"
#include "scnsim/metrics.hpp"
#include "scnsim/rng.hpp"

namespace scnsim {

namespace {

using nlohmann::json;

constexpr const char* kMiningIndustry = "Mining, Refining & Smelting";

// Firm-count profile shaped like the reference dataset (China first, then
// Japan and the US, long tail over the remaining clusters).
const std::vector<std::pair<const char*, double>>& builtin_country_weights() {
    static const std::vector<std::pair<const char*, double>> weights = {
        {"CN", 2111}, {"JP", 1325}, {"US", 1322}, {"TW", 905},  {"KR", 820},  {"DE", 800},
        {"IN", 700},  {"GB", 620},  {"FR", 540},  {"IT", 460},  {"CA", 420},  {"HK", 300},
        {"MY", 280},  {"SG", 260},  {"TH", 250},  {"ES", 240},  {"CH", 230},  {"SE", 220},
        {"NL", 210},  {"AU", 200},  {"BR", 190},  {"MX", 185},  {"ID", 180},  {"VN", 175},
        {"PL", 160},  {"TR", 150},  {"BE", 140},  {"AT", 130},  {"RU", 125},  {"IL", 120},
        {"FI", 110},  {"DK", 105},  {"NO", 100},  {"IE", 95},   {"CZ", 90},   {"ZA", 85},
        {"SA", 80},   {"AE", 75},   {"AR", 70},   {"CL", 65},   {"NZ", 60},   {"PT", 55},
        {"HU", 50},   {"GR", 45},   {"RO", 40},   {"UA", 35},   {"BY", 18},   {"IR", 15},
    };
    return weights;
}

const std::vector<std::pair<const char*, double>>& builtin_industry_weights() {
    static const std::vector<std::pair<const char*, double>> weights = {
        {"Automotive", 0.20},
        {"Transportation Equipment", 0.13},
        {"Electronics", 0.12},
        {"Telecommunications", 0.08},
        {"Metals & Mining", 0.07},
        {"Industrial Intermediate Products", 0.07},
        {kMiningIndustry, 0.06},
        {"Chemicals", 0.06},
        {"Electric Utility", 0.05},
        {"Construction Materials", 0.05},
        {"Cable & Satellite", 0.04},
        {"Diversified Industrials", 0.04},
        {"Semiconductors", 0.03},
    };
    return weights;
}

struct WeightedPicker {
    std::vector<std::string> labels;
    std::vector<double> cumulative;

    void add(std::string label, double weight) {
        if (weight <= 0.0) return;
        labels.push_back(std::move(label));
        cumulative.push_back((cumulative.empty() ? 0.0 : cumulative.back()) + weight);
    }

    const std::string& pick(Rng& rng) const {
        const double x = rng.uniform01() * cumulative.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
        const std::size_t i = std::min<std::size_t>(it - cumulative.begin(), labels.size() - 1);
        return labels[i];
    }
};

WeightedPicker make_picker(const std::map<std::string, double>& custom,
                           const std::vector<std::pair<const char*, double>>& fallback,
                           const char* what) {
    WeightedPicker picker;
    if (custom.empty()) {
        for (const auto& [label, w] : fallback) picker.add(label, w);
    } else {
        for (const auto& [label, w] : custom) {
            if (w < 0.0) throw ScnError(std::string("cannot satisfy: negative ") + what +
                                        " weight for '" + label + "'");
            picker.add(label, w);
        }
    }
    if (picker.labels.empty()) {
        throw ScnError(std::string("cannot satisfy: no positive ") + what + " weight");
    }
    return picker;
}

// Fitness-weighted pool over a fixed member list; prefix sums for O(log n) draws.
struct FitnessPool {
    std::vector<FirmIndex> members;
    std::vector<double> cumulative;

    void build(std::vector<FirmIndex> firms, const std::vector<double>& fitness) {
        members = std::move(firms);
        cumulative.resize(members.size());
        double total = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
            total += fitness[members[i]];
            cumulative[i] = total;
        }
    }

    bool empty() const { return members.empty(); }

    FirmIndex draw(Rng& rng) const {
        const double x = rng.uniform01() * cumulative.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
        const std::size_t i = std::min<std::size_t>(it - cumulative.begin(), members.size() - 1);
        return members[i];
    }
};

void validate(const GeneratorConfig& cfg) {
    if (cfg.n_firms < 2) throw ScnError("cannot satisfy: n_firms must be >= 2");
    if (cfg.n_products < 1) throw ScnError("cannot satisfy: n_products must be >= 1");
    if (cfg.n_planted_communities < 1) {
        throw ScnError("cannot satisfy: n_planted_communities must be >= 1");
    }
    if (cfg.degree_exponent <= 1.0) {
        throw ScnError("cannot satisfy: degree_exponent must be > 1");
    }
    if (cfg.products_per_firm.mean < 1.0) {
        throw ScnError("cannot satisfy: products_per_firm.mean must be >= 1");
    }
    if (cfg.edges_per_firm < 0.0) throw ScnError("cannot satisfy: edges_per_firm must be >= 0");
    for (const double v : {cfg.domestic_preference, cfg.community_locality,
                           cfg.country_coherence, cfg.triangle_closure, cfg.mining_fraction}) {
        if (v < 0.0 || v > 1.0) {
            throw ScnError("cannot satisfy: probability knobs must lie in [0,1]");
        }
    }
}

std::string padded_id(const char* prefix, std::size_t value, std::size_t width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, static_cast<int>(width), value);
    return buf;
}

std::size_t digits_for(std::size_t n) {
    std::size_t width = 1;
    while (n >= 10) {
        n /= 10;
        ++width;
    }
    return width;
}

} // namespace

GeneratorConfig default_generator_config() { return {}; }

SupplyNetwork generate(const GeneratorConfig& cfg) {
    validate(cfg);
    Rng rng(cfg.seed);

    const WeightedPicker country_picker =
        make_picker(cfg.country_weights, builtin_country_weights(), "country");
    const WeightedPicker industry_picker =
        make_picker(cfg.industry_weights, builtin_industry_weights(), "industry");

    // Product catalog: a mining block first, the rest industry-weighted.
    const std::size_t pw = digits_for(cfg.n_products);
    const auto n_mining =
        static_cast<std::size_t>(std::llround(cfg.mining_fraction * cfg.n_products));
    std::vector<Product> catalog;
    catalog.reserve(cfg.n_products);
    std::map<std::string, std::vector<ProductIndex>> products_by_industry;
    for (std::size_t i = 0; i < cfg.n_products; ++i) {
        Product p;
        p.id = padded_id("P", i, pw);
        p.is_mining = i < n_mining;
        p.industry = p.is_mining ? kMiningIndustry : industry_picker.pick(rng);
        p.category = p.industry + " component " + std::to_string(i);
        products_by_industry[p.industry].push_back(static_cast<ProductIndex>(i));
        catalog.push_back(std::move(p));
    }
    std::vector<ProductIndex> all_products(cfg.n_products);
    for (std::size_t i = 0; i < cfg.n_products; ++i) all_products[i] = static_cast<ProductIndex>(i);

    // Firms: planted communities in contiguous blocks, each with a home country.
    const std::size_t k = std::min(cfg.n_planted_communities, cfg.n_firms);
    std::vector<std::string> community_home(k);
    for (auto& home : community_home) home = country_picker.pick(rng);

    const std::size_t fw = digits_for(cfg.n_firms);
    std::vector<FirmInput> firms(cfg.n_firms);
    std::vector<std::uint32_t> community_of(cfg.n_firms);
    std::vector<double> fitness(cfg.n_firms);
    std::vector<std::vector<FirmIndex>> community_members(k);
    std::map<std::string, std::vector<FirmIndex>> firms_by_country;

    const double alpha = cfg.degree_exponent - 1.0;
    // Finite-size cutoff keeps one fitness draw from dominating the pools.
    const double fitness_cap = 0.5 * std::pow(static_cast<double>(cfg.n_firms), 1.0 / alpha);
    const double mu = cfg.products_per_firm.mean - 1.0;
    const double disp = std::max(0.25, cfg.products_per_firm.dispersion - 1.0);
    const auto nb_r = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::llround(mu > 0.0 ? mu / disp : 1.0)));
    const double nb_p = static_cast<double>(nb_r) / (static_cast<double>(nb_r) + mu);

    for (std::size_t i = 0; i < cfg.n_firms; ++i) {
        const auto comm = static_cast<std::uint32_t>(i * k / cfg.n_firms);
        community_of[i] = comm;
        community_members[comm].push_back(static_cast<FirmIndex>(i));

        FirmInput& firm = firms[i];
        firm.id = padded_id("F", i, fw);
        firm.name = "Firm " + std::to_string(i);
        firm.country = rng.uniform01() < cfg.country_coherence ? community_home[comm]
                                                               : country_picker.pick(rng);
        firm.industry = industry_picker.pick(rng);
        firms_by_country[firm.country].push_back(static_cast<FirmIndex>(i));

        fitness[i] = std::min(fitness_cap, std::pow(1.0 - rng.uniform01(), -1.0 / alpha));
        firm.market_cap = std::floor(fitness[i] * 1e6) / 100.0;

        // Portfolio: shifted negative binomial, mostly own-industry products.
        std::size_t size = 1 + (mu > 0.0 ? static_cast<std::size_t>(
                                               rng.negative_binomial(nb_r, nb_p))
                                         : 0);
        size = std::min(size, cfg.n_products);
        const auto own_it = products_by_industry.find(firm.industry);
        const std::vector<ProductIndex>* own =
            own_it != products_by_industry.end() ? &own_it->second : nullptr;
        std::unordered_set<ProductIndex> chosen;
        std::size_t attempts = 0;
        while (chosen.size() < size && attempts < 60 * size) {
            ++attempts;
            const bool from_own = own && !own->empty() && rng.uniform01() < 0.8;
            const auto& pool = from_own ? *own : all_products;
            chosen.insert(pool[rng.bounded(pool.size())]);
        }
        firm.products.reserve(chosen.size());
        std::vector<ProductIndex> sorted(chosen.begin(), chosen.end());
        std::sort(sorted.begin(), sorted.end());
        for (ProductIndex p : sorted) firm.products.push_back(catalog[p].id);
    }

    if (cfg.domestic_preference >= 1.0) {
        for (const auto& [country, members] : firms_by_country) {
            if (members.size() < 2) {
                throw ScnError("cannot satisfy: domestic_preference 1.0 with single-firm country " +
                               country);
            }
        }
    }

    // Fitness pools for supplier draws.
    FitnessPool global_pool;
    {
        std::vector<FirmIndex> everyone(cfg.n_firms);
        for (std::size_t i = 0; i < cfg.n_firms; ++i) everyone[i] = static_cast<FirmIndex>(i);
        global_pool.build(std::move(everyone), fitness);
    }
    std::vector<FitnessPool> community_pools(k);
    for (std::size_t c = 0; c < k; ++c) community_pools[c].build(community_members[c], fitness);
    std::map<std::string, FitnessPool> country_pools;
    for (const auto& [country, members] : firms_by_country) {
        country_pools[country].build(members, fitness);
    }

    const auto target_edges =
        static_cast<std::size_t>(std::llround(cfg.edges_per_firm * cfg.n_firms));
    std::vector<EdgeInput> edges;
    edges.reserve(target_edges + cfg.n_firms / 8);
    std::unordered_set<std::uint64_t> edge_keys;
    edge_keys.reserve(target_edges * 2);
    std::vector<std::pair<FirmIndex, FirmIndex>> placed;
    placed.reserve(target_edges);
    std::vector<std::vector<FirmIndex>> out_neighbors(cfg.n_firms);

    auto try_add = [&](FirmIndex supplier, FirmIndex customer) {
        if (supplier == customer) return false;
        const std::uint64_t key = (static_cast<std::uint64_t>(supplier) << 32) | customer;
        if (!edge_keys.insert(key).second) return false;
        edges.push_back({firms[supplier].id, firms[customer].id, {}, std::nullopt});
        placed.emplace_back(supplier, customer);
        out_neighbors[supplier].push_back(customer);
        return true;
    };

    for (std::size_t e = 0; e < target_edges; ++e) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < 200 && !placed; ++attempt) {
            const auto customer = static_cast<FirmIndex>(rng.bounded(cfg.n_firms));
            const bool local = rng.uniform01() < cfg.community_locality;
            const FitnessPool& pool =
                local ? community_pools[community_of[customer]] : global_pool;
            if (pool.empty()) continue;

            FirmIndex supplier = pool.draw(rng);
            if (rng.uniform01() < cfg.domestic_preference) {
                const auto& country = firms[customer].country;
                bool domestic = firms[supplier].country == country;
                for (std::size_t t = 0; t < 64 && !domestic; ++t) {
                    supplier = pool.draw(rng);
                    domestic = firms[supplier].country == country;
                }
                if (!domestic) {
                    const auto cp = country_pools.find(country);
                    if (cp != country_pools.end() && cp->second.members.size() > 1) {
                        do {
                            supplier = cp->second.draw(rng);
                        } while (supplier == customer);
                    } else if (cfg.domestic_preference >= 1.0) {
                        throw ScnError("cannot satisfy: no domestic supplier for country " +
                                       country);
                    }
                }
            }
            placed = try_add(supplier, customer);
        }
    }

    // Wedge closures lift clustering toward the reference level: for a random
    // two-hop chain u -> v -> w, add the chord u -> w.
    const auto closures =
        static_cast<std::size_t>(std::llround(cfg.triangle_closure * cfg.n_firms));
    const std::size_t base_edges = placed.size();
    for (std::size_t i = 0; i < closures && base_edges > 0; ++i) {
        for (std::size_t attempt = 0; attempt < 50; ++attempt) {
            const auto [u, v] = placed[rng.bounded(base_edges)];
            const auto& hops = out_neighbors[v];
            if (hops.empty()) continue;
            const FirmIndex w = hops[rng.bounded(hops.size())];
            if (try_add(u, w)) break;
        }
    }

    return SupplyNetwork::build(catalog, firms, edges);
}

CalibrationReport calibrate_check(const SupplyNetwork& net,
                                  const std::vector<CalibrationTarget>& targets,
                                  std::uint64_t metric_seed) {
    MetricOptions opts;
    opts.path_mode = PathMode::sampled;
    opts.path_samples = 512;
    opts.seed = metric_seed;
    const MetricReport report = metric_report(net, opts);

    double portfolio_total = 0.0;
    for (FirmIndex f = 0; f < net.firm_count(); ++f) {
        portfolio_total += static_cast<double>(net.firm(f).products.size());
    }
    const double products_per_firm =
        net.firm_count() ? portfolio_total / static_cast<double>(net.firm_count()) : 0.0;

    auto resolve = [&](const std::string& name) -> double {
        if (name == "edge_count") return static_cast<double>(report.edge_count);
        if (name == "density") return report.density;
        if (name == "degree_assortativity") {
            return report.degree_assortativity.value_or(std::nan(""));
        }
        if (name == "location_assortativity") {
            return report.location_assortativity.value_or(std::nan(""));
        }
        if (name == "avg_shortest_path") return report.avg_shortest_path.value_or(std::nan(""));
        if (name == "avg_domestic") return report.avg_domestic;
        if (name == "avg_international") return report.avg_international;
        if (name == "clustering_coefficient") return report.clustering_coefficient;
        if (name == "modularity") return report.modularity;
        if (name == "community_count") return static_cast<double>(report.community_count);
        if (name == "domestic_international_ratio") {
            return report.avg_international > 0.0 ? report.avg_domestic / report.avg_international
                                                  : std::nan("");
        }
        if (name == "products_per_firm") return products_per_firm;
        throw ScnError("unknown target: '" + name + "'");
    };

    CalibrationReport out;
    for (const auto& target : targets) {
        CalibrationRow row;
        row.name = target.name;
        row.target = target.target;
        row.tolerance = target.tolerance;
        row.achieved = resolve(target.name);
        row.within_tolerance =
            std::isfinite(row.achieved) && std::fabs(row.achieved - row.target) <= row.tolerance;
        out.rows.push_back(std::move(row));
    }
    return out;
}

bool CalibrationReport::all_within() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const CalibrationRow& r) { return r.within_tolerance; });
}

std::vector<CalibrationTarget> default_calibration_targets() {
    return {
        {"modularity", 0.57, 0.05},
        {"clustering_coefficient", 0.026, 0.01},
        {"avg_shortest_path", 4.57, 0.5},
        {"domestic_international_ratio", 1.0, 0.1},
        {"products_per_firm", 5.0, 0.5},
    };
}

GeneratorConfig load_generator_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ScnError(std::string("parse failure: ") + e.what());
    }
    if (!doc.is_object()) throw ScnError("parse failure: generator config must be an object");

    GeneratorConfig cfg;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "n_firms") cfg.n_firms = value.get<std::size_t>();
            else if (key == "n_products") cfg.n_products = value.get<std::size_t>();
            else if (key == "n_planted_communities") {
                cfg.n_planted_communities = value.get<std::size_t>();
            } else if (key == "degree_exponent") cfg.degree_exponent = value.get<double>();
            else if (key == "products_per_firm") {
                if (!value.is_object()) {
                    throw ScnError("parse failure: products_per_firm must be an object");
                }
                for (const auto& [pk, pv] : value.items()) {
                    if (pk == "mean") cfg.products_per_firm.mean = pv.get<double>();
                    else if (pk == "dispersion") cfg.products_per_firm.dispersion = pv.get<double>();
                    else throw ScnError("parse failure: unknown field 'products_per_firm." + pk + "'");
                }
            } else if (key == "edges_per_firm") cfg.edges_per_firm = value.get<double>();
            else if (key == "domestic_preference") cfg.domestic_preference = value.get<double>();
            else if (key == "community_locality") cfg.community_locality = value.get<double>();
            else if (key == "country_coherence") cfg.country_coherence = value.get<double>();
            else if (key == "triangle_closure") cfg.triangle_closure = value.get<double>();
            else if (key == "mining_fraction") cfg.mining_fraction = value.get<double>();
            else if (key == "country_weights") {
                cfg.country_weights = value.get<std::map<std::string, double>>();
            } else if (key == "industry_weights") {
                cfg.industry_weights = value.get<std::map<std::string, double>>();
            } else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else throw ScnError("parse failure: unknown field '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ScnError(std::string("parse failure: ") + e.what());
    }
    return cfg;
}

std::string generator_config_to_json(const GeneratorConfig& cfg) {
    json doc;
    doc["n_firms"] = cfg.n_firms;
    doc["n_products"] = cfg.n_products;
    doc["n_planted_communities"] = cfg.n_planted_communities;
    doc["degree_exponent"] = cfg.degree_exponent;
    doc["products_per_firm"] = {{"mean", cfg.products_per_firm.mean},
                                {"dispersion", cfg.products_per_firm.dispersion}};
    doc["edges_per_firm"] = cfg.edges_per_firm;
    doc["domestic_preference"] = cfg.domestic_preference;
    doc["community_locality"] = cfg.community_locality;
    doc["country_coherence"] = cfg.country_coherence;
    doc["triangle_closure"] = cfg.triangle_closure;
    doc["mining_fraction"] = cfg.mining_fraction;
    doc["country_weights"] = cfg.country_weights;
    doc["industry_weights"] = cfg.industry_weights;
    doc["seed"] = cfg.seed;
    return doc.dump(2) + "\n";
}

} // namespace scnsim
