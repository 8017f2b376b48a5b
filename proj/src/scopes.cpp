#include "scnsim/scopes.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scnsim/types.hpp"

namespace scnsim {

namespace {

using nlohmann::json;

constexpr std::array<const char*, 3> kTierOrder = {"Low Risk", "Medium Risk", "High Risk"};

CountryCluster make_cluster(std::string name, std::initializer_list<const char*> names) {
    CountryCluster cluster;
    cluster.name = std::move(name);
    for (const char* raw : names) {
        auto code = normalize_country(raw);
        if (!code) throw ScnError(std::string("unknown country: ") + raw);
        cluster.countries.insert(*code);
    }
    return cluster;
}

// Resolves countries listed in more than one risk tier to the lower-risk
// tier. Applies whenever all three tier names are present.
void dedupe_tiers(ScopeSet& scopes, std::vector<std::string>* warnings) {
    for (const char* tier : kTierOrder) {
        if (!scopes.contains(tier)) return;
    }
    for (std::size_t hi = kTierOrder.size(); hi-- > 1;) {
        auto& higher = scopes.clusters.at(kTierOrder[hi]).countries;
        for (std::size_t lo = 0; lo < hi; ++lo) {
            const auto& lower = scopes.clusters.at(kTierOrder[lo]).countries;
            for (auto it = higher.begin(); it != higher.end();) {
                if (lower.count(*it)) {
                    if (warnings) {
                        warnings->push_back("country " + *it + " listed in both " +
                                            kTierOrder[lo] + " and " + kTierOrder[hi] +
                                            "; kept in " + kTierOrder[lo]);
                    }
                    it = higher.erase(it);
                } else {
                    ++it;
                }
            }
        }
    }
}

ScopeKind parse_kind(const std::string& text) {
    if (text == "geographical") return ScopeKind::geographical;
    if (text == "geopolitical") return ScopeKind::geopolitical;
    if (text == "custom") return ScopeKind::custom;
    throw ScnError("parse failure: unknown scope kind '" + text + "'");
}

const char* kind_name(ScopeKind kind) {
    switch (kind) {
        case ScopeKind::geographical: return "geographical";
        case ScopeKind::geopolitical: return "geopolitical";
        case ScopeKind::custom: return "custom";
    }
    return "custom";
}

CountryCluster cluster_from_json(const std::string& name, const json& countries) {
    if (!countries.is_array()) {
        throw ScnError("parse failure: cluster '" + name + "' countries must be an array");
    }
    CountryCluster cluster;
    cluster.name = name;
    for (const auto& entry : countries) {
        if (!entry.is_string()) {
            throw ScnError("parse failure: cluster '" + name + "' has a non-string country");
        }
        const std::string raw = entry.get<std::string>();
        auto code = normalize_country(raw);
        if (!code) throw ScnError("unknown country: '" + raw + "' in cluster '" + name + "'");
        cluster.countries.insert(*code);
    }
    if (cluster.countries.empty()) throw ScnError("empty cluster: '" + name + "'");
    return cluster;
}

} // namespace

const CountryCluster& ScopeSet::resolve(const std::string& name) const {
    auto it = clusters.find(name);
    if (it == clusters.end()) throw ScnError("unknown cluster: '" + name + "'");
    return it->second;
}

ScopeSet builtin_scopes() {
    ScopeSet scopes;
    scopes.kind = ScopeKind::geopolitical;

    auto add = [&scopes](CountryCluster cluster) {
        scopes.clusters.emplace(cluster.name, std::move(cluster));
    };

    add(make_cluster("Low Risk", {
        "Australia", "Belgium", "Canada", "Denmark", "Finland", "France", "Germany",
        "Ireland", "Italy", "Japan", "Netherlands", "New Zealand", "Norway",
        "South Korea", "Spain", "Sweden", "Taiwan", "United Kingdom", "United States",
    }));
    add(make_cluster("Medium Risk", {
        "Algeria", "Angola", "Argentina", "Aruba", "Austria", "Azerbaijan", "Bahrain",
        "Bangladesh", "Bermuda", "Bhutan", "Bolivia", "Bosnia-Herzegovina", "Brazil",
        "Bulgaria", "Burkina Faso", "Cameroon", "Cayman Islands", "Chad", "Chile",
        "Colombia", "Costa Rica", "Croatia", "Curaçao", "Cyprus", "Czech Republic",
        "Czechia", "Côte d'Ivoire", "Dominica", "Dominican Republic", "Ecuador",
        "Egypt", "El Salvador", "Estonia", "Ethiopia", "Fiji", "Ghana", "Ghana",
        "Greece", "Guatemala", "Guinea", "Guyana", "Honduras", "Hong Kong", "Hungary",
        "Iceland", "India", "Indonesia", "Israel", "Jamaica", "Jordan", "Kazakhstan",
        "Kenya", "Kuwait", "Kyrgyzstan", "Laos", "Latvia", "Liberia", "Liechtenstein",
        "Lithuania", "Luxembourg", "Madagascar", "Malaysia", "Mali", "Malta",
        "Marshall Islands", "Mauritania", "Mauritius", "Mexico", "Moldova", "Mongolia",
        "Morocco", "Mozambique", "Namibia", "New Caledonia", "Nigeria", "Oman",
        "Pakistan", "Panama", "Papua New Guinea", "Peru", "Philippines", "Poland",
        "Portugal", "Puerto Rico", "Qatar", "Romania", "Saudi Arabia", "Serbia",
        "Singapore", "Slovakia", "Slovenia", "South Africa", "Sri Lanka", "Suriname",
        "Switzerland", "Tanzania", "Thailand", "Tunisia", "Türkiye", "Uganda",
        "Ukraine", "United Arab Emirates", "Uruguay", "Uzbekistan", "Vietnam",
        "Virgin Islands", "Zambia",
    }));
    add(make_cluster("High Risk", {
        "Belarus", "Cambodia", "China", "DR Congo", "Cuba", "Iran", "Iran", "Iraq",
        "Lebanon", "Libya", "Myanmar", "North Korea", "Russian Federation",
        "Venezuela", "Zimbabwe",
    }));
    add(make_cluster("Asian", {
        "China", "Hong Kong", "India", "Indonesia", "Japan", "Malaysia", "Singapore",
        "South Korea", "Taiwan", "Vietnam",
    }));
    add(make_cluster("American", {"Canada", "Mexico", "United States"}));
    add(make_cluster("European", {
        "Austria", "Belgium", "Bulgaria", "Croatia", "Cyprus", "Czech Republic",
        "Denmark", "Estonia", "Finland", "France", "Germany", "Greece", "Hungary",
        "Ireland", "Italy", "Latvia", "Lithuania", "Luxembourg", "Malta",
        "Netherlands", "Norway", "Poland", "Portugal", "Romania", "Slovakia",
        "Slovenia", "Spain", "Sweden", "Switzerland", "United Kingdom",
    }));

    dedupe_tiers(scopes, nullptr);
    return scopes;
}

ScopeSet load_scopes(const std::string& json_text, std::vector<std::string>* warnings) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ScnError(std::string("parse failure: ") + e.what());
    }
    if (!doc.is_object()) throw ScnError("parse failure: top level must be an object");

    ScopeSet scopes;
    if (doc.contains("kind")) {
        if (!doc["kind"].is_string()) throw ScnError("parse failure: kind must be a string");
        scopes.kind = parse_kind(doc["kind"].get<std::string>());
    }
    if (!doc.contains("clusters")) throw ScnError("parse failure: missing 'clusters'");
    const json& clusters = doc["clusters"];

    if (clusters.is_object()) {
        for (const auto& [name, countries] : clusters.items()) {
            scopes.clusters.emplace(name, cluster_from_json(name, countries));
        }
    } else if (clusters.is_array()) {
        for (const auto& entry : clusters) {
            if (!entry.is_object() || !entry.contains("name") || !entry.contains("countries")) {
                throw ScnError("parse failure: cluster entries need 'name' and 'countries'");
            }
            const std::string name = entry["name"].get<std::string>();
            if (scopes.contains(name)) throw ScnError("duplicate cluster: '" + name + "'");
            scopes.clusters.emplace(name, cluster_from_json(name, entry["countries"]));
        }
    } else {
        throw ScnError("parse failure: 'clusters' must be an object or array");
    }

    if (scopes.clusters.empty()) throw ScnError("parse failure: no clusters defined");
    if (scopes.kind == ScopeKind::geopolitical) {
        for (const char* tier : kTierOrder) {
            if (!scopes.contains(tier)) {
                throw ScnError(std::string("parse failure: geopolitical scope set lacks '") +
                               tier + "'");
            }
        }
    }
    dedupe_tiers(scopes, warnings);
    return scopes;
}

ScopeSet load_scopes_file(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScnError("unparseable file: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scopes(buffer.str(), warnings);
}

std::string scopes_to_json(const ScopeSet& scopes) {
    json clusters = json::array();
    for (const auto& [name, cluster] : scopes.clusters) {
        json entry;
        entry["name"] = name;
        entry["countries"] = json::array();
        for (const auto& code : cluster.countries) entry["countries"].push_back(code);
        clusters.push_back(std::move(entry));
    }
    json doc;
    doc["kind"] = kind_name(scopes.kind);
    doc["clusters"] = std::move(clusters);
    return doc.dump(2) + "\n";
}

CountryCluster union_cluster(const CountryCluster& a, const CountryCluster& b, std::string name) {
    CountryCluster out;
    out.name = std::move(name);
    out.countries = a.countries;
    out.countries.insert(b.countries.begin(), b.countries.end());
    return out;
}

} // namespace scnsim
