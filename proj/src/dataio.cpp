#include "scnsim/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "scnsim/scopes.hpp"

namespace scnsim {

namespace {

namespace fs = std::filesystem;

std::string fmt_double(double v) { return nlohmann::json(v).dump(); }

std::optional<double> parse_double(const std::string& cell) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

std::vector<std::string> split_list(const std::string& cell) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= cell.size()) {
        const std::size_t semi = cell.find(';', start);
        const std::size_t stop = semi == std::string::npos ? cell.size() : semi;
        std::string item = cell.substr(start, stop - start);
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return out;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ';';
        out += items[i];
    }
    return out;
}

std::optional<bool> parse_bool(std::string cell) {
    std::transform(cell.begin(), cell.end(), cell.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (cell == "true" || cell == "1" || cell == "yes") return true;
    if (cell == "false" || cell == "0" || cell == "no") return false;
    return std::nullopt;
}

// Maps header cells to column positions; throws on absent required names.
struct Columns {
    std::unordered_map<std::string, std::size_t> index;

    Columns(const std::vector<std::string>& header, const std::vector<const char*>& required,
            const char* table) {
        for (std::size_t i = 0; i < header.size(); ++i) index.emplace(header[i], i);
        for (const char* name : required) {
            if (!index.count(name)) {
                throw ScnError(std::string("missing required column: '") + name + "' in " +
                               table + " table");
            }
        }
    }

    const std::string& cell(const std::vector<std::string>& row, const char* name) const {
        static const std::string empty;
        const auto it = index.find(name);
        if (it == index.end() || it->second >= row.size()) return empty;
        return row[it->second];
    }
};

struct TableFile {
    std::vector<std::vector<std::string>> rows; // data rows only
    std::vector<std::size_t> lines;             // 1-based source line per data row
    Columns columns;
};

TableFile read_table(const std::string& path, const std::vector<const char*>& required,
                     const char* table) {
    const std::string text = read_file(path);
    auto rows = parse_csv(text);
    if (rows.empty()) {
        throw ScnError(std::string("missing required column: empty ") + table + " table in '" +
                       path + "'");
    }
    Columns columns(rows.front(), required, table);
    TableFile out{{}, {}, std::move(columns)};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        out.rows.push_back(std::move(rows[i]));
        out.lines.push_back(i + 1);
    }
    return out;
}

} // namespace

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool cell_started = false;

    std::size_t i = 0;
    // Skip a UTF-8 byte-order mark.
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;

    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
        cell_started = false;
    };
    auto end_row = [&] {
        end_cell();
        if (row.size() > 1 || !row.front().empty()) rows.push_back(std::move(row));
        row.clear();
    };

    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            cell_started = true;
            break;
        case ',':
            end_cell();
            cell_started = true; // a separator implies another cell follows
            break;
        case '\r':
            break;
        case '\n':
            if (!row.empty() || !cell.empty() || cell_started) end_row();
            break;
        default:
            cell += c;
            cell_started = true;
            break;
        }
    }
    if (!row.empty() || !cell.empty() || cell_started) end_row();
    return rows;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        const std::string& cell = cells[i];
        if (cell.find_first_of(",\"\n\r") != std::string::npos) {
            out += '"';
            for (char c : cell) {
                if (c == '"') out += '"';
                out += c;
            }
            out += '"';
        } else {
            out += cell;
        }
    }
    out += '\n';
    return out;
}

std::pair<SupplyNetwork, IngestReport> load_tables(const std::string& firms_file,
                                                   const std::string& products_file,
                                                   const std::string& edges_file) {
    IngestReport report;

    // Products first: firms and edges validate against the accepted catalog.
    TableFile ptab = read_table(products_file, {"id", "category", "industry", "is_mining"},
                                "products");
    std::vector<Product> catalog;
    std::unordered_set<std::string> product_ids;
    for (std::size_t r = 0; r < ptab.rows.size(); ++r) {
        ++report.products.read;
        const auto& row = ptab.rows[r];
        auto reject = [&](std::string reason) {
            ++report.products.rejected;
            report.reject_reasons.push_back({"products", ptab.lines[r], std::move(reason)});
        };
        Product p;
        p.id = ptab.columns.cell(row, "id");
        p.category = ptab.columns.cell(row, "category");
        p.industry = ptab.columns.cell(row, "industry");
        if (p.id.empty()) {
            reject("missing id");
            continue;
        }
        if (!product_ids.insert(p.id).second) {
            reject("duplicate product id: '" + p.id + "'");
            continue;
        }
        const auto mining = parse_bool(ptab.columns.cell(row, "is_mining"));
        if (!mining) {
            product_ids.erase(p.id);
            reject("invalid is_mining: '" + ptab.columns.cell(row, "is_mining") + "'");
            continue;
        }
        p.is_mining = *mining;
        catalog.push_back(std::move(p));
        ++report.products.accepted;
    }

    TableFile ftab = read_table(firms_file,
                                {"id", "name", "country", "industry", "market_cap", "products"},
                                "firms");
    std::vector<FirmInput> firms;
    std::unordered_set<std::string> firm_ids;
    for (std::size_t r = 0; r < ftab.rows.size(); ++r) {
        ++report.firms.read;
        const auto& row = ftab.rows[r];
        auto reject = [&](std::string reason) {
            ++report.firms.rejected;
            report.reject_reasons.push_back({"firms", ftab.lines[r], std::move(reason)});
        };
        FirmInput f;
        f.id = ftab.columns.cell(row, "id");
        f.name = ftab.columns.cell(row, "name");
        f.industry = ftab.columns.cell(row, "industry");
        if (f.id.empty()) {
            reject("missing id");
            continue;
        }
        if (firm_ids.count(f.id)) {
            reject("duplicate firm id: '" + f.id + "'");
            continue;
        }
        const auto country = normalize_country(ftab.columns.cell(row, "country"));
        if (!country) {
            reject("unknown country: '" + ftab.columns.cell(row, "country") + "'");
            continue;
        }
        f.country = *country;
        const std::string& cap_cell = ftab.columns.cell(row, "market_cap");
        if (!cap_cell.empty()) {
            const auto cap = parse_double(cap_cell);
            if (!cap || *cap < 0.0) {
                reject("invalid market cap: '" + cap_cell + "'");
                continue;
            }
            f.market_cap = *cap;
        }
        bool ok = true;
        for (const std::string& pid : split_list(ftab.columns.cell(row, "products"))) {
            if (!product_ids.count(pid)) {
                reject("unknown product: '" + pid + "'");
                ok = false;
                break;
            }
            f.products.push_back(pid);
        }
        if (!ok) continue;
        firm_ids.insert(f.id);
        firms.push_back(std::move(f));
        ++report.firms.accepted;
    }

    // Accepted supplier portfolios, for edge-product validation.
    std::unordered_map<std::string, std::unordered_set<std::string>> portfolio;
    for (const auto& f : firms) portfolio[f.id] = {f.products.begin(), f.products.end()};

    TableFile etab = read_table(edges_file, {"supplier_id", "customer_id"}, "edges");
    std::vector<EdgeInput> edges;
    for (std::size_t r = 0; r < etab.rows.size(); ++r) {
        ++report.edges.read;
        const auto& row = etab.rows[r];
        auto reject = [&](std::string reason) {
            ++report.edges.rejected;
            report.reject_reasons.push_back({"edges", etab.lines[r], std::move(reason)});
        };
        EdgeInput e;
        e.supplier = etab.columns.cell(row, "supplier_id");
        e.customer = etab.columns.cell(row, "customer_id");
        const auto sup = portfolio.find(e.supplier);
        if (sup == portfolio.end()) {
            reject("unknown firm id: '" + e.supplier + "'");
            continue;
        }
        if (!portfolio.count(e.customer)) {
            reject("unknown firm id: '" + e.customer + "'");
            continue;
        }
        if (e.supplier == e.customer) {
            reject("self-supply rejected: firm '" + e.supplier + "'");
            continue;
        }
        if (sup->second.empty()) {
            reject("edge-product mismatch: supplier '" + e.supplier + "' has no products");
            continue;
        }
        bool ok = true;
        for (const std::string& pid : split_list(etab.columns.cell(row, "product_ids"))) {
            if (!product_ids.count(pid)) {
                reject("unknown product: '" + pid + "'");
                ok = false;
                break;
            }
            if (!sup->second.count(pid)) {
                reject("edge-product mismatch: '" + pid + "' not in portfolio of '" +
                       e.supplier + "'");
                ok = false;
                break;
            }
            e.products.push_back(pid);
        }
        if (!ok) continue;
        const std::string& weight_cell = etab.columns.cell(row, "weight");
        if (!weight_cell.empty()) {
            const auto w = parse_double(weight_cell);
            if (!w || *w < 0.0) {
                reject("invalid weight: '" + weight_cell + "'");
                continue;
            }
            e.weight = *w;
        }
        edges.push_back(std::move(e));
        ++report.edges.accepted;
    }

    BuildReport build_report;
    SupplyNetwork net = SupplyNetwork::build(catalog, firms, edges, &build_report);
    report.duplicate_edges = build_report.duplicate_edges;
    return {std::move(net), std::move(report)};
}

void write_tables(const SupplyNetwork& net, const std::string& dir) {
    fs::create_directories(dir);

    std::string products = csv_row({"id", "category", "industry", "is_mining"});
    for (ProductIndex p = 0; p < net.product_count(); ++p) {
        const Product& prod = net.product(p);
        products += csv_row({prod.id, prod.category, prod.industry,
                             prod.is_mining ? "true" : "false"});
    }
    write_file((fs::path(dir) / "products.csv").string(), products);

    std::string firms = csv_row({"id", "name", "country", "industry", "market_cap", "products"});
    for (FirmIndex f = 0; f < net.firm_count(); ++f) {
        const Firm& firm = net.firm(f);
        std::vector<std::string> pids;
        pids.reserve(firm.products.size());
        for (ProductIndex p : firm.products) pids.push_back(net.product(p).id);
        firms += csv_row({firm.id, firm.name, firm.country, firm.industry,
                          firm.market_cap ? fmt_double(*firm.market_cap) : "",
                          join_list(pids)});
    }
    write_file((fs::path(dir) / "firms.csv").string(), firms);

    std::string edges = csv_row({"supplier_id", "customer_id", "product_ids", "weight"});
    for (const SupplyEdge& e : net.edges()) {
        std::vector<std::string> pids;
        pids.reserve(e.products.size());
        for (ProductIndex p : e.products) pids.push_back(net.product(p).id);
        edges += csv_row({net.firm(e.supplier).id, net.firm(e.customer).id, join_list(pids),
                          e.weight ? fmt_double(*e.weight) : ""});
    }
    write_file((fs::path(dir) / "edges.csv").string(), edges);
}

CategoryCatalog load_catalog(const std::string& path) {
    TableFile tab = read_table(path, {"category", "industry", "is_mining"}, "catalog");
    CategoryCatalog catalog;
    std::unordered_set<std::string> seen;
    for (std::size_t r = 0; r < tab.rows.size(); ++r) {
        const auto& row = tab.rows[r];
        CatalogEntry entry;
        entry.name = normalize_product_name(tab.columns.cell(row, "category"));
        entry.industry = tab.columns.cell(row, "industry");
        if (entry.name.empty()) {
            throw ScnError("parse failure: empty category at line " +
                           std::to_string(tab.lines[r]));
        }
        if (!seen.insert(entry.name).second) {
            throw ScnError("duplicate category: '" + entry.name + "'");
        }
        const auto mining = parse_bool(tab.columns.cell(row, "is_mining"));
        if (!mining) {
            throw ScnError("parse failure: invalid is_mining at line " +
                           std::to_string(tab.lines[r]));
        }
        entry.is_mining = *mining;
        catalog.categories.push_back(std::move(entry));
    }
    return catalog;
}

std::string normalize_product_name(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (unsigned char c : raw) {
        if (std::isalnum(c)) {
            if (pending_space && !out.empty()) out += ' ';
            pending_space = false;
            out += static_cast<char>(std::tolower(c));
        } else {
            pending_space = true; // whitespace and punctuation both separate tokens
        }
    }
    return out;
}

namespace {

std::vector<std::string> tokens_of(const std::string& normalized) {
    std::vector<std::string> tokens;
    std::istringstream stream(normalized);
    std::string token;
    while (stream >> token) tokens.push_back(std::move(token));
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0.0;
    std::size_t common = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia == *ib) {
            ++common;
            ++ia;
            ++ib;
        } else if (*ia < *ib) {
            ++ia;
        } else {
            ++ib;
        }
    }
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

} // namespace

std::optional<std::string> map_product_name(const std::string& raw, const CategoryCatalog& catalog,
                                            double threshold) {
    const std::string normalized = normalize_product_name(raw);
    if (normalized.empty()) return std::nullopt;

    for (const CatalogEntry& entry : catalog.categories) {
        if (entry.name == normalized) return entry.name;
    }

    const auto raw_tokens = tokens_of(normalized);
    const CatalogEntry* best = nullptr;
    double best_score = 0.0;
    for (const CatalogEntry& entry : catalog.categories) {
        const double score = jaccard(raw_tokens, tokens_of(entry.name));
        if (score < threshold) continue;
        if (!best || score > best_score ||
            (score == best_score && (entry.name.size() < best->name.size() ||
                                     (entry.name.size() == best->name.size() &&
                                      entry.name < best->name)))) {
            best = &entry;
            best_score = score;
        }
    }
    if (!best) return std::nullopt;
    return best->name;
}

std::string metric_table_csv(const std::vector<std::pair<std::string, MetricReport>>& reports) {
    std::vector<std::string> header{"metric"};
    for (const auto& item : reports) header.push_back(item.first);
    std::string out = csv_row(header);

    std::vector<std::vector<std::string>> columns;
    columns.reserve(reports.size());
    for (const auto& item : reports) columns.push_back(metric_row_values(item.second));

    for (std::size_t row = 0; row < 10; ++row) {
        std::vector<std::string> cells{kMetricRowLabels[row]};
        for (const auto& column : columns) cells.push_back(column[row]);
        out += csv_row(cells);
    }
    return out;
}

void write_metric_table(const std::vector<std::pair<std::string, MetricReport>>& reports,
                        const std::string& path) {
    write_file(path, metric_table_csv(reports));
}

void write_affected(const SupplyNetwork& net, const PolicyOutcome& outcome,
                    const std::string& dir) {
    fs::create_directories(dir);

    auto ranked = [](const std::map<std::string, std::size_t>& counts) {
        std::vector<std::pair<std::string, std::size_t>> rows(counts.begin(), counts.end());
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        return rows;
    };

    std::string countries = csv_row({"country", "ns_companies"});
    for (const auto& [country, count] : ranked(outcome.affected_by_country)) {
        countries += csv_row({country, std::to_string(count)});
    }
    write_file((fs::path(dir) / "affected_by_country.csv").string(), countries);

    std::string industries = csv_row({"industry", "ns_products"});
    for (const auto& [industry, count] : ranked(outcome.affected_by_industry)) {
        industries += csv_row({industry, std::to_string(count)});
    }
    write_file((fs::path(dir) / "affected_by_industry.csv").string(), industries);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScnError("unreadable file: '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ScnError("cannot write: '" + path + "'");
    out << text;
    if (!out) throw ScnError("cannot write: '" + path + "'");
}

} // namespace scnsim
