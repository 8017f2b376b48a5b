#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scnsim/metrics.hpp"
#include "scnsim/network.hpp"
#include "scnsim/policy.hpp"

namespace scnsim {

// Minimal RFC-4180 style CSV. Cells with commas, quotes or newlines are
// quoted; quotes doubled.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);
std::string csv_row(const std::vector<std::string>& cells);

struct RejectedRow {
    std::string table; // "firms" | "products" | "edges"
    std::size_t line = 0;
    std::string reason;
};

struct TableCounts {
    std::size_t read = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

struct IngestReport {
    TableCounts firms;
    TableCounts products;
    TableCounts edges;
    std::vector<RejectedRow> reject_reasons;
    std::size_t duplicate_edges = 0;

    std::size_t rows_read() const { return firms.read + products.read + edges.read; }
    std::size_t rows_rejected() const { return firms.rejected + products.rejected + edges.rejected; }
};

// Schemas (header row required):
//   products: id,category,industry,is_mining
//   firms:    id,name,country,industry,market_cap,products   (products ';'-joined)
//   edges:    supplier_id,customer_id,product_ids,weight     (product_ids ';'-joined, both optional)
// Malformed rows are rejected with (table, line, reason), never dropped
// silently. Throws on unreadable files or missing required columns.
std::pair<SupplyNetwork, IngestReport> load_tables(const std::string& firms_file,
                                                   const std::string& products_file,
                                                   const std::string& edges_file);

// Writes firms.csv, products.csv, edges.csv under dir; reload is isomorphic.
void write_tables(const SupplyNetwork& net, const std::string& dir);

struct CatalogEntry {
    std::string name; // canonical, normalized unique
    std::string industry;
    bool is_mining = false;
};

struct CategoryCatalog {
    std::vector<CatalogEntry> categories;
};

CategoryCatalog load_catalog(const std::string& path); // csv: category,industry,is_mining

// Normalizes (lowercase, trim, collapse whitespace, strip punctuation), then
// exact match, then best token-overlap Jaccard >= threshold; ties broken by
// shorter name then lexicographic. nullopt when unmapped.
std::optional<std::string> map_product_name(const std::string& raw, const CategoryCatalog& catalog,
                                            double threshold = 0.5);
std::string normalize_product_name(const std::string& raw);

// One metric per row (header + 10 = 11 rows), one labeled scenario per column.
void write_metric_table(const std::vector<std::pair<std::string, MetricReport>>& reports,
                        const std::string& path);
std::string metric_table_csv(const std::vector<std::pair<std::string, MetricReport>>& reports);

// affected_by_country.csv and affected_by_industry.csv under dir.
void write_affected(const SupplyNetwork& net, const PolicyOutcome& outcome, const std::string& dir);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

} // namespace scnsim
