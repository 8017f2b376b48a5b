#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scnsim {

using FirmIndex = std::uint32_t;
using ProductIndex = std::uint32_t;

// Domain error for all contract violations (unknown ids, degenerate inputs,
// scope misuse). The message starts with the short reason phrase.
class ScnError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Product {
    std::string id;
    std::string category;
    std::string industry;
    bool is_mining = false;
};

struct Firm {
    std::string id;
    std::string name;
    std::string country;  // ISO-3166 alpha-2
    std::string industry;
    std::vector<ProductIndex> products; // sorted, unique
    std::optional<double> market_cap;
};

struct SupplyEdge {
    FirmIndex supplier = 0;
    FirmIndex customer = 0;
    // Products traded on this edge; empty means the supplier's full
    // portfolio is assumed traded.
    std::vector<ProductIndex> products;
    std::optional<double> weight;
};

// String-keyed inputs for building a network (ingest and generation both
// produce these before index assignment).
struct FirmInput {
    std::string id;
    std::string name;
    std::string country;
    std::string industry;
    std::vector<std::string> products;
    std::optional<double> market_cap;
};

struct EdgeInput {
    std::string supplier;
    std::string customer;
    std::vector<std::string> products;
    std::optional<double> weight;
};

} // namespace scnsim
