#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "priceflow/instance/market.hpp"

namespace priceflow {

// Instance file schema (JSON):
//
//   {
//     "metadata":  { "<key>": "<string>", ... },              (optional)
//     "resources": [ { "id": "u0", "capacity": 2 }, ... ],
//     "groups":    [ { "id": "v0", "family": "binomial" | "poisson", "n": 1,
//                      "response": { "kind": "linear" | "logistic" | "custom",
//                                    "params": { ... },
//                                    "domain": { "lo": .., "hi": ..,
//                                                "lo_closed": .., "hi_closed": .. } } } ],
//     "edges":     [ { "u": "u0", "v": "v0", "w": -1.5 }, ... ]
//   }
//
// params: linear {q}; logistic {q, beta, gamma}; custom {x: [..], p: [..]}.
// Infinite domain endpoints are written as null. The domain is implied by
// the params and is checked for consistency on read.

/// Parses the raw market; `origin` prefixes error messages (usually a path).
MarketData parse_market(std::string_view text, std::string_view origin = "<input>");
std::string dump_market(const MarketData& data);

MarketInstance read_instance(const std::filesystem::path& path,
                             const InstanceOptions& options = {});
void write_instance(const MarketInstance& inst, const std::filesystem::path& path);

}  // namespace priceflow
