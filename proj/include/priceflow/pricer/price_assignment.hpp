#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "priceflow/demand/mean_demand.hpp"
#include "priceflow/flow/network.hpp"
#include "priceflow/instance/market.hpp"

namespace priceflow {

/// One price per group, indexed like MarketInstance::groups().
struct PriceAssignment {
  std::string method;
  std::vector<double> prices;
  std::vector<PriceStatus> statuses;
  double fhat = 0.0;
  std::optional<FlowSolution> flow;
  std::vector<std::string> notes;
};

/// {"<group id>": {"price": x, "status": "interior"}, ...}
std::string dump_prices(const MarketInstance& inst, const PriceAssignment& prices);
/// Every group of the instance must be present and priced inside the
/// closure of its domain; throws InstanceError otherwise.
PriceAssignment parse_prices(const MarketInstance& inst, std::string_view text,
                             std::string_view origin = "<input>");

void write_prices(const MarketInstance& inst, const PriceAssignment& prices,
                  const std::filesystem::path& path);
PriceAssignment read_prices(const MarketInstance& inst, const std::filesystem::path& path);

}  // namespace priceflow
