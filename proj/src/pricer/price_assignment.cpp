#include "priceflow/pricer/price_assignment.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "priceflow/util/error.hpp"

namespace priceflow {

std::string dump_prices(const MarketInstance& inst, const PriceAssignment& prices) {
  nlohmann::ordered_json root = nlohmann::ordered_json::object();
  for (std::size_t v = 0; v < inst.num_groups(); ++v) {
    root[inst.groups()[v].id] = {{"price", prices.prices.at(v)},
                                 {"status", std::string(status_name(prices.statuses.at(v)))}};
  }
  return root.dump(2) + "\n";
}

PriceAssignment parse_prices(const MarketInstance& inst, std::string_view text,
                             std::string_view origin) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError(fmt::format("{}: malformed JSON: {}", origin, e.what()));
  }
  if (!root.is_object()) throw InstanceError(fmt::format("{}: expected an object", origin));

  PriceAssignment out;
  out.method = "file";
  for (const auto& g : inst.groups()) {
    auto it = root.find(g.id);
    if (it == root.end()) {
      throw InstanceError(fmt::format("{}: no price for group '{}'", origin, g.id));
    }
    if (!it->is_object() || !it->contains("price") || !(*it)["price"].is_number()) {
      throw InstanceError(fmt::format("{}: field '{}.price' must be a number", origin, g.id));
    }
    const double x = (*it)["price"].get<double>();
    if (!g.demand.domain().in_closure(x)) {
      throw InstanceError(
          fmt::format("{}: price {} for group '{}' is outside its domain", origin, x, g.id));
    }
    PriceStatus status = PriceStatus::kInterior;
    if (it->contains("status")) {
      try {
        status = parse_status((*it)["status"].get<std::string>());
      } catch (const std::exception&) {
        throw InstanceError(fmt::format("{}: bad status for group '{}'", origin, g.id));
      }
    }
    out.prices.push_back(x);
    out.statuses.push_back(status);
  }
  return out;
}

void write_prices(const MarketInstance& inst, const PriceAssignment& prices,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InstanceError(fmt::format("cannot write price file '{}'", path.string()));
  out << dump_prices(inst, prices);
}

PriceAssignment read_prices(const MarketInstance& inst, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError(fmt::format("cannot open price file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_prices(inst, buf.str(), path.string());
}

}  // namespace priceflow
