#include "priceflow/demand/mean_demand.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "priceflow/util/error.hpp"

namespace priceflow {

std::string_view status_name(PriceStatus s) {
  switch (s) {
    case PriceStatus::kInterior:
      return "interior";
    case PriceStatus::kClampedCeiling:
      return "clamped_ceiling";
    case PriceStatus::kMarketClosed:
      return "market_closed";
  }
  return "";
}

PriceStatus parse_status(std::string_view name) {
  if (name == "interior") return PriceStatus::kInterior;
  if (name == "clamped_ceiling") return PriceStatus::kClampedCeiling;
  if (name == "market_closed") return PriceStatus::kMarketClosed;
  throw Error(fmt::format("unknown price status '{}'", name));
}

MeanDemandMap::MeanDemandMap(DemandModel model, DemandLimits limits)
    : model_(std::move(model)), limits_(limits) {
  const Interval z = model_.response.range();
  const double n = model_.count;
  range_ = {n * z.lo, n * z.hi, z.lo_closed, z.hi_closed};
}

double MeanDemandMap::forward(double x) const {
  const Interval d = model_.domain();
  if (!d.in_closure(x)) {
    throw DomainError(fmt::format("price {} outside the domain [{}, {}]", x, d.lo, d.hi));
  }
  return model_.count * model_.response.value(x);
}

double MeanDemandMap::derivative(double x) const {
  return model_.count * model_.response.derivative(x);
}

Interval MeanDemandMap::range() const { return range_; }

double MeanDemandMap::z_floor() const { return limits_.floor * model_.count; }

double MeanDemandMap::z_ceiling() const {
  return range_.hi_closed ? range_.hi : (1.0 - limits_.ceiling) * range_.hi;
}

double MeanDemandMap::exact_inverse(double z) const {
  const double n = model_.count;
  const Interval r = model_.response.range();
  return model_.response.inverse(std::clamp(z / n, r.lo, r.hi));
}

double MeanDemandMap::price_cap() const {
  const Interval d = model_.domain();
  if (model_.count == 0) return d.bounded_above() ? d.hi : model_.response.search_interval().hi;
  if (range_.lo_closed && range_.lo == 0.0) return exact_inverse(0.0);
  return model_.response.inverse(limits_.floor);
}

PricedDemand MeanDemandMap::inverse(double z) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(range_.hi));
  if (!(z >= range_.lo - slack && z <= range_.hi + slack)) {
    throw DomainError(fmt::format("mean demand {} outside [{}, {}]", z, range_.lo, range_.hi));
  }
  if (model_.count == 0 || z < z_floor()) return {price_cap(), PriceStatus::kMarketClosed};
  if (z > z_ceiling()) return {exact_inverse(z_ceiling()), PriceStatus::kClampedCeiling};
  return {exact_inverse(z), PriceStatus::kInterior};
}

double MeanDemandMap::revenue_cost(double z) const {
  if (z == 0.0) return 0.0;
  const double slack = 1e-12 * std::max(1.0, std::abs(range_.hi));
  if (z < 0.0 || z > range_.hi + slack) {
    throw DomainError(fmt::format("mean demand {} outside [0, {}]", z, range_.hi));
  }
  if (!range_.hi_closed && z >= range_.hi) return std::numeric_limits<double>::infinity();
  return -exact_inverse(z) * z;
}

double mean_demand(const DemandModel& model, double x) { return MeanDemandMap(model).forward(x); }

PricedDemand inverse_mean_demand(const DemandModel& model, double z, DemandLimits limits) {
  return MeanDemandMap(model, limits).inverse(z);
}

double revenue_cost(const DemandModel& model, double z) {
  return MeanDemandMap(model).revenue_cost(z);
}

EdgeCostCurve revenue_curve(const MeanDemandMap& map) {
  return EdgeCostCurve::revenue([map](double z) { return map.revenue_cost(z); });
}

}  // namespace priceflow
