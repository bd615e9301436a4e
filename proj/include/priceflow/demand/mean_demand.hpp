#pragma once

#include <string_view>

#include "priceflow/flow/cost_curve.hpp"
#include "priceflow/instance/demand_model.hpp"

namespace priceflow {

enum class PriceStatus { kInterior, kClampedCeiling, kMarketClosed };

std::string_view status_name(PriceStatus s);
PriceStatus parse_status(std::string_view name);

/// Relative thresholds for the ends of the mean-demand range. Demand below
/// floor * n counts as a closed market; for a range whose top is not
/// attained, demand is capped at (1 - ceiling) * n * sup Z.
struct DemandLimits {
  double floor = 1e-9;
  double ceiling = 1e-9;
};

struct PricedDemand {
  double price = 0.0;
  PriceStatus status = PriceStatus::kInterior;
};

/// x -> n p(x) for one group together with its inverse and the revenue
/// term used by the pricing network.
class MeanDemandMap {
 public:
  explicit MeanDemandMap(DemandModel model, DemandLimits limits = {});

  const DemandModel& model() const { return model_; }

  /// Throws DomainError for x outside the closure of the domain.
  double forward(double x) const;
  double derivative(double x) const;

  /// Price for mean demand z, with the boundary policy applied. Throws
  /// DomainError for z outside the closure of n Z.
  PricedDemand inverse(double z) const;

  /// n Z.
  Interval range() const;
  double z_floor() const;
  /// Largest usable mean demand: n sup Z, or slightly less when the
  /// supremum is not attained.
  double z_ceiling() const;
  /// Price at which the mean demand equals z_floor(); the exact upper
  /// domain end when zero demand is attainable.
  double price_cap() const;

  /// -inverse(z) z with the continuous extension 0 at z = 0. Uses the exact
  /// inverse, so it is +inf at an unattained top of the range.
  double revenue_cost(double z) const;

 private:
  double exact_inverse(double z) const;

  DemandModel model_;
  DemandLimits limits_;
  Interval range_;
};

double mean_demand(const DemandModel& model, double x);
PricedDemand inverse_mean_demand(const DemandModel& model, double z, DemandLimits limits = {});
double revenue_cost(const DemandModel& model, double z);

/// z -> -inverse(z) z as an arc cost for the pricing network.
EdgeCostCurve revenue_curve(const MeanDemandMap& map);

}  // namespace priceflow
