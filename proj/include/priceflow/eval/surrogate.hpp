#pragma once

#include <vector>

#include "priceflow/flow/network.hpp"
#include "priceflow/instance/market.hpp"

namespace priceflow {

struct SurrogateValue {
  double value = 0.0;
  /// The exact relaxation optimum lies in [value, value + tolerance].
  double tolerance = 0.0;
  double delta = 0.0;
  std::vector<double> edge_flow;  // per instance edge
};

/// Optimal value of the relaxed matching with group capacities n_v p_v(x_v),
/// solved as a linear min-cost flow on the delta grid. Prices must lie in
/// the closure of each domain.
SurrogateValue fhat(const MarketInstance& inst, const std::vector<double>& prices, double delta);

}  // namespace priceflow
