#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "priceflow/demand/mean_demand.hpp"
#include "priceflow/flow/network.hpp"
#include "priceflow/instance/market.hpp"
#include "priceflow/pricer/price_assignment.hpp"

namespace priceflow {

/// Pricing network over U, V, s and t. Arc ids are kept so flows can be
/// read back per resource, edge and group.
struct FpNetwork {
  FlowNetwork net;
  int source = 0;
  int sink = 0;
  std::vector<int> resource_node;
  std::vector<int> group_node;
  std::vector<int> source_arc;  // s -> u, per resource
  std::vector<int> edge_arc;    // u -> v, per instance edge
  std::vector<int> sink_arc;    // v -> t, per group
  int bypass_arc = 0;           // s -> t
  double supply = 0.0;          // C
  std::vector<MeanDemandMap> maps;
};

/// Supply C = min(sum of usable mean demand, sum of capacities); when a grid
/// is given C is rounded down onto it so the balances stay representable.
FpNetwork build_fp_network(const MarketInstance& inst, std::optional<double> delta = {},
                           DemandLimits limits = {});

/// 1e-3 times the largest group count.
double default_delta(const MarketInstance& inst);

/// Solves the pricing network on the delta grid and reads prices off the
/// per-group flows. fhat is sum_e (x_v + w_e) z_e on the returned flow.
PriceAssignment solve_prices(const MarketInstance& inst, double delta, DemandLimits limits = {});

/// Sum of per-arc end slopes of the pricing network times delta: how much
/// the grid optimum can trail the continuous one.
double pricing_grid_bound(const MarketInstance& inst, double delta);

/// Single shared price maximizing (x + w_mean) * sum_v p_v(x), clamped into
/// each group's domain. p_v saturates outside its domain, so disjoint domains
/// are allowed.
PriceAssignment price_mrp(const MarketInstance& inst);
/// As price_mrp with demand capped at |U|: (x + w_mean) * min(|U|, sum_v p_v(x)).
PriceAssignment price_capped_mrp(const MarketInstance& inst);

struct GridSearchOptions {
  int points_per_node = 20;
  std::int64_t budget = 100000;  // surrogate evaluations
  bool allow_coordinate = true;  // coordinate ascent once the full grid exceeds the budget
  int max_sweeps = 8;
  std::optional<double> delta;   // grid for evaluating fhat; default_delta() if unset
};

/// Maximizes fhat over a per-group price grid spanning each search interval.
/// Exhaustive when points^|V| fits the budget, otherwise coordinate ascent
/// (if allowed); throws BudgetExceeded when neither fits.
PriceAssignment price_grid_search(const MarketInstance& inst, const GridSearchOptions& options = {});

/// Inclusive linspace over a group's search interval (midpoint for one point).
std::vector<double> price_grid(const PriceResponse& response, int points);

}  // namespace priceflow
