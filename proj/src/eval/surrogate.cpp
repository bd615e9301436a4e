#include "priceflow/eval/surrogate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "priceflow/demand/mean_demand.hpp"
#include "priceflow/flow/solver.hpp"
#include "priceflow/util/error.hpp"

namespace priceflow {

SurrogateValue fhat(const MarketInstance& inst, const std::vector<double>& prices, double delta) {
  if (prices.size() != inst.num_groups()) {
    throw Error(fmt::format("expected {} prices, got {}", inst.num_groups(), prices.size()));
  }
  if (!(delta > 0.0)) throw Error(fmt::format("delta must be positive, got {}", delta));

  const auto nu = static_cast<int>(inst.num_resources());
  const auto nv = static_cast<int>(inst.num_groups());
  std::vector<double> demand(nv);
  for (int v = 0; v < nv; ++v) demand[v] = mean_demand(inst.groups()[v].demand, prices[v]);

  FlowNetwork net;
  const int s = net.add_node("s");
  const int t = net.add_node("t");
  double total_cap = 0.0, total_demand = 0.0;
  for (int u = 0; u < nu; ++u) {
    net.add_node(inst.resources()[u].id);
    total_cap += inst.resources()[u].capacity;
  }
  for (int v = 0; v < nv; ++v) {
    net.add_node(inst.groups()[v].id);
    total_demand += demand[v];
  }
  const auto u_node = [](int u) { return 2 + u; };
  const auto v_node = [nu](int v) { return 2 + nu + v; };

  for (int u = 0; u < nu; ++u) net.add_arc(s, u_node(u), inst.resources()[u].capacity);
  std::vector<int> edge_arc;
  for (const auto& e : inst.edges()) {
    const double cap = std::min<double>(inst.resources()[e.u].capacity, demand[e.v]);
    edge_arc.push_back(net.add_arc(u_node(e.u), v_node(e.v), cap, EdgeCostCurve::linear(-e.w)));
  }
  for (int v = 0; v < nv; ++v) {
    net.add_arc(v_node(v), t, demand[v], EdgeCostCurve::linear(-prices[v]));
  }
  const double supply =
      static_cast<double>(grid_units(std::min(total_cap, total_demand), delta)) * delta;
  net.add_arc(s, t, supply);
  net.set_balance(s, supply);
  net.set_balance(t, -supply);

  const FlowSolution sol = solve_convex_mcf(net, delta);

  // Dual bound: each node's capacity loses < delta to the grid, and one
  // unit of capacity there is worth at most its best incident margin.
  std::vector<double> best_u(nu, 0.0), best_v(nv, 0.0);
  for (const auto& e : inst.edges()) {
    const double margin = std::max(0.0, e.w + prices[e.v]);
    best_u[e.u] = std::max(best_u[e.u], margin);
    best_v[e.v] = std::max(best_v[e.v], margin);
  }
  double per_unit = 0.0;
  for (double b : best_u) per_unit += b;
  for (double b : best_v) per_unit += b;

  SurrogateValue out;
  out.value = sol.objective == 0.0 ? 0.0 : -sol.objective;
  out.tolerance = delta * per_unit;
  out.delta = delta;
  for (int a : edge_arc) out.edge_flow.push_back(sol.flow[a]);
  return out;
}

}  // namespace priceflow
