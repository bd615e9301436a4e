#include "priceflow/flow/verify.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "priceflow/flow/solver.hpp"

namespace priceflow {

bool check_conservation(const FlowNetwork& net, const FlowSolution& sol) {
  if (sol.units.size() != static_cast<std::size_t>(net.num_arcs())) return false;
  std::vector<std::int64_t> net_out(net.num_nodes(), 0);
  for (int a = 0; a < net.num_arcs(); ++a) {
    const std::int64_t y = sol.units[a];
    if (y < 0 || y > grid_units(net.arc(a).capacity, sol.delta)) return false;
    net_out[net.arc(a).tail] += y;
    net_out[net.arc(a).head] -= y;
  }
  for (int v = 0; v < net.num_nodes(); ++v) {
    if (net_out[v] != std::llround(net.balances()[v] / sol.delta)) return false;
  }
  return true;
}

std::optional<std::vector<int>> find_negative_cycle(const FlowNetwork& net,
                                                    const FlowSolution& sol, double tolerance) {
  struct Step {
    int from, to, id;
    double cost;
  };
  std::vector<Step> steps;
  const double d = sol.delta;
  for (int a = 0; a < net.num_arcs(); ++a) {
    const FlowArc& arc = net.arc(a);
    const std::int64_t y = sol.units[a];
    const auto at = [&](std::int64_t level) { return arc.cost(static_cast<double>(level) * d); };
    if (y + 1 <= grid_units(arc.capacity, d)) {
      steps.push_back({arc.tail, arc.head, a, at(y + 1) - at(y)});
    }
    if (y >= 1) steps.push_back({arc.head, arc.tail, ~a, at(y - 1) - at(y)});
  }

  // Virtual source: every node starts at distance 0. A cycle of total cost
  // below -tolerance must lower some label on pass n; tiny negative drift
  // from rounding is absorbed by requiring improvement beyond the tolerance
  // spread across the cycle length.
  const int n = net.num_nodes();
  const double eps = tolerance / std::max(1, n);
  std::vector<double> dist(n, 0.0);
  std::vector<int> pred(n, -1);
  int touched = -1;
  for (int pass = 0; pass < n; ++pass) {
    touched = -1;
    for (std::size_t s = 0; s < steps.size(); ++s) {
      const Step& st = steps[s];
      if (dist[st.from] + st.cost < dist[st.to] - eps) {
        dist[st.to] = dist[st.from] + st.cost;
        pred[st.to] = static_cast<int>(s);
        touched = st.to;
      }
    }
    if (touched < 0) return std::nullopt;
  }
  // Walk back n steps to land on the cycle, then collect it.
  int v = touched;
  for (int i = 0; i < n; ++i) v = steps[pred[v]].from;
  std::vector<int> cycle;
  for (int u = v;;) {
    const Step& st = steps[pred[u]];
    cycle.push_back(st.id);
    u = st.from;
    if (u == v) break;
  }
  return cycle;
}

double cost_scale(const FlowNetwork& net, double delta) {
  double scale = 1.0;
  for (const FlowArc& arc : net.arcs()) {
    const std::int64_t u = grid_units(arc.capacity, delta);
    if (u == 0) continue;
    scale = std::max({scale, std::abs(arc.cost(delta)),
                      std::abs(arc.cost(static_cast<double>(u) * delta))});
  }
  return scale;
}

void write_dimacs(std::ostream& out, const FlowNetwork& net, const FlowSolution* sol) {
  fmt::print(out, "c priceflow network dump\n");
  if (sol != nullptr) fmt::print(out, "c delta {} objective {}\n", sol->delta, sol->objective);
  fmt::print(out, "p min {} {}\n", net.num_nodes(), net.num_arcs());
  for (int v = 0; v < net.num_nodes(); ++v) {
    if (!net.node_name(v).empty()) fmt::print(out, "c node {} {}\n", v + 1, net.node_name(v));
    if (net.balances()[v] != 0.0) fmt::print(out, "n {} {}\n", v + 1, net.balances()[v]);
  }
  for (const FlowArc& arc : net.arcs()) {
    fmt::print(out, "a {} {} 0 {} {} {}\n", arc.tail + 1, arc.head + 1, arc.capacity,
               arc.cost.kind_name(), arc.cost(arc.capacity));
  }
  if (sol != nullptr) {
    for (int a = 0; a < net.num_arcs(); ++a) {
      fmt::print(out, "f {} {} {}\n", net.arc(a).tail + 1, net.arc(a).head + 1, sol->flow[a]);
    }
  }
}

}  // namespace priceflow
