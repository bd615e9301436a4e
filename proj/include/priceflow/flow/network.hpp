#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "priceflow/flow/cost_curve.hpp"

namespace priceflow {

struct FlowArc {
  int tail = 0;
  int head = 0;
  double capacity = 0.0;
  EdgeCostCurve cost;
};

/// Directed network with per-node balances (positive = supply).
class FlowNetwork {
 public:
  int add_node(std::string name = {});
  int add_arc(int tail, int head, double capacity, EdgeCostCurve cost = {});
  void set_balance(int node, double b);

  int num_nodes() const { return static_cast<int>(names_.size()); }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  const std::vector<FlowArc>& arcs() const { return arcs_; }
  const FlowArc& arc(int a) const { return arcs_[a]; }
  const std::vector<double>& balances() const { return balances_; }
  const std::string& node_name(int v) const { return names_[v]; }

 private:
  std::vector<std::string> names_;
  std::vector<double> balances_;
  std::vector<FlowArc> arcs_;
};

struct SolverStats {
  int phases = 0;
  std::int64_t augmentations = 0;
  std::int64_t saturations = 0;
};

/// Flow on the delta grid. Conservation holds exactly in `units`;
/// flow[a] is units[a] * delta.
struct FlowSolution {
  std::vector<std::int64_t> units;
  std::vector<double> flow;
  double objective = 0.0;
  double delta = 1.0;
  SolverStats stats;
};

}  // namespace priceflow
