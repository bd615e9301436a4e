#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "priceflow/flow/network.hpp"

namespace priceflow {

/// True iff every node's net outflow in grid units equals its balance and
/// every arc is within [0, capacity units].
bool check_conservation(const FlowNetwork& net, const FlowSolution& sol);

/// Bellman-Ford over the unit-step residual network of `sol`. Returns the
/// arcs of a cycle whose cost is below -tolerance, if any (as signed arc
/// ids: a for forward, ~a for backward).
std::optional<std::vector<int>> find_negative_cycle(const FlowNetwork& net,
                                                    const FlowSolution& sol, double tolerance);

/// Tolerance scale used by the solver: max(1, |cost| at one unit and at
/// capacity over all arcs).
double cost_scale(const FlowNetwork& net, double delta);

/// Debug dump in a DIMACS-like text format:
///   c <comment>
///   p min <nodes> <arcs>
///   n <node> <balance>
///   a <tail> <head> 0 <capacity> <cost kind> <cost at capacity>
///   f <tail> <head> <flow>            (only when a solution is given)
/// Node numbers are 1-based as in DIMACS.
void write_dimacs(std::ostream& out, const FlowNetwork& net, const FlowSolution* sol = nullptr);

}  // namespace priceflow
