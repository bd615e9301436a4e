#pragma once

#include "priceflow/flow/network.hpp"

namespace priceflow {

/// Exact minimum-cost flow over the grid {0, delta, 2 delta, ...} for convex
/// separable costs, by capacity scaling with node potentials.
///
/// Capacities are rounded down to the grid; balances must already be grid
/// multiples (within 1e-6 of a unit) or FlowError::kInvalidInput is thrown.
/// Ties between co-optimal flows are broken by arc order, deterministically.
/// Throws FlowError::kInfeasible with the source side of a saturated cut,
/// or kNonConvexDetected when incremental costs decrease along an arc.
FlowSolution solve_convex_mcf(const FlowNetwork& net, double delta);

/// Integral optimum for linear costs and integer data.
FlowSolution solve_linear_mcf(const FlowNetwork& net);

/// Number of grid units an arc of the given capacity holds.
std::int64_t grid_units(double capacity, double delta);

/// Sum over arcs of L_a * delta, L_a the largest end slope of the arc's
/// discretized cost. Bounds how far the optimum can move between delta and
/// a finer grid.
double discretization_bound(const FlowNetwork& net, double delta);

}  // namespace priceflow
