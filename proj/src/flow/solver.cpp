#include "priceflow/flow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include <fmt/format.h>

#include "priceflow/util/error.hpp"

namespace priceflow {

int FlowNetwork::add_node(std::string name) {
  names_.push_back(std::move(name));
  balances_.push_back(0.0);
  return num_nodes() - 1;
}

int FlowNetwork::add_arc(int tail, int head, double capacity, EdgeCostCurve cost) {
  if (tail < 0 || tail >= num_nodes() || head < 0 || head >= num_nodes()) {
    throw FlowError(FlowError::Kind::kInvalidInput,
                    fmt::format("arc ({}, {}) references a missing node", tail, head));
  }
  arcs_.push_back({tail, head, capacity, std::move(cost)});
  return num_arcs() - 1;
}

void FlowNetwork::set_balance(int node, double b) { balances_.at(node) = b; }

std::int64_t grid_units(double capacity, double delta) {
  return static_cast<std::int64_t>(std::floor(capacity / delta + 1e-9));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxUnits = 0x1.0p62;

[[noreturn]] void invalid(std::string msg) {
  throw FlowError(FlowError::Kind::kInvalidInput, std::move(msg));
}

// g_a(y) = cost_a(y * delta); nonlinear arcs are memoised per level.
class GridCosts {
 public:
  GridCosts(const FlowNetwork& net, double delta)
      : net_(net), delta_(delta), memo_(net.num_arcs()) {}

  double operator()(int a, std::int64_t y) const {
    const EdgeCostCurve& c = net_.arc(a).cost;
    if (c.is_linear()) return c(static_cast<double>(y) * delta_);
    auto [it, inserted] = memo_[a].try_emplace(y, 0.0);
    if (inserted) it->second = c(static_cast<double>(y) * delta_);
    return it->second;
  }

 private:
  const FlowNetwork& net_;
  double delta_;
  mutable std::vector<std::unordered_map<std::int64_t, double>> memo_;
};

struct Residual {
  int arc;
  bool forward;
};

class ScalingSolver {
 public:
  ScalingSolver(const FlowNetwork& net, double delta) : net_(net), delta_(delta), g_(net, delta) {
    const int n = net.num_nodes();
    cap_.resize(net.num_arcs());
    for (int a = 0; a < net.num_arcs(); ++a) {
      const FlowArc& arc = net.arc(a);
      if (!(arc.capacity >= 0.0) || !std::isfinite(arc.capacity)) {
        invalid(fmt::format("arc {} has invalid capacity {}", a, arc.capacity));
      }
      if (arc.tail == arc.head) invalid(fmt::format("arc {} is a self-loop", a));
      if (arc.capacity / delta >= kMaxUnits) invalid(fmt::format("arc {} capacity too large", a));
      cap_[a] = grid_units(arc.capacity, delta);
    }
    excess_.assign(n, 0);
    std::int64_t total = 0;
    for (int v = 0; v < n; ++v) {
      const double units = net.balances()[v] / delta;
      const double rounded = std::round(units);
      if (std::abs(units - rounded) > 1e-6 || std::abs(rounded) >= kMaxUnits) {
        invalid(fmt::format("balance {} at node {} is not a multiple of delta {}",
                            net.balances()[v], v, delta));
      }
      excess_[v] = static_cast<std::int64_t>(rounded);
      total += excess_[v];
    }
    if (total != 0) invalid("balances do not sum to zero");

    adj_.resize(n);
    for (int a = 0; a < net.num_arcs(); ++a) {
      adj_[net.arc(a).tail].push_back({a, true});
      adj_[net.arc(a).head].push_back({a, false});
    }
    y_.assign(net.num_arcs(), 0);
    pot_.assign(n, 0.0);

    double scale = 1.0;
    for (int a = 0; a < net.num_arcs(); ++a) {
      if (cap_[a] == 0) continue;
      scale = std::max({scale, std::abs(g_(a, 1)), std::abs(g_(a, cap_[a]))});
    }
    tol_ = 1e-9 * scale;
  }

  FlowSolution run() {
    std::int64_t top = 1;
    for (auto c : cap_) top = std::max(top, c);
    for (auto e : excess_) top = std::max(top, std::abs(e));
    std::int64_t k = 1;
    while (k <= top / 2) k *= 2;

    for (; k >= 1; k /= 2) {
      ++stats_.phases;
      saturate(k);
      while (augment(k)) ++stats_.augmentations;
    }
    for (auto e : excess_) {
      if (e != 0) throw_infeasible();
    }

    FlowSolution sol;
    sol.delta = delta_;
    sol.units = y_;
    sol.flow.resize(y_.size());
    for (std::size_t a = 0; a < y_.size(); ++a) {
      sol.flow[a] = static_cast<double>(y_[a]) * delta_;
      sol.objective += g_(static_cast<int>(a), y_[a]);
    }
    sol.stats = stats_;
    return sol;
  }

 private:
  // Per-unit cost of moving k units through the residual arc; +inf if
  // unavailable. Per-unit (not per-step) so potentials stay meaningful when
  // k halves between phases.
  double step_cost(Residual r, std::int64_t k) const {
    const std::int64_t y = y_[r.arc];
    const auto kd = static_cast<double>(k);
    if (r.forward) return y + k <= cap_[r.arc] ? (g_(r.arc, y + k) - g_(r.arc, y)) / kd : kInf;
    return y >= k ? (g_(r.arc, y - k) - g_(r.arc, y)) / kd : kInf;
  }

  void check_convex(int a, std::int64_t k) const {
    const double fwd = step_cost({a, true}, k);
    const double bwd = step_cost({a, false}, k);
    if (std::isfinite(fwd) && std::isfinite(bwd) && fwd + bwd < -tol_) {
      throw FlowError(FlowError::Kind::kNonConvexDetected,
                      fmt::format("arc {} ({} -> {}): incremental cost decreases at level {} "
                                  "(forward {}, backward {})",
                                  a, net_.arc(a).tail, net_.arc(a).head, y_[a], fwd, -bwd));
    }
  }

  int other_end(Residual r) const { return r.forward ? net_.arc(r.arc).head : net_.arc(r.arc).tail; }
  int this_end(Residual r) const { return r.forward ? net_.arc(r.arc).tail : net_.arc(r.arc).head; }

  double reduced(Residual r, std::int64_t k) const {
    return step_cost(r, k) + pot_[this_end(r)] - pot_[other_end(r)];
  }

  void push(Residual r, std::int64_t k) {
    y_[r.arc] += r.forward ? k : -k;
    excess_[this_end(r)] -= k;
    excess_[other_end(r)] += k;
  }

  // Restores k-optimality: no k-residual arc with negative reduced cost.
  void saturate(std::int64_t k) {
    for (int a = 0; a < net_.num_arcs(); ++a) {
      check_convex(a, k);
      while (reduced({a, true}, k) < 0.0) {
        push({a, true}, k);
        ++stats_.saturations;
        check_convex(a, k);
      }
      while (reduced({a, false}, k) < 0.0) {
        push({a, false}, k);
        ++stats_.saturations;
        check_convex(a, k);
      }
    }
  }

  // One k-augmentation along a shortest path from any node with excess >= k
  // to the nearest node with excess <= -k.
  bool augment(std::int64_t k) {
    const int n = net_.num_nodes();
    bool any_source = false, any_sink = false;
    for (int v = 0; v < n; ++v) {
      any_source = any_source || excess_[v] >= k;
      any_sink = any_sink || excess_[v] <= -k;
    }
    if (!any_source || !any_sink) return false;

    std::vector<double> dist(n, kInf);
    std::vector<Residual> pred(n, {-1, true});
    std::vector<bool> done(n, false);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int v = 0; v < n; ++v) {
      if (excess_[v] >= k) {
        dist[v] = 0.0;
        heap.push({0.0, v});
      }
    }
    int target = -1;
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (done[v]) continue;
      done[v] = true;
      if (excess_[v] <= -k) {
        target = v;
        break;
      }
      for (const Residual r : adj_[v]) {
        const double rc = reduced(r, k);
        if (!std::isfinite(rc)) continue;
        const int w = other_end(r);
        const double nd = d + std::max(rc, 0.0);
        if (nd < dist[w]) {
          dist[w] = nd;
          pred[w] = r;
          heap.push({nd, w});
        }
      }
    }
    if (target < 0) return false;

    const double dt = dist[target];
    for (int v = 0; v < n; ++v) pot_[v] += done[v] ? dist[v] : dt;

    // Sources never receive a predecessor since all path lengths are >= 0.
    int v = target;
    while (pred[v].arc >= 0) {
      const Residual r = pred[v];
      y_[r.arc] += r.forward ? k : -k;
      check_convex(r.arc, k);
      v = this_end(r);
    }
    excess_[v] -= k;
    excess_[target] += k;
    return true;
  }

  [[noreturn]] void throw_infeasible() const {
    const int n = net_.num_nodes();
    std::vector<bool> seen(n, false);
    std::vector<int> stack;
    for (int v = 0; v < n; ++v) {
      if (excess_[v] > 0) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const Residual r : adj_[v]) {
        if (!std::isfinite(step_cost(r, 1))) continue;
        const int w = other_end(r);
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::vector<int> cut;
    std::int64_t unmet = 0;
    for (int v = 0; v < n; ++v) {
      if (seen[v]) {
        cut.push_back(v);
        unmet += excess_[v];
      }
    }
    throw FlowError(FlowError::Kind::kInfeasible,
                    fmt::format("balances cannot be met: {} grid units of supply are cut off "
                                "from demand ({} nodes on the supply side)",
                                unmet, cut.size()),
                    std::move(cut));
  }

  const FlowNetwork& net_;
  double delta_;
  GridCosts g_;
  std::vector<std::int64_t> cap_;
  std::vector<std::int64_t> y_;
  std::vector<std::int64_t> excess_;
  std::vector<double> pot_;
  std::vector<std::vector<Residual>> adj_;
  double tol_ = 1e-9;
  SolverStats stats_;
};

}  // namespace

FlowSolution solve_convex_mcf(const FlowNetwork& net, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) invalid(fmt::format("delta must be positive, got {}", delta));
  return ScalingSolver(net, delta).run();
}

FlowSolution solve_linear_mcf(const FlowNetwork& net) {
  for (int a = 0; a < net.num_arcs(); ++a) {
    const FlowArc& arc = net.arc(a);
    if (!arc.cost.is_linear()) invalid(fmt::format("arc {} has a nonlinear cost", a));
    if (arc.capacity != std::floor(arc.capacity)) {
      invalid(fmt::format("arc {} capacity {} is not integral", a, arc.capacity));
    }
  }
  for (double b : net.balances()) {
    if (b != std::floor(b)) invalid(fmt::format("balance {} is not integral", b));
  }
  return solve_convex_mcf(net, 1.0);
}

double discretization_bound(const FlowNetwork& net, double delta) {
  double total = 0.0;
  for (const FlowArc& arc : net.arcs()) {
    const std::int64_t u = grid_units(arc.capacity, delta);
    if (u == 0) continue;
    const double first = arc.cost(delta) - arc.cost(0.0);
    const double last =
        arc.cost(static_cast<double>(u) * delta) - arc.cost(static_cast<double>(u - 1) * delta);
    total += std::max(std::abs(first), std::abs(last));
  }
  return total;
}

}  // namespace priceflow
