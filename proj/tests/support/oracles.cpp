#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace priceflow::testing {

std::optional<EnumeratedFlow> enumerate_grid_flows(const FlowNetwork& net, double delta) {
  const int m = net.num_arcs();
  const int n = net.num_nodes();
  std::vector<std::int64_t> cap(m), need(n);
  for (int a = 0; a < m; ++a) {
    cap[a] = static_cast<std::int64_t>(std::floor(net.arc(a).capacity / delta + 1e-9));
  }
  for (int v = 0; v < n; ++v) need[v] = std::llround(net.balances()[v] / delta);

  // A node's balance can be checked once its last incident arc is fixed.
  std::vector<int> last(n, -1);
  for (int a = 0; a < m; ++a) {
    last[net.arc(a).tail] = a;
    last[net.arc(a).head] = a;
  }
  std::vector<std::vector<int>> closes(m + 1);
  for (int v = 0; v < n; ++v) closes[last[v] + 1].push_back(v);
  for (int v : closes[0]) {
    if (need[v] != 0) return std::nullopt;
  }

  std::optional<EnumeratedFlow> best;
  std::vector<std::int64_t> y(m, 0), out(n, 0);
  std::function<void(int)> rec = [&](int a) {
    if (a == m) {
      double obj = 0.0;
      for (int b = 0; b < m; ++b) obj += net.arc(b).cost(static_cast<double>(y[b]) * delta);
      if (!best || obj < best->objective) best = EnumeratedFlow{obj, y};
      return;
    }
    const FlowArc& arc = net.arc(a);
    for (std::int64_t k = 0; k <= cap[a]; ++k) {
      y[a] = k;
      out[arc.tail] += k;
      out[arc.head] -= k;
      bool ok = true;
      for (int v : closes[a + 1]) ok = ok && out[v] == need[v];
      if (ok) rec(a + 1);
      out[arc.tail] -= k;
      out[arc.head] += k;
    }
    y[a] = 0;
  };
  rec(0);
  return best;
}

double enumerate_matchings(const std::vector<int>& edge_u, const std::vector<int>& edge_v,
                           const std::vector<double>& value,
                           const std::vector<int>& cap_u, const std::vector<int>& cap_v) {
  const std::size_t m = edge_u.size();
  std::vector<int> left_u(cap_u.begin(), cap_u.end()), left_v(cap_v.begin(), cap_v.end());
  double best = 0.0;
  std::function<void(std::size_t, double)> rec = [&](std::size_t e, double acc) {
    if (e == m) {
      best = std::max(best, acc);
      return;
    }
    const int u = edge_u[e], v = edge_v[e];
    const int top = std::min(left_u[u], left_v[v]);
    for (int k = 0; k <= top; ++k) {
      left_u[u] -= k;
      left_v[v] -= k;
      rec(e + 1, acc + k * value[e]);
      left_u[u] += k;
      left_v[v] += k;
    }
  };
  rec(0, 0.0);
  return best;
}

EdgeCostCurve piecewise_curve(std::vector<double> increments, double delta) {
  std::vector<double> level(increments.size() + 1, 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i) level[i + 1] = level[i] + increments[i];
  return EdgeCostCurve::custom([level = std::move(level), delta](double z) {
    const auto k = static_cast<std::size_t>(std::llround(z / delta));
    return level.at(std::min(k, level.size() - 1));
  });
}

FlowNetwork random_convex_network(Rng& rng, double delta, int max_nodes, int max_arcs,
                                  int max_levels) {
  FlowNetwork net;
  const int n = static_cast<int>(rng.uniform_int(2, max_nodes));
  for (int v = 0; v < n; ++v) net.add_node();
  const int m = static_cast<int>(rng.uniform_int(1, max_arcs));
  std::vector<std::int64_t> flow(m);
  std::vector<double> balance(n, 0.0);
  for (int a = 0; a < m; ++a) {
    const int t = static_cast<int>(rng.uniform_int(0, n - 1));
    int h = static_cast<int>(rng.uniform_int(0, n - 2));
    if (h >= t) ++h;
    const auto units = rng.uniform_int(0, max_levels - 1);
    std::vector<double> inc(units);
    for (auto& c : inc) c = static_cast<double>(rng.uniform_int(-10, 10));
    std::sort(inc.begin(), inc.end());
    EdgeCostCurve cost;
    switch (rng.uniform_int(0, 3)) {
      case 0:
        cost = EdgeCostCurve::linear(static_cast<double>(rng.uniform_int(-6, 6)));
        break;
      case 1:
        cost = EdgeCostCurve::zero();
        break;
      default:
        cost = piecewise_curve(inc, delta);
    }
    net.add_arc(t, h, static_cast<double>(units) * delta, cost);
    flow[a] = rng.uniform_int(0, units);
    balance[t] += static_cast<double>(flow[a]) * delta;
    balance[h] -= static_cast<double>(flow[a]) * delta;
  }
  for (int v = 0; v < n; ++v) net.set_balance(v, balance[v]);
  return net;
}

}  // namespace priceflow::testing
