#include "priceflow/pricer/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <fmt/format.h>

#include "priceflow/eval/surrogate.hpp"
#include "priceflow/flow/solver.hpp"
#include "priceflow/util/error.hpp"

namespace priceflow {

FpNetwork build_fp_network(const MarketInstance& inst, std::optional<double> delta,
                           DemandLimits limits) {
  FpNetwork fp;
  FlowNetwork& net = fp.net;
  fp.source = net.add_node("s");
  fp.sink = net.add_node("t");
  for (const auto& r : inst.resources()) fp.resource_node.push_back(net.add_node(r.id));
  for (const auto& g : inst.groups()) {
    fp.group_node.push_back(net.add_node(g.id));
    fp.maps.emplace_back(g.demand, limits);
  }

  double total_cap = 0.0, total_demand = 0.0;
  for (std::size_t u = 0; u < inst.num_resources(); ++u) {
    const double c = inst.resources()[u].capacity;
    fp.source_arc.push_back(net.add_arc(fp.source, fp.resource_node[u], c));
    total_cap += c;
  }
  for (const auto& e : inst.edges()) {
    const double cap =
        std::min<double>(inst.resources()[e.u].capacity, fp.maps[e.v].z_ceiling());
    fp.edge_arc.push_back(net.add_arc(fp.resource_node[e.u], fp.group_node[e.v], cap,
                                      EdgeCostCurve::linear(-e.w)));
  }
  for (std::size_t v = 0; v < inst.num_groups(); ++v) {
    const double top = fp.maps[v].z_ceiling();
    total_demand += top;
    fp.sink_arc.push_back(net.add_arc(fp.group_node[v], fp.sink, top, revenue_curve(fp.maps[v])));
  }
  fp.supply = std::min(total_cap, total_demand);
  if (delta) fp.supply = static_cast<double>(grid_units(fp.supply, *delta)) * *delta;
  fp.bypass_arc = net.add_arc(fp.source, fp.sink, fp.supply);
  net.set_balance(fp.source, fp.supply);
  net.set_balance(fp.sink, -fp.supply);
  return fp;
}

double default_delta(const MarketInstance& inst) {
  int n = 0;
  for (const auto& g : inst.groups()) n = std::max(n, g.demand.count);
  return 1e-3 * std::max(n, 1);
}

PriceAssignment solve_prices(const MarketInstance& inst, double delta, DemandLimits limits) {
  const FpNetwork fp = build_fp_network(inst, delta, limits);
  FlowSolution sol = solve_convex_mcf(fp.net, delta);

  PriceAssignment out;
  out.method = "proposed";
  for (std::size_t v = 0; v < inst.num_groups(); ++v) {
    const int arc = fp.sink_arc[v];
    PricedDemand pd = fp.maps[v].inverse(sol.flow[arc]);
    // An unattained top of the range can only be approached; flow sitting on
    // the capped arc's last grid level is reported as clamped.
    const bool open_top = !fp.maps[v].range().hi_closed;
    if (pd.status == PriceStatus::kInterior && open_top && sol.units[arc] > 0 &&
        sol.units[arc] == grid_units(fp.net.arc(arc).capacity, delta)) {
      pd.status = PriceStatus::kClampedCeiling;
    }
    out.prices.push_back(pd.price);
    out.statuses.push_back(pd.status);
  }
  double f = 0.0;
  for (std::size_t e = 0; e < inst.edges().size(); ++e) {
    const auto& edge = inst.edges()[e];
    f += (out.prices[edge.v] + edge.w) * sol.flow[fp.edge_arc[e]];
  }
  out.fhat = f;
  out.flow = std::move(sol);
  return out;
}

double pricing_grid_bound(const MarketInstance& inst, double delta) {
  return discretization_bound(build_fp_network(inst, delta).net, delta);
}

namespace {

constexpr int kScanPoints = 64;
constexpr double kInvPhi = 0.6180339887498949;

// Maximizer of f on [lo, hi]; f may have kinks at the given break points.
double argmax_1d(const std::function<double(double)>& f, double lo, double hi,
                 std::vector<double> breaks, double tol) {
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                              [&](double b) { return b < lo || b > hi; }),
               breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double best_x = lo, best_f = f(lo);
  auto consider = [&](double x) {
    const double fx = f(x);
    if (fx > best_f || (fx == best_f && x < best_x)) {
      best_x = x;
      best_f = fx;
    }
  };
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    std::vector<double> xs(kScanPoints + 1);
    int arg = 0;
    double top = -INFINITY;
    for (int k = 0; k <= kScanPoints; ++k) {
      xs[k] = a + (b - a) * k / kScanPoints;
      const double fx = f(xs[k]);
      if (fx > top) {
        top = fx;
        arg = k;
      }
    }
    consider(a);
    consider(b);
    // Golden-section inside the bracket around the best scan point.
    double l = xs[std::max(arg - 1, 0)], r = xs[std::min(arg + 1, kScanPoints)];
    double c = r - kInvPhi * (r - l), d = l + kInvPhi * (r - l);
    double fc = f(c), fd = f(d);
    while (r - l > tol) {
      if (fc >= fd) {
        r = d;
        d = c;
        fd = fc;
        c = r - kInvPhi * (r - l);
        fc = f(c);
      } else {
        l = c;
        c = d;
        fc = fd;
        d = l + kInvPhi * (r - l);
        fd = f(d);
      }
    }
    consider(xs[arg]);
    consider(0.5 * (l + r));
  }
  return best_x;
}

PriceStatus status_at(const DemandModel& model, double x) {
  const MeanDemandMap map(model);
  return map.forward(x) < map.z_floor() ? PriceStatus::kMarketClosed : PriceStatus::kInterior;
}

PriceAssignment reserve_price(const MarketInstance& inst, bool capped) {
  if (inst.num_groups() == 0 || inst.edges().empty()) {
    throw EmptyMarket("reserve pricing needs at least one group and one edge");
  }
  double w_mean = 0.0;
  for (const auto& e : inst.edges()) w_mean += e.w;
  w_mean /= static_cast<double>(inst.edges().size());

  // One price for every group. Responses saturate outside their domains, so
  // a common x is meaningful even when the domains are disjoint; each group
  // then receives x clamped into its own domain.
  const auto nu = static_cast<double>(inst.num_resources());
  double lo = INFINITY, hi = -INFINITY, scale = 0.0;
  std::vector<double> breaks;
  for (const auto& g : inst.groups()) {
    const Interval box = g.demand.response.search_interval();
    lo = std::min(lo, box.lo);
    hi = std::max(hi, box.hi);
    breaks.push_back(box.lo);
    breaks.push_back(box.hi);
    scale = std::max({scale, g.demand.response.scale(), std::abs(box.lo), std::abs(box.hi)});
  }
  const double tol = 1e-6 * std::max(scale, 1e-12);
  const auto objective = [&](double x) {
    double p = 0.0;
    for (const auto& g : inst.groups()) p += g.demand.response.value(x);
    return (x + w_mean) * (capped ? std::min(nu, p) : p);
  };
  const double x = argmax_1d(objective, lo, hi, breaks, tol);

  PriceAssignment out;
  out.method = capped ? "capped_mrp" : "mrp";
  for (const auto& g : inst.groups()) out.prices.push_back(g.demand.domain().clamp(x));
  for (std::size_t v = 0; v < inst.num_groups(); ++v) {
    out.statuses.push_back(status_at(inst.groups()[v].demand, out.prices[v]));
  }
  out.fhat = fhat(inst, out.prices, default_delta(inst)).value;
  return out;
}

}  // namespace

PriceAssignment price_mrp(const MarketInstance& inst) { return reserve_price(inst, false); }

PriceAssignment price_capped_mrp(const MarketInstance& inst) { return reserve_price(inst, true); }

std::vector<double> price_grid(const PriceResponse& response, int points) {
  if (points < 1) throw Error("price grid needs at least one point");
  const Interval box = response.search_interval();
  if (points == 1) return {0.5 * (box.lo + box.hi)};
  std::vector<double> xs(points);
  for (int k = 0; k < points; ++k) {
    xs[k] = k == points - 1 ? box.hi : box.lo + (box.hi - box.lo) * k / (points - 1);
  }
  return xs;
}

PriceAssignment price_grid_search(const MarketInstance& inst, const GridSearchOptions& options) {
  const auto nv = inst.num_groups();
  const int m = options.points_per_node;
  const double delta = options.delta.value_or(default_delta(inst));
  std::vector<std::vector<double>> grids;
  for (const auto& g : inst.groups()) grids.push_back(price_grid(g.demand.response, m));

  // m^|V| without overflow, saturating just above the budget.
  std::int64_t total = 1;
  for (std::size_t v = 0; v < nv && total <= options.budget; ++v) total *= m;

  PriceAssignment out;
  out.method = "grid";
  std::vector<std::size_t> idx(nv, 0), best_idx;
  double best = -INFINITY;
  std::vector<double> x(nv);
  const auto evaluate = [&](const std::vector<std::size_t>& at) {
    for (std::size_t v = 0; v < nv; ++v) x[v] = grids[v][at[v]];
    return fhat(inst, x, delta).value;
  };

  if (total <= options.budget) {
    out.notes.push_back(fmt::format("exhaustive over {} grid points", total));
    for (;;) {
      const double f = evaluate(idx);
      if (f > best) {
        best = f;
        best_idx = idx;
      }
      std::size_t v = nv;
      while (v > 0 && ++idx[v - 1] == static_cast<std::size_t>(m)) idx[--v] = 0;
      if (v == 0) break;
    }
  } else {
    const std::int64_t evals = static_cast<std::int64_t>(options.max_sweeps) *
                               static_cast<std::int64_t>(nv) * m;
    if (!options.allow_coordinate || evals > options.budget) {
      throw BudgetExceeded(fmt::format(
          "grid search over {} groups with {} points each exceeds the budget of {} evaluations",
          nv, m, options.budget));
    }
    std::fill(idx.begin(), idx.end(), static_cast<std::size_t>(m / 2));
    best = evaluate(idx);
    best_idx = idx;
    int sweeps = 0;
    for (bool improved = true; improved && sweeps < options.max_sweeps; ++sweeps) {
      improved = false;
      for (std::size_t v = 0; v < nv; ++v) {
        idx = best_idx;
        for (std::size_t k = 0; k < static_cast<std::size_t>(m); ++k) {
          if (k == best_idx[v]) continue;
          idx[v] = k;
          const double f = evaluate(idx);
          if (f > best) {
            best = f;
            best_idx = idx;
            improved = true;
          }
        }
      }
    }
    out.notes.push_back(fmt::format("coordinate ascent, {} sweeps", sweeps));
  }

  for (std::size_t v = 0; v < nv; ++v) {
    out.prices.push_back(grids[v][best_idx[v]]);
    out.statuses.push_back(status_at(inst.groups()[v].demand, out.prices.back()));
  }
  out.fhat = nv == 0 ? 0.0 : best;
  return out;
}

}  // namespace priceflow
