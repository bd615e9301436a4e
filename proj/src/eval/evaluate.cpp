#include "priceflow/eval/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "priceflow/demand/sampling.hpp"
#include "priceflow/eval/surrogate.hpp"
#include "priceflow/flow/solver.hpp"
#include "priceflow/pricer/pricer.hpp"
#include "priceflow/util/error.hpp"

namespace priceflow {

namespace {

constexpr double kLowerRatio = 1.0 - 1.0 / std::numbers::e;

void check_prices(const MarketInstance& inst, const std::vector<double>& prices) {
  if (prices.size() != inst.num_groups()) {
    throw Error(fmt::format("expected {} prices, got {}", inst.num_groups(), prices.size()));
  }
}

double max_margin(const MarketInstance& inst, const std::vector<double>& prices) {
  double best = 0.0;
  for (const auto& e : inst.edges()) best = std::max(best, e.w + prices[e.v]);
  return best;
}

void set_bounds(EvalReport& r, double slack) {
  r.slack = slack;
  r.lower_margin = r.expected_profit + slack - kLowerRatio * r.fhat;
  r.upper_margin = r.fhat + slack - r.expected_profit;
  r.lower_bound_ok = r.lower_margin >= 0.0;
  r.upper_bound_ok = r.upper_margin >= 0.0;
}

}  // namespace

MatchResult match_profit(const MarketInstance& inst, const std::vector<double>& prices,
                         const Realization& realization) {
  check_prices(inst, prices);
  const auto nu = static_cast<int>(inst.num_resources());
  const auto nv = static_cast<int>(inst.num_groups());
  if (realization.xi.size() != inst.num_groups()) {
    throw Error(fmt::format("realization has {} entries for {} groups", realization.xi.size(),
                            inst.num_groups()));
  }
  for (int v = 0; v < nv; ++v) {
    const auto& d = inst.groups()[v].demand;
    const int xi = realization.xi[v];
    if (xi < 0 || (d.family == Family::kBinomial && xi > d.count)) {
      throw Error(fmt::format("realized capacity {} impossible for group '{}'", xi,
                              inst.groups()[v].id));
    }
  }

  FlowNetwork net;
  const int s = net.add_node("s");
  const int t = net.add_node("t");
  for (int u = 0; u < nu; ++u) net.add_node(inst.resources()[u].id);
  for (int v = 0; v < nv; ++v) net.add_node(inst.groups()[v].id);
  std::int64_t total_cap = 0, total_xi = 0;
  for (int u = 0; u < nu; ++u) {
    net.add_arc(s, 2 + u, inst.resources()[u].capacity);
    total_cap += inst.resources()[u].capacity;
  }
  std::vector<int> edge_arc;
  for (const auto& e : inst.edges()) {
    const int cap = std::min(inst.resources()[e.u].capacity, realization.xi[e.v]);
    edge_arc.push_back(
        net.add_arc(2 + e.u, 2 + nu + e.v, cap, EdgeCostCurve::linear(-(e.w + prices[e.v]))));
  }
  for (int v = 0; v < nv; ++v) {
    net.add_arc(2 + nu + v, t, realization.xi[v]);
    total_xi += realization.xi[v];
  }
  const auto supply = static_cast<double>(std::min(total_cap, total_xi));
  net.add_arc(s, t, supply);
  net.set_balance(s, supply);
  net.set_balance(t, -supply);

  const FlowSolution sol = solve_linear_mcf(net);
  MatchResult out;
  for (std::size_t e = 0; e < inst.edges().size(); ++e) {
    const int z = static_cast<int>(sol.units[edge_arc[e]]);
    out.matching.push_back(z);
    out.profit += z * (inst.edges()[e].w + prices[inst.edges()[e].v]);
  }
  return out;
}

EvalReport estimate_expected_profit(const MarketInstance& inst, const std::vector<double>& prices,
                                    std::int64_t num_samples, std::uint64_t seed,
                                    std::optional<double> delta) {
  check_prices(inst, prices);
  if (num_samples < 1) throw Error("need at least one sample");
  std::vector<CapacityDistribution> laws;
  for (std::size_t v = 0; v < inst.num_groups(); ++v) {
    laws.push_back(CapacityDistribution::of(inst.groups()[v].demand, prices[v]));
  }

  EvalReport r;
  r.seed = seed;
  r.num_samples = num_samples;
  const SurrogateValue f = fhat(inst, prices, delta.value_or(default_delta(inst)));
  r.fhat = f.value;
  r.fhat_tolerance = f.tolerance;

  Realization real;
  real.seed = seed;
  real.xi.resize(inst.num_groups());
  double sum = 0.0;
  for (std::int64_t l = 0; l < num_samples; ++l) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(l)));
    for (std::size_t v = 0; v < laws.size(); ++v) real.xi[v] = laws[v].sample(rng);
    real.sample = l;
    const double p = match_profit(inst, prices, real).profit;
    r.sample_profits.push_back(p);
    sum += p;
  }
  r.expected_profit = sum / static_cast<double>(num_samples);
  if (num_samples > 1) {
    double ss = 0.0;
    for (double p : r.sample_profits) ss += (p - r.expected_profit) * (p - r.expected_profit);
    r.std_error = std::sqrt(ss / static_cast<double>(num_samples - 1) /
                            static_cast<double>(num_samples));
  }
  set_bounds(r, r.fhat_tolerance + 3.0 * r.std_error);
  return r;
}

EvalReport exact_expected_profit(const MarketInstance& inst, const std::vector<double>& prices,
                                 const ExactOptions& options) {
  check_prices(inst, prices);
  const std::size_t nv = inst.num_groups();
  std::vector<std::vector<double>> mass(nv);
  double cut_tails = 0.0;
  std::int64_t product = 1;
  for (std::size_t v = 0; v < nv; ++v) {
    const auto law = CapacityDistribution::of(inst.groups()[v].demand, prices[v]);
    const int top = law.truncation_point(options.poisson_eps);
    for (int k = 0; k <= top; ++k) mass[v].push_back(law.pmf(k));
    if (law.family() == Family::kPoisson) cut_tails += law.tail_above(top);
    product *= top + 1;
    if (product > options.budget) {
      throw BudgetExceeded(fmt::format(
          "exact enumeration needs more than {} outcomes (budget {})", product, options.budget));
    }
  }

  EvalReport r;
  r.exact = true;
  const SurrogateValue f = fhat(inst, prices, options.delta.value_or(default_delta(inst)));
  r.fhat = f.value;
  r.fhat_tolerance = f.tolerance;

  Realization real;
  real.xi.assign(nv, 0);
  double total = 0.0;
  for (;;) {
    double p = 1.0;
    for (std::size_t v = 0; v < nv; ++v) p *= mass[v][real.xi[v]];
    if (p > 0.0) {
      total += p * match_profit(inst, prices, real).profit;
      ++r.outcomes;
    }
    std::size_t v = nv;
    while (v > 0 && ++real.xi[v - 1] == static_cast<int>(mass[v - 1].size())) real.xi[--v] = 0;
    if (v == 0) break;
  }
  r.expected_profit = total;

  double cap_total = 0.0;
  for (const auto& res : inst.resources()) cap_total += res.capacity;
  r.truncation_bound = cut_tails * cap_total * max_margin(inst, prices);
  const double roundoff = 1e-12 * std::max(1.0, std::abs(r.fhat));
  set_bounds(r, r.fhat_tolerance + r.truncation_bound + roundoff);
  return r;
}

BoundVerdict check_bounds(const MarketInstance& inst, const std::vector<double>& prices,
                          const ExactOptions& options) {
  const EvalReport r = exact_expected_profit(inst, prices, options);
  BoundVerdict out;
  out.fhat = r.fhat;
  out.expected = r.expected_profit;
  out.slack = r.slack;
  out.lower_margin = r.lower_margin;
  out.upper_margin = r.upper_margin;
  out.lower_ok = r.lower_bound_ok;
  out.upper_ok = r.upper_bound_ok;
  return out;
}

std::string report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["fhat"] = r.fhat;
  j["fhat_tolerance"] = r.fhat_tolerance;
  j["expected_profit"] = r.expected_profit;
  j["stderr"] = r.std_error;
  j["num_samples"] = r.num_samples;
  j["exact"] = r.exact;
  j["outcomes"] = r.outcomes;
  j["truncation_bound"] = r.truncation_bound;
  j["slack"] = r.slack;
  j["lower_bound_ok"] = r.lower_bound_ok;
  j["upper_bound_ok"] = r.upper_bound_ok;
  j["lower_margin"] = r.lower_margin;
  j["upper_margin"] = r.upper_margin;
  j["seed"] = r.seed;
  return j.dump(2) + "\n";
}

std::string samples_csv(const EvalReport& r) {
  std::string out = "sample,profit\n";
  for (std::size_t l = 0; l < r.sample_profits.size(); ++l) {
    out += fmt::format("{},{}\n", l, r.sample_profits[l]);
  }
  return out;
}

}  // namespace priceflow
