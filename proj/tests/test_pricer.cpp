#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "priceflow/eval/surrogate.hpp"
#include "priceflow/flow/verify.hpp"
#include "priceflow/instance/generators.hpp"
#include "priceflow/pricer/pricer.hpp"
#include "priceflow/util/error.hpp"
#include "priceflow/util/rng.hpp"

namespace priceflow {
namespace {

MarketInstance one_by_one(double q, double w, int capacity = 1, int n = 1,
                          InstanceOptions options = {}) {
  MarketData d;
  d.resources = {{"u", capacity}};
  d.groups = {{"v", DemandModel{Family::kBinomial, n, PriceResponse::linear(q)}}};
  d.edges = {{"u", "v", w}};
  return MarketInstance::create(d, options);
}

MarketInstance small_market(std::uint64_t seed, int groups) {
  Rng rng(seed);
  MarketData d;
  const int resources = 1 + static_cast<int>(rng.uniform_int(0, 2));
  for (int u = 0; u < resources; ++u) {
    const int cap = 1 + static_cast<int>(rng.uniform_int(0, 2));
    d.resources.push_back({"u" + std::to_string(u), cap});
  }
  for (int v = 0; v < groups; ++v) {
    const double q = rng.uniform(2.0, 10.0);
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const PriceResponse r = v % 2 ? PriceResponse::logistic(q, kRidehailBeta, kRidehailGamma)
                                  : PriceResponse::linear(q);
    d.groups.push_back({"v" + std::to_string(v), DemandModel{Family::kBinomial, n, r}});
    for (int u = 0; u < resources; ++u) {
      if (u == v % resources || rng.bernoulli(0.5)) {
        const double w = -rng.uniform(0.0, q);
        d.edges.push_back({"u" + std::to_string(u), "v" + std::to_string(v), w});
      }
    }
  }
  return MarketInstance::create(d);
}

TEST(FpNetwork, Structure) {
  const MarketInstance inst = generate_crowdsourcing(3);
  const double delta = default_delta(inst);
  const FpNetwork fp = build_fp_network(inst, delta);
  const std::size_t nu = inst.num_resources(), nv = inst.num_groups();
  EXPECT_EQ(fp.net.num_nodes(), static_cast<int>(2 + nu + nv));
  EXPECT_EQ(fp.net.num_arcs(), static_cast<int>(nu + inst.edges().size() + nv + 1));

  double cap = 0.0, demand = 0.0;
  for (const auto& r : inst.resources()) cap += r.capacity;
  for (const auto& m : fp.maps) demand += m.z_ceiling();
  const double c = std::min(cap, demand);
  EXPECT_LE(fp.supply, c);
  EXPECT_GT(fp.supply, c - delta);
  EXPECT_DOUBLE_EQ(fp.net.arc(fp.bypass_arc).capacity, fp.supply);
  EXPECT_EQ(fp.net.arc(fp.bypass_arc).cost.kind(), EdgeCostCurve::Kind::kZero);
  for (std::size_t e = 0; e < inst.edges().size(); ++e) {
    EXPECT_DOUBLE_EQ(fp.net.arc(fp.edge_arc[e]).cost(1.0), -inst.edges()[e].w);
  }
  for (std::size_t v = 0; v < nv; ++v) {
    EXPECT_EQ(fp.net.arc(fp.sink_arc[v]).cost.kind(), EdgeCostCurve::Kind::kRevenue);
  }
}

TEST(SolvePrices, InteriorStationaryPoint) {
  // fhat(x) = (x + w) p(x) with p = 3 - x/2; stationary at (3q - 2w)/4.
  const MarketInstance inst = one_by_one(4.0, -5.0);
  const double delta = 1e-4;
  const PriceAssignment pa = solve_prices(inst, delta);
  EXPECT_NEAR(pa.prices[0], 5.5, delta * 2.0);
  EXPECT_NEAR(pa.fhat, 0.125, pricing_grid_bound(inst, delta));
  EXPECT_EQ(pa.statuses[0], PriceStatus::kInterior);
}

TEST(SolvePrices, BoundaryOptimum) {
  const MarketInstance inst = one_by_one(10.0, 0.0);
  const double delta = 1e-4;
  const PriceAssignment pa = solve_prices(inst, delta);
  EXPECT_NEAR(pa.prices[0], 10.0, delta * 5.0);
  EXPECT_NEAR(pa.fhat, 10.0, pricing_grid_bound(inst, delta));
}

TEST(SolvePrices, UnprofitableGroupClosesMarket) {
  const MarketInstance inst = one_by_one(4.0, -7.0, 1, 1, {.remove_flagged = false});
  const PriceAssignment pa = solve_prices(inst, 1e-3);
  EXPECT_EQ(pa.statuses[0], PriceStatus::kMarketClosed);
  EXPECT_DOUBLE_EQ(pa.prices[0], 6.0);
  EXPECT_EQ(pa.fhat, 0.0);
}

TEST(SolvePrices, ScarceCapacityRaisesPrices) {
  // With more demand than capacity the cheaper group is priced up.
  const MarketInstance loose = one_by_one(10.0, 0.0, 3, 3);
  const MarketInstance tight = one_by_one(10.0, 0.0, 1, 3);
  const double delta = 1e-3;
  EXPECT_GT(solve_prices(tight, delta).prices[0], solve_prices(loose, delta).prices[0] + 1.0);
}

TEST(SolvePrices, FlowIsOptimalAndConsistent) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MarketInstance inst = generate_crowdsourcing(seed);
    const double delta = default_delta(inst);
    const FpNetwork fp = build_fp_network(inst, delta);
    const PriceAssignment pa = solve_prices(inst, delta);
    ASSERT_TRUE(pa.flow.has_value());
    EXPECT_TRUE(check_conservation(fp.net, *pa.flow));
    const double tol = 1e-9 * cost_scale(fp.net, delta);
    EXPECT_FALSE(find_negative_cycle(fp.net, *pa.flow, tol).has_value());
    // Re-evaluating the surrogate at the returned prices recovers the value.
    const SurrogateValue f = fhat(inst, pa.prices, delta);
    EXPECT_GE(f.value + f.tolerance, pa.fhat - 1e-9) << seed;
    for (std::size_t v = 0; v < inst.num_groups(); ++v) {
      EXPECT_TRUE(inst.groups()[v].demand.domain().in_closure(pa.prices[v]));
    }
  }
}

TEST(SolvePrices, BeatsPriceGridOnSmallMarkets) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const MarketInstance inst = small_market(seed, 2);
    const double delta = 1e-3;
    const PriceAssignment pa = solve_prices(inst, delta);
    const double slack = pricing_grid_bound(inst, delta) + fhat(inst, pa.prices, delta).tolerance;
    const auto g0 = price_grid(inst.groups()[0].demand.response, 12);
    const auto g1 = price_grid(inst.groups()[1].demand.response, 12);
    for (double a : g0) {
      for (double b : g1) {
        const SurrogateValue f = fhat(inst, {a, b}, delta);
        EXPECT_GE(pa.fhat + slack, f.value) << seed << " at " << a << "," << b;
      }
    }
  }
}

TEST(Mrp, SingleGroupClosedForm) {
  // (x - 12)(3 - x/5) peaks at 13.5 inside [10, 15].
  const MarketInstance inst = one_by_one(10.0, -12.0);
  EXPECT_NEAR(price_mrp(inst).prices[0], 13.5, 1e-5);
  // x (3 - x/5) peaks below the domain, so the lower end wins.
  EXPECT_NEAR(price_mrp(one_by_one(10.0, 0.0)).prices[0], 10.0, 1e-5);
}

TEST(Mrp, OnePriceForAllGroups) {
  const MarketInstance inst = small_market(3, 4);
  const PriceAssignment pa = price_mrp(inst);
  // The shared price, clamped per group: unclamped entries agree.
  std::vector<double> free;
  for (std::size_t v = 0; v < inst.num_groups(); ++v) {
    const Interval d = inst.groups()[v].demand.domain();
    if (pa.prices[v] > d.lo && pa.prices[v] < d.hi) free.push_back(pa.prices[v]);
  }
  for (double x : free) EXPECT_DOUBLE_EQ(x, free.front());
}

TEST(Mrp, InvariantToGroupOrder) {
  const MarketInstance inst = generate_crowdsourcing(12);
  MarketData d = inst.to_data();
  std::reverse(d.groups.begin(), d.groups.end());
  std::reverse(d.edges.begin(), d.edges.end());
  const MarketInstance flipped = MarketInstance::create(d);
  const PriceAssignment a = price_mrp(inst), b = price_mrp(flipped);
  for (std::size_t v = 0; v < inst.num_groups(); ++v) {
    const int w = flipped.group_index(inst.groups()[v].id);
    EXPECT_NEAR(a.prices[v], b.prices[w], 1e-9);
  }
}

TEST(Mrp, CappedEqualsPlainWithAmpleResources) {
  MarketData d = small_market(4, 3).to_data();
  for (int u = 0; u < 4; ++u) d.resources.push_back({"extra" + std::to_string(u), 1});
  for (int u = 0; u < 4; ++u) d.edges.push_back({"extra" + std::to_string(u), "v0", -1.0});
  const MarketInstance inst = MarketInstance::create(d);
  ASSERT_GE(inst.num_resources(), inst.num_groups());
  const PriceAssignment a = price_mrp(inst), b = price_capped_mrp(inst);
  for (std::size_t v = 0; v < inst.num_groups(); ++v) EXPECT_DOUBLE_EQ(a.prices[v], b.prices[v]);
}

TEST(Mrp, CappedNeverCheaperWhenScarce) {
  // One resource facing many worker types: capping demand at |U| pushes the
  // wage down (prices are negative), never up.
  CrowdParams p;
  p.num_tasks = 1;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MarketInstance inst = generate_crowdsourcing(seed, p);
    const PriceAssignment a = price_mrp(inst), b = price_capped_mrp(inst);
    for (std::size_t v = 0; v < inst.num_groups(); ++v) EXPECT_GE(b.prices[v], a.prices[v] - 1e-9);
  }
}

TEST(Mrp, EmptyMarketThrows) {
  const MarketInstance empty = MarketInstance::create(MarketData{});
  EXPECT_THROW(price_mrp(empty), EmptyMarket);
  EXPECT_THROW(price_capped_mrp(empty), EmptyMarket);
}

TEST(GridSearch, SinglePointIsMidpoint) {
  const MarketInstance inst = one_by_one(4.0, -5.0);
  GridSearchOptions o;
  o.points_per_node = 1;
  EXPECT_DOUBLE_EQ(price_grid_search(inst, o).prices[0], 5.0);
}

TEST(GridSearch, ExhaustiveFindsGridArgmax) {
  const MarketInstance inst = small_market(8, 2);
  GridSearchOptions o;
  o.points_per_node = 7;
  const PriceAssignment pa = price_grid_search(inst, o);
  const double delta = default_delta(inst);
  const auto g0 = price_grid(inst.groups()[0].demand.response, 7);
  const auto g1 = price_grid(inst.groups()[1].demand.response, 7);
  double best = -INFINITY;
  for (double a : g0) {
    for (double b : g1) best = std::max(best, fhat(inst, {a, b}, delta).value);
  }
  EXPECT_DOUBLE_EQ(pa.fhat, best);
  EXPECT_DOUBLE_EQ(fhat(inst, pa.prices, delta).value, best);
}

TEST(GridSearch, CoordinateAscentAndBudget) {
  const MarketInstance inst = generate_crowdsourcing(2);
  GridSearchOptions o;
  o.points_per_node = 10;
  o.budget = 2000;
  const PriceAssignment pa = price_grid_search(inst, o);
  EXPECT_NE(pa.notes.front().find("coordinate"), std::string::npos);
  EXPECT_GE(pa.fhat, price_grid_search(inst, {.points_per_node = 1}).fhat);

  o.allow_coordinate = false;
  EXPECT_THROW(price_grid_search(inst, o), BudgetExceeded);
}

TEST(PriceFile, RoundTrip) {
  const MarketInstance inst = generate_ridehail(5);
  const PriceAssignment pa = solve_prices(inst, default_delta(inst));
  const auto path = std::filesystem::temp_directory_path() / "priceflow_prices.json";
  write_prices(inst, pa, path);
  const PriceAssignment back = read_prices(inst, path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.prices, pa.prices);
  EXPECT_EQ(back.statuses, pa.statuses);
}

TEST(PriceFile, RejectsMissingOrOutOfDomain) {
  const MarketInstance inst = one_by_one(10.0, 0.0);
  EXPECT_THROW(parse_prices(inst, "{}"), InstanceError);
  EXPECT_THROW(parse_prices(inst, R"({"v": {"price": 16.0, "status": "interior"}})"),
               InstanceError);
  EXPECT_NO_THROW(parse_prices(inst, R"({"v": {"price": 15.0, "status": "market_closed"}})"));
}

}  // namespace
}  // namespace priceflow
