#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "priceflow/instance/generators.hpp"
#include "priceflow/instance/instance_io.hpp"
#include "priceflow/instance/market.hpp"
#include "priceflow/util/error.hpp"

namespace priceflow {
namespace {

GroupSpec linear_group(std::string id, double q, int n = 1) {
  return {std::move(id), DemandModel{Family::kBinomial, n, PriceResponse::linear(q)}};
}

MarketData two_by_two() {
  MarketData d;
  d.resources = {{"u0", 1}, {"u1", 2}};
  d.groups = {linear_group("v0", 10.0), linear_group("v1", 4.0, 3)};
  d.edges = {{"u0", "v0", -1.0}, {"u1", "v0", -2.5}, {"u1", "v1", 0.5}};
  return d;
}

std::string expect_instance_error(const std::string& text) {
  try {
    parse_market(text, "case");
  } catch (const InstanceError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no error for: " << text;
  return {};
}

TEST(PriceResponse, LinearEndpoints) {
  const auto p = PriceResponse::linear(10.0);
  EXPECT_DOUBLE_EQ(p.value(10.0), 1.0);
  EXPECT_DOUBLE_EQ(p.value(15.0), 0.0);
  EXPECT_DOUBLE_EQ(p.value(12.5), 0.5);
  EXPECT_EQ(p.domain(), Interval::closed(10.0, 15.0));
}

TEST(PriceResponse, NegativeLinearIsWageForm) {
  const auto p = PriceResponse::linear(-0.2);
  EXPECT_NEAR(p.value(-0.2), 0.0, 1e-15);
  EXPECT_NEAR(p.value(-0.3), 1.0, 1e-15);
  for (double x : {-0.29, -0.25, -0.21}) EXPECT_NEAR(p.value(x), 2.0 / -0.2 * x - 2.0, 1e-12);
}

TEST(PriceResponse, LogisticMidpoint) {
  const auto p = PriceResponse::logistic(10.0, kRidehailBeta, kRidehailGamma);
  EXPECT_NEAR(p.value(13.0), 0.5, 1e-15);
  EXPECT_NEAR(p.inverse(0.5), 13.0, 1e-12);
  EXPECT_FALSE(p.domain().bounded_below());
  EXPECT_FALSE(p.range().lo_closed);
  EXPECT_FALSE(p.range().hi_closed);
}

TEST(PriceResponse, CrowdSigmoidMatchesDefinition) {
  const double q = -0.3;
  const auto p = PriceResponse::logistic(q, kCrowdBeta, kCrowdGamma);
  const double pi = std::acos(-1.0);
  for (double x : {-0.6, -0.4, -0.375, -0.3, -0.1}) {
    const double want = 1.0 - 1.0 / (1.0 + std::exp(-(x - 1.25 * q) * pi / (0.25 * std::abs(q))));
    EXPECT_NEAR(p.value(x), want, 1e-12) << x;
  }
}

TEST(PriceResponse, TabulatedInterpolatesAndInverts) {
  const auto p = PriceResponse::tabulated({0.0, 1.0, 2.0, 4.0}, {1.0, 0.7, 0.2, 0.0});
  EXPECT_DOUBLE_EQ(p.value(1.0), 0.7);
  EXPECT_DOUBLE_EQ(p.value(4.0), 0.0);
  for (double z : {0.05, 0.3, 0.5, 0.9}) EXPECT_NEAR(p.value(p.inverse(z)), z, 1e-10);
  for (double x = 0.1; x < 4.0; x += 0.1) EXPECT_LE(p.derivative(x), 0.0) << x;
}

TEST(Validation, BuiltinsPass) {
  MarketData d = two_by_two();
  d.groups.push_back({"v2", DemandModel{Family::kPoisson, 2,
                                        PriceResponse::logistic(10.0, kRidehailBeta,
                                                                kRidehailGamma)}});
  d.edges.push_back({"u0", "v2", -3.0});
  const ValidationReport r = validate_instance(d);
  EXPECT_TRUE(r.all_pass());
  EXPECT_TRUE(r.removals.empty());
}

TEST(Validation, IncreasingResponseFails) {
  std::vector<double> xs, ps;
  for (int k = 0; k <= 20; ++k) {
    xs.push_back(k / 20.0);
    ps.push_back(std::exp(k / 20.0) / std::exp(1.0));
  }
  MarketData d;
  d.resources = {{"u0", 1}};
  d.groups = {{"v0", DemandModel{Family::kBinomial, 1, PriceResponse::tabulated(xs, ps)}}};
  d.edges = {{"u0", "v0", 0.0}};
  const ValidationReport r = validate_instance(d);
  ASSERT_NE(r.find("v0"), nullptr);
  EXPECT_FALSE(r.find("v0")->monotone);
  EXPECT_FALSE(r.all_pass());
  EXPECT_THROW(MarketInstance::create(d), InstanceError);
}

TEST(Validation, ResponseOutsideUnitIntervalRejected) {
  MarketData d;
  d.resources = {{"u0", 1}};
  d.groups = {{"v0", DemandModel{Family::kBinomial, 1,
                                 PriceResponse::tabulated({0.0, 1.0}, {1.5, 0.0})}}};
  d.edges = {{"u0", "v0", 0.0}};
  EXPECT_FALSE(validate_instance(d).find("v0")->in_range);
  EXPECT_THROW(MarketInstance::create(d, {.remove_flagged = true, .require_assumptions = false}),
               InstanceError);
}

TEST(Validation, IsolatedAndZeroCountNodesRemoved) {
  MarketData d = two_by_two();
  d.resources.push_back({"lonely", 3});
  d.groups.push_back(linear_group("nobody", 5.0, 0));
  d.edges.push_back({"u0", "nobody", 1.0});
  const MarketInstance inst = MarketInstance::create(d);
  EXPECT_EQ(inst.num_resources(), 2u);
  EXPECT_EQ(inst.num_groups(), 2u);
  EXPECT_EQ(inst.edges().size(), 3u);
  EXPECT_EQ(inst.group_index("nobody"), -1);
  ASSERT_EQ(inst.report().removals.size(), 2u);
  bool saw_zero = false, saw_isolated = false;
  for (const auto& r : inst.report().removals) {
    saw_zero |= r.id == "nobody" && r.reason == Removal::Reason::kZeroCount;
    saw_isolated |= r.id == "lonely" && r.reason == Removal::Reason::kIsolated;
  }
  EXPECT_TRUE(saw_zero);
  EXPECT_TRUE(saw_isolated);
}

TEST(Validation, UnprofitableGroupRemoved) {
  MarketData d = two_by_two();
  // Prices top out at 15, every edge costs 20.
  d.groups.push_back(linear_group("loss", 10.0));
  d.edges.push_back({"u0", "loss", -20.0});
  const MarketInstance inst = MarketInstance::create(d);
  EXPECT_EQ(inst.group_index("loss"), -1);
  EXPECT_EQ(inst.report().removals.at(0).reason, Removal::Reason::kUnprofitable);

  const MarketInstance kept = MarketInstance::create(d, {.remove_flagged = false});
  EXPECT_NE(kept.group_index("loss"), -1);
}

TEST(Validation, DuplicateIdsAndUnknownNodesRejected) {
  MarketData d = two_by_two();
  d.resources.push_back({"u0", 1});
  EXPECT_THROW(MarketInstance::create(d), InstanceError);

  d = two_by_two();
  d.edges.push_back({"u9", "v0", 1.0});
  try {
    MarketInstance::create(d);
    FAIL();
  } catch (const InstanceError& e) {
    EXPECT_NE(std::string(e.what()).find("u9"), std::string::npos) << e.what();
  }
}

TEST(InstanceIo, RoundTrip) {
  const MarketInstance inst = MarketInstance::create(two_by_two());
  const MarketData back = parse_market(dump_market(inst.to_data()));
  EXPECT_EQ(MarketInstance::create(back), inst);
}

TEST(InstanceIo, RoundTripGeneratedThroughFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "priceflow_test_instance";
  std::filesystem::create_directories(dir);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RidehailParams rp;
    rp.shape = seed % 2 ? ResponseShape::kLinear : ResponseShape::kLogistic;
    CrowdParams cp;
    cp.family = seed % 2 ? Family::kBinomial : Family::kPoisson;
    cp.count = 1 + static_cast<int>(seed % 3);
    for (const MarketInstance& inst : {generate_ridehail(seed, rp), generate_crowdsourcing(seed, cp)}) {
      const auto path = dir / "inst.json";
      write_instance(inst, path);
      EXPECT_EQ(read_instance(path), inst) << seed;
    }
  }
  std::filesystem::remove_all(dir);
}

TEST(InstanceIo, DumpIsStable) {
  const MarketData d = two_by_two();
  const std::string once = dump_market(d);
  EXPECT_EQ(dump_market(parse_market(once)), once);
  EXPECT_EQ(once.back(), '\n');
}

TEST(InstanceIo, ZeroCapacityReported) {
  const std::string msg = expect_instance_error(R"({
    "resources": [{"id": "u0", "capacity": 0}],
    "groups": [], "edges": []})");
  EXPECT_NE(msg.find("capacity must be ≥ 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("resources[0]"), std::string::npos) << msg;
}

TEST(InstanceIo, UnknownKindRejected) {
  const std::string msg = expect_instance_error(R"({
    "resources": [{"id": "u0", "capacity": 1}],
    "groups": [{"id": "v0", "family": "binomial", "n": 1,
                "response": {"kind": "cubic", "params": {"q": 1}}}],
    "edges": []})");
  EXPECT_NE(msg.find("cubic"), std::string::npos) << msg;
}

TEST(InstanceIo, FieldPathInMessage) {
  const std::string msg = expect_instance_error(R"({
    "resources": [{"id": "u0", "capacity": 1}],
    "groups": [{"id": "v0", "family": "binomial", "n": 1,
                "response": {"kind": "linear", "params": {"q": "ten"}}}],
    "edges": []})");
  EXPECT_NE(msg.find("groups[0].response.params.q"), std::string::npos) << msg;
}

TEST(InstanceIo, SyntaxErrorReportsLine) {
  const std::string msg = expect_instance_error("{\n  \"resources\": [\n    {\"id\": \"u0\",,}\n]}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(InstanceIo, DomainMustMatchParams) {
  const std::string msg = expect_instance_error(R"({
    "resources": [{"id": "u0", "capacity": 1}],
    "groups": [{"id": "v0", "family": "binomial", "n": 1,
                "response": {"kind": "linear", "params": {"q": 10},
                             "domain": {"lo": 10, "hi": 20, "lo_closed": true, "hi_closed": true}}}],
    "edges": []})");
  EXPECT_NE(msg.find("domain"), std::string::npos) << msg;
}

TEST(InstanceIo, UnknownEdgeNodeNamed) {
  MarketData d = parse_market(R"({
    "resources": [{"id": "u0", "capacity": 1}],
    "groups": [{"id": "v0", "family": "binomial", "n": 1,
                "response": {"kind": "linear", "params": {"q": 10}}}],
    "edges": [{"u": "u0", "v": "ghost", "w": 1.0}]})");
  try {
    MarketInstance::create(d);
    FAIL();
  } catch (const InstanceError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos) << e.what();
  }
}

TEST(Ridehail, TwoByTwoHasFourCostEdges) {
  RidehailParams p;
  p.num_taxis = 2;
  p.num_groups = 2;
  const MarketInstance inst = generate_ridehail(1, p);
  EXPECT_EQ(inst.edges().size(), 4u);
  for (const auto& e : inst.edges()) EXPECT_LE(e.w, 0.0);
  for (const auto& g : inst.groups()) {
    EXPECT_EQ(g.demand.count, 1);
    EXPECT_EQ(g.demand.family, Family::kBinomial);
  }
}

TEST(Ridehail, Deterministic) {
  EXPECT_EQ(dump_market(generate_ridehail(1).to_data()),
            dump_market(generate_ridehail(1).to_data()));
  EXPECT_NE(dump_market(generate_ridehail(1).to_data()),
            dump_market(generate_ridehail(2).to_data()));
}

TEST(Ridehail, InfiniteSpeedMeansFreeTravel) {
  RidehailParams p;
  p.speed_kmh = std::numeric_limits<double>::infinity();
  const MarketInstance inst = generate_ridehail(3, p);
  for (const auto& e : inst.edges()) EXPECT_EQ(e.w, 0.0);
  EXPECT_FALSE(std::signbit(inst.edges().front().w));
}

TEST(Ridehail, CostIsEighteenPerHour) {
  RidehailParams p;
  p.speed_kmh = 20.0;
  const MarketInstance a = generate_ridehail(4, p);
  p.speed_kmh = 40.0;
  const MarketInstance b = generate_ridehail(4, p);
  ASSERT_EQ(a.edges().size(), b.edges().size());
  for (std::size_t e = 0; e < a.edges().size(); ++e) {
    EXPECT_NEAR(a.edges()[e].w, 2.0 * b.edges()[e].w, 1e-12);
  }
  EXPECT_EQ(a.metadata().at("synthetic"), "true");
}

TEST(Crowd, RecipeRanges) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CrowdParams p;
    p.shape = seed % 2 ? ResponseShape::kLogistic : ResponseShape::kLinear;
    const MarketInstance inst = generate_crowdsourcing(seed, p);
    for (const auto& r : inst.resources()) {
      EXPECT_GE(r.capacity, 1);
      EXPECT_LE(r.capacity, p.max_capacity);
    }
    for (const auto& e : inst.edges()) {
      EXPECT_GE(e.w, 0.0);
      EXPECT_LE(e.w, 1.0);
    }
    for (const auto& g : inst.groups()) {
      const auto& resp = g.demand.response;
      const double q = resp.as_linear() ? resp.as_linear()->q : resp.as_logistic()->q;
      EXPECT_GE(q, -0.4);
      EXPECT_LE(q, -0.1);
    }
    EXPECT_TRUE(inst.report().all_pass());
  }
}

TEST(Crowd, Deterministic) {
  CrowdParams p;
  p.family = Family::kPoisson;
  EXPECT_EQ(generate_crowdsourcing(9, p), generate_crowdsourcing(9, p));
}

TEST(Crowd, GroupsStrictlyDecreasing) {
  const MarketInstance inst = generate_crowdsourcing(5);
  for (const auto& g : inst.groups()) {
    const Interval d = g.demand.response.search_interval();
    double prev = g.demand.response.value(d.lo);
    for (int k = 1; k <= 100; ++k) {
      const double x = d.lo + (d.hi - d.lo) * k / 101.0;
      const double p = g.demand.response.value(x);
      EXPECT_LT(p, prev);
      prev = p;
    }
  }
}

}  // namespace
}  // namespace priceflow
