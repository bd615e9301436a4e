#include "priceflow/instance/generators.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "priceflow/util/error.hpp"
#include "priceflow/util/rng.hpp"

namespace priceflow {
namespace {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point area_point(Rng& rng, const RidehailParams& p) {
  const double cell = p.region_km / p.areas_per_side;
  const auto cx = rng.uniform_int(0, p.areas_per_side - 1);
  const auto cy = rng.uniform_int(0, p.areas_per_side - 1);
  Point pt{(static_cast<double>(cx) + 0.5) * cell, (static_cast<double>(cy) + 0.5) * cell};
  if (p.centroid_noise_km > 0.0) {
    pt.x = std::clamp(pt.x + rng.normal(0.0, p.centroid_noise_km), 0.0, p.region_km);
    pt.y = std::clamp(pt.y + rng.normal(0.0, p.centroid_noise_km), 0.0, p.region_km);
  }
  return pt;
}

std::string shape_name(ResponseShape s) { return s == ResponseShape::kLinear ? "linear" : "logistic"; }

void require(bool ok, const char* what) {
  if (!ok) throw InstanceError(fmt::format("generator parameter check failed: {}", what));
}

}  // namespace

MarketInstance generate_ridehail(std::uint64_t seed, const RidehailParams& p) {
  require(p.num_taxis > 0 && p.num_groups > 0, "counts must be positive");
  require(p.region_km > 0.0 && p.areas_per_side > 0, "region must be non-empty");
  require(p.centroid_noise_km >= 0.0, "noise must be non-negative");
  require(p.speed_kmh > 0.0, "speed must be positive");
  require(p.base_fare >= 0.0 && p.fare_per_km > 0.0, "fares must be positive");
  require(p.min_trip_km >= 0.0 && p.opportunity_cost >= 0.0, "non-negative trip and cost");
  require(p.base_fare + p.fare_per_km * p.min_trip_km > 0.0, "fare must be positive");

  Rng rng(seed);
  MarketData data;
  std::vector<Point> taxis;
  for (int i = 0; i < p.num_taxis; ++i) {
    taxis.push_back(area_point(rng, p));
    data.resources.push_back({fmt::format("taxi{}", i), 1});
  }
  std::vector<Point> origins;
  std::vector<double> trips;
  for (int j = 0; j < p.num_groups; ++j) {
    const Point o = area_point(rng, p);
    const Point d = area_point(rng, p);
    const double trip = std::max(distance(o, d), p.min_trip_km);
    origins.push_back(o);
    trips.push_back(trip);
    const double q = p.base_fare + p.fare_per_km * trip;
    GroupSpec g;
    g.id = fmt::format("req{}", j);
    g.demand.family = Family::kBinomial;
    g.demand.count = 1;
    g.demand.response = p.shape == ResponseShape::kLinear
                            ? PriceResponse::linear(q)
                            : PriceResponse::logistic(q, kRidehailBeta, kRidehailGamma);
    data.groups.push_back(std::move(g));
  }
  for (int i = 0; i < p.num_taxis; ++i) {
    for (int j = 0; j < p.num_groups; ++j) {
      const double hours = (distance(taxis[i], origins[j]) + trips[j]) / p.speed_kmh;
      const double w = hours == 0.0 ? 0.0 : -p.opportunity_cost * hours;
      data.edges.push_back({data.resources[i].id, data.groups[j].id, w});
    }
  }

  data.metadata = {
      {"generator", "ridehail"},
      {"synthetic", "true"},
      {"seed", std::to_string(seed)},
      {"num_taxis", std::to_string(p.num_taxis)},
      {"num_groups", std::to_string(p.num_groups)},
      {"region_km", fmt::format("{}", p.region_km)},
      {"areas_per_side", std::to_string(p.areas_per_side)},
      {"centroid_noise_km", fmt::format("{}", p.centroid_noise_km)},
      {"speed_kmh", fmt::format("{}", p.speed_kmh)},
      {"base_fare", fmt::format("{}", p.base_fare)},
      {"fare_per_km", fmt::format("{}", p.fare_per_km)},
      {"min_trip_km", fmt::format("{}", p.min_trip_km)},
      {"opportunity_cost", fmt::format("{}", p.opportunity_cost)},
      {"response", shape_name(p.shape)},
  };
  return MarketInstance::create(std::move(data));
}

MarketInstance generate_crowdsourcing(std::uint64_t seed, const CrowdParams& p) {
  require(p.num_tasks > 0 && p.num_worker_types > 0, "counts must be positive");
  require(p.max_capacity >= 1 && p.num_topics >= 1, "capacity and topics must be positive");
  require(p.edge_probability >= 0.0 && p.edge_probability <= 1.0, "edge probability in [0,1]");
  require(p.skill_lo >= 0.0 && p.skill_lo <= p.skill_hi && p.skill_hi <= 1.0, "skills in [0,1]");
  require(p.topic_spread >= 0.0, "spread must be non-negative");
  require(p.q_lo <= p.q_hi && p.q_hi < 0.0, "wage reference must be negative");
  require(p.count >= 0, "count must be non-negative");

  Rng rng(seed);
  MarketData data;
  std::vector<int> topic;
  for (int i = 0; i < p.num_tasks; ++i) {
    topic.push_back(static_cast<int>(rng.uniform_int(0, p.num_topics - 1)));
    data.resources.push_back(
        {fmt::format("task{}", i), static_cast<int>(rng.uniform_int(1, p.max_capacity))});
  }
  std::vector<std::vector<double>> accuracy;
  for (int j = 0; j < p.num_worker_types; ++j) {
    const double skill = rng.uniform(p.skill_lo, p.skill_hi);
    std::vector<double> row;
    for (int s = 0; s < p.num_topics; ++s) {
      row.push_back(std::clamp(skill + rng.uniform(-p.topic_spread, p.topic_spread), 0.0, 1.0));
    }
    accuracy.push_back(std::move(row));
    const double q = rng.uniform(p.q_lo, p.q_hi);
    GroupSpec g;
    g.id = fmt::format("worker{}", j);
    g.demand.family = p.family;
    g.demand.count = p.count;
    g.demand.response = p.shape == ResponseShape::kLinear
                            ? PriceResponse::linear(q)
                            : PriceResponse::logistic(q, kCrowdBeta, kCrowdGamma);
    data.groups.push_back(std::move(g));
  }

  std::vector<std::vector<bool>> adj(p.num_tasks, std::vector<bool>(p.num_worker_types, false));
  for (int i = 0; i < p.num_tasks; ++i) {
    for (int j = 0; j < p.num_worker_types; ++j) adj[i][j] = rng.bernoulli(p.edge_probability);
  }
  for (int i = 0; i < p.num_tasks; ++i) {
    if (std::find(adj[i].begin(), adj[i].end(), true) == adj[i].end()) {
      adj[i][rng.uniform_int(0, p.num_worker_types - 1)] = true;
    }
  }
  for (int j = 0; j < p.num_worker_types; ++j) {
    bool any = false;
    for (int i = 0; i < p.num_tasks; ++i) any = any || adj[i][j];
    if (!any) adj[rng.uniform_int(0, p.num_tasks - 1)][j] = true;
  }
  for (int i = 0; i < p.num_tasks; ++i) {
    for (int j = 0; j < p.num_worker_types; ++j) {
      if (adj[i][j]) {
        data.edges.push_back({data.resources[i].id, data.groups[j].id, accuracy[j][topic[i]]});
      }
    }
  }

  data.metadata = {
      {"generator", "crowdsourcing"},
      {"synthetic", "true"},
      {"seed", std::to_string(seed)},
      {"num_tasks", std::to_string(p.num_tasks)},
      {"num_worker_types", std::to_string(p.num_worker_types)},
      {"max_capacity", std::to_string(p.max_capacity)},
      {"num_topics", std::to_string(p.num_topics)},
      {"edge_probability", fmt::format("{}", p.edge_probability)},
      {"skill_range", fmt::format("{},{}", p.skill_lo, p.skill_hi)},
      {"topic_spread", fmt::format("{}", p.topic_spread)},
      {"q_range", fmt::format("{},{}", p.q_lo, p.q_hi)},
      {"count", std::to_string(p.count)},
      {"family", std::string(family_name(p.family))},
      {"response", shape_name(p.shape)},
  };
  return MarketInstance::create(std::move(data));
}

}  // namespace priceflow
