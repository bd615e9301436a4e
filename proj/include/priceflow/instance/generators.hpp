#pragma once

#include <cstdint>
#include <limits>
#include <numbers>

#include "priceflow/instance/market.hpp"

namespace priceflow {

enum class ResponseShape { kLinear, kLogistic };

/// Synthetic ride-hailing market. Taxis and requester groups are placed on
/// a square region split into `areas_per_side`^2 cells: each point is the
/// centre of a uniformly chosen cell plus isotropic Gaussian noise, clipped
/// to the region. Travel time is Euclidean distance over a constant speed.
struct RidehailParams {
  int num_taxis = 10;
  int num_groups = 10;
  double region_km = 10.0;
  int areas_per_side = 5;
  double centroid_noise_km = 0.5;  // stddev; 0 puts every point at a centre
  double speed_kmh = 20.0;         // +inf gives zero travel time
  double base_fare = 2.5;
  double fare_per_km = 1.5;
  double min_trip_km = 0.5;
  double opportunity_cost = 18.0;  // currency per hour of driving
  ResponseShape shape = ResponseShape::kLinear;
};

/// Synthetic crowdsourcing market: tasks (resources) carry a topic and a
/// capacity; worker types (groups) have a per-topic accuracy which becomes
/// the edge weight. Wages are negative prices.
struct CrowdParams {
  int num_tasks = 8;
  int num_worker_types = 20;
  int max_capacity = 3;
  int num_topics = 4;
  double edge_probability = 0.6;  // every node keeps at least one edge
  double skill_lo = 0.4;
  double skill_hi = 0.95;
  double topic_spread = 0.1;
  double q_lo = -0.4;
  double q_hi = -0.1;
  int count = 1;
  Family family = Family::kBinomial;
  ResponseShape shape = ResponseShape::kLinear;
};

MarketInstance generate_ridehail(std::uint64_t seed, const RidehailParams& params = {});
MarketInstance generate_crowdsourcing(std::uint64_t seed, const CrowdParams& params = {});

// Logistic constants used by the two generators.
inline constexpr double kRidehailBeta = 1.3;
inline constexpr double kRidehailGamma = 0.3 * std::numbers::sqrt3 / std::numbers::pi;
inline constexpr double kCrowdBeta = 1.25;
inline constexpr double kCrowdGamma = 0.25 / std::numbers::pi;

}  // namespace priceflow
