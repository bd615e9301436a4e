#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "priceflow/instance/market.hpp"

namespace priceflow {

/// Realized group capacities, indexed like MarketInstance::groups().
struct Realization {
  std::vector<int> xi;
  std::uint64_t seed = 0;
  std::int64_t sample = -1;  // sample index, -1 when not drawn
};

struct MatchResult {
  double profit = 0.0;
  std::vector<int> matching;  // multiplicity per instance edge
};

/// Exact integer b-matching maximizing sum_e (w_e + x_v) z_e under
/// resource capacities and realized group capacities.
MatchResult match_profit(const MarketInstance& inst, const std::vector<double>& prices,
                         const Realization& realization);

struct EvalReport {
  double fhat = 0.0;
  double fhat_tolerance = 0.0;
  double expected_profit = 0.0;
  double std_error = 0.0;  // 0 for exact enumeration
  std::int64_t num_samples = 0;
  bool exact = false;
  std::int64_t outcomes = 0;  // enumerated outcomes with positive mass
  double truncation_bound = 0.0;
  double slack = 0.0;
  double lower_margin = 0.0;  // expected + slack - (1 - 1/e) fhat
  double upper_margin = 0.0;  // fhat + slack - expected
  bool lower_bound_ok = false;
  bool upper_bound_ok = false;
  std::uint64_t seed = 0;
  std::vector<double> sample_profits;
};

/// Mean matching profit over num_samples independent realizations. Sample l
/// draws from its own stream stream_seed(seed, l), so different price
/// vectors evaluated with one seed share their random numbers. The bound
/// flags use slack = fhat tolerance + 3 std_error.
EvalReport estimate_expected_profit(const MarketInstance& inst, const std::vector<double>& prices,
                                    std::int64_t num_samples = 100, std::uint64_t seed = 0,
                                    std::optional<double> delta = {});

struct ExactOptions {
  double poisson_eps = 1e-9;
  std::int64_t budget = 4096;  // outcomes
  std::optional<double> delta;  // grid for fhat; default_delta() if unset
};

/// Probability-weighted matching profit over the product of per-group
/// supports; Poisson supports are cut at the smallest K with tail <= eps.
/// truncation_bound = (sum of cut tails) * sum_u c_u * max_e (w_e + x_v)^+
/// bounds the neglected mass. Throws BudgetExceeded when the product of
/// support sizes exceeds options.budget.
EvalReport exact_expected_profit(const MarketInstance& inst, const std::vector<double>& prices,
                                 const ExactOptions& options = {});

struct BoundVerdict {
  double fhat = 0.0;
  double expected = 0.0;
  double slack = 0.0;
  double lower_margin = 0.0;
  double upper_margin = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
  bool ok() const { return lower_ok && upper_ok; }
};

/// (1 - 1/e) fhat <= E[f] <= fhat by exact enumeration, with
/// slack = fhat tolerance + truncation bound + round-off.
BoundVerdict check_bounds(const MarketInstance& inst, const std::vector<double>& prices,
                          const ExactOptions& options = {});

std::string report_json(const EvalReport& report);
/// "sample,profit" rows.
std::string samples_csv(const EvalReport& report);

}  // namespace priceflow
