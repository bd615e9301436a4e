#pragma once

#include <vector>

#include "priceflow/instance/demand_model.hpp"
#include "priceflow/util/rng.hpp"

namespace priceflow {

/// Law of one group's realized capacity at a fixed price. Shared by the
/// Monte-Carlo sampler and the exact enumerator.
class CapacityDistribution {
 public:
  static CapacityDistribution binomial(int n, double p);
  static CapacityDistribution poisson(double lambda);
  static CapacityDistribution of(const DemandModel& model, double x);

  Family family() const { return family_; }
  double mean() const;
  double pmf(int k) const;
  /// P(xi > k).
  double tail_above(int k) const;
  /// Smallest K with P(xi > K) <= eps (exactly the top of the support for
  /// the binomial, ignoring eps).
  int truncation_point(double eps) const;

  int sample(Rng& rng) const;

 private:
  CapacityDistribution(Family f, int n, double p, double lambda)
      : family_(f), n_(n), p_(p), lambda_(lambda) {}

  int sample_poisson_inversion(Rng& rng) const;
  int sample_poisson_ptrs(Rng& rng) const;

  Family family_;
  int n_ = 0;
  double p_ = 0.0;
  double lambda_ = 0.0;
};

int sample_capacity(const DemandModel& model, double x, Rng& rng);

}  // namespace priceflow
