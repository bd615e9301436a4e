#include "priceflow/demand/sampling.hpp"

#include <cmath>

#include <fmt/format.h>

#include "priceflow/demand/mean_demand.hpp"
#include "priceflow/util/error.hpp"

namespace priceflow {

namespace {
constexpr double kPtrsThreshold = 30.0;
}

CapacityDistribution CapacityDistribution::binomial(int n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) {
    throw DomainError(fmt::format("invalid binomial parameters n={}, p={}", n, p));
  }
  return {Family::kBinomial, n, p, 0.0};
}

CapacityDistribution CapacityDistribution::poisson(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError(fmt::format("invalid poisson intensity {}", lambda));
  }
  return {Family::kPoisson, 0, 0.0, lambda};
}

CapacityDistribution CapacityDistribution::of(const DemandModel& model, double x) {
  const double p = model.response.value(x);
  if (model.family == Family::kBinomial) return binomial(model.count, std::clamp(p, 0.0, 1.0));
  return poisson(mean_demand(model, x));
}

double CapacityDistribution::mean() const {
  return family_ == Family::kBinomial ? n_ * p_ : lambda_;
}

double CapacityDistribution::pmf(int k) const {
  if (k < 0) return 0.0;
  if (family_ == Family::kBinomial) {
    if (k > n_) return 0.0;
    if (p_ == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p_ == 1.0) return k == n_ ? 1.0 : 0.0;
    return std::exp(std::lgamma(n_ + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n_ - k + 1.0) +
                    k * std::log(p_) + (n_ - k) * std::log1p(-p_));
  }
  if (lambda_ == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-lambda_ + k * std::log(lambda_) - std::lgamma(k + 1.0));
}

double CapacityDistribution::tail_above(int k) const {
  if (k < 0) return 1.0;
  if (family_ == Family::kBinomial) {
    double s = 0.0;
    for (int j = k + 1; j <= n_; ++j) s += pmf(j);
    return s;
  }
  if (lambda_ == 0.0) return 0.0;
  double s = 0.0;
  for (int j = k + 1;; ++j) {
    const double term = pmf(j);
    s += term;
    if (j > lambda_ && term <= 1e-20 * s) break;
  }
  return s;
}

int CapacityDistribution::truncation_point(double eps) const {
  if (family_ == Family::kBinomial) return p_ == 0.0 ? 0 : n_;
  int k = 0;
  while (tail_above(k) > eps) ++k;
  return k;
}

int CapacityDistribution::sample(Rng& rng) const {
  if (family_ == Family::kPoisson) {
    if (lambda_ == 0.0) return 0;
    return lambda_ < kPtrsThreshold ? sample_poisson_inversion(rng) : sample_poisson_ptrs(rng);
  }
  const double u = rng.uniform();
  double cum = 0.0;
  for (int k = 0; k <= n_; ++k) {
    cum += pmf(k);
    if (u < cum) return k;
  }
  return p_ == 0.0 ? 0 : n_;
}

int CapacityDistribution::sample_poisson_inversion(Rng& rng) const {
  const double u = rng.uniform();
  double prob = std::exp(-lambda_);
  double cum = prob;
  int k = 0;
  while (u >= cum && prob > 0.0) {
    ++k;
    prob *= lambda_ / k;
    cum += prob;
  }
  return k;
}

// Transformed rejection with squeeze (Hormann 1993), as used by numpy.
int CapacityDistribution::sample_poisson_ptrs(Rng& rng) const {
  const double slam = std::sqrt(lambda_);
  const double loglam = std::log(lambda_);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda_ + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<int>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -lambda_ + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<int>(k);
    }
  }
}

int sample_capacity(const DemandModel& model, double x, Rng& rng) {
  return CapacityDistribution::of(model, x).sample(rng);
}

}  // namespace priceflow
