#include "priceflow/instance/price_response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "priceflow/util/error.hpp"

namespace priceflow {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

double sign(double v) { return (v > 0.0) - (v < 0.0); }

// Node derivatives for a shape-preserving piecewise cubic Hermite
// interpolant (Fritsch-Butland weighting, scipy's PCHIP end conditions).
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto edge = [](double h0, double h1, double m0, double m1) {
    double s = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (sign(s) != sign(m0)) {
      s = 0.0;
    } else if (sign(m0) != sign(m1) && std::abs(s) > 3.0 * std::abs(m0)) {
      s = 3.0 * m0;
    }
    return s;
  };
  d[0] = edge(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

std::size_t segment_of(const std::vector<double>& x, double at) {
  auto it = std::upper_bound(x.begin(), x.end(), at);
  std::size_t k = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  return std::min(k, x.size() - 2);
}

double logistic_width(const PriceResponse::Logistic& l) { return l.gamma * std::abs(l.q); }

}  // namespace

PriceResponse PriceResponse::linear(double q) {
  if (!std::isfinite(q) || q == 0.0) {
    throw InstanceError(fmt::format("linear response needs a finite non-zero q, got {}", q));
  }
  return PriceResponse(Linear{q});
}

PriceResponse PriceResponse::logistic(double q, double beta, double gamma) {
  if (!std::isfinite(q) || q == 0.0 || !std::isfinite(beta) || !(gamma > 0.0) ||
      !std::isfinite(gamma)) {
    throw InstanceError(fmt::format(
        "logistic response needs finite q != 0 and gamma > 0 (q={}, beta={}, gamma={})", q, beta,
        gamma));
  }
  return PriceResponse(Logistic{q, beta, gamma});
}

PriceResponse PriceResponse::tabulated(std::vector<double> x, std::vector<double> p) {
  if (x.size() != p.size()) {
    throw InstanceError("tabulated response: x and p have different lengths");
  }
  if (x.size() < 2) {
    throw InstanceError("tabulated response needs at least two points");
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!std::isfinite(x[k]) || !std::isfinite(p[k])) {
      throw InstanceError("tabulated response: non-finite entry");
    }
    if (k > 0 && !(x[k] > x[k - 1])) {
      throw InstanceError("tabulated response: x must be strictly increasing (domain is not an interval)");
    }
  }
  auto slope = pchip_slopes(x, p);
  return PriceResponse(Tabulated{std::move(x), std::move(p), std::move(slope)});
}

PriceResponse::Kind PriceResponse::kind() const {
  return std::visit(Overloaded{[](const Linear&) { return Kind::kLinear; },
                               [](const Logistic&) { return Kind::kLogistic; },
                               [](const Tabulated&) { return Kind::kTabulated; }},
                    params_);
}

std::string_view PriceResponse::kind_name() const {
  switch (kind()) {
    case Kind::kLinear:
      return "linear";
    case Kind::kLogistic:
      return "logistic";
    case Kind::kTabulated:
      return "custom";
  }
  return "";
}

double PriceResponse::value(double x) const {
  return std::visit(
      Overloaded{
          [&](const Linear&) {
            const Interval d = domain();
            return (d.hi - d.clamp(x)) / (d.hi - d.lo);
          },
          [&](const Logistic& l) {
            const double t = (x - l.beta * l.q) / logistic_width(l);
            return 1.0 / (1.0 + std::exp(t));
          },
          [&](const Tabulated& t) {
            const double at = std::clamp(x, t.x.front(), t.x.back());
            const std::size_t k = segment_of(t.x, at);
            const double h = t.x[k + 1] - t.x[k];
            const double s = (at - t.x[k]) / h;
            const double s2 = s * s, s3 = s2 * s;
            return (2 * s3 - 3 * s2 + 1) * t.p[k] + (s3 - 2 * s2 + s) * h * t.slope[k] +
                   (-2 * s3 + 3 * s2) * t.p[k + 1] + (s3 - s2) * h * t.slope[k + 1];
          }},
      params_);
}

double PriceResponse::derivative(double x) const {
  return std::visit(
      Overloaded{
          [&](const Linear&) {
            const Interval d = domain();
            return -1.0 / (d.hi - d.lo);
          },
          [&](const Logistic& l) {
            // p(1-p) = e^{-|t|} / (1 + e^{-|t|})^2, stable for large |t|.
            const double t = (x - l.beta * l.q) / logistic_width(l);
            const double e = std::exp(-std::abs(t));
            return -(e / ((1.0 + e) * (1.0 + e))) / logistic_width(l);
          },
          [&](const Tabulated& t) {
            const double at = std::clamp(x, t.x.front(), t.x.back());
            const std::size_t k = segment_of(t.x, at);
            const double h = t.x[k + 1] - t.x[k];
            const double s = (at - t.x[k]) / h;
            const double s2 = s * s;
            return (6 * s2 - 6 * s) / h * t.p[k] + (3 * s2 - 4 * s + 1) * t.slope[k] +
                   (-6 * s2 + 6 * s) / h * t.p[k + 1] + (3 * s2 - 2 * s) * t.slope[k + 1];
          }},
      params_);
}

double PriceResponse::inverse(double level) const {
  const Interval r = range();
  if (!(level >= r.lo && level <= r.hi)) {
    throw DomainError(fmt::format("acceptance level {} outside response range [{}, {}]", level,
                                  r.lo, r.hi));
  }
  return std::visit(
      Overloaded{
          [&](const Linear&) {
            const Interval d = domain();
            return d.hi - level * (d.hi - d.lo);
          },
          [&](const Logistic& l) {
            if (level <= 0.0) return std::numeric_limits<double>::infinity();
            if (level >= 1.0) return -std::numeric_limits<double>::infinity();
            return l.beta * l.q + logistic_width(l) * (std::log1p(-level) - std::log(level));
          },
          [&](const Tabulated& t) {
            // Bisection; assumes the table is decreasing (validated elsewhere).
            double lo = t.x.front(), hi = t.x.back();
            const double tol = 1e-12 * scale();
            while (hi - lo > tol) {
              const double mid = 0.5 * (lo + hi);
              if (mid <= lo || mid >= hi) break;
              if (value(mid) > level) {
                lo = mid;
              } else {
                hi = mid;
              }
            }
            return 0.5 * (lo + hi);
          }},
      params_);
}

Interval PriceResponse::domain() const {
  return std::visit(Overloaded{[](const Linear& l) {
                                 return Interval::closed(std::min(l.q, 1.5 * l.q),
                                                         std::max(l.q, 1.5 * l.q));
                               },
                               [](const Logistic&) { return Interval::real_line(); },
                               [](const Tabulated& t) {
                                 return Interval::closed(t.x.front(), t.x.back());
                               }},
                    params_);
}

Interval PriceResponse::range() const {
  return std::visit(
      Overloaded{[](const Linear&) { return Interval::closed(0.0, 1.0); },
                 [](const Logistic&) { return Interval{0.0, 1.0, false, false}; },
                 [](const Tabulated& t) {
                   const auto [lo, hi] = std::minmax_element(t.p.begin(), t.p.end());
                   return Interval::closed(*lo, *hi);
                 }},
      params_);
}

Interval PriceResponse::search_interval(double tail) const {
  if (kind() == Kind::kLogistic) {
    return Interval::closed(inverse(1.0 - tail), inverse(tail));
  }
  return domain();
}

double PriceResponse::scale() const {
  return std::visit(Overloaded{[](const Linear& l) { return std::abs(l.q); },
                               [](const Logistic& l) { return std::abs(l.q); },
                               [](const Tabulated& t) {
                                 return std::max({std::abs(t.x.front()), std::abs(t.x.back()),
                                                  t.x.back() - t.x.front()});
                               }},
                    params_);
}

double PriceResponse::max_abs_slope(const Interval& box) const {
  return std::visit(
      Overloaded{[&](const Linear&) { return std::abs(derivative(0.0)); },
                 [&](const Logistic& l) { return 0.25 / logistic_width(l); },
                 [&](const Tabulated& t) {
                   // Dense sampling of the cubic pieces plus the nodes.
                   const double lo = std::max(box.lo, t.x.front());
                   const double hi = std::min(box.hi, t.x.back());
                   double best = 0.0;
                   constexpr int kSamples = 2000;
                   for (int i = 0; i <= kSamples; ++i) {
                     best = std::max(best, std::abs(derivative(lo + (hi - lo) * i / kSamples)));
                   }
                   for (double s : t.slope) best = std::max(best, std::abs(s));
                   return best;
                 }},
      params_);
}

}  // namespace priceflow
