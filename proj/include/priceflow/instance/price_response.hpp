#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "priceflow/instance/interval.hpp"

namespace priceflow {

/// Acceptance probability p(x) as a function of the quoted price x.
///
/// Three shapes are supported:
///  - Linear, parameterised by a reference price q != 0. The domain runs
///    between q and 1.5q and p falls linearly from 1 to 0 across it. For
///    q > 0 this is p(x) = 3 - 2x/q on [q, 1.5q]; for q < 0 (wages) it is
///    p(x) = 2x/q - 2 on [1.5q, q].
///  - Logistic, p(x) = 1 - 1/(1 + exp(-(x - beta*q) / (gamma*|q|))) on the
///    whole real line.
///  - Tabulated, monotone cubic (Fritsch-Carlson) interpolation through
///    user supplied (x, p) pairs on [x_0, x_last].
///
/// Values are not validated against [0,1] or monotonicity here; that is the
/// job of validate_instance(), which needs to be able to inspect bad inputs.
class PriceResponse {
 public:
  enum class Kind { kLinear, kLogistic, kTabulated };

  struct Linear {
    double q = 1.0;
    bool operator==(const Linear&) const = default;
  };
  struct Logistic {
    double q = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    bool operator==(const Logistic&) const = default;
  };
  struct Tabulated {
    std::vector<double> x;
    std::vector<double> p;
    std::vector<double> slope;  // Hermite node derivatives, derived from x/p
    bool operator==(const Tabulated& o) const { return x == o.x && p == o.p; }
  };

  static PriceResponse linear(double q);
  static PriceResponse logistic(double q, double beta, double gamma);
  static PriceResponse tabulated(std::vector<double> x, std::vector<double> p);

  Kind kind() const;
  std::string_view kind_name() const;

  const Linear* as_linear() const { return std::get_if<Linear>(&params_); }
  const Logistic* as_logistic() const { return std::get_if<Logistic>(&params_); }
  const Tabulated* as_tabulated() const { return std::get_if<Tabulated>(&params_); }

  /// p(x). Arguments outside the domain are clamped to its closure.
  double value(double x) const;
  double derivative(double x) const;
  /// The unique x with p(x) = level; level must lie in the closure of range().
  double inverse(double level) const;

  Interval domain() const;
  /// Image of the domain, Z = p(X).
  Interval range() const;
  /// Finite box on which the response is numerically non-trivial: the domain
  /// itself when bounded, otherwise the prices where p equals 1 - tail / tail.
  Interval search_interval(double tail = 1e-9) const;
  /// Characteristic price magnitude used for relative tolerances.
  double scale() const;
  /// Upper bound on |p'(x)| over the given box.
  double max_abs_slope(const Interval& box) const;

  bool operator==(const PriceResponse&) const = default;

 private:
  using Params = std::variant<Linear, Logistic, Tabulated>;
  explicit PriceResponse(Params p) : params_(std::move(p)) {}

  Params params_;
};

}  // namespace priceflow
