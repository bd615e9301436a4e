#pragma once

#include <functional>
#include <memory>
#include <string_view>

namespace priceflow {

/// Separable arc cost z -> cost(z) with cost(0) = 0.
///
/// Linear and zero curves are evaluated inline; revenue and custom curves
/// wrap an arbitrary callable which the solver assumes to be convex.
class EdgeCostCurve {
 public:
  enum class Kind { kZero, kLinear, kRevenue, kCustom };

  EdgeCostCurve() = default;

  static EdgeCostCurve zero() { return {}; }
  static EdgeCostCurve linear(double slope) {
    EdgeCostCurve c;
    c.kind_ = Kind::kLinear;
    c.slope_ = slope;
    return c;
  }
  static EdgeCostCurve revenue(std::function<double(double)> f) {
    return from_function(Kind::kRevenue, std::move(f));
  }
  static EdgeCostCurve custom(std::function<double(double)> f) {
    return from_function(Kind::kCustom, std::move(f));
  }

  Kind kind() const { return kind_; }
  std::string_view kind_name() const;
  bool is_linear() const { return kind_ == Kind::kZero || kind_ == Kind::kLinear; }
  double slope() const { return slope_; }

  double operator()(double z) const {
    switch (kind_) {
      case Kind::kZero:
        return 0.0;
      case Kind::kLinear:
        return slope_ * z;
      default:
        return z == 0.0 ? 0.0 : (*fn_)(z);
    }
  }

 private:
  static EdgeCostCurve from_function(Kind k, std::function<double(double)> f) {
    EdgeCostCurve c;
    c.kind_ = k;
    c.fn_ = std::make_shared<const std::function<double(double)>>(std::move(f));
    return c;
  }

  Kind kind_ = Kind::kZero;
  double slope_ = 0.0;
  std::shared_ptr<const std::function<double(double)>> fn_;
};

}  // namespace priceflow
