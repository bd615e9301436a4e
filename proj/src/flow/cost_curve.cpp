#include "priceflow/flow/cost_curve.hpp"

namespace priceflow {

std::string_view EdgeCostCurve::kind_name() const {
  switch (kind_) {
    case Kind::kZero:
      return "zero";
    case Kind::kLinear:
      return "linear";
    case Kind::kRevenue:
      return "revenue";
    case Kind::kCustom:
      return "custom";
  }
  return "";
}

}  // namespace priceflow
