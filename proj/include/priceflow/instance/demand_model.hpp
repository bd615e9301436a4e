#pragma once

#include <string_view>

#include "priceflow/instance/price_response.hpp"

namespace priceflow {

enum class Family { kBinomial, kPoisson };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

/// Demand of one participant group: xi ~ Bin(n, p(x)) or Po(n p(x)).
struct DemandModel {
  Family family = Family::kBinomial;
  int count = 1;
  PriceResponse response = PriceResponse::linear(1.0);

  Interval domain() const { return response.domain(); }

  bool operator==(const DemandModel&) const = default;
};

}  // namespace priceflow
