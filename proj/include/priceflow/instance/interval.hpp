#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace priceflow {

/// A real interval; an infinite endpoint is always open.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval real_line() { return {}; }

  bool bounded_below() const { return std::isfinite(lo); }
  bool bounded_above() const { return std::isfinite(hi); }
  bool valid() const {
    return lo < hi && !(std::isinf(lo) && lo_closed) && !(std::isinf(hi) && hi_closed) &&
           !std::isnan(lo) && !std::isnan(hi);
  }

  bool contains(double x) const {
    const bool above_lo = lo_closed ? x >= lo : x > lo;
    const bool below_hi = hi_closed ? x <= hi : x < hi;
    return above_lo && below_hi;
  }
  bool in_closure(double x) const { return x >= lo && x <= hi; }
  double clamp(double x) const { return std::clamp(x, lo, hi); }

  bool operator==(const Interval&) const = default;
};

}  // namespace priceflow
