#include "priceflow/instance/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "priceflow/util/error.hpp"

namespace priceflow {

std::string_view family_name(Family f) {
  return f == Family::kBinomial ? "binomial" : "poisson";
}

Family parse_family(std::string_view name) {
  if (name == "binomial") return Family::kBinomial;
  if (name == "poisson") return Family::kPoisson;
  throw InstanceError(fmt::format("unknown demand family '{}'", name));
}

namespace {

constexpr int kInteriorPoints = 100;
constexpr double kRangeSlack = 1e-12;
constexpr double kLogConcaveTol = 1e-9;

GroupVerdict check_response(const std::string& id, const PriceResponse& r) {
  GroupVerdict out;
  out.id = id;
  const Interval dom = r.domain();
  const Interval box = r.search_interval();

  auto note = [&](bool& flag, std::string msg) {
    if (flag) out.issues.push_back(std::move(msg));
    flag = false;
  };

  auto check_level = [&](double x) {
    const double p = r.value(x);
    if (!(p >= -kRangeSlack && p <= 1.0 + kRangeSlack)) {
      note(out.in_range, fmt::format("p({}) = {} lies outside [0,1]", x, p));
    }
  };
  if (dom.bounded_below()) check_level(dom.lo);
  if (dom.bounded_above()) check_level(dom.hi);
  if (const auto* t = r.as_tabulated()) {
    for (std::size_t k = 0; k < t->x.size(); ++k) check_level(t->x[k]);
  }

  double prev_ratio = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= kInteriorPoints; ++i) {
    const double x = box.lo + (box.hi - box.lo) * i / (kInteriorPoints + 1);
    check_level(x);
    const double p = r.value(x);
    const double dp = r.derivative(x);
    if (dp > 0.0) {
      note(out.monotone, fmt::format("p is increasing at x = {} (p' = {})", x, dp));
    } else if (!(dp < 0.0)) {
      note(out.monotone, fmt::format("p is flat at x = {}", x));
    }
    if (p > 0.0) {
      const double ratio = dp / p;
      if (ratio > prev_ratio + kLogConcaveTol * std::max(1.0, std::abs(prev_ratio))) {
        note(out.log_concave,
             fmt::format("p'/p increases near x = {} ({} -> {})", x, prev_ratio, ratio));
      }
      prev_ratio = ratio;
    }
  }

  if (dom.bounded_above()) {
    const double p_top = r.value(dom.hi);
    if (std::abs(p_top) > kRangeSlack) {
      note(out.boundary, fmt::format("p(sup X) = {} but must vanish", p_top));
    }
  } else {
    const double probe = box.hi + 1e3 * std::max(r.scale(), box.hi - box.lo);
    const double p_far = r.value(probe);
    if (p_far > 1e-9) {
      note(out.boundary, fmt::format("p does not vanish as x grows (p({}) = {})", probe, p_far));
    }
  }
  return out;
}

// Strict upper end of the domain is enough: there is a price above -max w
// iff sup X exceeds it.
bool has_profitable_price(const Interval& dom, double max_w) { return dom.hi > -max_w; }

}  // namespace

bool ValidationReport::all_pass() const {
  return std::all_of(groups.begin(), groups.end(),
                     [](const GroupVerdict& g) { return g.satisfies_assumptions(); });
}

const GroupVerdict* ValidationReport::find(const std::string& id) const {
  for (const auto& g : groups) {
    if (g.id == id) return &g;
  }
  return nullptr;
}

ValidationReport validate_instance(const MarketData& data) {
  ValidationReport report;
  std::unordered_map<std::string, double> best_w;
  std::set<std::string> touched_resources;
  for (const auto& e : data.edges) {
    auto [it, inserted] = best_w.try_emplace(e.v, e.w);
    if (!inserted) it->second = std::max(it->second, e.w);
    touched_resources.insert(e.u);
  }

  for (const auto& r : data.resources) {
    if (!touched_resources.contains(r.id)) {
      report.removals.push_back({false, r.id, Removal::Reason::kIsolated, "no incident edges"});
    }
  }
  for (const auto& g : data.groups) {
    GroupVerdict verdict = check_response(g.id, g.demand.response);
    auto it = best_w.find(g.id);
    if (it == best_w.end()) {
      report.removals.push_back({true, g.id, Removal::Reason::kIsolated, "no incident edges"});
    } else if (!has_profitable_price(g.demand.domain(), it->second)) {
      verdict.profitable = false;
      verdict.issues.push_back(fmt::format(
          "no admissible price exceeds -max w = {}; every match would be unprofitable",
          -it->second));
      report.removals.push_back({true, g.id, Removal::Reason::kUnprofitable,
                                 fmt::format("sup X = {} <= {}", g.demand.domain().hi,
                                             -it->second)});
    } else if (g.demand.count == 0) {
      report.removals.push_back(
          {true, g.id, Removal::Reason::kZeroCount, "n = 0, no demand possible"});
    }
    report.groups.push_back(std::move(verdict));
  }
  return report;
}

ValidationReport validate_instance(const MarketInstance& inst) { return inst.report(); }

MarketInstance MarketInstance::create(MarketData data, const InstanceOptions& options) {
  std::set<std::string> resource_ids, group_ids;
  for (const auto& r : data.resources) {
    if (r.id.empty()) throw InstanceError("resource with empty id");
    if (!resource_ids.insert(r.id).second) {
      throw InstanceError(fmt::format("duplicate resource id '{}'", r.id));
    }
    if (r.capacity < 1) {
      throw InstanceError(fmt::format("resource '{}': capacity must be ≥ 1", r.id));
    }
  }
  for (const auto& g : data.groups) {
    if (g.id.empty()) throw InstanceError("group with empty id");
    if (!group_ids.insert(g.id).second) {
      throw InstanceError(fmt::format("duplicate group id '{}'", g.id));
    }
    if (g.demand.count < 0) {
      throw InstanceError(fmt::format("group '{}': count must be ≥ 0", g.id));
    }
  }
  for (const auto& e : data.edges) {
    if (!resource_ids.contains(e.u)) {
      throw InstanceError(fmt::format("edge references unknown resource '{}'", e.u));
    }
    if (!group_ids.contains(e.v)) {
      throw InstanceError(fmt::format("edge references unknown group '{}'", e.v));
    }
    if (!std::isfinite(e.w)) {
      throw InstanceError(fmt::format("edge ({}, {}): weight must be finite", e.u, e.v));
    }
  }

  ValidationReport report = validate_instance(data);
  for (const auto& verdict : report.groups) {
    if (!verdict.in_range) {
      throw InstanceError(
          fmt::format("group '{}': {}", verdict.id, verdict.issues.front()));
    }
  }

  std::set<std::string> dropped_resources, dropped_groups;
  if (options.remove_flagged) {
    for (const auto& r : report.removals) {
      (r.is_group ? dropped_groups : dropped_resources).insert(r.id);
    }
    // Dropping a node can isolate its neighbours; iterate to a fixpoint.
    for (bool changed = true; changed;) {
      changed = false;
      std::set<std::string> live_u, live_v;
      for (const auto& e : data.edges) {
        if (dropped_resources.contains(e.u) || dropped_groups.contains(e.v)) continue;
        live_u.insert(e.u);
        live_v.insert(e.v);
      }
      for (const auto& r : data.resources) {
        if (!dropped_resources.contains(r.id) && !live_u.contains(r.id)) {
          dropped_resources.insert(r.id);
          report.removals.push_back({false, r.id, Removal::Reason::kIsolated,
                                     "all neighbours removed"});
          changed = true;
        }
      }
      for (const auto& g : data.groups) {
        if (!dropped_groups.contains(g.id) && !live_v.contains(g.id)) {
          dropped_groups.insert(g.id);
          report.removals.push_back({true, g.id, Removal::Reason::kIsolated,
                                     "all neighbours removed"});
          changed = true;
        }
      }
    }
  }

  if (options.require_assumptions) {
    for (const auto& verdict : report.groups) {
      if (dropped_groups.contains(verdict.id) || verdict.satisfies_assumptions()) continue;
      throw InstanceError(fmt::format("group '{}' violates the response assumptions: {}",
                                      verdict.id, verdict.issues.front()));
    }
  }

  MarketInstance inst;
  inst.metadata_ = std::move(data.metadata);
  std::unordered_map<std::string, int> u_index, v_index;
  for (auto& r : data.resources) {
    if (dropped_resources.contains(r.id)) continue;
    u_index.emplace(r.id, static_cast<int>(inst.resources_.size()));
    inst.resources_.push_back(std::move(r));
  }
  for (auto& g : data.groups) {
    if (dropped_groups.contains(g.id)) continue;
    v_index.emplace(g.id, static_cast<int>(inst.groups_.size()));
    inst.groups_.push_back(std::move(g));
  }
  inst.resource_edges_.resize(inst.resources_.size());
  inst.group_edges_.resize(inst.groups_.size());
  for (const auto& e : data.edges) {
    auto u = u_index.find(e.u);
    auto v = v_index.find(e.v);
    if (u == u_index.end() || v == v_index.end()) continue;
    const int id = static_cast<int>(inst.edges_.size());
    inst.edges_.push_back({u->second, v->second, e.w});
    inst.resource_edges_[u->second].push_back(id);
    inst.group_edges_[v->second].push_back(id);
  }
  inst.report_ = std::move(report);
  return inst;
}

int MarketInstance::group_index(const std::string& id) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int MarketInstance::resource_index(const std::string& id) const {
  for (std::size_t i = 0; i < resources_.size(); ++i) {
    if (resources_[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

MarketData MarketInstance::to_data() const {
  MarketData data;
  data.resources = resources_;
  data.groups = groups_;
  data.metadata = metadata_;
  for (const auto& e : edges_) {
    data.edges.push_back({resources_[e.u].id, groups_[e.v].id, e.w});
  }
  return data;
}

}  // namespace priceflow
