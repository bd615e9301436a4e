#pragma once

#include <map>
#include <string>
#include <vector>

#include "priceflow/instance/demand_model.hpp"

namespace priceflow {

struct ResourceSpec {
  std::string id;
  int capacity = 1;
  bool operator==(const ResourceSpec&) const = default;
};

struct GroupSpec {
  std::string id;
  DemandModel demand;
  bool operator==(const GroupSpec&) const = default;
};

struct EdgeSpec {
  std::string u;
  std::string v;
  double w = 0.0;
  bool operator==(const EdgeSpec&) const = default;
};

/// Raw, unvalidated market description as read from a file or produced by a
/// generator.
struct MarketData {
  std::vector<ResourceSpec> resources;
  std::vector<GroupSpec> groups;
  std::vector<EdgeSpec> edges;
  std::map<std::string, std::string> metadata;
};

/// Assumption checks for one group's price response.
struct GroupVerdict {
  std::string id;
  bool in_range = true;     // p maps the domain into [0,1]
  bool monotone = true;     // p' < 0 on the interior
  bool log_concave = true;  // p'/p non-increasing
  bool boundary = true;     // p vanishes at sup X
  bool profitable = true;   // some x in X beats -max w over incident edges
  std::vector<std::string> issues;

  bool satisfies_assumptions() const { return in_range && monotone && log_concave && boundary; }
};

struct Removal {
  enum class Reason { kIsolated, kUnprofitable, kZeroCount };
  bool is_group = true;
  std::string id;
  Reason reason = Reason::kIsolated;
  std::string detail;
};

struct ValidationReport {
  std::vector<GroupVerdict> groups;
  std::vector<Removal> removals;

  bool all_pass() const;
  const GroupVerdict* find(const std::string& id) const;
};

/// Checks every group's response against the modelling assumptions and flags
/// nodes that can be dropped without changing the problem (isolated nodes,
/// zero-count groups, groups with no profitable price). Pure: never throws
/// for per-node problems, they are reported.
ValidationReport validate_instance(const MarketData& data);

struct InstanceOptions {
  bool remove_flagged = true;
  bool require_assumptions = true;
};

/// Validated, immutable market. Nodes are addressed by dense indices; edges
/// refer to them by index.
class MarketInstance {
 public:
  struct Edge {
    int u = 0;
    int v = 0;
    double w = 0.0;
    bool operator==(const Edge&) const = default;
  };

  /// Throws InstanceError on structural problems (unknown nodes, duplicate
  /// ids, capacity < 1, responses leaving [0,1], and with
  /// require_assumptions any group violating the response assumptions).
  static MarketInstance create(MarketData data, const InstanceOptions& options = {});

  const std::vector<ResourceSpec>& resources() const { return resources_; }
  const std::vector<GroupSpec>& groups() const { return groups_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  const ValidationReport& report() const { return report_; }

  std::size_t num_resources() const { return resources_.size(); }
  std::size_t num_groups() const { return groups_.size(); }
  const std::vector<int>& edges_of_resource(int u) const { return resource_edges_[u]; }
  const std::vector<int>& edges_of_group(int v) const { return group_edges_[v]; }
  int group_index(const std::string& id) const;
  int resource_index(const std::string& id) const;

  MarketData to_data() const;

  // Compares market content; the validation report is not part of identity.
  bool operator==(const MarketInstance& o) const {
    return resources_ == o.resources_ && groups_ == o.groups_ && edges_ == o.edges_ &&
           metadata_ == o.metadata_;
  }

 private:
  MarketInstance() = default;

  std::vector<ResourceSpec> resources_;
  std::vector<GroupSpec> groups_;
  std::vector<Edge> edges_;
  std::map<std::string, std::string> metadata_;
  std::vector<std::vector<int>> resource_edges_;
  std::vector<std::vector<int>> group_edges_;
  ValidationReport report_;
};

ValidationReport validate_instance(const MarketInstance& inst);

}  // namespace priceflow
