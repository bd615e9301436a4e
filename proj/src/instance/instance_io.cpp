#include "priceflow/instance/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "priceflow/util/error.hpp"

namespace priceflow {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

class FieldReader {
 public:
  FieldReader(std::string_view origin) : origin_(origin) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw InstanceError(fmt::format("{}: field '{}': {}", origin_, path, msg));
  }

  const json& member(const json& obj, const char* key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(join(path, key), "missing");
    return *it;
  }

  double number(const json& obj, const char* key, const std::string& path) const {
    const json& v = member(obj, key, path);
    if (!v.is_number()) fail(join(path, key), "expected a number");
    return v.get<double>();
  }

  long long integer(const json& obj, const char* key, const std::string& path) const {
    const json& v = member(obj, key, path);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d) return static_cast<long long>(d);
    }
    fail(join(path, key), "expected an integer");
  }

  std::string string(const json& obj, const char* key, const std::string& path) const {
    const json& v = member(obj, key, path);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& obj, const char* key, const std::string& path) const {
    const json& v = member(obj, key, path);
    if (!v.is_array()) fail(join(path, key), "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(fmt::format("{}[{}]", join(path, key), i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  static std::string join(const std::string& path, const char* key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  std::string origin_;
};

double endpoint(const json& v, double if_null, const FieldReader& in, const std::string& path) {
  if (v.is_null()) return if_null;
  if (!v.is_number()) in.fail(path, "expected a number or null");
  return v.get<double>();
}

PriceResponse read_response(const json& j, const FieldReader& in, const std::string& path) {
  const std::string kind = in.string(j, "kind", path);
  const std::string ppath = FieldReader::join(path, "params");
  const json& params = in.member(j, "params", path);
  PriceResponse r = [&] {
    try {
      if (kind == "linear") return PriceResponse::linear(in.number(params, "q", ppath));
      if (kind == "logistic") {
        return PriceResponse::logistic(in.number(params, "q", ppath),
                                       in.number(params, "beta", ppath),
                                       in.number(params, "gamma", ppath));
      }
      if (kind == "custom") {
        return PriceResponse::tabulated(in.numbers(params, "x", ppath),
                                        in.numbers(params, "p", ppath));
      }
    } catch (const InstanceError& e) {
      if (std::string_view(e.what()).find("field '") != std::string_view::npos) throw;
      in.fail(ppath, e.what());
    }
    in.fail(FieldReader::join(path, "kind"), fmt::format("unknown response kind '{}'", kind));
  }();

  if (j.contains("domain")) {
    const std::string dpath = FieldReader::join(path, "domain");
    const json& d = j.at("domain");
    if (!d.is_object()) in.fail(dpath, "expected an object");
    Interval given;
    given.lo = endpoint(in.member(d, "lo", dpath), -INFINITY, in, FieldReader::join(dpath, "lo"));
    given.hi = endpoint(in.member(d, "hi", dpath), INFINITY, in, FieldReader::join(dpath, "hi"));
    given.lo_closed = d.value("lo_closed", std::isfinite(given.lo));
    given.hi_closed = d.value("hi_closed", std::isfinite(given.hi));
    if (!given.valid()) in.fail(dpath, "not an interval");
    if (!(given == r.domain())) {
      in.fail(dpath, fmt::format("inconsistent with the {} response parameters", kind));
    }
  }
  return r;
}

ordered_json write_endpoint(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

ordered_json write_response(const PriceResponse& r) {
  ordered_json out;
  out["kind"] = std::string(r.kind_name());
  ordered_json params = ordered_json::object();
  if (const auto* l = r.as_linear()) {
    params["q"] = l->q;
  } else if (const auto* g = r.as_logistic()) {
    params["q"] = g->q;
    params["beta"] = g->beta;
    params["gamma"] = g->gamma;
  } else if (const auto* t = r.as_tabulated()) {
    params["x"] = t->x;
    params["p"] = t->p;
  }
  out["params"] = std::move(params);
  const Interval d = r.domain();
  out["domain"] = ordered_json{{"lo", write_endpoint(d.lo)},
                               {"hi", write_endpoint(d.hi)},
                               {"lo_closed", d.lo_closed},
                               {"hi_closed", d.hi_closed}};
  return out;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

MarketData parse_market(std::string_view text, std::string_view origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceError(
        fmt::format("{}:{}: malformed JSON: {}", origin, line_of(text, e.byte), e.what()));
  }
  FieldReader in(origin);
  if (!root.is_object()) in.fail("<root>", "expected an object");

  MarketData data;
  if (root.contains("metadata")) {
    const json& meta = root.at("metadata");
    if (!meta.is_object()) in.fail("metadata", "expected an object");
    for (const auto& [k, v] : meta.items()) {
      if (!v.is_string()) in.fail("metadata." + k, "expected a string");
      data.metadata.emplace(k, v.get<std::string>());
    }
  }

  auto array = [&](const char* key) -> const json& {
    const json& a = in.member(root, key, "");
    if (!a.is_array()) in.fail(key, "expected an array");
    return a;
  };

  const json& resources = array("resources");
  for (std::size_t i = 0; i < resources.size(); ++i) {
    const std::string path = fmt::format("resources[{}]", i);
    ResourceSpec r;
    r.id = in.string(resources[i], "id", path);
    const long long cap = in.integer(resources[i], "capacity", path);
    if (cap < 1) in.fail(path + ".capacity", "capacity must be ≥ 1");
    if (cap > std::numeric_limits<int>::max()) in.fail(path + ".capacity", "too large");
    r.capacity = static_cast<int>(cap);
    data.resources.push_back(std::move(r));
  }

  const json& groups = array("groups");
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const std::string path = fmt::format("groups[{}]", i);
    GroupSpec g;
    g.id = in.string(groups[i], "id", path);
    try {
      g.demand.family = parse_family(in.string(groups[i], "family", path));
    } catch (const InstanceError&) {
      in.fail(path + ".family", "expected \"binomial\" or \"poisson\"");
    }
    const long long n = in.integer(groups[i], "n", path);
    if (n < 0 || n > std::numeric_limits<int>::max()) in.fail(path + ".n", "count must be ≥ 0");
    g.demand.count = static_cast<int>(n);
    g.demand.response = read_response(in.member(groups[i], "response", path), in, path + ".response");
    data.groups.push_back(std::move(g));
  }

  const json& edges = array("edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = fmt::format("edges[{}]", i);
    data.edges.push_back({in.string(edges[i], "u", path), in.string(edges[i], "v", path),
                          in.number(edges[i], "w", path)});
  }
  return data;
}

std::string dump_market(const MarketData& data) {
  ordered_json root;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : data.metadata) meta[k] = v;
  root["metadata"] = std::move(meta);

  ordered_json resources = ordered_json::array();
  for (const auto& r : data.resources) {
    resources.push_back(ordered_json{{"id", r.id}, {"capacity", r.capacity}});
  }
  root["resources"] = std::move(resources);

  ordered_json groups = ordered_json::array();
  for (const auto& g : data.groups) {
    groups.push_back(ordered_json{{"id", g.id},
                                  {"family", std::string(family_name(g.demand.family))},
                                  {"n", g.demand.count},
                                  {"response", write_response(g.demand.response)}});
  }
  root["groups"] = std::move(groups);

  ordered_json edges = ordered_json::array();
  for (const auto& e : data.edges) {
    edges.push_back(ordered_json{{"u", e.u}, {"v", e.v}, {"w", e.w}});
  }
  root["edges"] = std::move(edges);
  return root.dump(2) + "\n";
}

MarketInstance read_instance(const std::filesystem::path& path, const InstanceOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError(fmt::format("cannot open instance file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return MarketInstance::create(parse_market(buf.str(), path.string()), options);
}

void write_instance(const MarketInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InstanceError(fmt::format("cannot write instance file '{}'", path.string()));
  out << dump_market(inst.to_data());
  if (!out) throw InstanceError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace priceflow
