#include "mfnipr/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace mfnipr {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_decimal(double value, int max_frac) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", max_frac, value);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

double parse_decimal(const std::string& text, const std::string& field) {
  if (text.empty()) throw ValidationError("field '" + field + "': empty decimal string");
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("field '" + field + "': not a decimal number: '" + text + "'");
  }
  if (used != text.size())
    throw ValidationError("field '" + field + "': trailing characters in '" + text + "'");
  return v;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return std::string(buf);
}

namespace {

double decimal_field(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  const json& v = obj.at(key);
  if (v.is_string()) return parse_decimal(v.get<std::string>(), key);
  if (v.is_number()) return v.get<double>();
  throw ValidationError(std::string("field '") + key + "': expected decimal string");
}

int int_field(const json& obj, const char* key, bool required = true, int fallback = 0) {
  if (!obj.contains(key)) {
    if (required) throw ValidationError(std::string("missing field '") + key + "'");
    return fallback;
  }
  if (!obj.at(key).is_number_integer())
    throw ValidationError(std::string("field '") + key + "': expected an integer");
  return obj.at(key).get<int>();
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
  ordered_json root;
  root["meta"] = {{"seed", instance.seed},
                  {"variant", to_string(instance.variant)},
                  {"num_layers", instance.net.num_layers},
                  {"users", instance.num_users}};

  ordered_json nodes = ordered_json::array();
  for (const auto& n : instance.net.nodes) {
    ordered_json j;
    j["id"] = n.id;
    j["layer"] = n.layer;
    j["capacity"] = format_decimal(n.capacity);
    j["interdiction_cost"] = format_decimal(n.interdiction_cost);
    j["tau"] = n.tau;
    j["k"] = n.k;
    j["l"] = n.l;
    j["s"] = n.s;
    if (n.organization >= 0) j["organization"] = n.organization;
    if (n.recruitable) j["recruitable"] = true;
    if (n.promotable) j["promotable"] = true;
    if (n.cross_org_recruitable) j["cross_org_recruitable"] = true;
    if (n.supply > 0) j["supply"] = format_decimal(n.supply);
    if (n.demand > 0) j["demand"] = format_decimal(n.demand);
    nodes.push_back(std::move(j));
  }
  root["nodes"] = std::move(nodes);

  ordered_json arcs = ordered_json::array();
  for (const auto& a : instance.net.arcs) arcs.push_back({a.tail, a.head});
  root["arcs"] = std::move(arcs);

  ordered_json rarcs = ordered_json::array();
  for (const auto& a : instance.net.restructurable_arcs) {
    ordered_json j;
    j["tail"] = a.tail;
    j["head"] = a.head;
    j["cost"] = format_decimal(a.cost);
    rarcs.push_back(std::move(j));
  }
  root["restructurable_arcs"] = std::move(rarcs);

  root["rules"] = {{"defender_budget", format_decimal(instance.rules.budget)},
                   {"leadership_min", instance.leadership_min}};
  root["leadership"] = instance.leadership;
  return root.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("instance JSON parse error: ") + e.what());
  }

  Instance instance;
  if (root.contains("meta")) {
    const json& meta = root["meta"];
    instance.seed = meta.value("seed", 0ULL);
    instance.variant = variant_from_string(meta.value("variant", "base"));
    instance.net.num_layers = meta.value("num_layers", 6);
    instance.num_users = meta.value("users", 0);
  } else {
    instance.net.num_layers = 6;
  }

  if (!root.contains("nodes")) throw ValidationError("missing field 'nodes'");
  for (const json& j : root["nodes"]) {
    NodeRecord n;
    n.id = int_field(j, "id");
    n.layer = int_field(j, "layer");
    n.capacity = decimal_field(j, "capacity");
    n.interdiction_cost = decimal_field(j, "interdiction_cost");
    n.tau = int_field(j, "tau", false, 0);
    n.k = int_field(j, "k", false, 1);
    n.l = int_field(j, "l", false, 1);
    n.s = int_field(j, "s", false, 1);
    n.organization = j.contains("organization") && !j["organization"].is_null()
                         ? j["organization"].get<int>()
                         : -1;
    n.recruitable = j.value("recruitable", false);
    n.promotable = j.value("promotable", false);
    n.cross_org_recruitable = j.value("cross_org_recruitable", false);
    if (j.contains("supply")) n.supply = decimal_field(j, "supply");
    if (j.contains("demand")) n.demand = decimal_field(j, "demand");
    instance.net.nodes.push_back(n);
  }
  if (!root.contains("arcs")) throw ValidationError("missing field 'arcs'");
  for (const json& j : root["arcs"]) {
    if (!j.is_array() || j.size() != 2)
      throw ValidationError("field 'arcs': each arc must be [tail, head]");
    instance.net.arcs.push_back({j[0].get<int>(), j[1].get<int>()});
  }
  if (root.contains("restructurable_arcs")) {
    for (const json& j : root["restructurable_arcs"]) {
      RestructurableArc a;
      a.tail = int_field(j, "tail");
      a.head = int_field(j, "head");
      a.cost = j.contains("cost") ? decimal_field(j, "cost") : 1.0;
      instance.net.restructurable_arcs.push_back(a);
    }
  }

  double defender_budget = 6.0;
  if (root.contains("rules")) {
    defender_budget = decimal_field(root["rules"], "defender_budget");
    instance.leadership_min = int_field(root["rules"], "leadership_min", false, 1);
  }
  instance.rules = RestructureRules::from(instance.net, defender_budget);
  if (root.contains("leadership"))
    for (const json& j : root["leadership"]) instance.leadership.push_back(j.get<int>());

  throw_if_invalid(instance.net);
  for (NodeId i : instance.leadership)
    if (i < 0 || i >= static_cast<NodeId>(instance.net.nodes.size()))
      throw ValidationError("field 'leadership': node id out of range");
  return instance;
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  out << instance_to_json(instance);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

InterdictionPlan plan_from_json(const std::string& text, std::size_t num_nodes) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("plan JSON parse error: ") + e.what());
  }
  if (!root.contains("interdict") || !root["interdict"].is_array())
    throw ValidationError("plan file: missing array field 'interdict'");
  InterdictionPlan y(num_nodes);
  for (const json& j : root["interdict"]) {
    if (!j.is_number_integer())
      throw ValidationError("plan file: field 'interdict' must hold integer node ids");
    const int id = j.get<int>();
    if (id < 0 || id >= static_cast<int>(num_nodes))
      throw ValidationError("plan file: field 'interdict' references unknown node " +
                            std::to_string(id));
    y.interdicted[id] = 1;
  }
  return y;
}

InterdictionPlan load_plan(const std::string& path, std::size_t num_nodes) {
  std::ifstream in(path);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return plan_from_json(buf.str(), num_nodes);
}

std::string result_to_json(const Instance& instance, double budget, const CcgConfig& config,
                           const CcgResult& result, bool include_timing) {
  ordered_json root;
  root["schema"] = "mfnipr-result-v1";
  root["variant"] = to_string(instance.variant);
  root["seed"] = instance.seed;
  root["budget"] = format_real(budget);
  root["mode"] = to_string(config.mode);
  root["epsilon"] = format_real(config.epsilon);
  root["status"] = to_string(result.status);
  root["lower"] = format_real(result.lower);
  root["upper"] = format_real(result.upper);
  root["iterations"] = result.iterations;
  root["plans_visited"] = result.plans_visited;
  root["wall_seconds"] = include_timing ? format_real(result.wall_seconds) : "0";

  ordered_json log = ordered_json::array();
  for (const auto& it : result.log) {
    ordered_json j;
    j["iteration"] = it.iteration;
    j["master_objective"] = format_real(it.master_objective);
    if (it.subproblem_objective)
      j["subproblem_objective"] = format_real(*it.subproblem_objective);
    j["pool_size"] = it.pool_size;
    if (include_timing) {
      j["master_seconds"] = format_real(it.master_seconds);
      j["subproblem_seconds"] = format_real(it.subproblem_seconds);
    }
    log.push_back(std::move(j));
  }
  root["iterations_log"] = std::move(log);

  ordered_json y = ordered_json::array();
  for (std::size_t i = 0; i < result.y_star.interdicted.size(); ++i)
    if (result.y_star.interdicted[i]) y.push_back(i);
  root["incumbent"]["interdict"] = std::move(y);

  // Activated arcs as sorted (tail, head, side) triples.
  ordered_json z = ordered_json::array();
  std::vector<std::tuple<int, int, std::string>> triples;
  for (std::size_t e = 0; e < result.z_star.size(); ++e) {
    const auto& arc = instance.net.restructurable_arcs[e];
    if (result.z_star.z_in[e]) triples.emplace_back(arc.tail, arc.head, "in");
    if (result.z_star.z_out[e]) triples.emplace_back(arc.tail, arc.head, "out");
  }
  std::sort(triples.begin(), triples.end());
  for (const auto& [tail, head, side] : triples) z.push_back({tail, head, side});
  root["incumbent"]["restructure"] = std::move(z);
  return root.dump(2) + "\n";
}

}  // namespace mfnipr
