#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <map>

#include "mfnipr/ccg.hpp"
#include "mfnipr/io.hpp"
#include "mfnipr/lemmas.hpp"
#include "mfnipr/netgen.hpp"

namespace py = pybind11;
using namespace mfnipr;

namespace {

Instance instance_from_file_or_text(const std::string& text, bool is_path) {
  return is_path ? load_instance(text) : instance_from_json(text);
}

InterdictionPlan plan_from_ids(const Instance& instance, const std::vector<int>& ids) {
  InterdictionPlan y(instance.net.nodes.size());
  for (int id : ids) {
    if (id < 0 || id >= static_cast<int>(instance.net.nodes.size()))
      throw ValidationError("interdiction id out of range: " + std::to_string(id));
    y.interdicted[id] = 1;
  }
  return y;
}

py::dict result_dict(const Instance& instance, const CcgResult& r) {
  py::dict d;
  d["status"] = std::string(to_string(r.status));
  d["lower"] = r.lower;
  d["upper"] = r.upper;
  d["iterations"] = r.iterations;
  d["plans_visited"] = r.plans_visited;
  d["wall_seconds"] = r.wall_seconds;
  std::vector<int> y;
  for (std::size_t i = 0; i < r.y_star.interdicted.size(); ++i)
    if (r.y_star.interdicted[i]) y.push_back(static_cast<int>(i));
  d["interdict"] = y;
  std::vector<std::tuple<int, int, std::string>> z;
  for (std::size_t e = 0; e < r.z_star.size(); ++e) {
    const auto& arc = instance.net.restructurable_arcs[e];
    if (r.z_star.z_in[e]) z.emplace_back(arc.tail, arc.head, "in");
    if (r.z_star.z_out[e]) z.emplace_back(arc.tail, arc.head, "out");
  }
  std::sort(z.begin(), z.end());
  d["restructure"] = z;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mfnipr, m) {
  m.doc() = "Max flow network interdiction with restructuring: generator, "
            "max-flow/min-cut core, and the column-and-constraint solver.";

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("num_nodes",
                             [](const Instance& i) { return i.net.nodes.size(); })
      .def_property_readonly("num_arcs", [](const Instance& i) { return i.net.arcs.size(); })
      .def_property_readonly("num_restructurable",
                             [](const Instance& i) { return i.net.restructurable_arcs.size(); })
      .def_property_readonly("seed", [](const Instance& i) { return i.seed; })
      .def_property_readonly("variant",
                             [](const Instance& i) { return std::string(to_string(i.variant)); })
      .def("to_json", [](const Instance& i) { return instance_to_json(i); })
      .def("save", [](const Instance& i, const std::string& path) { save_instance(i, path); });

  m.def(
      "generate",
      [](std::uint64_t seed, int users, const std::string& variant, int organizations,
         double density) {
        GenParams params;
        params.seed = seed;
        params.num_users = users;
        params.organizations = organizations;
        params.restruct_density = density;
        params.variant = variant_from_string(variant);
        return generate(params);
      },
      py::arg("seed") = 1, py::arg("users") = 200, py::arg("variant") = "base",
      py::arg("organizations") = 2, py::arg("density") = 1.0,
      "Seeded six-layer instance generator.");

  m.def("load_instance", [](const std::string& path) { return load_instance(path); });
  m.def("instance_from_json",
        [](const std::string& text) { return instance_from_file_or_text(text, false); });

  m.def(
      "max_flow_value",
      [](const Instance& instance, const std::vector<int>& interdict) {
        const SplitNetwork snet = split_nodes(instance.net);
        const InterdictionPlan y = plan_from_ids(instance, interdict);
        return max_flow(snet, y, RestructurePlan(instance.net.restructurable_arcs.size())).value;
      },
      py::arg("instance"), py::arg("interdict") = std::vector<int>{},
      "Exact max flow after zeroing the interdicted nodes.");

  m.def(
      "min_cut_layers",
      [](const Instance& instance, const std::vector<int>& interdict) {
        const SplitNetwork snet = split_nodes(instance.net);
        const InterdictionPlan y = plan_from_ids(instance, interdict);
        const RestructurePlan none(instance.net.restructurable_arcs.size());
        const FlowAssignment flow = max_flow(snet, y, none);
        const CutSolution cut = min_cut(snet, y, none, flow);
        std::map<int, int> layers;
        for (int a : cut.cut_arcs) {
          const SplitArc& arc = snet.arcs[a];
          if (arc.origin == ArcOrigin::NodeSplit)
            layers[instance.net.nodes[arc.origin_index].layer] += 1;
          else
            layers[0] += 1;  // terminal arcs
        }
        return layers;
      },
      py::arg("instance"), py::arg("interdict") = std::vector<int>{},
      "Histogram of min-cut arcs by originating layer (0 = terminal arcs).");

  m.def(
      "classify_restructurable_arcs",
      [](const Instance& instance, const std::vector<int>& interdict) {
        const SplitNetwork snet = split_nodes(instance.net);
        const InterdictionPlan y = plan_from_ids(instance, interdict);
        const RestructurePlan none(instance.net.restructurable_arcs.size());
        const FlowAssignment flow = max_flow(snet, y, none);
        const CutSolution cut = min_cut(snet, y, none, flow);
        const AuxiliaryNetwork aux = auxiliary(snet, y, none, flow);
        std::vector<std::tuple<int, int, std::string>> out;
        for (std::size_t e = 0; e < instance.net.restructurable_arcs.size(); ++e) {
          const auto& arc = instance.net.restructurable_arcs[e];
          out.emplace_back(arc.tail, arc.head,
                           std::string(to_string(classify_arc(snet, aux, cut, e))));
        }
        return out;
      },
      py::arg("instance"), py::arg("interdict") = std::vector<int>{},
      "Lemma classification of every restructurable arc under the plan.");

  m.def(
      "solve",
      [](const Instance& instance, double budget, const std::string& mode, double epsilon,
         double time_limit, bool leadership) {
        CcgConfig config;
        config.epsilon = epsilon;
        config.time_limit = time_limit;
        if (mode == "partial") config.mode = CcgMode::PartialInfo;
        else if (mode == "baseline") config.mode = CcgMode::Baseline;
        else if (mode == "enumerate") config.mode = CcgMode::Enumerate;
        else throw ValidationError("unknown mode: " + mode);
        const CcgResult r =
            solve(instance.net, instance.rules, instance.policy(budget, leadership), config);
        return result_dict(instance, r);
      },
      py::arg("instance"), py::arg("budget"), py::arg("mode") = "partial",
      py::arg("epsilon") = 1e-4, py::arg("time_limit") = 600.0, py::arg("leadership") = false,
      "Solve MFNIP-R at one budget; returns bounds, incumbent plans and the log.");

  m.def(
      "evaluate_after_plan",
      [](const Instance& instance, const std::vector<int>& interdict, double time_limit) {
        CcgConfig config;
        config.time_limit = time_limit;
        return evaluate_after_plan(instance.net, instance.rules,
                                   plan_from_ids(instance, interdict), config);
      },
      py::arg("instance"), py::arg("interdict"), py::arg("time_limit") = 600.0,
      "Optimal restructuring response value to a fixed interdiction plan.");
}
