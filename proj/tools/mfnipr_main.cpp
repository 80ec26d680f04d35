// Command-line surface: instance generation, single solves, budget sweeps in
// the experiment-table layout, and min-cut/lemma verification reports.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <system_error>

#include "CLI11.hpp"
#include "mfnipr/ccg.hpp"
#include "mfnipr/io.hpp"
#include "mfnipr/lemmas.hpp"
#include "mfnipr/netgen.hpp"

namespace {

using namespace mfnipr;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitInternal = 3;

std::vector<double> parse_budgets(const std::string& spec) {
  // "start:end:step" or a comma list.
  std::vector<double> budgets;
  if (spec.find(':') != std::string::npos) {
    std::istringstream is(spec);
    std::string a, b, c;
    std::getline(is, a, ':');
    std::getline(is, b, ':');
    std::getline(is, c, ':');
    const double start = parse_decimal(a, "budgets");
    const double end = parse_decimal(b, "budgets");
    const double step = c.empty() ? 10.0 : parse_decimal(c, "budgets");
    if (step <= 0) throw ValidationError("budgets: step must be positive");
    for (double v = start; v <= end + 1e-9; v += step) budgets.push_back(v);
    return budgets;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ','))
    if (!tok.empty()) budgets.push_back(parse_decimal(tok, "budgets"));
  return budgets;
}

CcgMode mode_from(const std::string& s) {
  if (s == "partial") return CcgMode::PartialInfo;
  if (s == "baseline") return CcgMode::Baseline;
  if (s == "enumerate") return CcgMode::Enumerate;
  throw ValidationError("unknown mode: " + s + " (expected partial|baseline|enumerate)");
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  out << text;
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path);
}

int cmd_generate(std::uint64_t seed, int users, const std::string& variant, int organizations,
                 double density, const std::string& out_path) {
  GenParams params;
  params.seed = seed;
  params.num_users = users;
  params.organizations = organizations;
  params.restruct_density = density;
  params.variant = variant_from_string(variant);
  const Instance instance = generate(params);
  save_instance(instance, out_path);
  std::cout << "wrote " << out_path << ": " << instance.net.nodes.size() << " nodes, "
            << instance.net.arcs.size() << " arcs, " << instance.net.restructurable_arcs.size()
            << " restructurable\n";
  return kExitOk;
}

int cmd_solve(const std::string& instance_path, double budget, const std::string& mode,
              double epsilon, double time_limit, bool leadership, const std::string& out_path,
              bool timing) {
  const Instance instance = load_instance(instance_path);
  CcgConfig config;
  config.mode = mode_from(mode);
  config.epsilon = epsilon;
  config.time_limit = time_limit;
  const CcgResult result =
      solve(instance.net, instance.rules, instance.policy(budget, leadership), config);
  if (!out_path.empty())
    write_text(out_path, result_to_json(instance, budget, config, result, timing));
  std::cout << "budget " << format_real(budget) << " mode " << to_string(config.mode)
            << " status " << to_string(result.status) << " bounds ["
            << format_real(result.lower) << ", " << format_real(result.upper) << "] iterations "
            << result.iterations << " plans " << result.plans_visited << "\n";
  return kExitOk;
}

struct ExperimentRow {
  std::string dataset;
  std::string variant;
  std::string mode;
  double budget;
  double mfnip_flow;
  double mfnip_after;
  double lower, upper;
  int iterations, plans;
  double wall;
  SolveStatus status;
};

std::string csv_header() {
  return "dataset,variant,mode,budget,mfnip_flow,mfnip_after_restructure,mfnipr_lower,"
         "mfnipr_upper,iterations,plans_visited,wall_seconds,status,gap\n";
}

std::string csv_line(const ExperimentRow& r, bool timing) {
  std::ostringstream os;
  const double gap = r.upper > 1e-12 ? (r.upper - r.lower) / r.upper : 0.0;
  os << r.dataset << ',' << r.variant << ',' << r.mode << ',' << format_real(r.budget) << ','
     << format_real(r.mfnip_flow) << ',' << format_real(r.mfnip_after) << ','
     << format_real(r.lower) << ',' << format_real(r.upper) << ',' << r.iterations << ','
     << r.plans << ',' << format_real(timing ? r.wall : 0.0) << ',' << to_string(r.status)
     << ',' << format_real(gap) << '\n';
  return os.str();
}

int cmd_experiment(const std::string& instance_path, const std::string& budgets_spec,
                   const std::string& modes_spec, double epsilon, double time_limit,
                   bool leadership, const std::string& out_path, bool timing) {
  const Instance instance = load_instance(instance_path);
  const std::vector<double> budgets = parse_budgets(budgets_spec);
  std::vector<std::string> modes;
  {
    std::istringstream is(modes_spec);
    std::string tok;
    while (std::getline(is, tok, ','))
      if (!tok.empty()) modes.push_back(tok);
  }

  std::ostringstream csv;
  csv << csv_header();
  // Rows are flushed per budget so a timeout loses nothing.
  std::ofstream out;
  const bool to_file = !out_path.empty() && out_path != "-";
  if (to_file) {
    out.open(out_path);
    if (!out)
      throw std::system_error(errno, std::generic_category(), "cannot open " + out_path);
    out << csv_header() << std::flush;
  }

  const SplitNetwork snet = split_nodes(instance.net);
  const std::string dataset =
      "seed" + std::to_string(instance.seed) + "u" + std::to_string(instance.num_users);

  for (double budget : budgets) {
    const InterdictionPolicy policy = instance.policy(budget, leadership);

    // Traditional MFNIP, then the optimal restructuring response to its plan.
    CcgConfig mfnip_cfg;
    mfnip_cfg.time_limit = time_limit;
    const MasterModel mfnip = build_mfnip(instance.net, snet, policy);
    PlanPool seed_pool =
        PlanPool::seeded(instance.net.restructurable_arcs.size(), instance.net.nodes.size());
    const MipCallbacks mcb = master_callbacks(mfnip, instance.net, snet, policy, seed_pool,
                                              MasterFlavor::PartialInfo);
    SolveLimits limits;
    limits.abs_gap = mfnip_cfg.mip_abs_gap;
    limits.objective_granularity = capacity_granularity(instance.net);
    limits.branch_weight = master_branch_weights(mfnip, instance.net);
    limits.time_limit = time_limit;
    const MipSolution msol = solve_mip(mfnip.mip, limits, mcb);
    const InterdictionPlan y_mfnip =
        extract_interdiction(mfnip.layout, msol, instance.net.nodes.size());
    const double mfnip_flow =
        max_flow(snet, y_mfnip, RestructurePlan(instance.net.restructurable_arcs.size())).value;

    CcgConfig after_cfg;
    after_cfg.time_limit = time_limit;
    const double mfnip_after =
        evaluate_after_plan(instance.net, instance.rules, y_mfnip, after_cfg);

    for (const std::string& mode : modes) {
      CcgConfig config;
      config.mode = mode_from(mode);
      config.epsilon = epsilon;
      config.time_limit = time_limit;
      const CcgResult r = solve(instance.net, instance.rules, policy, config);

      ExperimentRow row;
      row.dataset = dataset;
      row.variant = to_string(instance.variant);
      row.mode = mode;
      row.budget = budget;
      row.mfnip_flow = mfnip_flow;
      row.mfnip_after = mfnip_after;
      row.lower = r.lower;
      row.upper = r.upper;
      row.iterations = r.iterations;
      row.plans = r.plans_visited;
      row.wall = r.wall_seconds;
      row.status = msol.status == SolveStatus::Optimal ? r.status : SolveStatus::LimitReached;
      const std::string line = csv_line(row, timing);
      csv << line;
      if (to_file) out << line << std::flush;
    }
  }
  if (!to_file) std::cout << csv.str();
  return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& plan_path) {
  const Instance instance = load_instance(instance_path);
  const InterdictionPlan y = load_plan(plan_path, instance.net.nodes.size());
  const auto report = interdiction_feasible(instance.net, instance.policy(kInf, false), y);
  const SplitNetwork snet = split_nodes(instance.net);
  const RestructurePlan none(instance.net.restructurable_arcs.size());

  const FlowAssignment flow = max_flow(snet, y, none);
  const CutSolution cut = min_cut(snet, y, none, flow);
  const AuxiliaryNetwork aux = auxiliary(snet, y, none, flow);

  std::cout << "interdicted flow " << format_real(flow.value) << "\n";
  for (const auto& v : report.violations) std::cout << "note: plan violates " << v << "\n";

  // Min-cut location by layer of the originating node.
  std::map<std::string, int> location;
  for (int a : cut.cut_arcs) {
    const SplitArc& arc = snet.arcs[a];
    std::string where;
    switch (arc.origin) {
      case ArcOrigin::NodeSplit:
        where = "layer " + std::to_string(instance.net.nodes[arc.origin_index].layer) + " nodes";
        break;
      case ArcOrigin::Source: where = "supply arcs"; break;
      case ArcOrigin::Sink: where = "demand arcs"; break;
      default: where = "uncapacitated arcs"; break;
    }
    location[where] += 1;
  }
  std::cout << "min cut (" << cut.cut_arcs.size() << " arcs):";
  for (const auto& [where, count] : location) std::cout << " " << count << " via " << where << ";";
  std::cout << "\n";

  const PermissionIndicators w = permissions(instance.net, y);
  std::vector<std::size_t> permitted;
  for (std::size_t e = 0; e < instance.net.restructurable_arcs.size(); ++e)
    if (w.w_in[e] || w.w_out[e]) permitted.push_back(e);

  std::cout << "permitted restructurable arcs: " << permitted.size() << "\n";
  for (std::size_t e : permitted) {
    const auto& arc = instance.net.restructurable_arcs[e];
    const ArcClass c = classify_arc(snet, aux, cut, e);
    std::cout << "  (" << arc.tail << " -> " << arc.head << ") side "
              << (w.w_out[e] && w.w_in[e] ? "in+out" : (w.w_out[e] ? "out" : "in")) << ": "
              << to_string(c) << "\n";
  }
  const bool certified = certify_no_increase(snet, aux, cut, permitted);
  std::cout << "no-increase certificate: " << (certified ? "true" : "inconclusive") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MFNIP-R: max flow network interdiction with restructuring"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "generate a seeded layered instance");
  std::uint64_t seed = 1;
  int users = 200;
  int organizations = 2;
  double density = 1.0;
  std::string variant = "base";
  std::string gen_out = "instance.json";
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--users", users, "layer-1 node count");
  gen->add_option("--organizations", organizations, "organization count");
  gen->add_option("--density", density, "restructurable arc density");
  gen->add_option("--variant", variant, "base|recruitment|organizational");
  gen->add_option("--out", gen_out, "output instance path");

  auto* solve_cmd = app.add_subcommand("solve", "solve one instance at one budget");
  std::string instance_path;
  std::string mode = "partial";
  std::string solve_out;
  double budget = 50.0;
  double epsilon = 1e-4;
  double time_limit = 600.0;
  bool leadership = false;
  bool no_timing = false;
  solve_cmd->add_option("--instance", instance_path, "instance JSON path")->required();
  solve_cmd->add_option("--budget", budget, "attacker budget");
  solve_cmd->add_option("--mode", mode, "partial|baseline|enumerate");
  solve_cmd->add_option("--epsilon", epsilon, "termination tolerance");
  solve_cmd->add_option("--time-limit", time_limit, "seconds per solve");
  solve_cmd->add_flag("--leadership", leadership, "require interdicting leadership");
  solve_cmd->add_option("--out", solve_out, "result JSON path");
  solve_cmd->add_flag("--no-timing", no_timing, "write zeros for wall-clock fields");

  auto* exp = app.add_subcommand("experiment", "budget sweep in the comparison-table layout");
  std::string budgets = "50:140:10";
  std::string modes = "partial";
  std::string exp_out;
  std::string timing = "on";
  exp->add_option("--instance", instance_path, "instance JSON path")->required();
  exp->add_option("--budgets", budgets, "start:end:step or comma list");
  exp->add_option("--modes", modes, "comma list of partial|baseline|enumerate");
  exp->add_option("--epsilon", epsilon, "termination tolerance");
  exp->add_option("--time-limit", time_limit, "seconds per solve");
  exp->add_flag("--leadership", leadership, "require interdicting leadership");
  exp->add_option("--out", exp_out, "output CSV path (default stdout)");
  exp->add_option("--timing", timing, "on|off: wall-clock column in the CSV");

  auto* verify = app.add_subcommand("verify", "classify permitted arcs against the min cut");
  std::string plan_path;
  verify->add_option("--instance", instance_path, "instance JSON path")->required();
  verify->add_option("--plan", plan_path, "interdiction plan JSON path")->required();

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_generate(seed, users, variant, organizations, density, gen_out);
    if (solve_cmd->parsed())
      return cmd_solve(instance_path, budget, mode, epsilon, time_limit, leadership, solve_out,
                       !no_timing);
    if (exp->parsed())
      return cmd_experiment(instance_path, budgets, modes, epsilon, time_limit, leadership,
                            exp_out, timing != "off");
    if (verify->parsed()) return cmd_verify(instance_path, plan_path);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const mfnipr::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::system_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
