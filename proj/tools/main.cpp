#include "reludim/campaign.hpp"
#include "reludim/errors.hpp"
#include "reludim/fiber.hpp"
#include "reludim/io.hpp"
#include "reludim/paths.hpp"
#include "reludim/shatter.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace reludim;
using nlohmann::json;

struct GlobalFlags {
  std::uint64_t seed = 1;
  std::string rank_mode = "randomized";
  std::string number_mode;  // empty: take the network file's mode
  std::string out;
  std::string format = "json";
};

void add_global_flags(CLI::App* cmd, GlobalFlags& g) {
  cmd->add_option("--seed", g.seed, "RNG seed; identical seeds give identical reports");
  cmd->add_option("--rank-mode", g.rank_mode, "r_R computation: exact|randomized")
      ->check(CLI::IsMember({"exact", "randomized"}));
  cmd->add_option("--number-mode", g.number_mode,
                  "override the network file's number mode: rational|float64")
      ->check(CLI::IsMember({"rational", "float64"}));
  cmd->add_option("--out", g.out, "output path (stdout when omitted)");
  cmd->add_option("--format", g.format, "report format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

RankConfig make_rank_config(const GlobalFlags& g) {
  RankConfig cfg;
  cfg.mode = g.rank_mode == "exact" ? RankMode::kExact : RankMode::kRandomized;
  cfg.seed = g.seed;
  return cfg;
}

void emit(const GlobalFlags& g, const std::string& content) {
  if (g.out.empty())
    std::cout << content;
  else
    write_text_file(g.out, content);
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

std::vector<Rational> make_schedule(double eps_start, int levels) {
  if (levels < 1) throw InputError("need at least one epsilon level");
  std::vector<Rational> sched;
  Rational eps = rational_from_double(eps_start);
  for (int k = 0; k < levels; ++k) {
    sched.push_back(eps);
    eps /= 2;
  }
  return sched;
}

int cmd_analyze(const std::string& network_path, const std::string& batch_path,
                const GlobalFlags& g) {
  LoadedNetwork net = load_network(network_path);
  auto batch = load_batch(batch_path);
  std::string mode = g.number_mode.empty() ? net.number_mode : g.number_mode;
  AnalyzeResult result = analyze(net.param, batch, make_rank_config(g), mode == "float64");

  if (g.format == "csv") {
    std::ostringstream os;
    os << "dim_ba_fun,r_R,r_RR,rank_alpha,chain_ok,batch_size,param_dim,rejected\n";
    os << result.profile.dim_ba_fun << "," << result.profile.r_R << ","
       << result.profile.r_RR << "," << result.profile.rank_alpha << ","
       << (result.profile.chain_ok ? 1 : 0) << "," << result.profile.batch_size << ","
       << result.profile.param_dim << "," << result.rejected.size() << "\n";
    emit(g, os.str());
  } else {
    emit(g, analyze_result_to_json(result));
  }
  return 0;
}

int cmd_paths(const std::string& network_path, const std::string& batch_path,
              const GlobalFlags& g) {
  LoadedNetwork net = load_network(network_path);
  PathTable table = enumerate_complete_paths(net.param.arch());

  json j;
  j["architecture"] = net.param.arch().widths();
  j["path_count"] = table.size();
  json paths = json::array();
  for (const auto& p : table.paths()) {
    json jp;
    jp["start"] = p.kind == CompletePath::Kind::kInput ? "input" : "bias";
    jp["start_layer"] = p.start_layer;
    jp["start_index"] = p.start_index;
    jp["nodes"] = p.nodes;
    jp["monomial"] = p.monomial.to_string();
    paths.push_back(jp);
  }
  j["paths"] = paths;

  if (!batch_path.empty()) {
    auto batch = load_batch(batch_path);
    json masks = json::array();
    for (const auto& z : batch) {
      auto mask = open_paths(table, net.param, z);
      json jm;
      json point = json::array();
      for (const auto& c : z) point.push_back(rational_to_string(c));
      jm["point"] = point;
      jm["open"] = mask;
      std::size_t count = 0;
      for (bool b : mask) count += b;
      jm["open_count"] = count;
      masks.push_back(jm);
    }
    j["open_masks"] = masks;
  }
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_shatter(const std::string& network_path, const std::string& batch_path,
                const std::string& family_path, const std::string& theta0_text,
                double eps_start, int eps_levels, std::size_t samples, const GlobalFlags& g) {
  std::shared_ptr<BatchEvaluator> eval;
  std::vector<Rational> theta0;
  int rank_upper = 0;

  if (!family_path.empty()) {
    PolyFamily fam = load_family(family_path);
    theta0 = theta0_text.empty() ? std::vector<Rational>(fam.param_dim(), Rational(0))
                                 : parse_rational_list(theta0_text);
    rank_upper = r_RR_rank(family_jacobian(fam));
    eval = std::make_shared<FamilyBatchEvaluator>(std::move(fam));
  } else {
    LoadedNetwork net = load_network(network_path);
    auto batch = load_batch(batch_path);
    theta0 = net.param.unroll();
    rank_upper = r_RR_rank(algebraic_jacobian(net.param, batch));
    eval = std::make_shared<NetworkBatchEvaluator>(net.param.arch(), std::move(batch));
  }

  DifferenceFamily diff(eval, theta0);
  PsiBracket bracket =
      psi_bracket(diff, make_schedule(eps_start, eps_levels), samples, rank_upper, g.seed);

  if (g.format == "csv") {
    std::ostringstream os;
    os << "level,eps,samples,rejected,patterns\n";
    for (std::size_t k = 0; k < bracket.samples.levels.size(); ++k) {
      const auto& level = bracket.samples.levels[k];
      os << k << "," << rational_to_string(level.eps) << "," << level.samples << ","
         << level.rejected << "," << level.patterns.size() << "\n";
    }
    emit(g, os.str());
  } else {
    json j;
    j["psi_lower"] = bracket.lower;
    j["psi_upper"] = bracket.upper;
    j["witness"] = bracket.witness;
    j["persisted_patterns"] = bracket.samples.persisted.size();
    json levels = json::array();
    for (const auto& level : bracket.samples.levels) {
      json jl;
      jl["eps"] = rational_to_string(level.eps);
      jl["samples"] = level.samples;
      jl["rejected"] = level.rejected;
      jl["patterns"] = level.patterns.size();
      levels.push_back(jl);
    }
    j["levels"] = levels;
    emit(g, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_fiber_walk(const std::string& network_path, const std::string& batch_path, int steps,
                   double step_size, double tol, const GlobalFlags& g) {
  LoadedNetwork net = load_network(network_path);
  auto batch = load_batch(batch_path);

  FiberWalkConfig cfg;
  cfg.steps = steps;
  cfg.step_size = step_size;
  cfg.tolerance = tol;
  cfg.seed = g.seed;
  cfg.rank_cfg = make_rank_config(g);
  FiberWalkReport report = fiber_walk(net.param, batch, cfg);

  json j;
  j["success"] = report.success;
  j["steps_taken"] = report.steps_taken;
  j["max_deviation"] = report.max_deviation;
  j["step_residuals"] = report.step_residuals;
  j["ranks"] = report.ranks;
  j["error"] = report.error;
  json theta = json::array();
  for (const auto& t : report.final_theta) theta.push_back(rational_to_string(t));
  j["final_theta"] = theta;
  emit(g, j.dump(2) + "\n");
  return report.success ? 0 : 1;
}

int cmd_conjecture(const std::vector<std::string>& arch_texts,
                   const std::vector<std::string>& family_paths, int trials, int batch_min,
                   int batch_max, double eps_start, int eps_levels, std::size_t samples,
                   int theta_num_bound, int theta_den, int jobs, const GlobalFlags& g) {
  CampaignConfig cfg;
  for (const auto& text : arch_texts) {
    std::vector<int> widths;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) widths.push_back(std::stoi(item));
    cfg.architectures.emplace_back(widths);
  }
  for (const auto& path : family_paths) {
    PolyFamily fam = load_family(path);
    std::vector<Rational> anchor(fam.param_dim(), Rational(0));
    cfg.families.push_back(FamilyTrialSpec{path, std::move(fam), std::move(anchor)});
  }
  cfg.trials = trials;
  cfg.batch_min = batch_min;
  cfg.batch_max = batch_max;
  cfg.eps_schedule = make_schedule(eps_start, eps_levels);
  cfg.samples_per_level = samples;
  cfg.theta_numerator_bound = theta_num_bound;
  cfg.theta_denominator = theta_den;
  cfg.jobs = jobs;
  cfg.seed = g.seed;
  cfg.rank_cfg = make_rank_config(g);

  CampaignReport report = run_conjecture_campaign(cfg);
  emit(g, g.format == "csv" ? campaign_report_to_csv(report)
                            : campaign_report_to_json(cfg, report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact local complexity measures for feedforward ReLU networks"};
  app.require_subcommand(1);

  GlobalFlags g;
  std::string network_path, batch_path, family_path, theta0_text;
  std::vector<std::string> arch_texts, family_paths;
  int steps = 20, eps_levels = 6, trials = 50, batch_min = 2, batch_max = 4;
  int theta_num_bound = 100, theta_den = 97, jobs = 2;
  double step_size = 1e-2, tol = 1e-9, eps_start = 1.0;
  std::size_t samples = 2000;

  auto* analyze_cmd =
      app.add_subcommand("analyze", "rank profile and smoothness report for a batch");
  analyze_cmd->add_option("--network", network_path)->required();
  analyze_cmd->add_option("--batch", batch_path)->required();
  add_global_flags(analyze_cmd, g);

  auto* paths_cmd = app.add_subcommand("paths", "dump the complete-path table");
  paths_cmd->add_option("--network", network_path)->required();
  paths_cmd->add_option("--batch", batch_path, "also dump per-point open-path masks");
  add_global_flags(paths_cmd, g);

  auto* shatter_cmd =
      app.add_subcommand("shatter", "persistent pseudodimension bracket by sampling");
  shatter_cmd->add_option("--network", network_path);
  shatter_cmd->add_option("--batch", batch_path);
  shatter_cmd->add_option("--family", family_path, "custom polynomial family JSON");
  shatter_cmd->add_option("--theta0", theta0_text, "anchor for --family, e.g. \"0,0,0\"");
  shatter_cmd->add_option("--eps-start", eps_start);
  shatter_cmd->add_option("--eps-levels", eps_levels);
  shatter_cmd->add_option("--samples-per-level", samples);
  add_global_flags(shatter_cmd, g);

  auto* fiber_cmd = app.add_subcommand("fiber-walk", "level-set walk with GN correction");
  fiber_cmd->add_option("--network", network_path)->required();
  fiber_cmd->add_option("--batch", batch_path)->required();
  fiber_cmd->add_option("--steps", steps);
  fiber_cmd->add_option("--step-size", step_size);
  fiber_cmd->add_option("--tol", tol);
  add_global_flags(fiber_cmd, g);

  auto* conj_cmd =
      app.add_subcommand("conjecture", "randomized inequality-chain campaign");
  conj_cmd->add_option("--arch", arch_texts, "architecture widths, e.g. 1,2,1 (repeatable)");
  conj_cmd->add_option("--family", family_paths, "custom family JSON (repeatable)");
  conj_cmd->add_option("--trials", trials);
  conj_cmd->add_option("--batch-min", batch_min);
  conj_cmd->add_option("--batch-max", batch_max);
  conj_cmd->add_option("--eps-start", eps_start);
  conj_cmd->add_option("--eps-levels", eps_levels);
  conj_cmd->add_option("--samples-per-level", samples);
  conj_cmd->add_option("--theta-num-bound", theta_num_bound);
  conj_cmd->add_option("--theta-den", theta_den);
  conj_cmd->add_option("--jobs", jobs);
  add_global_flags(conj_cmd, g);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(network_path, batch_path, g);
    if (paths_cmd->parsed()) return cmd_paths(network_path, batch_path, g);
    if (shatter_cmd->parsed()) {
      if (family_path.empty() && (network_path.empty() || batch_path.empty()))
        throw InputError("shatter needs either --family or both --network and --batch");
      return cmd_shatter(network_path, batch_path, family_path, theta0_text, eps_start,
                         eps_levels, samples, g);
    }
    if (fiber_cmd->parsed())
      return cmd_fiber_walk(network_path, batch_path, steps, step_size, tol, g);
    if (conj_cmd->parsed())
      return cmd_conjecture(arch_texts, family_paths, trials, batch_min, batch_max, eps_start,
                            eps_levels, samples, theta_num_bound, theta_den, jobs, g);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
