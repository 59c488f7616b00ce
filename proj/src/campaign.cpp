#include "reludim/campaign.hpp"

#include "reludim/errors.hpp"
#include "reludim/rng.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

namespace reludim {

void CampaignConfig::validate() const {
  if (architectures.empty() && families.empty())
    throw InputError("campaign needs at least one architecture or custom family");
  if (trials < 0) throw InputError("trial count must be non-negative");
  if (batch_min < 1 || batch_max < batch_min) throw InputError("bad batch size range");
  if (theta_numerator_bound < 1 || theta_denominator < 1)
    throw InputError("theta sampling law needs positive bounds");
  if (samples_per_level < 1) throw InputError("samples per level must be positive");
  auto sched = eps_schedule.empty() ? default_schedule() : eps_schedule;
  for (std::size_t i = 0; i < sched.size(); ++i) {
    if (sched[i] <= 0) throw InputError("epsilon schedule entries must be positive");
    if (i > 0 && !(sched[i] < sched[i - 1]))
      throw InputError("epsilon schedule must be strictly decreasing");
  }
}

std::vector<Rational> CampaignConfig::default_schedule(int levels) {
  std::vector<Rational> sched;
  Rational eps(1);
  for (int k = 0; k < levels; ++k) {
    sched.push_back(eps);
    eps /= 2;
  }
  return sched;
}

std::optional<std::vector<std::vector<Rational>>> sample_smooth_batch(
    const Parameter& param, int batch_size, std::uint64_t seed, int max_draws) {
  SplitMix64 rng(derive_seed(seed, 0xBA7C4));
  const int n0 = param.arch().input_dim();
  std::vector<std::vector<Rational>> batch;
  for (int draw = 0; draw < max_draws && static_cast<int>(batch.size()) < batch_size; ++draw) {
    std::vector<Rational> z(n0);
    for (int i = 0; i < n0; ++i) {
      double g = rng.next_gaussian() * 1.5;
      z[i] = Rational(static_cast<long long>(std::llround(g * 64.0)), 64);
    }
    if (!is_parametrically_smooth(param, z)) continue;
    if (std::find(batch.begin(), batch.end(), z) != batch.end()) continue;
    batch.push_back(std::move(z));
  }
  if (static_cast<int>(batch.size()) < batch_size) return std::nullopt;
  return batch;
}

namespace {

Parameter sample_theta(const Architecture& arch, const CampaignConfig& cfg,
                       std::uint64_t trial_seed) {
  SplitMix64 rng(derive_seed(trial_seed, 0x7E7A));
  std::vector<Rational> theta(arch.param_count());
  for (auto& t : theta)
    t = Rational(rng.next_int(-cfg.theta_numerator_bound, cfg.theta_numerator_bound),
                 cfg.theta_denominator);
  return Parameter::from_theta(arch, theta);
}

TrialRow run_network_trial(const CampaignConfig& cfg, int trial) {
  const std::uint64_t trial_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
  const Architecture& arch = cfg.architectures[trial % cfg.architectures.size()];

  TrialRow row;
  row.trial = trial;
  row.arch = arch.to_string();

  Parameter param = sample_theta(arch, cfg, trial_seed);
  row.generic = layer_genericity_check(param, cfg.genericity_cap).all_generic();

  SplitMix64 rng(derive_seed(trial_seed, 0x517E));
  int m = static_cast<int>(rng.next_int(cfg.batch_min, cfg.batch_max));
  auto batch = sample_smooth_batch(param, m, trial_seed);
  if (!batch) {
    row.failure = "no parametrically smooth batch found";
    return row;
  }
  row.batch_size = static_cast<int>(batch->size());

  try {
    RankConfig rank_cfg = cfg.rank_cfg;
    rank_cfg.seed = derive_seed(trial_seed, 0x4A4A);
    row.profile = rank_profile(param, *batch, rank_cfg, cfg.path_cap);

    auto eval = std::make_shared<NetworkBatchEvaluator>(arch, *batch);
    DifferenceFamily diff(eval, param.unroll());
    auto schedule = cfg.eps_schedule.empty() ? CampaignConfig::default_schedule()
                                             : cfg.eps_schedule;
    RationalMatrix jac0 = algebraic_jacobian(param, *batch).instantiate(param.unroll());
    PsiBracket bracket = psi_bracket(diff, schedule, cfg.samples_per_level, row.profile.r_RR,
                                     derive_seed(trial_seed, 0x51A7), cfg.sampler, &jac0);
    row.psi_lower = bracket.lower;
    row.psi_upper = bracket.upper;
    row.chain_ok = row.profile.dim_ba_fun <= row.psi_lower && row.psi_lower <= row.psi_upper &&
                   row.psi_upper <= row.profile.r_RR &&
                   row.profile.r_RR <= row.profile.rank_alpha;
    row.stability_ok = row.profile.dim_ba_fun == row.profile.r_R;
  } catch (const BudgetError& e) {
    row.failure = std::string("budget: ") + e.what();
  } catch (const InputError& e) {
    row.failure = std::string("input: ") + e.what();
  }
  return row;
}

TrialRow run_family_trial(const CampaignConfig& cfg, const FamilyTrialSpec& spec, int trial) {
  const std::uint64_t trial_seed = derive_seed(cfg.seed, 0xFA111, trial);

  TrialRow row;
  row.trial = trial;
  row.arch = "family:" + spec.name;
  row.batch_size = static_cast<int>(spec.family.slot_count());
  row.generic = true;  // no hyperplane arrangement to test

  try {
    PolyMatrix jac = family_jacobian(spec.family);
    RankConfig rank_cfg = cfg.rank_cfg;
    rank_cfg.seed = derive_seed(trial_seed, 0x4A4A);
    row.profile.batch_size = spec.family.slot_count();
    row.profile.param_dim = spec.family.param_dim();
    row.profile.dim_ba_fun = rank_rational(jac.instantiate(spec.theta0));
    row.profile.r_R = std::max(r_R_rank(jac, rank_cfg), row.profile.dim_ba_fun);
    row.profile.r_RR = r_RR_rank(jac);
    row.profile.rank_alpha = row.profile.r_RR;  // no path structure for custom families
    row.profile.chain_ok = row.profile.dim_ba_fun <= row.profile.r_R &&
                           row.profile.r_R <= row.profile.r_RR;

    auto eval = std::make_shared<FamilyBatchEvaluator>(spec.family);
    DifferenceFamily diff(eval, spec.theta0);
    auto schedule = cfg.eps_schedule.empty() ? CampaignConfig::default_schedule()
                                             : cfg.eps_schedule;
    RationalMatrix jac0 = jac.instantiate(spec.theta0);
    PsiBracket bracket = psi_bracket(diff, schedule, cfg.samples_per_level, row.profile.r_RR,
                                     derive_seed(trial_seed, 0x51A7), cfg.sampler, &jac0);
    row.psi_lower = bracket.lower;
    row.psi_upper = bracket.upper;
    row.chain_ok = row.profile.dim_ba_fun <= row.psi_lower &&
                   row.psi_lower <= row.psi_upper && row.psi_upper <= row.profile.r_RR;
    row.stability_ok = row.profile.dim_ba_fun == row.profile.r_R;
  } catch (const BudgetError& e) {
    row.failure = std::string("budget: ") + e.what();
  } catch (const InputError& e) {
    row.failure = std::string("input: ") + e.what();
  }
  return row;
}

}  // namespace

CampaignReport run_conjecture_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  const int network_trials = cfg.architectures.empty() ? 0 : cfg.trials;
  const int total = network_trials + static_cast<int>(cfg.families.size());

  CampaignReport report;
  report.rows.resize(total);

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= total) return;
      try {
        if (i < network_trials) {
          report.rows[i] = run_network_trial(cfg, i);
        } else {
          report.rows[i] = run_family_trial(cfg, cfg.families[i - network_trials], i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  int jobs = std::max(1, cfg.jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  int tight = 0;
  for (const auto& row : report.rows) {
    if (!row.failure.empty()) {
      ++report.failed;
      continue;
    }
    ++report.completed;
    if (row.chain_ok) report.chain_ok_fraction += 1.0;
    if (row.stability_ok) report.stability_fraction += 1.0;
    if (row.psi_lower == row.psi_upper) ++tight;
    ++report.rank_gap_histogram[row.profile.r_RR - row.profile.r_R];
  }
  if (report.completed > 0) {
    report.chain_ok_fraction /= report.completed;
    report.stability_fraction /= report.completed;
    report.bracket_tight_fraction = static_cast<double>(tight) / report.completed;
  }
  return report;
}

AnalyzeResult analyze(const Parameter& param, const std::vector<std::vector<Rational>>& batch,
                      const RankConfig& rank_cfg, bool float64_mode, int genericity_cap,
                      std::size_t path_cap) {
  AnalyzeResult result;
  result.float64_mode = float64_mode;
  result.genericity = layer_genericity_check(param, genericity_cap);

  std::vector<std::vector<Rational>> smooth_batch;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    bool ok = is_parametrically_smooth(param, batch[i]);
    result.smooth.push_back(ok);
    if (ok)
      smooth_batch.push_back(batch[i]);
    else
      result.rejected.push_back(i);
  }

  result.profile = rank_profile(param, smooth_batch, rank_cfg, path_cap);
  if (float64_mode && !smooth_batch.empty()) {
    // speed path: numeric Jacobian rank in double; symbolic ranks stay exact
    PolyMatrix jac = algebraic_jacobian(param, smooth_batch);
    std::vector<double> theta_d;
    for (const auto& t : param.unroll()) theta_d.push_back(to_double(t));
    Eigen::MatrixXd j(jac.rows(), jac.cols());
    for (std::size_t r = 0; r < jac.rows(); ++r)
      for (std::size_t c = 0; c < jac.cols(); ++c) j(r, c) = jac.at(r, c).eval_double(theta_d);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(j);
    qr.setThreshold(1e-10);
    result.profile.dim_ba_fun = static_cast<int>(qr.rank());
  }
  return result;
}

namespace {

nlohmann::json row_to_json(const TrialRow& row) {
  nlohmann::json j;
  j["trial"] = row.trial;
  j["arch"] = row.arch;
  j["batch_size"] = row.batch_size;
  j["dim_ba_fun"] = row.profile.dim_ba_fun;
  j["psi_lower"] = row.psi_lower;
  j["psi_upper"] = row.psi_upper;
  j["r_R"] = row.profile.r_R;
  j["r_RR"] = row.profile.r_RR;
  j["rank_alpha"] = row.profile.rank_alpha;
  j["chain_ok"] = row.chain_ok;
  j["stability_ok"] = row.stability_ok;
  j["generic"] = row.generic;
  j["failure"] = row.failure;
  return j;
}

}  // namespace

std::string campaign_report_to_json(const CampaignConfig& cfg, const CampaignReport& report) {
  nlohmann::json j;
  j["config"]["trials"] = cfg.trials;
  j["config"]["seed"] = cfg.seed;
  j["config"]["samples_per_level"] = cfg.samples_per_level;
  j["config"]["batch_min"] = cfg.batch_min;
  j["config"]["batch_max"] = cfg.batch_max;
  nlohmann::json archs = nlohmann::json::array();
  for (const auto& a : cfg.architectures) archs.push_back(a.to_string());
  j["config"]["architectures"] = archs;
  nlohmann::json sched = nlohmann::json::array();
  for (const auto& e :
       (cfg.eps_schedule.empty() ? CampaignConfig::default_schedule() : cfg.eps_schedule))
    sched.push_back(rational_to_string(e));
  j["config"]["eps_schedule"] = sched;

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) rows.push_back(row_to_json(row));
  j["trials"] = rows;

  j["aggregate"]["completed"] = report.completed;
  j["aggregate"]["failed"] = report.failed;
  j["aggregate"]["chain_ok_fraction"] = report.chain_ok_fraction;
  j["aggregate"]["stability_fraction"] = report.stability_fraction;
  j["aggregate"]["bracket_tight_fraction"] = report.bracket_tight_fraction;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [gap, count] : report.rank_gap_histogram)
    hist[std::to_string(gap)] = count;
  j["aggregate"]["rank_gap_histogram"] = hist;
  // statistical support only: an almost-everywhere claim cannot be certified
  // by sampling, it can only fail to be falsified
  j["aggregate"]["caveat"] =
      "randomized campaign; supports but cannot certify the almost-everywhere claim";
  return j.dump(2) + "\n";
}

std::string campaign_report_to_csv(const CampaignReport& report) {
  std::ostringstream os;
  os << "trial,arch,batch_size,dim_ba_fun,psi_lower,psi_upper,r_R,r_RR,rank_alpha,"
        "chain_ok,stability_ok,generic,failure\n";
  for (const auto& row : report.rows) {
    os << row.trial << "," << row.arch << "," << row.batch_size << ","
       << row.profile.dim_ba_fun << "," << row.psi_lower << "," << row.psi_upper << ","
       << row.profile.r_R << "," << row.profile.r_RR << "," << row.profile.rank_alpha << ","
       << (row.chain_ok ? 1 : 0) << "," << (row.stability_ok ? 1 : 0) << ","
       << (row.generic ? 1 : 0) << "," << row.failure << "\n";
  }
  return os.str();
}

std::string analyze_result_to_json(const AnalyzeResult& result) {
  nlohmann::json j;
  j["smooth"] = result.smooth;
  j["rejected_points"] = result.rejected;
  j["profile"]["dim_ba_fun"] = result.profile.dim_ba_fun;
  j["profile"]["r_R"] = result.profile.r_R;
  j["profile"]["r_RR"] = result.profile.r_RR;
  j["profile"]["rank_alpha"] = result.profile.rank_alpha;
  j["profile"]["chain_ok"] = result.profile.chain_ok;
  j["profile"]["batch_size"] = result.profile.batch_size;
  j["profile"]["param_dim"] = result.profile.param_dim;
  j["profile"]["path_count"] = result.profile.path_count;
  j["float64_mode"] = result.float64_mode;

  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : result.genericity.layers) {
    nlohmann::json jl;
    jl["generic"] = l.generic;
    jl["skipped"] = l.skipped;
    jl["violations"] = l.violations;
    layers.push_back(jl);
  }
  j["genericity"]["layers"] = layers;
  j["genericity"]["all_generic"] = result.genericity.all_generic();
  return j.dump(2) + "\n";
}

}  // namespace reludim
