#pragma once

#include "reludim/family.hpp"
#include "reludim/fundim.hpp"
#include "reludim/network.hpp"
#include "reludim/shatter.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reludim {

struct FamilyTrialSpec {
  std::string name;
  PolyFamily family;
  std::vector<Rational> theta0;
};

struct CampaignConfig {
  std::vector<Architecture> architectures;
  int trials = 50;
  int batch_min = 2;
  int batch_max = 4;
  int theta_numerator_bound = 100;  // numerators uniform in [-bound, bound]
  int theta_denominator = 97;       // fixed prime denominator keeps theta exact
  std::vector<Rational> eps_schedule;  // default geometric 1, 1/2, ..., 6 levels
  std::size_t samples_per_level = 2000;
  RankConfig rank_cfg;
  SamplerConfig sampler;
  std::uint64_t seed = 1;
  int jobs = 2;
  int genericity_cap = 12;
  std::size_t path_cap = 1000000;
  std::vector<FamilyTrialSpec> families;  // extra custom-family trials

  void validate() const;
  static std::vector<Rational> default_schedule(int levels = 6);
};

struct TrialRow {
  int trial = 0;
  std::string arch;
  int batch_size = 0;
  RankProfile profile;
  int psi_lower = 0;
  int psi_upper = 0;
  bool generic = false;
  bool chain_ok = false;      // dim_ba <= psi_lower <= psi_upper <= r_RR <= rank_alpha
  bool stability_ok = false;  // dim_ba == r_R
  std::string failure;        // nonempty when the trial was abandoned
};

struct CampaignReport {
  std::vector<TrialRow> rows;
  int completed = 0;
  int failed = 0;
  double chain_ok_fraction = 0.0;
  double stability_fraction = 0.0;
  double bracket_tight_fraction = 0.0;        // psi_lower == psi_upper
  std::map<int, int> rank_gap_histogram;      // r_RR - r_R over completed trials
};

/// Per-trial work is deterministic from (config, seed, trial index); trials
/// run on a bounded worker pool and the report is identical regardless of
/// the job count.
CampaignReport run_conjecture_campaign(const CampaignConfig& cfg);

/// Samples a parametrically smooth batch for theta on a rational lattice;
/// returns nullopt when none is found within the draw budget.
std::optional<std::vector<std::vector<Rational>>> sample_smooth_batch(
    const Parameter& param, int batch_size, std::uint64_t seed, int max_draws = 200);

struct AnalyzeResult {
  std::vector<bool> smooth;               // per input point
  std::vector<std::size_t> rejected;      // indices of non-smooth points
  RankProfile profile;                    // over the smooth subset
  GenericityReport genericity;
  bool float64_mode = false;
};

AnalyzeResult analyze(const Parameter& param, const std::vector<std::vector<Rational>>& batch,
                      const RankConfig& rank_cfg, bool float64_mode = false,
                      int genericity_cap = 12, std::size_t path_cap = 1000000);

std::string campaign_report_to_json(const CampaignConfig& cfg, const CampaignReport& report);
std::string campaign_report_to_csv(const CampaignReport& report);
std::string analyze_result_to_json(const AnalyzeResult& result);

}  // namespace reludim
