#ifndef DSQ_MONTE_CARLO_HPP
#define DSQ_MONTE_CARLO_HPP

#include <cstdint>
#include <vector>

#include "dsq/bell.hpp"
#include "dsq/detection.hpp"

namespace dsq {

struct TrialConfig {
  std::uint64_t seed = 1;
  long long n_trials = 0;   // per setting
  int n_streams = 1;        // trial-loop partitions per setting
  double rep_rate = 2e5;    // write attempts per second
  void validate() const;
};

// Phase-independent accidental clicks: uniform detector rates gated by the
// coincidence window of each attempt.
struct BackgroundModel {
  double rate_d1 = 0;   // Hz at the signal detector
  double rate_d2 = 0;   // Hz at the idler detector
  double window = 0;    // s
  double p_click_d1() const { return rate_d1 * window; }
  double p_click_d2() const { return rate_d2 * window; }
  void validate() const;
};

struct SettingCounts {
  long long trials = 0;
  long long singles_s = 0;
  long long singles_i = 0;
  long long coincidences = 0;
};

class CountLedger {
 public:
  void add(const SettingPair& setting, const SettingCounts& counts);
  const SettingCounts& at(const SettingPair& setting) const;  // exact key match
  const std::vector<std::pair<SettingPair, SettingCounts>>& rows() const { return rows_; }

 private:
  std::vector<std::pair<SettingPair, SettingCounts>> rows_;
};

// Per-attempt click sampling over the given settings.  The coincidence
// probability is the leading-order fringe evaluated at the jittered phases;
// profile_fringe must carry the temporal-overlap factor only, with Gaussian
// jitter supplied per attempt by `noise`.  When both jitter variances are
// zero every attempt at a setting is identically distributed and the
// category totals are drawn in one multinomial shot instead.
CountLedger run_trials(const TrialConfig& config,
                       const InteractionParams& params,
                       const EfficiencyBudget& budget,
                       const PhaseNoise& noise,
                       const FringeModel& profile_fringe,
                       const BackgroundModel& background,
                       const std::vector<SettingPair>& settings);

// Sinusoid fit C = mean (1 + V cos(phi_i - phase)) by weighted least squares
// in the (1, cos, sin) basis, with delta-method errors from the Poisson
// weights.
struct FringeFit {
  double mean = 0;
  double visibility = 0;
  double phase = 0;       // radians
  double sigma_visibility = 0;
  double sigma_phase = 0;
  long long total = 0;
  int n_points = 0;
};

struct FringeSample {
  double phi_i = 0;   // radians
  double value = 0;
  double weight = 0;  // 1/var
};

FringeFit fit_fringe(const std::vector<FringeSample>& samples);

// Fit of the coincidence counts of all ledger rows taken at phi_s_pi.
FringeFit estimate_fringe(const CountLedger& ledger, double phi_s_pi);

// CHSH estimate from the 16 canonical rows of the ledger.
BellResult estimate_bell(const CountLedger& ledger, const BellAngles& angles);

// Phase-averaged coincidence probability per attempt.
double mean_coincidence_rate(const InteractionParams& params,
                             const EfficiencyBudget& budget);

// Attempts per setting so that each correlator reaches the target Poisson
// sigma_E; backgrounds are not included in the estimate.
long long implied_trials_per_setting(const InteractionParams& params,
                                     const EfficiencyBudget& budget,
                                     double upsilon, double sigma_E);

}  // namespace dsq

#endif
