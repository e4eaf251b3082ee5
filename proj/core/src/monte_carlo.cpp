#include "dsq/monte_carlo.hpp"

#include <cmath>
#include <random>
#include <string>

#include "dsq/constants.hpp"
#include "dsq/errors.hpp"
#include "dsq/philox.hpp"

namespace dsq {

namespace {

struct Category {
  double p11, p10, p01;
};

// Joint click probabilities of one attempt: quantum pair events OR'd with
// independent background clicks on each detector.
Category compose(double p_c, double p_s_q, double p_i_q, double b1, double b2) {
  const double p10q = p_s_q - p_c;
  const double p01q = p_i_q - p_c;
  const double p00q = 1.0 - p_s_q - p_i_q + p_c;
  Category cat;
  cat.p11 = p_c + p10q * b2 + p01q * b1 + p00q * b1 * b2;
  const double p1x = p_s_q + (1.0 - p_s_q) * b1;
  const double px1 = p_i_q + (1.0 - p_i_q) * b2;
  cat.p10 = p1x - cat.p11;
  cat.p01 = px1 - cat.p11;
  return cat;
}

long long draw_binomial(PhiloxEngine& eng, long long n, double p) {
  if (n <= 0 || p <= 0) return 0;
  if (p >= 1) return n;
  std::binomial_distribution<long long> dist(n, p);
  return dist(eng);
}

}  // namespace

void TrialConfig::validate() const {
  if (n_trials < 0) throw ConfigError("trial count must be nonnegative");
  if (n_streams < 1) throw ConfigError("stream count must be at least 1");
  if (!(rep_rate > 0)) throw ConfigError("repetition rate must be positive");
}

void BackgroundModel::validate() const {
  if (rate_d1 < 0 || rate_d2 < 0) throw ConfigError("background rates must be nonnegative");
  if (window < 0) throw ConfigError("coincidence window must be nonnegative");
  if (p_click_d1() > 1 || p_click_d2() > 1) {
    throw ConfigError("background click probability exceeds 1 per attempt");
  }
}

void CountLedger::add(const SettingPair& setting, const SettingCounts& counts) {
  rows_.emplace_back(setting, counts);
}

const SettingCounts& CountLedger::at(const SettingPair& setting) const {
  for (const auto& [key, counts] : rows_) {
    if (key == setting) return counts;
  }
  throw ConfigError("ledger has no row at (phi_s, phi_i) = (" +
                    std::to_string(setting.phi_s_pi) + ", " +
                    std::to_string(setting.phi_i_pi) + ") pi");
}

CountLedger run_trials(const TrialConfig& config,
                       const InteractionParams& params,
                       const EfficiencyBudget& budget,
                       const PhaseNoise& noise,
                       const FringeModel& profile_fringe,
                       const BackgroundModel& background,
                       const std::vector<SettingPair>& settings) {
  config.validate();
  params.validate();
  budget.validate();
  noise.validate();
  profile_fringe.validate();
  background.validate();

  const double p_s_q = signal_singles_probability(params, budget);
  const double p_i_q = idler_singles_probability(params, budget);
  const double b1 = background.p_click_d1();
  const double b2 = background.p_click_d2();
  if (p_s_q > 1 || p_i_q > 1) throw NumericalError("singles probability exceeds 1 per attempt");

  const double c = std::cos(params.eta);
  const double s = std::sin(params.eta);
  const double chi2 = params.chi_total * params.chi_total;
  const double mu85 = budget.mu_85();
  const double mu87 = budget.mu_87();
  const double offset = 0.25 * chi2 * (mu85 * c * c + mu87 * s * s);
  const double amp = 0.25 * chi2 * profile_fringe.upsilon *
                     std::sqrt(mu85 * mu87) * 2.0 * s * c;
  if (offset + amp > std::min(p_s_q, p_i_q) * (1.0 + 1e-9) + 1e-18) {
    throw NumericalError("coincidence probability exceeds a singles probability");
  }

  const bool aggregate = noise.var_phi_s == 0.0 && noise.var_phi_i == 0.0;
  const double sd_s = std::sqrt(noise.var_phi_s);
  const double sd_i = std::sqrt(noise.var_phi_i);

  CountLedger ledger;
  for (std::size_t si = 0; si < settings.size(); ++si) {
    const double base = (settings[si].phi_i_pi - settings[si].phi_s_pi) *
                            constants::pi + profile_fringe.phi_0;
    SettingCounts counts;
    counts.trials = config.n_trials;
    if (aggregate) {
      // Identical attempts: one multinomial draw over the four outcomes.
      const double p_c = offset + amp * std::cos(base);
      const Category cat = compose(p_c, p_s_q, p_i_q, b1, b2);
      PhiloxEngine eng(config.seed, std::uint64_t(si) * config.n_streams);
      const long long n11 = draw_binomial(eng, config.n_trials, cat.p11);
      const long long rest1 = config.n_trials - n11;
      const long long n10 = draw_binomial(eng, rest1, cat.p10 / (1.0 - cat.p11));
      const long long rest2 = rest1 - n10;
      const long long n01 =
          draw_binomial(eng, rest2, cat.p01 / (1.0 - cat.p11 - cat.p10));
      counts.coincidences = n11;
      counts.singles_s = n11 + n10;
      counts.singles_i = n11 + n01;
    } else {
      for (int k = 0; k < config.n_streams; ++k) {
        long long chunk = config.n_trials / config.n_streams;
        if (k < config.n_trials % config.n_streams) ++chunk;
        PhiloxEngine eng(config.seed, std::uint64_t(si) * config.n_streams + k);
        for (long long t = 0; t < chunk; ++t) {
          const double xs = sd_s > 0 ? sd_s * eng.gaussian() : 0.0;
          const double xi = sd_i > 0 ? sd_i * eng.gaussian() : 0.0;
          const double p_c = offset + amp * std::cos(base + xi - xs);
          const Category cat = compose(p_c, p_s_q, p_i_q, b1, b2);
          const double u = eng.uniform();
          if (u < cat.p11) {
            ++counts.coincidences;
            ++counts.singles_s;
            ++counts.singles_i;
          } else if (u < cat.p11 + cat.p10) {
            ++counts.singles_s;
          } else if (u < cat.p11 + cat.p10 + cat.p01) {
            ++counts.singles_i;
          }
        }
      }
    }
    ledger.add(settings[si], counts);
  }
  return ledger;
}

FringeFit fit_fringe(const std::vector<FringeSample>& samples) {
  if (samples.size() < 3) throw NumericalError("fringe fit needs at least 3 points");
  double m[3][3] = {};
  double b[3] = {};
  for (const FringeSample& p : samples) {
    if (!(p.weight > 0)) throw ConfigError("fringe fit weights must be positive");
    const double x[3] = {1.0, std::cos(p.phi_i), std::sin(p.phi_i)};
    for (int i = 0; i < 3; ++i) {
      b[i] += p.weight * p.value * x[i];
      for (int j = 0; j < 3; ++j) m[i][j] += p.weight * x[i] * x[j];
    }
  }

  // Invert the 3x3 normal matrix by elimination with partial pivoting; the
  // inverse is also the GLS parameter covariance.
  double aug[3][6] = {};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) aug[i][j] = m[i][j];
    aug[i][3 + i] = 1.0;
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    }
    if (std::abs(aug[pivot][col]) < 1e-12 * std::abs(m[0][0])) {
      throw NumericalError("degenerate fringe grid; normal matrix is singular");
    }
    if (pivot != col) {
      for (int j = 0; j < 6; ++j) std::swap(aug[col][j], aug[pivot][j]);
    }
    const double inv = 1.0 / aug[col][col];
    for (int j = 0; j < 6; ++j) aug[col][j] *= inv;
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = aug[r][col];
      for (int j = 0; j < 6; ++j) aug[r][j] -= f * aug[col][j];
    }
  }
  double inv_m[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) inv_m[i][j] = aug[i][3 + j];
  }
  double a[3] = {};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i] += inv_m[i][j] * b[j];
  }
  if (!(a[0] > 0)) throw NumericalError("fringe fit produced a nonpositive mean rate");

  FringeFit fit;
  fit.n_points = int(samples.size());
  fit.mean = a[0];
  const double r = std::hypot(a[1], a[2]);
  fit.visibility = r / a[0];
  const auto quad = [&](const double g[3]) {
    double acc = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) acc += g[i] * inv_m[i][j] * g[j];
    }
    return std::sqrt(std::max(0.0, acc));
  };
  if (r > 1e-300) {
    fit.phase = std::atan2(a[2], a[1]);
    const double gv[3] = {-r / (a[0] * a[0]), a[1] / (r * a[0]), a[2] / (r * a[0])};
    const double gp[3] = {0.0, -a[2] / (r * r), a[1] / (r * r)};
    fit.sigma_visibility = quad(gv);
    fit.sigma_phase = quad(gp);
  } else {
    fit.phase = 0;
    const double gv1[3] = {0, 1.0 / a[0], 0};
    const double gv2[3] = {0, 0, 1.0 / a[0]};
    fit.sigma_visibility = std::max(quad(gv1), quad(gv2));
    fit.sigma_phase = constants::pi;
  }
  return fit;
}

FringeFit estimate_fringe(const CountLedger& ledger, double phi_s_pi) {
  std::vector<FringeSample> samples;
  long long total = 0;
  for (const auto& [setting, counts] : ledger.rows()) {
    if (setting.phi_s_pi != phi_s_pi) continue;
    if (counts.trials <= 0) throw ConfigError("ledger row with no trials");
    const double t = double(counts.trials);
    const double var = std::max<double>(counts.coincidences, 1) / (t * t);
    samples.push_back({setting.phi_i_pi * constants::pi,
                       counts.coincidences / t, 1.0 / var});
    total += counts.coincidences;
  }
  FringeFit fit = fit_fringe(samples);
  fit.total = total;
  return fit;
}

BellResult estimate_bell(const CountLedger& ledger, const BellAngles& angles) {
  const std::vector<SettingPair> settings = bell_settings(angles);
  std::array<EValue, 4> correlators;
  for (int k = 0; k < 4; ++k) {
    std::array<long long, 4> counts;
    for (int j = 0; j < 4; ++j) {
      counts[j] = ledger.at(settings[4 * k + j]).coincidences;
    }
    correlators[k] = correlation_E(counts);
  }
  return chsh_S(correlators);
}

double mean_coincidence_rate(const InteractionParams& params,
                             const EfficiencyBudget& budget) {
  const double c = std::cos(params.eta);
  const double s = std::sin(params.eta);
  return 0.25 * params.chi_total * params.chi_total *
         (budget.mu_85() * c * c + budget.mu_87() * s * s);
}

long long implied_trials_per_setting(const InteractionParams& params,
                                     const EfficiencyBudget& budget,
                                     double upsilon, double sigma_E) {
  const long long pairs = implied_pair_count(upsilon, sigma_E);
  const double rate = mean_coincidence_rate(params, budget);
  if (!(rate > 0)) throw NumericalError("vanishing coincidence rate; cannot size the run");
  return (long long)std::ceil(double(pairs) / (4.0 * rate));
}

}  // namespace dsq
