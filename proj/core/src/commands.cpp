#include "dsq/commands.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "dsq/constants.hpp"
#include "dsq/errors.hpp"

namespace dsq {

namespace {

using nlohmann::json;

std::string hash_hex(const RunConfig& config) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << config.hash();
  return out.str();
}

std::string num(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

struct FringePoint {
  SettingPair setting;
  SettingCounts counts;
  double rate_hz = 0;
};

json point_json(const FringePoint& p) {
  return json{{"phi_s_pi", p.setting.phi_s_pi},
              {"phi_i_pi", p.setting.phi_i_pi},
              {"trials", p.counts.trials},
              {"singles_s", p.counts.singles_s},
              {"singles_i", p.counts.singles_i},
              {"coincidences", p.counts.coincidences},
              {"rate_hz", p.rate_hz}};
}

void points_csv(const std::vector<FringePoint>& points, std::ostream& out) {
  out << "phi_s_pi,phi_i_pi,trials,singles_s,singles_i,coincidences,rate_hz\n";
  for (const auto& p : points) {
    out << num(p.setting.phi_s_pi) << ',' << num(p.setting.phi_i_pi) << ','
        << p.counts.trials << ',' << p.counts.singles_s << ','
        << p.counts.singles_i << ',' << p.counts.coincidences << ','
        << num(p.rate_hz) << '\n';
  }
}

json fit_json(const FringeFit& fit) {
  return json{{"mean", fit.mean},
              {"visibility", fit.visibility},
              {"sigma_visibility", fit.sigma_visibility},
              {"phase_rad", fit.phase},
              {"sigma_phase", fit.sigma_phase},
              {"total_coincidences", fit.total},
              {"n_points", fit.n_points}};
}

struct AttemptProbabilities {
  double ps_tot = 0;
  double pi_tot = 0;
  double pc_tot = 0;
};

// Per-attempt click probabilities with background folded in: quantum
// coincidences, then either background completing a lone single, then pure
// accidentals.
AttemptProbabilities attempt_probabilities(const DerivedParams& d,
                                           double phi_s, double phi_i) {
  const double p_s = signal_singles_probability(d.params, d.budget);
  const double p_i = idler_singles_probability(d.params, d.budget);
  const double p_c = coincidence_rate_perturbative(d.params, d.budget,
                                                   d.fringe_effective, phi_s,
                                                   phi_i);
  const double b1 = d.background.p_click_d1();
  const double b2 = d.background.p_click_d2();
  AttemptProbabilities p;
  p.ps_tot = p_s + b1 * (1 - p_s);
  p.pi_tot = p_i + b2 * (1 - p_i);
  p.pc_tot = p_c + (p_s - p_c) * b2 + (p_i - p_c) * b1 +
             (1 - p_s - p_i + p_c) * b1 * b2;
  return p;
}

// Expected per-attempt counts of one setting, rounded to whole clicks.
SettingCounts analytic_counts(const DerivedParams& d, const SettingPair& s,
                              long long trials) {
  const AttemptProbabilities p = attempt_probabilities(
      d, s.phi_s_pi * constants::pi, s.phi_i_pi * constants::pi);
  SettingCounts counts;
  counts.trials = trials;
  counts.singles_s = std::llround(p.ps_tot * trials);
  counts.singles_i = std::llround(p.pi_tot * trials);
  counts.coincidences = std::llround(p.pc_tot * trials);
  return counts;
}

std::vector<FringePoint> scan_points(const DerivedParams& d,
                                     const CountLedger* ledger,
                                     const std::vector<SettingPair>& settings) {
  std::vector<FringePoint> points;
  for (const auto& s : settings) {
    FringePoint p;
    p.setting = s;
    p.counts = ledger ? ledger->at(s)
                      : analytic_counts(d, s, d.trial_config.n_trials);
    p.rate_hz = p.counts.trials > 0
                    ? double(p.counts.coincidences) / p.counts.trials *
                          d.trial_config.rep_rate
                    : 0.0;
    points.push_back(p);
  }
  return points;
}

FringeFit fit_points(const std::vector<FringePoint>& points, double phi_s_pi) {
  CountLedger ledger;
  for (const auto& p : points) ledger.add(p.setting, p.counts);
  return estimate_fringe(ledger, phi_s_pi);
}

struct BellRun {
  BellAngles angles;
  BellResult result;
  long long total_coincidences = 0;
};

BellRun run_bell(const DerivedParams& d, const CommandOptions& opts) {
  BellRun run;
  run.angles = canonical_angles(d.fringe_effective);
  if (opts.mode == RunMode::analytic) {
    run.result = analytic_bell(d.fringe_effective, run.angles);
    const long long pairs =
        implied_pair_count(d.fringe_effective.upsilon, d.sigma_e_target);
    for (auto& e : run.result.correlators) {
      e.sigma = d.sigma_e_target;
      e.total = pairs;
      run.total_coincidences += pairs;
    }
    run.result.S_sigma = 2 * d.sigma_e_target;
  } else {
    const auto ledger =
        run_trials(d.trial_config, d.params, d.budget, d.noise,
                   d.fringe_profile, d.background, bell_settings(run.angles));
    run.result = estimate_bell(ledger, run.angles);
    for (const auto& e : run.result.correlators)
      run.total_coincidences += e.total;
  }
  return run;
}

json bell_json(const RunConfig& config, const CommandOptions& opts,
               const BellRun& run) {
  json correlators = json::array();
  const double phis[4][2] = {
      {run.angles.phi_s_pi, run.angles.phi_i_pi},
      {run.angles.phi_s_prime_pi, run.angles.phi_i_pi},
      {run.angles.phi_s_pi, run.angles.phi_i_prime_pi},
      {run.angles.phi_s_prime_pi, run.angles.phi_i_prime_pi}};
  for (int k = 0; k < 4; ++k) {
    correlators.push_back({{"phi_s_pi", phis[k][0]},
                           {"phi_i_pi", phis[k][1]},
                           {"E", run.result.correlators[k].value},
                           {"sigma", run.result.correlators[k].sigma},
                           {"coincidences", run.result.correlators[k].total}});
  }
  return json{{"config_hash", hash_hex(config)},
              {"mode", opts.mode == RunMode::analytic ? "analytic" : "mc"},
              {"correlators", correlators},
              {"S", run.result.S},
              {"S_sigma", run.result.S_sigma},
              {"violates", run.result.violates()},
              {"total_coincidences", run.total_coincidences}};
}

}  // namespace

BackgroundAudit audit_background(const DerivedParams& derived) {
  const double phi_0 = derived.fringe_effective.phi_0;
  const AttemptProbabilities at_max =
      attempt_probabilities(derived, 0.0, -phi_0);
  const AttemptProbabilities at_min =
      attempt_probabilities(derived, 0.0, constants::pi - phi_0);
  BackgroundAudit audit;
  audit.p_singles_d1 = at_max.ps_tot;
  audit.p_singles_d2 = at_max.pi_tot;
  audit.rate_d1_hz = at_max.ps_tot * derived.trial_config.rep_rate;
  audit.rate_d2_hz = at_max.pi_tot * derived.trial_config.rep_rate;
  audit.p_coincidence_min = at_min.pc_tot;
  audit.p_coincidence_max = at_max.pc_tot;
  audit.p_accidental_floor = at_max.ps_tot * at_max.pi_tot;
  if (!(audit.p_accidental_floor > 0)) {
    throw NumericalError("accidental floor vanishes; no click probability");
  }
  audit.minima_over_floor = audit.p_coincidence_min / audit.p_accidental_floor;
  return audit;
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
  derive(config);  // throws on any invalid section
  out << "config ok\n" << "hash " << hash_hex(config) << '\n';
  return kExitOk;
}

int cmd_params(const RunConfig& config, const CommandOptions& opts,
               std::ostream& out) {
  const DerivedParams d = derive(config);
  const double p_s = signal_singles_probability(d.params, d.budget);
  const double p_i = idler_singles_probability(d.params, d.budget);
  const double rep = d.trial_config.rep_rate;

  json j;
  j["config_hash"] = hash_hex(config);
  j["chi_85"] = d.params.chi_85;
  j["chi_87"] = d.params.chi_87;
  j["chi_total"] = d.params.chi_total;
  j["eta"] = d.params.eta;
  j["overlap_a_85"] = d.params.A_85;
  j["overlap_a_87"] = d.params.A_87;
  j["n_w_85"] = d.write.n_w_85;
  j["n_w_87"] = d.write.n_w_87;
  j["delta_omega_w_hz"] = d.frequency_plan.delta_omega_w / constants::two_pi;
  j["delta_omega_s_hz"] = d.frequency_plan.delta_omega_s / constants::two_pi;
  j["delta_omega_i_hz"] = d.frequency_plan.delta_omega_i / constants::two_pi;
  j["upsilon_profile"] = d.fringe_profile.upsilon;
  j["upsilon_effective"] = d.fringe_effective.upsilon;
  j["phi_0"] = d.fringe_profile.phi_0;
  j["n_max"] = d.n_max;
  j["leakage_bound"] = d.leakage_bound;
  j["p_signal"] = p_s;
  j["p_idler"] = p_i;
  j["p_coincidence_mean"] = mean_coincidence_rate(d.params, d.budget);
  j["rate_d1_hz"] =
      (p_s + d.background.p_click_d1() * (1 - p_s)) * rep;
  j["rate_d2_hz"] =
      (p_i + d.background.p_click_d2() * (1 - p_i)) * rep;
  j["rate_coincidence_hz"] = mean_coincidence_rate(d.params, d.budget) * rep;
  j["minima_over_accidental_floor"] = audit_background(d).minima_over_floor;
  j["n_trials"] = d.trial_config.n_trials;
  j["sigma_e_target"] = d.sigma_e_target;
  j["s_analytic"] = 2 * std::sqrt(2.0) * d.fringe_effective.upsilon;

  if (opts.format == OutputFormat::json) {
    out << j.dump(2) << '\n';
  } else {
    out << "key,value\n";
    for (const auto& [key, value] : j.items()) {
      if (value.is_string())
        out << key << ',' << value.get<std::string>() << '\n';
      else if (value.is_number_integer())
        out << key << ',' << value.get<long long>() << '\n';
      else
        out << key << ',' << num(value.get<double>()) << '\n';
    }
  }
  return kExitOk;
}

int cmd_fringes(const RunConfig& config, const CommandOptions& opts,
                std::ostream& out) {
  if (opts.n_phases < 3) throw ConfigError("fringe scan needs at least 3 phases");
  const DerivedParams d = derive(config);

  std::vector<SettingPair> settings;
  for (int k = 0; k < opts.n_phases; ++k) {
    settings.push_back({opts.phi_s_pi, 2.0 * k / opts.n_phases});
  }

  std::vector<FringePoint> points;
  if (opts.mode == RunMode::analytic) {
    points = scan_points(d, nullptr, settings);
  } else {
    const auto ledger = run_trials(d.trial_config, d.params, d.budget, d.noise,
                                   d.fringe_profile, d.background, settings);
    points = scan_points(d, &ledger, settings);
  }
  const FringeFit fit = fit_points(points, opts.phi_s_pi);

  if (opts.format == OutputFormat::json) {
    json j;
    j["config_hash"] = hash_hex(config);
    j["mode"] = opts.mode == RunMode::analytic ? "analytic" : "mc";
    j["fit"] = fit_json(fit);
    j["points"] = json::array();
    for (const auto& p : points) j["points"].push_back(point_json(p));
    out << j.dump(2) << '\n';
  } else {
    out << "# config_hash " << hash_hex(config) << '\n';
    out << "# visibility " << num(fit.visibility) << " sigma "
        << num(fit.sigma_visibility) << '\n';
    out << "# phase_rad " << num(fit.phase) << " sigma " << num(fit.sigma_phase)
        << '\n';
    out << "# mean_rate_per_trial " << num(fit.mean) << '\n';
    points_csv(points, out);
  }
  return kExitOk;
}

int cmd_bell(const RunConfig& config, const CommandOptions& opts,
             std::ostream& out) {
  const DerivedParams d = derive(config);
  const BellRun run = run_bell(d, opts);

  if (opts.format == OutputFormat::json) {
    out << bell_json(config, opts, run).dump(2) << '\n';
  } else {
    out << "# config_hash " << hash_hex(config) << '\n';
    out << "# S " << num(run.result.S) << " sigma " << num(run.result.S_sigma)
        << " violates " << (run.result.violates() ? 1 : 0) << '\n';
    out << "phi_s_pi,phi_i_pi,E,sigma,coincidences\n";
    const double phis[4][2] = {
        {run.angles.phi_s_pi, run.angles.phi_i_pi},
        {run.angles.phi_s_prime_pi, run.angles.phi_i_pi},
        {run.angles.phi_s_pi, run.angles.phi_i_prime_pi},
        {run.angles.phi_s_prime_pi, run.angles.phi_i_prime_pi}};
    for (int k = 0; k < 4; ++k) {
      out << num(phis[k][0]) << ',' << num(phis[k][1]) << ','
          << num(run.result.correlators[k].value) << ','
          << num(run.result.correlators[k].sigma) << ','
          << run.result.correlators[k].total << '\n';
    }
  }
  return run.result.violates() ? kExitOk : kExitNoViolation;
}

int cmd_sweep(const RunConfig& config, const CommandOptions& opts,
              const std::string& path, const std::vector<double>& values,
              std::ostream& out) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::string pointer = path;
  if (pointer.empty()) throw ConfigError("sweep needs a config path");
  if (pointer[0] != '/') {
    pointer = "/" + pointer;
    for (auto& c : pointer)
      if (c == '.') c = '/';
  }

  json base;
  try {
    base = json::parse(config.to_json_text());
  } catch (const json::parse_error& e) {
    throw NumericalError(std::string("canonical dump is not valid JSON: ") +
                         e.what());
  }
  // Seed the override block before patching inside it, so a sweep can drive
  // the fringe directly on a config that models the profiles.
  if (pointer.rfind("/fringe_override/", 0) == 0 &&
      base["fringe_override"].is_null()) {
    base["fringe_override"] = {{"upsilon", 1.0}, {"phi_0_pi", 0.0}};
  }
  const json::json_pointer p(pointer);
  if (!base.contains(p)) {
    throw ConfigError("sweep path " + pointer + " not found in the config");
  }

  struct Row {
    double value = 0;
    double upsilon = 0;
    double S = 0;
    double S_sigma = 0;
    bool violates = false;
    long long coincidences = 0;
  };
  std::vector<Row> rows;
  for (const double v : values) {
    json patched = base;
    patched[p] = v;
    const RunConfig swept = RunConfig::from_json_text(patched.dump());
    const DerivedParams d = derive(swept);
    const BellRun run = run_bell(d, opts);
    rows.push_back({v, d.fringe_effective.upsilon, run.result.S,
                    run.result.S_sigma, run.result.violates(),
                    run.total_coincidences});
  }

  if (opts.format == OutputFormat::json) {
    json j;
    j["config_hash"] = hash_hex(config);
    j["path"] = pointer;
    j["mode"] = opts.mode == RunMode::analytic ? "analytic" : "mc";
    j["rows"] = json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"value", r.value},
                           {"upsilon_effective", r.upsilon},
                           {"S", r.S},
                           {"S_sigma", r.S_sigma},
                           {"violates", r.violates},
                           {"coincidences", r.coincidences}});
    }
    out << j.dump(2) << '\n';
  } else {
    out << "# config_hash " << hash_hex(config) << '\n';
    out << "# path " << pointer << '\n';
    out << "value,upsilon_effective,S,S_sigma,violates,coincidences\n";
    for (const auto& r : rows) {
      out << num(r.value) << ',' << num(r.upsilon) << ',' << num(r.S) << ','
          << num(r.S_sigma) << ',' << (r.violates ? 1 : 0) << ','
          << r.coincidences << '\n';
    }
  }
  return kExitOk;
}

}  // namespace dsq
