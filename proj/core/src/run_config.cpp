#include "dsq/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "dsq/constants.hpp"
#include "dsq/errors.hpp"
#include "dsq/fock.hpp"

namespace dsq {

namespace {

using nlohmann::json;

const json& require(const json& root, const std::string& pointer) {
  const json::json_pointer p(pointer);
  if (!root.contains(p)) {
    throw ConfigError("missing config field " + pointer);
  }
  return root.at(p);
}

double require_number(const json& root, const std::string& pointer) {
  const json& v = require(root, pointer);
  if (!v.is_number()) {
    throw ConfigError("config field " + pointer + " must be a number");
  }
  return v.get<double>();
}

long long require_integer(const json& root, const std::string& pointer) {
  const json& v = require(root, pointer);
  if (!v.is_number_integer()) {
    throw ConfigError("config field " + pointer + " must be an integer");
  }
  return v.get<long long>();
}

bool require_bool(const json& root, const std::string& pointer) {
  const json& v = require(root, pointer);
  if (!v.is_boolean()) {
    throw ConfigError("config field " + pointer + " must be a boolean");
  }
  return v.get<bool>();
}

std::array<double, 3> require_vec3(const json& root, const std::string& pointer) {
  const json& v = require(root, pointer);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
      !v[1].is_number() || !v[2].is_number()) {
    throw ConfigError("config field " + pointer +
                      " must be an array of 3 numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

IsotopeConfig parse_isotope(const json& root, const std::string& base) {
  IsotopeConfig iso;
  iso.f_a = int(require_integer(root, base + "/f_a"));
  iso.f_b = int(require_integer(root, base + "/f_b"));
  iso.f_c = int(require_integer(root, base + "/f_c"));
  iso.ground_splitting_hz = require_number(root, base + "/ground_splitting_hz");
  iso.d_ca = require_number(root, base + "/d_ca");
  iso.d_cb = require_number(root, base + "/d_cb");
  iso.n_atoms = require_number(root, base + "/n_atoms");
  return iso;
}

BeamConfig parse_beam(const json& root, const std::string& base) {
  BeamConfig beam;
  beam.direction = require_vec3(root, base + "/direction");
  beam.anchor = require_vec3(root, base + "/anchor");
  beam.waist = require_number(root, base + "/waist");
  return beam;
}

json isotope_json(const IsotopeConfig& iso) {
  return json{{"f_a", iso.f_a},
              {"f_b", iso.f_b},
              {"f_c", iso.f_c},
              {"ground_splitting_hz", iso.ground_splitting_hz},
              {"d_ca", iso.d_ca},
              {"d_cb", iso.d_cb},
              {"n_atoms", iso.n_atoms}};
}

json beam_json(const BeamConfig& beam) {
  return json{{"direction", beam.direction},
              {"anchor", beam.anchor},
              {"waist", beam.waist}};
}

Vec3 to_vec3(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

IsotopeSpec isotope_spec(Iso id, const IsotopeConfig& cfg) {
  IsotopeSpec spec;
  spec.id = id;
  spec.levels.F_a = HalfInt::whole(cfg.f_a);
  spec.levels.F_b = HalfInt::whole(cfg.f_b);
  spec.levels.F_c = HalfInt::whole(cfg.f_c);
  spec.ground_splitting = constants::two_pi * cfg.ground_splitting_hz;
  spec.d_ca = cfg.d_ca;
  spec.d_cb = cfg.d_cb;
  spec.n_atoms = cfg.n_atoms;
  spec.validate();
  return spec;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  cfg.rb85 = parse_isotope(root, "/isotopes/rb85");
  cfg.rb87 = parse_isotope(root, "/isotopes/rb87");

  cfg.geometry.write = parse_beam(root, "/geometry/write");
  cfg.geometry.signal = parse_beam(root, "/geometry/signal");
  cfg.geometry.write_wavelength =
      require_number(root, "/geometry/write_wavelength");
  cfg.geometry.signal_wavelength =
      require_number(root, "/geometry/signal_wavelength");
  cfg.geometry.cloud_sigma = require_vec3(root, "/geometry/cloud_sigma");
  cfg.geometry.cloud_center_85 = require_vec3(root, "/geometry/cloud_center_85");
  cfg.geometry.cloud_center_87 = require_vec3(root, "/geometry/cloud_center_87");

  cfg.write.pulse_duration = require_number(root, "/write/pulse_duration");
  cfg.write.detuning_85_hz = require_number(root, "/write/detuning_85_hz");
  cfg.write.detuning_87_hz = require_number(root, "/write/detuning_87_hz");
  cfg.write.n_w_85 = require_number(root, "/write/n_w_85");
  cfg.write.n_w_87 = require_number(root, "/write/n_w_87");
  cfg.write.auto_balance = require_bool(root, "/write/auto_balance");

  cfg.frequency.write_shift_hz =
      require_number(root, "/frequency/write_shift_hz");

  cfg.efficiencies.signal_85 = require_number(root, "/efficiencies/signal_85");
  cfg.efficiencies.signal_87 = require_number(root, "/efficiencies/signal_87");
  cfg.efficiencies.retrieval_85 =
      require_number(root, "/efficiencies/retrieval_85");
  cfg.efficiencies.retrieval_87 =
      require_number(root, "/efficiencies/retrieval_87");
  cfg.efficiencies.idler_85 = require_number(root, "/efficiencies/idler_85");
  cfg.efficiencies.idler_87 = require_number(root, "/efficiencies/idler_87");

  cfg.phase_noise.var_phi_s = require_number(root, "/phase_noise/var_phi_s");
  cfg.phase_noise.var_phi_i = require_number(root, "/phase_noise/var_phi_i");

  cfg.idler_profiles.t_max = require_number(root, "/idler_profiles/t_max");
  cfg.idler_profiles.n_points =
      int(require_integer(root, "/idler_profiles/n_points"));
  cfg.idler_profiles.tau_85 = require_number(root, "/idler_profiles/tau_85");
  cfg.idler_profiles.tau_87 = require_number(root, "/idler_profiles/tau_87");
  cfg.idler_profiles.delay_87 = require_number(root, "/idler_profiles/delay_87");
  cfg.idler_profiles.detuning_87_hz =
      require_number(root, "/idler_profiles/detuning_87_hz");

  cfg.background.rate_d1_hz = require_number(root, "/background/rate_d1_hz");
  cfg.background.rate_d2_hz = require_number(root, "/background/rate_d2_hz");
  cfg.background.window = require_number(root, "/background/window");

  const long long seed = require_integer(root, "/trials/seed");
  if (seed < 0) throw ConfigError("config field /trials/seed must be nonnegative");
  cfg.trials.seed = std::uint64_t(seed);
  cfg.trials.n_trials = require_integer(root, "/trials/n_trials");
  cfg.trials.n_streams = int(require_integer(root, "/trials/n_streams"));
  cfg.trials.rep_rate_hz = require_number(root, "/trials/rep_rate_hz");
  cfg.trials.sigma_e_target = require_number(root, "/trials/sigma_e_target");

  cfg.truncation.n_max = int(require_integer(root, "/truncation/n_max"));
  cfg.truncation.leakage_bound =
      require_number(root, "/truncation/leakage_bound");

  const json& override_node = require(root, "/fringe_override");
  if (override_node.is_null()) {
    cfg.fringe_override.reset();
  } else {
    FringeOverrideConfig ov;
    ov.upsilon = require_number(root, "/fringe_override/upsilon");
    ov.phi_0_pi = require_number(root, "/fringe_override/phi_0_pi");
    cfg.fringe_override = ov;
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

std::string RunConfig::to_json_text() const {
  json root;
  root["isotopes"] = {{"rb85", isotope_json(rb85)}, {"rb87", isotope_json(rb87)}};
  root["geometry"] = {{"write", beam_json(geometry.write)},
                      {"signal", beam_json(geometry.signal)},
                      {"write_wavelength", geometry.write_wavelength},
                      {"signal_wavelength", geometry.signal_wavelength},
                      {"cloud_sigma", geometry.cloud_sigma},
                      {"cloud_center_85", geometry.cloud_center_85},
                      {"cloud_center_87", geometry.cloud_center_87}};
  root["write"] = {{"pulse_duration", write.pulse_duration},
                   {"detuning_85_hz", write.detuning_85_hz},
                   {"detuning_87_hz", write.detuning_87_hz},
                   {"n_w_85", write.n_w_85},
                   {"n_w_87", write.n_w_87},
                   {"auto_balance", write.auto_balance}};
  root["frequency"] = {{"write_shift_hz", frequency.write_shift_hz}};
  root["efficiencies"] = {{"signal_85", efficiencies.signal_85},
                          {"signal_87", efficiencies.signal_87},
                          {"retrieval_85", efficiencies.retrieval_85},
                          {"retrieval_87", efficiencies.retrieval_87},
                          {"idler_85", efficiencies.idler_85},
                          {"idler_87", efficiencies.idler_87}};
  root["phase_noise"] = {{"var_phi_s", phase_noise.var_phi_s},
                         {"var_phi_i", phase_noise.var_phi_i}};
  root["idler_profiles"] = {{"t_max", idler_profiles.t_max},
                            {"n_points", idler_profiles.n_points},
                            {"tau_85", idler_profiles.tau_85},
                            {"tau_87", idler_profiles.tau_87},
                            {"delay_87", idler_profiles.delay_87},
                            {"detuning_87_hz", idler_profiles.detuning_87_hz}};
  root["background"] = {{"rate_d1_hz", background.rate_d1_hz},
                        {"rate_d2_hz", background.rate_d2_hz},
                        {"window", background.window}};
  root["trials"] = {{"seed", trials.seed},
                    {"n_trials", trials.n_trials},
                    {"n_streams", trials.n_streams},
                    {"rep_rate_hz", trials.rep_rate_hz},
                    {"sigma_e_target", trials.sigma_e_target}};
  root["truncation"] = {{"n_max", truncation.n_max},
                        {"leakage_bound", truncation.leakage_bound}};
  if (fringe_override) {
    root["fringe_override"] = {{"upsilon", fringe_override->upsilon},
                               {"phi_0_pi", fringe_override->phi_0_pi}};
  } else {
    root["fringe_override"] = nullptr;
  }
  return root.dump(2);
}

std::uint64_t RunConfig::hash() const {
  const std::string text = to_json_text();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

DerivedParams derive(const RunConfig& config) {
  DerivedParams d;
  d.iso85 = isotope_spec(Iso::rb85, config.rb85);
  d.iso87 = isotope_spec(Iso::rb87, config.rb87);

  if (!(config.geometry.write_wavelength > 0) ||
      !(config.geometry.signal_wavelength > 0)) {
    throw ConfigError("beam wavelengths must be positive");
  }
  d.geometry.write.direction = to_vec3(config.geometry.write.direction);
  d.geometry.write.anchor = to_vec3(config.geometry.write.anchor);
  d.geometry.write.waist = config.geometry.write.waist;
  d.geometry.signal.direction = to_vec3(config.geometry.signal.direction);
  d.geometry.signal.anchor = to_vec3(config.geometry.signal.anchor);
  d.geometry.signal.waist = config.geometry.signal.waist;
  d.geometry.wavenumber_w =
      constants::two_pi / config.geometry.write_wavelength;
  d.geometry.wavenumber_s =
      constants::two_pi / config.geometry.signal_wavelength;
  d.geometry.cloud_sigma = to_vec3(config.geometry.cloud_sigma);
  d.geometry.cloud_center_85 = to_vec3(config.geometry.cloud_center_85);
  d.geometry.cloud_center_87 = to_vec3(config.geometry.cloud_center_87);
  d.geometry.validate();

  d.write.pulse_duration = config.write.pulse_duration;
  d.write.detuning_85 = constants::two_pi * config.write.detuning_85_hz;
  d.write.detuning_87 = constants::two_pi * config.write.detuning_87_hz;
  d.write.n_w_85 = config.write.n_w_85;
  d.write.n_w_87 = config.write.n_w_87;
  d.write.validate();

  d.budget.eps_s_85 = config.efficiencies.signal_85;
  d.budget.eps_s_87 = config.efficiencies.signal_87;
  d.budget.eps_r_85 = config.efficiencies.retrieval_85;
  d.budget.eps_r_87 = config.efficiencies.retrieval_87;
  d.budget.eps_i_85 = config.efficiencies.idler_85;
  d.budget.eps_i_87 = config.efficiencies.idler_87;
  d.budget.validate();

  const CouplingTable table85 = make_coupling_table(d.iso85.levels);
  const CouplingTable table87 = make_coupling_table(d.iso87.levels);
  const double A85 = overlap_A(d.iso85, d.geometry);
  const double A87 = overlap_A(d.iso87, d.geometry);
  double chi85 = chi_nu(d.iso85, d.write, d.geometry, A85, table85);
  double chi87 = chi_nu(d.iso87, d.write, d.geometry, A87, table87);
  d.params = InteractionParams::make(chi85, chi87, A85, A87);

  if (config.write.auto_balance) {
    d.write = balance_detunings(d.write, d.params, d.budget);
    chi85 = chi_nu(d.iso85, d.write, d.geometry, A85, table85);
    chi87 = chi_nu(d.iso87, d.write, d.geometry, A87, table87);
    d.params = InteractionParams::make(chi85, chi87, A85, A87);
  }
  d.params.validate();

  d.noise.var_phi_s = config.phase_noise.var_phi_s;
  d.noise.var_phi_i = config.phase_noise.var_phi_i;
  d.noise.validate();

  if (config.fringe_override) {
    d.fringe_profile.upsilon = config.fringe_override->upsilon;
    d.fringe_profile.phi_0 = config.fringe_override->phi_0_pi * constants::pi;
    d.fringe_profile.validate();
  } else {
    const auto profiles = IdlerProfiles::exponential(
        config.idler_profiles.t_max, config.idler_profiles.n_points,
        config.idler_profiles.tau_85, config.idler_profiles.tau_87,
        config.idler_profiles.delay_87,
        constants::two_pi * config.idler_profiles.detuning_87_hz);
    d.fringe_profile = fringe_visibility(PhaseNoise{}, profiles);
  }
  d.fringe_effective = d.fringe_profile;
  d.fringe_effective.upsilon *=
      std::exp(-0.5 * (d.noise.var_phi_s + d.noise.var_phi_i));

  d.frequency_plan = modulator_frequencies(
      d.iso85, d.iso87, d.write, constants::two_pi * config.frequency.write_shift_hz);

  d.leakage_bound = config.truncation.leakage_bound;
  if (config.truncation.n_max < 0) {
    throw ConfigError("config field /truncation/n_max must be nonnegative");
  }
  d.n_max = config.truncation.n_max == 0 ? default_n_max(d.params.chi_total)
                                         : config.truncation.n_max;

  d.background.rate_d1 = config.background.rate_d1_hz;
  d.background.rate_d2 = config.background.rate_d2_hz;
  d.background.window = config.background.window;
  d.background.validate();

  d.trial_config.seed = config.trials.seed;
  d.trial_config.n_streams = config.trials.n_streams;
  d.trial_config.rep_rate = config.trials.rep_rate_hz;
  d.sigma_e_target = config.trials.sigma_e_target;
  if (config.trials.n_trials < 0) {
    throw ConfigError("config field /trials/n_trials must be nonnegative");
  }
  if (config.trials.n_trials == 0) {
    if (!(d.sigma_e_target > 0)) {
      throw ConfigError(
          "config field /trials/sigma_e_target must be positive when "
          "/trials/n_trials is 0");
    }
    d.trial_config.n_trials = implied_trials_per_setting(
        d.params, d.budget, d.fringe_effective.upsilon, d.sigma_e_target);
  } else {
    d.trial_config.n_trials = config.trials.n_trials;
  }
  d.trial_config.validate();
  return d;
}

}  // namespace dsq
