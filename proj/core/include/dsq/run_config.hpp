#ifndef DSQ_RUN_CONFIG_HPP
#define DSQ_RUN_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "dsq/detection.hpp"
#include "dsq/ensemble.hpp"
#include "dsq/monte_carlo.hpp"

namespace dsq {

// One isotope block of the run configuration.  Frequencies are plain Hz and
// converted to angular frequencies when the physics structs are built.
struct IsotopeConfig {
  int f_a = 0;
  int f_b = 0;
  int f_c = 0;
  double ground_splitting_hz = 0;
  double d_ca = 0;
  double d_cb = 0;
  double n_atoms = 0;
};

struct BeamConfig {
  std::array<double, 3> direction{0, 1, 0};
  std::array<double, 3> anchor{0, 0, 0};
  double waist = 0;
};

struct GeometryConfig {
  BeamConfig write;
  BeamConfig signal;
  double write_wavelength = 0;
  double signal_wavelength = 0;
  std::array<double, 3> cloud_sigma{0, 0, 0};
  std::array<double, 3> cloud_center_85{0, 0, 0};
  std::array<double, 3> cloud_center_87{0, 0, 0};
};

struct WritePulseConfig {
  double pulse_duration = 0;
  double detuning_85_hz = 0;
  double detuning_87_hz = 0;
  double n_w_85 = 0;
  double n_w_87 = 0;
  bool auto_balance = false;
};

struct FrequencyConfig {
  double write_shift_hz = 0;  // acousto-optic offset of the write laser
};

struct EfficiencyConfig {
  double signal_85 = 1;
  double signal_87 = 1;
  double retrieval_85 = 1;
  double retrieval_87 = 1;
  double idler_85 = 1;
  double idler_87 = 1;
};

struct PhaseNoiseConfig {
  double var_phi_s = 0;
  double var_phi_i = 0;
};

struct IdlerProfileConfig {
  double t_max = 0;
  int n_points = 0;
  double tau_85 = 0;
  double tau_87 = 0;
  double delay_87 = 0;
  double detuning_87_hz = 0;
};

struct BackgroundConfig {
  double rate_d1_hz = 0;
  double rate_d2_hz = 0;
  double window = 0;
};

struct TrialsConfig {
  std::uint64_t seed = 1;
  long long n_trials = 0;  // 0: size the run from sigma_e_target
  int n_streams = 1;
  double rep_rate_hz = 2e5;
  double sigma_e_target = 0.018;
};

struct TruncationConfig {
  int n_max = 0;  // 0: pick from the coupling strength
  double leakage_bound = 1e-10;
};

// Direct replacement of the temporal-overlap fringe factor, bypassing the
// idler profiles; lets a sweep drive the visibility as a free parameter.
struct FringeOverrideConfig {
  double upsilon = 1;
  double phi_0_pi = 0;
};

struct RunConfig {
  IsotopeConfig rb85;
  IsotopeConfig rb87;
  GeometryConfig geometry;
  WritePulseConfig write;
  FrequencyConfig frequency;
  EfficiencyConfig efficiencies;
  PhaseNoiseConfig phase_noise;
  IdlerProfileConfig idler_profiles;
  BackgroundConfig background;
  TrialsConfig trials;
  TruncationConfig truncation;
  std::optional<FringeOverrideConfig> fringe_override;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig load(const std::string& path);

  // Canonical dump: sorted keys, fixed layout; equal configs hash equally.
  std::string to_json_text() const;
  std::uint64_t hash() const;  // FNV-1a 64 of the canonical dump
};

// Everything the commands need, assembled from a validated configuration.
struct DerivedParams {
  IsotopeSpec iso85;
  IsotopeSpec iso87;
  BeamGeometry geometry;
  WriteConfig write;           // after optional drive rebalancing
  InteractionParams params;
  EfficiencyBudget budget;
  PhaseNoise noise;
  FringeModel fringe_profile;    // temporal overlap only
  FringeModel fringe_effective;  // overlap damped by the phase jitter
  FrequencyPlan frequency_plan;
  int n_max = 0;
  double leakage_bound = 0;
  BackgroundModel background;
  TrialConfig trial_config;  // n_trials resolved when the config left it at 0
  double sigma_e_target = 0;
};

DerivedParams derive(const RunConfig& config);

}  // namespace dsq

#endif
