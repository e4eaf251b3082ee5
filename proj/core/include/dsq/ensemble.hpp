#ifndef DSQ_ENSEMBLE_HPP
#define DSQ_ENSEMBLE_HPP

#include <cmath>

#include "dsq/angular.hpp"
#include "dsq/efficiency.hpp"
#include "dsq/half_int.hpp"

namespace dsq {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const;
};

// One trapped species: lambda-system levels, ground hyperfine splitting,
// reduced dipole elements of the two optical legs, atom number.
struct IsotopeSpec {
  Iso id = Iso::rb85;
  HyperfineLevels levels;
  double ground_splitting = 0;  // omega_a - omega_b, rad/s
  double d_ca = 0;              // C m, pump leg a <-> c
  double d_cb = 0;              // C m, signal leg b <-> c
  double n_atoms = 0;

  void validate() const;
};

// TEM00 beam with transverse-normalized mode intensity,
// integral |u|^2 d^2r_perp = 1 on any plane through the axis.
struct GaussianBeam {
  Vec3 direction = {0, 1, 0};  // unit vector along propagation
  Vec3 anchor = {0, 0, 0};     // any point on the axis
  double waist = 0;            // m

  double mode_intensity(const Vec3& r) const;
  void validate() const;
};

// Write/signal beam pair, optical wavenumbers, and the Gaussian cloud model
// with per-species centers (axis-aligned sigma).
struct BeamGeometry {
  GaussianBeam write;
  GaussianBeam signal;
  double wavenumber_w = 0;  // 1/m
  double wavenumber_s = 0;  // 1/m
  Vec3 cloud_sigma = {0, 0, 0};
  Vec3 cloud_center_85 = {0, 0, 0};
  Vec3 cloud_center_87 = {0, 0, 0};

  const Vec3& cloud_center(Iso iso) const {
    return iso == Iso::rb85 ? cloud_center_85 : cloud_center_87;
  }
  void validate() const;
};

// Write pulse: duration, square temporal envelope phi(t) = 1/sqrt(T) on
// [0, T], per-species single-photon detunings and sideband drive strengths.
struct WriteConfig {
  double pulse_duration = 0;   // s
  double detuning_85 = 0;      // rad/s, signed
  double detuning_87 = 0;      // rad/s, signed
  double n_w_85 = 0;           // drive photon number, alpha = -1 sideband, species 85
  double n_w_87 = 0;           // drive photon number, alpha = +1 sideband, species 87

  double detuning(Iso iso) const { return iso == Iso::rb85 ? detuning_85 : detuning_87; }
  double n_w(Iso iso) const { return iso == Iso::rb85 ? n_w_85 : n_w_87; }
  double envelope(double t) const {
    return (t >= 0 && t <= pulse_duration) ? 1.0 / std::sqrt(pulse_duration) : 0.0;
  }
  void validate() const;
};

// Mode-overlap normalization (units m^2),
//   A = [ integral |u_s u_w|^2 n(r)/N d^3r ]^(-1/2),
// integrated over the species cloud center +- 8 sigma.  Throws when the
// overlap fraction is below 1e-6 of the coaxial-peak bound (beams missing
// the cloud or each other).
double overlap_A(const IsotopeSpec& iso, const BeamGeometry& geom);

// Two-photon coupling strength of the write process for one species:
//   chi = sqrt(2) d_cb d_ca sqrt(k_s k_w) sqrt(n_w N / (2 F_a + 1))
//         * sqrt(sum X^2) / (2 eps0 hbar |Delta| A).
// Scales as sqrt(n_w) and sqrt(N); zero detuning is a division error.
double chi_nu(const IsotopeSpec& iso, const WriteConfig& write,
              const BeamGeometry& geom, double A, const CouplingTable& table);

// Mixing angle of the two-species superposition, cos^2(eta) =
// chi85^2 / (chi85^2 + chi87^2).
double mixing_angle(double chi_85, double chi_87);

// Bundled coupling parameters; chi_total and eta are stored redundantly and
// must satisfy chi_85 = chi_total cos(eta), chi_87 = chi_total sin(eta).
struct InteractionParams {
  double chi_85 = 0;
  double chi_87 = 0;
  double chi_total = 0;
  double eta = 0;
  double A_85 = 1;
  double A_87 = 1;

  static InteractionParams make(double chi85, double chi87,
                                double A85 = 1.0, double A87 = 1.0);
  double r(Iso iso) const { return iso == Iso::rb85 ? chi_85 : chi_87; }
  void validate() const;
};

// Dual-rail modulation frequencies relative to the common carrier:
//   delta_omega_s = delta_omega_w - (split_87 - split_85) / 2
//   delta_omega_i = delta_omega_w - (Delta_85 + Delta_87) / 2
struct FrequencyPlan {
  double delta_omega_w = 0;
  double delta_omega_s = 0;
  double delta_omega_i = 0;
};

FrequencyPlan modulator_frequencies(const IsotopeSpec& iso85,
                                    const IsotopeSpec& iso87,
                                    const WriteConfig& write,
                                    double delta_omega_w);

// Rescales the sideband drives so the detected fringe is balanced,
// mu85 chi85'^2 = mu87 chi87'^2, holding chi_total fixed.  Returns the
// adjusted WriteConfig; fails when either mu vanishes.
WriteConfig balance_detunings(const WriteConfig& write,
                              const InteractionParams& params,
                              const EfficiencyBudget& budget);

}  // namespace dsq

#endif
