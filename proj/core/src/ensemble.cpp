#include "dsq/ensemble.hpp"

#include <cmath>
#include <string>

#include "dsq/constants.hpp"
#include "dsq/errors.hpp"
#include "dsq/quadrature.hpp"

namespace dsq {

Vec3 Vec3::normalized() const {
  const double n = norm();
  if (n <= 0) throw NumericalError("cannot normalize a zero-length vector");
  return {x / n, y / n, z / n};
}

void EfficiencyBudget::validate() const {
  for (const double e : {eps_s_85, eps_s_87, eps_r_85, eps_r_87, eps_i_85, eps_i_87}) {
    if (!(e >= 0.0 && e <= 1.0)) {
      throw ConfigError("efficiencies must lie in [0, 1]");
    }
  }
}

void IsotopeSpec::validate() const {
  levels.validate();
  if (!(ground_splitting > 0)) throw ConfigError("ground hyperfine splitting must be positive");
  if (!(d_ca > 0) || !(d_cb > 0)) throw ConfigError("dipole matrix elements must be positive");
  if (!(n_atoms > 0)) throw ConfigError("atom number must be positive");
}

double GaussianBeam::mode_intensity(const Vec3& r) const {
  const Vec3 rel = r - anchor;
  const double axial = rel.dot(direction);
  const double rho2 = rel.dot(rel) - axial * axial;
  return 2.0 / (constants::pi * waist * waist) * std::exp(-2.0 * rho2 / (waist * waist));
}

void GaussianBeam::validate() const {
  if (!(waist > 0)) throw ConfigError("beam waist must be positive");
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw ConfigError("beam direction must be a unit vector");
  }
}

void BeamGeometry::validate() const {
  write.validate();
  signal.validate();
  if (!(wavenumber_w > 0) || !(wavenumber_s > 0)) {
    throw ConfigError("optical wavenumbers must be positive");
  }
  if (!(cloud_sigma.x > 0 && cloud_sigma.y > 0 && cloud_sigma.z > 0)) {
    throw ConfigError("cloud sigma components must be positive");
  }
}

void WriteConfig::validate() const {
  if (!(pulse_duration > 0)) throw ConfigError("pulse duration must be positive");
  if (n_w_85 < 0 || n_w_87 < 0) throw ConfigError("sideband drive photon numbers must be nonnegative");
  if (detuning_85 == 0 || detuning_87 == 0) throw ConfigError("single-photon detunings must be nonzero");
}

double overlap_A(const IsotopeSpec& iso, const BeamGeometry& geom) {
  geom.validate();
  const Vec3 c = geom.cloud_center(iso.id);
  const Vec3 s = geom.cloud_sigma;
  const std::array<double, 3> lo = {c.x - 8 * s.x, c.y - 8 * s.y, c.z - 8 * s.z};
  const std::array<double, 3> hi = {c.x + 8 * s.x, c.y + 8 * s.y, c.z + 8 * s.z};
  const double pdf_norm =
      1.0 / (std::pow(constants::two_pi, 1.5) * s.x * s.y * s.z);

  const auto f = [&](double x, double y, double z) {
    const Vec3 r{x, y, z};
    const double gx = (x - c.x) / s.x;
    const double gy = (y - c.y) / s.y;
    const double gz = (z - c.z) / s.z;
    const double pdf = pdf_norm * std::exp(-0.5 * (gx * gx + gy * gy + gz * gz));
    return geom.signal.mode_intensity(r) * geom.write.mode_intensity(r) * pdf;
  };

  const BoxQuadratureResult integral = integrate_box(f, lo, hi, 1e-8);
  // Coaxial-peak bound on the overlap integral; far below it the mode overlap
  // is vacuous and A is effectively divergent.
  const double peak_bound = 2.0 / (constants::pi * geom.signal.waist * geom.signal.waist) *
                            2.0 / (constants::pi * geom.write.waist * geom.write.waist);
  if (!(integral.value > 0) || integral.value < 1e-6 * peak_bound) {
    throw NumericalError("beam/cloud overlap vanishes; mode normalization A diverges");
  }
  return 1.0 / std::sqrt(integral.value);
}

double chi_nu(const IsotopeSpec& iso, const WriteConfig& write,
              const BeamGeometry& geom, double A, const CouplingTable& table) {
  iso.validate();
  write.validate();
  if (!(A > 0)) throw NumericalError("mode normalization A must be positive");
  const double delta = write.detuning(iso.id);
  if (delta == 0) throw NumericalError("zero single-photon detuning in coupling strength");
  const double n_w = write.n_w(iso.id);
  const double sum_x2 = table.sum_x2_total();
  const double multiplicity = iso.levels.F_a.twice() + 1;  // 2 F_a + 1
  const double numerator = std::sqrt(2.0) * iso.d_cb * iso.d_ca *
                           std::sqrt(geom.wavenumber_s * geom.wavenumber_w) *
                           std::sqrt(n_w * iso.n_atoms / multiplicity) *
                           std::sqrt(sum_x2);
  const double denominator =
      2.0 * constants::epsilon_0 * constants::hbar * std::abs(delta) * A;
  return numerator / denominator;
}

double mixing_angle(double chi_85, double chi_87) {
  if (chi_85 < 0 || chi_87 < 0) throw ConfigError("coupling strengths must be nonnegative");
  if (chi_85 == 0 && chi_87 == 0) {
    throw NumericalError("both coupling strengths vanish; mixing angle undefined");
  }
  return std::atan2(chi_87, chi_85);
}

InteractionParams InteractionParams::make(double chi85, double chi87,
                                          double A85, double A87) {
  InteractionParams p;
  p.chi_85 = chi85;
  p.chi_87 = chi87;
  p.chi_total = std::hypot(chi85, chi87);
  p.eta = mixing_angle(chi85, chi87);
  p.A_85 = A85;
  p.A_87 = A87;
  p.validate();
  return p;
}

void InteractionParams::validate() const {
  if (chi_85 < 0 || chi_87 < 0 || chi_total <= 0) {
    throw ConfigError("coupling strengths must be nonnegative with a positive total");
  }
  const double sum = chi_85 * chi_85 + chi_87 * chi_87;
  if (std::abs(sum - chi_total * chi_total) > 1e-12 * chi_total * chi_total) {
    throw ConfigError("chi_total inconsistent with per-species couplings");
  }
  if (std::abs(chi_85 - chi_total * std::cos(eta)) > 1e-12 * chi_total ||
      std::abs(chi_87 - chi_total * std::sin(eta)) > 1e-12 * chi_total) {
    throw ConfigError("mixing angle inconsistent with per-species couplings");
  }
}

FrequencyPlan modulator_frequencies(const IsotopeSpec& iso85,
                                    const IsotopeSpec& iso87,
                                    const WriteConfig& write,
                                    double delta_omega_w) {
  FrequencyPlan plan;
  plan.delta_omega_w = delta_omega_w;
  plan.delta_omega_s =
      delta_omega_w - 0.5 * (iso87.ground_splitting - iso85.ground_splitting);
  plan.delta_omega_i =
      delta_omega_w - 0.5 * (write.detuning_85 + write.detuning_87);
  return plan;
}

WriteConfig balance_detunings(const WriteConfig& write,
                              const InteractionParams& params,
                              const EfficiencyBudget& budget) {
  budget.validate();
  const double mu85 = budget.mu_85();
  const double mu87 = budget.mu_87();
  if (!(mu85 > 0) || !(mu87 > 0)) {
    throw NumericalError("cannot balance the fringe with a vanishing efficiency product");
  }
  if (!(params.chi_85 > 0) || !(params.chi_87 > 0)) {
    throw NumericalError("cannot balance with a vanishing species coupling");
  }
  // Balanced split keeps chi_total^2 and pins mu85 chi85'^2 = mu87 chi87'^2.
  const double total2 = params.chi_total * params.chi_total;
  const double chi85p2 = total2 * mu87 / (mu85 + mu87);
  const double chi87p2 = total2 * mu85 / (mu85 + mu87);
  WriteConfig adjusted = write;
  adjusted.n_w_85 = write.n_w_85 * chi85p2 / (params.chi_85 * params.chi_85);
  adjusted.n_w_87 = write.n_w_87 * chi87p2 / (params.chi_87 * params.chi_87);
  return adjusted;
}

}  // namespace dsq
