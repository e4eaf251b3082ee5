#include "dsq/detection.hpp"

#include <cmath>
#include <string>

#include "dsq/constants.hpp"
#include "dsq/errors.hpp"

namespace dsq {

namespace {

double trapezoid_weight(const std::vector<double>& t, std::size_t i) {
  if (i == 0) return 0.5 * (t[1] - t[0]);
  if (i + 1 == t.size()) return 0.5 * (t[i] - t[i - 1]);
  return 0.5 * (t[i + 1] - t[i - 1]);
}

}  // namespace

void PhaseNoise::validate() const {
  if (var_phi_s < 0 || var_phi_i < 0) {
    throw ConfigError("phase jitter variances must be nonnegative");
  }
}

IdlerProfiles::IdlerProfiles(std::vector<double> t,
                             std::vector<std::complex<double>> p85,
                             std::vector<std::complex<double>> p87)
    : t_(std::move(t)), p85_(std::move(p85)), p87_(std::move(p87)) {
  if (t_.size() < 3 || p85_.size() != t_.size() || p87_.size() != t_.size()) {
    throw ConfigError("idler profiles need a shared grid of at least 3 points");
  }
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1])) throw ConfigError("idler profile grid must be increasing");
  }
  for (Iso iso : {Iso::rb85, Iso::rb87}) {
    const double n = grid_norm(iso);
    if (std::abs(n - 1.0) > 1e-6) {
      throw ConfigError("idler profile not normalized on its grid (norm = " +
                        std::to_string(n) + ")");
    }
  }
}

double IdlerProfiles::grid_norm(Iso iso) const {
  const auto& p = profile(iso);
  double acc = 0;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    acc += trapezoid_weight(t_, i) * std::norm(p[i]);
  }
  return acc;
}

IdlerProfiles IdlerProfiles::exponential(double t_max, int n_points,
                                         double tau_85, double tau_87,
                                         double delay_87, double detuning_87) {
  if (!(t_max > 0) || n_points < 3) throw ConfigError("invalid idler profile grid");
  if (!(tau_85 > 0) || !(tau_87 > 0)) throw ConfigError("profile decay times must be positive");
  std::vector<double> t(n_points);
  const double dt = t_max / (n_points - 1);
  for (int i = 0; i < n_points; ++i) t[i] = i * dt;

  const auto envelope = [&](double time, double t0, double tau) {
    return time >= t0 ? std::exp(-0.5 * (time - t0) / tau) : 0.0;
  };
  std::vector<std::complex<double>> p85(n_points), p87(n_points);
  double n85 = 0, n87 = 0;
  for (int i = 0; i < n_points; ++i) {
    const double e85 = envelope(t[i], 0.0, tau_85);
    const double e87 = envelope(t[i], delay_87, tau_87);
    const double phase = detuning_87 * (t[i] - delay_87);
    p85[i] = e85;
    p87[i] = e87 * std::complex<double>(std::cos(phase), std::sin(phase));
    const double w = trapezoid_weight(t, i);
    n85 += w * std::norm(p85[i]);
    n87 += w * std::norm(p87[i]);
  }
  if (!(n85 > 0) || !(n87 > 0)) throw NumericalError("idler profile vanishes on its grid");
  const double s85 = 1.0 / std::sqrt(n85);
  const double s87 = 1.0 / std::sqrt(n87);
  for (int i = 0; i < n_points; ++i) {
    p85[i] *= s85;
    p87[i] *= s87;
  }
  return IdlerProfiles(std::move(t), std::move(p85), std::move(p87));
}

std::complex<double> IdlerProfiles::overlap() const {
  std::complex<double> acc = 0;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    acc += trapezoid_weight(t_, i) * std::conj(p85_[i]) * p87_[i];
  }
  return acc;
}

double delay_for_target_overlap(double t_max, int n_points, double tau_85,
                                double tau_87, double target) {
  if (!(target > 0) || !(target < 1)) {
    throw ConfigError("target overlap must lie strictly inside (0, 1)");
  }
  const auto magnitude = [&](double d) {
    return std::abs(
        IdlerProfiles::exponential(t_max, n_points, tau_85, tau_87, d).overlap());
  };
  double lo = 0.0, hi = 0.5 * t_max;
  if (magnitude(lo) < target) {
    throw NumericalError("profiles already overlap below target at zero delay");
  }
  if (magnitude(hi) > target) {
    throw NumericalError("target overlap unreachable within the grid");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (magnitude(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-16 * t_max) break;
  }
  return 0.5 * (lo + hi);
}

void FringeModel::validate() const {
  if (!(upsilon >= 0.0 && upsilon <= 1.0)) {
    throw ConfigError("fringe visibility factor must lie in [0, 1]");
  }
  if (!std::isfinite(phi_0)) throw ConfigError("fringe phase offset must be finite");
}

FringeModel fringe_visibility(const PhaseNoise& noise, const IdlerProfiles& profiles) {
  noise.validate();
  const std::complex<double> z =
      std::exp(-0.5 * (noise.var_phi_s + noise.var_phi_i)) * profiles.overlap();
  double upsilon = std::abs(z);
  if (upsilon > 1.0 + 1e-12) {
    throw NumericalError("profile overlap exceeds 1; grid is inconsistent");
  }
  upsilon = std::min(upsilon, 1.0);
  FringeModel model{upsilon, upsilon > 0 ? -std::arg(z) : 0.0};
  model.validate();
  return model;
}

double CombinerCoeffs::self_norm() const {
  return std::norm(c_85) + std::norm(c_87) + vac_85 * vac_85 + vac_87 * vac_87;
}

CombinerCoeffs detection_operator(Channel channel, double phi,
                                  const EfficiencyBudget& budget) {
  budget.validate();
  const double e85 = channel == Channel::signal ? budget.eps_s_85 : budget.eps_i_85;
  const double e87 = channel == Channel::signal ? budget.eps_s_87 : budget.eps_i_87;
  // Signal carries e^{-i phi/2} on species 85; the idler convention is
  // conjugate, so the coincidence fringe runs in phi_i - phi_s.
  const double sign = channel == Channel::signal ? -1.0 : +1.0;
  const std::complex<double> rot(std::cos(0.5 * phi), std::sin(0.5 * phi) * sign);
  CombinerCoeffs c;
  c.c_85 = std::sqrt(0.5 * e85) * rot;
  c.c_87 = std::sqrt(0.5 * e87) * std::conj(rot);
  c.vac_85 = std::sqrt(0.5 * (1.0 - e85));
  c.vac_87 = std::sqrt(0.5 * (1.0 - e87));
  return c;
}

double coincidence_rate_perturbative(const InteractionParams& params,
                                     const EfficiencyBudget& budget,
                                     const FringeModel& fringe,
                                     double phi_s, double phi_i) {
  params.validate();
  budget.validate();
  fringe.validate();
  const double c = std::cos(params.eta);
  const double s = std::sin(params.eta);
  const double chi2 = params.chi_total * params.chi_total;
  const double mu85 = budget.mu_85();
  const double mu87 = budget.mu_87();
  return 0.25 * chi2 *
         (mu85 * c * c + mu87 * s * s +
          fringe.upsilon * std::sqrt(mu85 * mu87) * 2.0 * s * c *
              std::cos(phi_i - phi_s + fringe.phi_0));
}

double coincidence_rate_exact(const TruncatedFockState& psi,
                              const EfficiencyBudget& budget,
                              const FringeModel& fringe,
                              double phi_s, double phi_i) {
  budget.validate();
  fringe.validate();
  MixedState rho = MixedState::from_pure(psi)
                       .apply_loss(Mode::spin_85, budget.eps_r_85)
                       .apply_loss(Mode::spin_87, budget.eps_r_87);
  const CombinerCoeffs cs = detection_operator(Channel::signal, phi_s, budget);
  const CombinerCoeffs ci = detection_operator(Channel::idler, phi_i, budget);
  const auto sig = [&](Iso iso) { return iso == Iso::rb85 ? cs.c_85 : cs.c_87; };
  const auto idl = [&](Iso iso) { return iso == Iso::rb85 ? ci.c_85 : ci.c_87; };
  const std::complex<double> z =
      fringe.upsilon * std::exp(std::complex<double>(0.0, fringe.phi_0));
  const auto dephase = [&](Iso q, Iso r) -> std::complex<double> {
    if (q == r) return 1.0;
    // Cross-species idler coherence: conjugate factor on the bra side.
    return q == Iso::rb85 ? std::conj(z) : z;
  };

  std::complex<double> acc = 0;
  const Iso isos[2] = {Iso::rb85, Iso::rb87};
  for (Iso p : isos) {
    for (Iso q : isos) {
      for (Iso r : isos) {
        for (Iso t : isos) {
          const std::complex<double> w =
              std::conj(sig(p)) * std::conj(idl(q)) * idl(r) * sig(t) * dephase(q, r);
          if (w == std::complex<double>(0, 0)) continue;
          acc += w * rho.moment(p, q, r, t);
        }
      }
    }
  }
  const double value = acc.real();
  if (std::abs(acc.imag()) > 1e-12 * std::max(1.0, std::abs(value))) {
    throw NumericalError("coincidence rate acquired an imaginary part");
  }
  return value;
}

double signal_singles_probability(const InteractionParams& params,
                                  const EfficiencyBudget& budget) {
  const double n85 = std::sinh(params.chi_85) * std::sinh(params.chi_85);
  const double n87 = std::sinh(params.chi_87) * std::sinh(params.chi_87);
  return 0.5 * (budget.eps_s_85 * n85 + budget.eps_s_87 * n87);
}

double idler_singles_probability(const InteractionParams& params,
                                 const EfficiencyBudget& budget) {
  const double n85 = std::sinh(params.chi_85) * std::sinh(params.chi_85);
  const double n87 = std::sinh(params.chi_87) * std::sinh(params.chi_87);
  return 0.5 * (budget.eps_i_85 * budget.eps_r_85 * n85 +
                budget.eps_i_87 * budget.eps_r_87 * n87);
}

}  // namespace dsq
