#ifndef DSQ_DETECTION_HPP
#define DSQ_DETECTION_HPP

#include <complex>
#include <vector>

#include "dsq/efficiency.hpp"
#include "dsq/ensemble.hpp"
#include "dsq/fock.hpp"

namespace dsq {

// Gaussian phase jitter variances of the signal and idler interferometer
// phases, radians^2.
struct PhaseNoise {
  double var_phi_s = 0;
  double var_phi_i = 0;
  void validate() const;
};

// Retrieved-idler temporal mode amplitudes of the two species on a shared
// uniform time grid, each normalized to unit power on the grid.
class IdlerProfiles {
 public:
  IdlerProfiles(std::vector<double> t,
                std::vector<std::complex<double>> p85,
                std::vector<std::complex<double>> p87);

  // Single-sided exponential intensity decay exp(-(t - t0)/tau), species 87
  // delayed by delay_87 and optionally detuned by detuning_87 (rad/s), which
  // rotates the overlap into the complex plane.
  static IdlerProfiles exponential(double t_max, int n_points,
                                   double tau_85, double tau_87,
                                   double delay_87, double detuning_87 = 0.0);

  const std::vector<double>& grid() const { return t_; }
  const std::vector<std::complex<double>>& profile(Iso iso) const {
    return iso == Iso::rb85 ? p85_ : p87_;
  }

  // Trapezoid integral conj(p85) p87 dt; |overlap| <= 1.
  std::complex<double> overlap() const;
  double grid_norm(Iso iso) const;

 private:
  std::vector<double> t_;
  std::vector<std::complex<double>> p85_, p87_;
};

// Delay of the species-87 profile that brings |overlap| to the given target
// on the same grid (bisection; |overlap| decreases with delay).
double delay_for_target_overlap(double t_max, int n_points, double tau_85,
                                double tau_87, double target);

// Reduced fringe model: C(phi) tracks 1 + upsilon cos(phi_i - phi_s + phi_0).
struct FringeModel {
  double upsilon = 1.0;
  double phi_0 = 0.0;
  void validate() const;
};

// upsilon e^{-i phi_0} = exp(-(var_s + var_i)/2) * overlap.
FringeModel fringe_visibility(const PhaseNoise& noise, const IdlerProfiles& profiles);

enum class Channel { signal, idler };

// Frequency-combiner mode coefficients at analysis phase phi, including the
// detector efficiency of the channel; the vacuum admixtures keep the output
// mode canonical ([psi, psidag] = 1) at any efficiency.
struct CombinerCoeffs {
  std::complex<double> c_85;
  std::complex<double> c_87;
  double vac_85 = 0;
  double vac_87 = 0;

  double self_norm() const;
};

CombinerCoeffs detection_operator(Channel channel, double phi,
                                  const EfficiencyBudget& budget);

// Leading-order coincidence probability per pulse,
//   (chi^2/4) [mu85 cos^2 + mu87 sin^2
//              + upsilon sqrt(mu85 mu87) sin(2 eta) cos(phi_i - phi_s + phi_0)].
double coincidence_rate_perturbative(const InteractionParams& params,
                                     const EfficiencyBudget& budget,
                                     const FringeModel& fringe,
                                     double phi_s, double phi_i);

// Coincidence probability evaluated on the truncated state: retrieval loss on
// the spin modes, then the fourth-order moment sum of the two combiner
// outputs, with the (upsilon, phi_0) factor applied to the cross-species
// idler coherences.
double coincidence_rate_exact(const TruncatedFockState& psi,
                              const EfficiencyBudget& budget,
                              const FringeModel& fringe,
                              double phi_s, double phi_i);

// Per-pulse detection probabilities of each channel alone.
double signal_singles_probability(const InteractionParams& params,
                                  const EfficiencyBudget& budget);
double idler_singles_probability(const InteractionParams& params,
                                 const EfficiencyBudget& budget);

}  // namespace dsq

#endif
