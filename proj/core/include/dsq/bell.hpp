#ifndef DSQ_BELL_HPP
#define DSQ_BELL_HPP

#include <array>
#include <vector>

#include "dsq/detection.hpp"

namespace dsq {

// Analysis phases of the four CHSH correlators, in units of pi.
struct BellAngles {
  double phi_s_pi = 0;
  double phi_i_pi = 0.25;
  double phi_s_prime_pi = -0.5;
  double phi_i_prime_pi = 0.75;
};

// Canonical settings that maximize |S| for a fringe with offset phi_0:
// phi_s = -phi_0, phi_i = pi/4, phi_s' = phi_s - pi/2, phi_i' = 3 pi/4.
BellAngles canonical_angles(const FringeModel& fringe);

struct SettingPair {
  double phi_s_pi = 0;
  double phi_i_pi = 0;
  bool operator==(const SettingPair&) const = default;
};

// The 16 measurement settings behind the four correlators; for each
// correlator the order is (a,b), (a,b+pi), (a+pi,b), (a+pi,b+pi).
std::vector<SettingPair> bell_settings(const BellAngles& angles);

// E(phi_s, phi_i) = upsilon cos(phi_s - phi_i + phi_0), phases in radians.
double analytic_E(const FringeModel& fringe, double phi_s, double phi_i);

struct EValue {
  double value = 0;
  double sigma = 0;
  long long total = 0;  // coincidences entering the estimate
};

// Correlation from the four orthogonal-setting coincidence counts,
//   E = (C1 - C2 - C3 + C4) / (C1 + C2 + C3 + C4),
// with Poisson error propagation (sigma = sqrt((1 - E^2)/N)).
EValue correlation_E(const std::array<long long, 4>& counts);

struct BellResult {
  std::array<EValue, 4> correlators{};
  double S = 0;
  double S_sigma = 0;
  bool violates() const { return std::abs(S) > 2.0; }
};

// S = E1 - E2 - E3 - E4 with independent-error combination.
BellResult chsh_S(const std::array<EValue, 4>& correlators);

// Analytic correlators and S at the given angles.
BellResult analytic_bell(const FringeModel& fringe, const BellAngles& angles);

// Coincidence pairs per correlator needed for a target sigma_E at visibility
// upsilon, from sigma_E^2 = (1 - E^2)/N at E = upsilon/sqrt(2).
long long implied_pair_count(double upsilon, double sigma_E);

}  // namespace dsq

#endif
