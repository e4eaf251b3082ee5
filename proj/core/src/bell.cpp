#include "dsq/bell.hpp"

#include <cmath>
#include <string>

#include "dsq/constants.hpp"
#include "dsq/errors.hpp"

namespace dsq {

BellAngles canonical_angles(const FringeModel& fringe) {
  fringe.validate();
  BellAngles a;
  a.phi_s_pi = -fringe.phi_0 / constants::pi;
  a.phi_i_pi = 0.25;
  a.phi_s_prime_pi = a.phi_s_pi - 0.5;
  a.phi_i_prime_pi = 0.75;
  return a;
}

std::vector<SettingPair> bell_settings(const BellAngles& angles) {
  const std::array<std::pair<double, double>, 4> corr = {{
      {angles.phi_s_pi, angles.phi_i_pi},
      {angles.phi_s_prime_pi, angles.phi_i_pi},
      {angles.phi_s_pi, angles.phi_i_prime_pi},
      {angles.phi_s_prime_pi, angles.phi_i_prime_pi},
  }};
  std::vector<SettingPair> settings;
  settings.reserve(16);
  for (const auto& [a, b] : corr) {
    settings.push_back({a, b});
    settings.push_back({a, b + 1.0});
    settings.push_back({a + 1.0, b});
    settings.push_back({a + 1.0, b + 1.0});
  }
  return settings;
}

double analytic_E(const FringeModel& fringe, double phi_s, double phi_i) {
  fringe.validate();
  return fringe.upsilon * std::cos(phi_s - phi_i + fringe.phi_0);
}

EValue correlation_E(const std::array<long long, 4>& counts) {
  long long total = 0;
  for (const long long c : counts) {
    if (c < 0) throw ConfigError("negative coincidence count");
    total += c;
  }
  if (total == 0) throw NumericalError("no coincidences; correlation undefined");
  const double n = double(total);
  const double e = (double(counts[0]) - counts[1] - counts[2] + counts[3]) / n;
  const double var = std::max(0.0, (1.0 - e * e) / n);
  return {e, std::sqrt(var), total};
}

BellResult chsh_S(const std::array<EValue, 4>& correlators) {
  BellResult r;
  r.correlators = correlators;
  r.S = correlators[0].value - correlators[1].value - correlators[2].value -
        correlators[3].value;
  double var = 0;
  for (const EValue& e : correlators) var += e.sigma * e.sigma;
  r.S_sigma = std::sqrt(var);
  return r;
}

BellResult analytic_bell(const FringeModel& fringe, const BellAngles& angles) {
  const double pi = constants::pi;
  const auto E = [&](double s_pi, double i_pi) {
    return EValue{analytic_E(fringe, s_pi * pi, i_pi * pi), 0.0, 0};
  };
  return chsh_S({E(angles.phi_s_pi, angles.phi_i_pi),
                 E(angles.phi_s_prime_pi, angles.phi_i_pi),
                 E(angles.phi_s_pi, angles.phi_i_prime_pi),
                 E(angles.phi_s_prime_pi, angles.phi_i_prime_pi)});
}

long long implied_pair_count(double upsilon, double sigma_E) {
  if (!(sigma_E > 0)) throw ConfigError("target sigma_E must be positive");
  if (!(upsilon >= 0 && upsilon <= 1)) throw ConfigError("upsilon must lie in [0, 1]");
  const double e = upsilon / std::sqrt(2.0);
  return (long long)std::ceil((1.0 - e * e) / (sigma_E * sigma_E));
}

}  // namespace dsq
