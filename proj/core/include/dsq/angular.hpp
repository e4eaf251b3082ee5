#ifndef DSQ_ANGULAR_HPP
#define DSQ_ANGULAR_HPP

#include <vector>

#include "dsq/half_int.hpp"

namespace dsq {

// Clebsch-Gordan coefficient <j1 m1; j2 m2 | j3 m3> in the Condon-Shortley
// convention.  Evaluated from the closed-form factorial sum with exact
// integer arithmetic; the only roundoff is the final square root, and
// selection-rule zeros are exact.  A (j, m) pair whose doubled values differ
// in parity is a malformed input and throws; violated triangle or projection
// rules simply give 0.
double clebsch_gordan(HalfInt j1, HalfInt j2, HalfInt j3,
                      HalfInt m1, HalfInt m2, HalfInt m3);

// Hyperfine levels of the lambda system: ground |a>, storage |b>, excited |c>.
struct HyperfineLevels {
  HalfInt F_a;
  HalfInt F_b;
  HalfInt F_c;
  void validate() const;
};

// Product of the two Clebsch-Gordan factors for the write-out transition
// chain a -> c -> b with a pi-polarized pump and an alpha = +-1 signal
// sideband, at ground projection m:
//   X(m, alpha) = <F_a m; 1 0 | F_c m> <F_b m-alpha; 1 alpha | F_c m>
double coupling_product(const HyperfineLevels& levels, HalfInt m, int alpha);

struct CouplingEntry {
  HalfInt m;
  int alpha;  // +1 or -1
  double x;
};

struct WeightEntry {
  HalfInt m;
  double w;
};

// All X(m, alpha) values for one species plus the derived branching angle
// and normalized spin-wave composition.
struct CouplingTable {
  HyperfineLevels levels;
  std::vector<CouplingEntry> entries;   // m ascending, alpha -1 then +1 per m
  double cos2_theta;                    // weight of the alpha = -1 branch
  std::vector<WeightEntry> weights_minus;  // alpha = -1 column, unit norm
  std::vector<WeightEntry> weights_plus;   // alpha = +1 column, unit norm

  double sum_x2(int alpha) const;
  double sum_x2_total() const;
};

CouplingTable make_coupling_table(const HyperfineLevels& levels);

// cos^2(theta) of the two-branch spin-wave superposition,
//   cos^2 = sum_m X(m,-1)^2 / sum_{alpha,m} X(m,alpha)^2.
// Equals 1/2 whenever F_c = F_a by the m -> -m reflection symmetry.
double branching_angle(const HyperfineLevels& levels);

// Normalized weights of the collective mode fed by sideband alpha,
//   w_m = X(m, alpha) / sqrt(sum_m X(m, alpha)^2).
// Throws NumericalError when the whole column vanishes.
std::vector<WeightEntry> spin_wave_weights(const HyperfineLevels& levels, int alpha);

}  // namespace dsq

#endif
