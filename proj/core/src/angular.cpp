#include "dsq/angular.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "dsq/errors.hpp"

namespace dsq {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int factorial(long n) {
  cpp_int f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_pairing(HalfInt j, HalfInt m, const char* label) {
  if (!j.same_parity(m)) {
    throw ConfigError(std::string("mismatched half-integer pairing for ") + label +
                      ": j = " + j.str() + ", m = " + m.str());
  }
}

}  // namespace

double clebsch_gordan(HalfInt j1, HalfInt j2, HalfInt j3,
                      HalfInt m1, HalfInt m2, HalfInt m3) {
  require_momentum(j1, "j1");
  require_momentum(j2, "j2");
  require_momentum(j3, "j3");
  require_pairing(j1, m1, "(j1, m1)");
  require_pairing(j2, m2, "(j2, m2)");
  require_pairing(j3, m3, "(j3, m3)");

  if ((m1 + m2).twice() != m3.twice()) return 0.0;
  if (!j1.admits_projection(m1) || !j2.admits_projection(m2) ||
      !j3.admits_projection(m3)) {
    return 0.0;
  }
  // Triangle rule, and the three momenta must couple to an integer total.
  if ((j1.twice() + j2.twice() + j3.twice()) % 2 != 0) return 0.0;
  if (j3.twice() > j1.twice() + j2.twice()) return 0.0;
  if (j3.twice() < std::abs(j1.twice() - j2.twice())) return 0.0;

  // Integer factorial arguments of the closed-form sum.
  const long A = (j1.twice() + j2.twice() - j3.twice()) / 2;
  const long B = (j1.twice() - m1.twice()) / 2;
  const long C = (j2.twice() + m2.twice()) / 2;
  const long D = (j3.twice() - j2.twice() + m1.twice()) / 2;
  const long E = (j3.twice() - j1.twice() - m2.twice()) / 2;

  const long k_lo = std::max({0L, -D, -E});
  const long k_hi = std::min({A, B, C});
  if (k_lo > k_hi) return 0.0;

  cpp_rational sum = 0;
  for (long k = k_lo; k <= k_hi; ++k) {
    cpp_int denom = factorial(k) * factorial(A - k) * factorial(B - k) *
                    factorial(C - k) * factorial(D + k) * factorial(E + k);
    cpp_rational term(1, denom);
    if (k % 2 != 0) term = -term;
    sum += term;
  }
  if (sum == 0) return 0.0;

  const long jp1 = (j1.twice() + m1.twice()) / 2;
  const long jm1 = (j1.twice() - m1.twice()) / 2;
  const long jp2 = (j2.twice() + m2.twice()) / 2;
  const long jm2 = (j2.twice() - m2.twice()) / 2;
  const long jp3 = (j3.twice() + m3.twice()) / 2;
  const long jm3 = (j3.twice() - m3.twice()) / 2;
  const long t1 = (j1.twice() - j2.twice() + j3.twice()) / 2;
  const long t2 = (-j1.twice() + j2.twice() + j3.twice()) / 2;
  const long tsum = (j1.twice() + j2.twice() + j3.twice()) / 2;

  cpp_rational norm2(factorial(A) * factorial(t1) * factorial(t2) * (j3.twice() + 1),
                     factorial(tsum + 1));
  norm2 *= cpp_rational(factorial(jp1) * factorial(jm1) * factorial(jp2) *
                        factorial(jm2) * factorial(jp3) * factorial(jm3));

  // Exact value is sign(sum) * sqrt(norm2 * sum^2); one sqrt of a rational.
  const cpp_rational c2 = norm2 * sum * sum;
  const double magnitude = std::sqrt(c2.convert_to<double>());
  return sum > 0 ? magnitude : -magnitude;
}

void HyperfineLevels::validate() const {
  require_momentum(F_a, "F_a");
  require_momentum(F_b, "F_b");
  require_momentum(F_c, "F_c");
  if (!F_a.is_integer() || !F_b.is_integer() || !F_c.is_integer()) {
    throw ConfigError("hyperfine F values must be integers for bosonic alkali isotopes");
  }
}

double coupling_product(const HyperfineLevels& levels, HalfInt m, int alpha) {
  if (alpha != 1 && alpha != -1) throw ConfigError("sideband index alpha must be +1 or -1");
  const HalfInt one = HalfInt::whole(1);
  const HalfInt zero = HalfInt::whole(0);
  const HalfInt al = HalfInt::whole(alpha);
  const double pump = clebsch_gordan(levels.F_a, one, levels.F_c, m, zero, m);
  const double emit = clebsch_gordan(levels.F_b, one, levels.F_c, m - al, al, m);
  return pump * emit;
}

CouplingTable make_coupling_table(const HyperfineLevels& levels) {
  levels.validate();
  CouplingTable table;
  table.levels = levels;
  for (int tm = -levels.F_a.twice(); tm <= levels.F_a.twice(); tm += 2) {
    const HalfInt m = HalfInt::from_twice(tm);
    for (int alpha : {-1, +1}) {
      table.entries.push_back({m, alpha, coupling_product(levels, m, alpha)});
    }
  }
  table.cos2_theta = branching_angle(levels);
  table.weights_minus = spin_wave_weights(levels, -1);
  table.weights_plus = spin_wave_weights(levels, +1);
  return table;
}

double CouplingTable::sum_x2(int alpha) const {
  double s = 0;
  for (const auto& e : entries) {
    if (e.alpha == alpha) s += e.x * e.x;
  }
  return s;
}

double CouplingTable::sum_x2_total() const { return sum_x2(-1) + sum_x2(+1); }

double branching_angle(const HyperfineLevels& levels) {
  levels.validate();
  double s_minus = 0, s_plus = 0;
  for (int tm = -levels.F_a.twice(); tm <= levels.F_a.twice(); tm += 2) {
    const HalfInt m = HalfInt::from_twice(tm);
    const double xm = coupling_product(levels, m, -1);
    const double xp = coupling_product(levels, m, +1);
    s_minus += xm * xm;
    s_plus += xp * xp;
  }
  const double total = s_minus + s_plus;
  if (total <= 0.0) {
    throw NumericalError("all coupling products vanish; branching angle undefined");
  }
  return s_minus / total;
}

std::vector<WeightEntry> spin_wave_weights(const HyperfineLevels& levels, int alpha) {
  levels.validate();
  std::vector<WeightEntry> raw;
  double norm2 = 0;
  for (int tm = -levels.F_a.twice(); tm <= levels.F_a.twice(); tm += 2) {
    const HalfInt m = HalfInt::from_twice(tm);
    const double x = coupling_product(levels, m, alpha);
    raw.push_back({m, x});
    norm2 += x * x;
  }
  if (norm2 <= 0.0) {
    throw NumericalError("coupling column for alpha = " + std::to_string(alpha) +
                         " vanishes; spin-wave mode degenerate");
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& e : raw) e.w *= inv;
  return raw;
}

}  // namespace dsq
