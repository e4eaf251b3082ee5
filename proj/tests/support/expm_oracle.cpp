#include "support/expm_oracle.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace dsq_test {

namespace {

std::size_t idx(int P, int a, int b, int s, int t) {
  return ((static_cast<std::size_t>(a) * (P + 1) + b) * (P + 1) + s) * (P + 1) + t;
}

// w += G v for the squeezing generator; pairs are (a85,s85) and (a87,s87).
void apply_generator(int P, double r85, double r87,
                     const std::vector<double>& v, std::vector<double>& w) {
  for (int a = 0; a <= P; ++a)
    for (int b = 0; b <= P; ++b)
      for (int s = 0; s <= P; ++s)
        for (int t = 0; t <= P; ++t) {
          const double x = v[idx(P, a, b, s, t)];
          if (x == 0) continue;
          if (a < P && s < P)
            w[idx(P, a + 1, b, s + 1, t)] +=
                r85 * std::sqrt(double(a + 1) * (s + 1)) * x;
          if (a > 0 && s > 0)
            w[idx(P, a - 1, b, s - 1, t)] -= r85 * std::sqrt(double(a) * s) * x;
          if (b < P && t < P)
            w[idx(P, a, b + 1, s, t + 1)] +=
                r87 * std::sqrt(double(b + 1) * (t + 1)) * x;
          if (b > 0 && t > 0)
            w[idx(P, a, b - 1, s, t - 1)] -= r87 * std::sqrt(double(b) * t) * x;
        }
}

double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

double SqueezerExpansion::at(int na85, int na87, int ns85, int ns87) const {
  return amp[idx(n_pad, na85, na87, ns85, ns87)];
}

SqueezerExpansion squeezer_exponential(double r85, double r87, int n_pad) {
  const std::size_t dim = static_cast<std::size_t>(n_pad + 1) * (n_pad + 1) *
                          (n_pad + 1) * (n_pad + 1);
  std::vector<double> acc(dim, 0.0), term(dim, 0.0), next(dim, 0.0);
  term[0] = 1.0;
  acc[0] = 1.0;
  for (int k = 1; k <= 400; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    apply_generator(n_pad, r85, r87, term, next);
    for (std::size_t i = 0; i < dim; ++i) {
      next[i] /= k;
      acc[i] += next[i];
    }
    term.swap(next);
    if (norm2(term) < 1e-32 * norm2(acc)) return {n_pad, std::move(acc)};
  }
  throw std::runtime_error("squeezer Taylor series did not converge");
}

}  // namespace dsq_test
