#include "dsq/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "dsq/errors.hpp"

namespace dsq {

namespace {

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int mid = (n + 1) / 2;
  for (int i = 0; i < mid; ++i) {
    // Chebyshev-based starting guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw ConfigError("quadrature order must be positive");
  static std::map<int, GaussLegendreRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

BoxQuadratureResult integrate_box(
    const std::function<double(double, double, double)>& f,
    const std::array<double, 3>& lo, const std::array<double, 3>& hi,
    double rel_tol, const std::vector<int>& orders) {
  if (orders.empty()) throw ConfigError("empty quadrature order ladder");

  double previous = 0;
  bool have_previous = false;
  for (const int n : orders) {
    const GaussLegendreRule& rule = gauss_legendre(n);
    std::array<std::vector<double>, 3> x, w;
    for (int axis = 0; axis < 3; ++axis) {
      const double half = 0.5 * (hi[axis] - lo[axis]);
      const double mid = 0.5 * (hi[axis] + lo[axis]);
      x[axis].resize(n);
      w[axis].resize(n);
      for (int i = 0; i < n; ++i) {
        x[axis][i] = mid + half * rule.nodes[i];
        w[axis][i] = half * rule.weights[i];
      }
    }
    double total = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double wij = w[0][i] * w[1][j];
        double inner = 0;
        for (int k = 0; k < n; ++k) inner += w[2][k] * f(x[0][i], x[1][j], x[2][k]);
        total += wij * inner;
      }
    }
    if (have_previous) {
      const double scale = std::max(std::abs(total), std::abs(previous));
      const double change = scale > 0 ? std::abs(total - previous) / scale : 0.0;
      if (change <= rel_tol) return {total, n, change};
    }
    previous = total;
    have_previous = true;
  }
  throw NumericalError("box quadrature did not converge to rel_tol = " +
                       std::to_string(rel_tol) + " at order " +
                       std::to_string(orders.back()));
}

}  // namespace dsq
