#ifndef DSQ_QUADRATURE_HPP
#define DSQ_QUADRATURE_HPP

#include <array>
#include <functional>
#include <vector>

namespace dsq {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Nodes by Newton iteration on the Legendre polynomial; rules are cached.
const GaussLegendreRule& gauss_legendre(int n);

struct BoxQuadratureResult {
  double value;
  int order;          // per-axis order of the accepted pass
  double rel_change;  // relative change at the last refinement
};

// Tensor-product Gauss-Legendre integral of f over an axis-aligned box,
// refined through the given per-axis orders until two successive passes agree
// to rel_tol.  Throws NumericalError when the ladder is exhausted.
BoxQuadratureResult integrate_box(
    const std::function<double(double, double, double)>& f,
    const std::array<double, 3>& lo, const std::array<double, 3>& hi,
    double rel_tol = 1e-8,
    const std::vector<int>& orders = {8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256});

}  // namespace dsq

#endif
