#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace vbpw {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on P_n from Chebyshev initial guesses.
GaussLegendreRule gauss_legendre(std::size_t n);

/// Shared 15-point rule.
const GaussLegendreRule& gauss_legendre_15();

/// Fixed-rule integral of f over [a, b].
template <class F>
auto integrate_panel(const GaussLegendreRule& rule, const F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  using R = decltype(f(mid));
  R acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

struct AdaptiveOptions {
  /// Initial panels are no wider than this.
  double max_panel_width = 1.0;
  /// Accept a panel when |Q(panel) - Q(left) - Q(right)| <= this.
  double panel_tolerance = 1e-12;
  std::size_t max_panels = std::size_t{1} << 16;
};

struct AdaptiveResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::size_t panels = 0;
};

/// Adaptive bisection with 15-point Gauss-Legendre panels. Throws
/// NumericalError (carrying the achieved error estimate) once the panel cap is
/// exceeded.
AdaptiveResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                  double a, double b, const AdaptiveOptions& opts);

}  // namespace vbpw
