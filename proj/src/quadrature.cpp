#include "vbpw/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vbpw/errors.hpp"

namespace vbpw {

GaussLegendreRule gauss_legendre(std::size_t n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / static_cast<double>(j);
      }
      dp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const GaussLegendreRule& gauss_legendre_15() {
  static const GaussLegendreRule rule = gauss_legendre(15);
  return rule;
}

AdaptiveResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                  double a, double b, const AdaptiveOptions& opts) {
  AdaptiveResult out;
  if (!(b > a)) return out;
  const auto& rule = gauss_legendre_15();

  struct Panel {
    double lo, hi;
    std::complex<double> whole;
  };
  std::vector<Panel> stack;
  const auto initial = static_cast<std::size_t>(
      std::max(1.0, std::ceil((b - a) / opts.max_panel_width)));
  const double h = (b - a) / static_cast<double>(initial);
  for (std::size_t i = initial; i-- > 0;) {
    const double lo = a + h * static_cast<double>(i);
    const double hi = i + 1 == initial ? b : lo + h;
    stack.push_back({lo, hi, integrate_panel(rule, f, lo, hi)});
  }
  std::size_t live = initial;

  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.lo + p.hi);
    const auto left = integrate_panel(rule, f, p.lo, mid);
    const auto right = integrate_panel(rule, f, mid, p.hi);
    const double diff = std::abs(p.whole - left - right);
    if (diff <= opts.panel_tolerance || mid <= p.lo || mid >= p.hi) {
      out.value += left + right;
      out.error_estimate += diff;
      continue;
    }
    ++live;
    if (live > opts.max_panels) {
      throw NumericalError("adaptive quadrature exceeded " +
                               std::to_string(opts.max_panels) +
                               " panels; achieved error ~" + std::to_string(diff),
                           diff);
    }
    stack.push_back({mid, p.hi, right});
    stack.push_back({p.lo, mid, left});
  }
  out.panels = live;
  return out;
}

}  // namespace vbpw
