#include "vbpw/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "vbpw/errors.hpp"
#include "vbpw/quadrature.hpp"

namespace vbpw {

PointSet::PointSet(std::vector<double> points) : points_(std::move(points)) {
  for (double x : points_)
    if (!std::isfinite(x)) throw ValidationError("point set: non-finite point");
  std::sort(points_.begin(), points_.end());
  support_ = points_.empty() ? std::pair{0.0, 0.0}
                             : std::pair{points_.front(), points_.back()};
}

PointSet::PointSet(std::vector<double> points, std::pair<double, double> support)
    : PointSet(std::move(points)) {
  if (!(support.first <= support.second))
    throw ValidationError("point set: support must satisfy lo <= hi");
  if (!points_.empty() &&
      (points_.front() < support.first || points_.back() > support.second))
    throw ValidationError("point set: points outside the support");
  support_ = support;
}

std::size_t PointSet::count(double a, double b) const {
  if (b < a) return 0;
  const auto lo = std::lower_bound(points_.begin(), points_.end(), a);
  const auto hi = std::upper_bound(points_.begin(), points_.end(), b);
  return static_cast<std::size_t>(hi - lo);
}

std::size_t PointSet::rel() const {
  std::size_t best = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    j = std::max(j, i);
    while (j < points_.size() && points_[j] <= points_[i] + 1.0) ++j;
    best = std::max(best, j - i);
  }
  return best;
}

double unit_uniform(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

PointSet mu_uniform_points(const BandwidthProfile& profile, double lo, double hi,
                           double density, double jitter, std::uint64_t seed) {
  if (!(hi > lo)) throw ValidationError("point generator: need lo < hi");
  if (!(density > 0.0)) throw ValidationError("point generator: density must be > 0");
  if (jitter < 0.0 || jitter >= 1.0)
    throw ValidationError("point generator: jitter must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  const double gap = 1.0 / density;
  const double total = profile.mu(lo, hi);
  std::vector<double> pts;
  for (double m = 0.5 * gap; m < total; m += gap) {
    const double shift = jitter * gap * (unit_uniform(rng()) - 0.5);
    const double target = std::clamp(m + shift, 0.0, total);
    pts.push_back(std::clamp(profile.mu_advance(lo, target), lo, hi));
  }
  return PointSet(std::move(pts), {lo, hi});
}

DensityReport beurling_densities(const BandwidthProfile& profile, const PointSet& X,
                                 const std::vector<double>& radii, double critical,
                                 double max_spacing) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw ValidationError("densities: radii must be > 0");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw ValidationError("densities: radii must be increasing");
  }
  DensityReport rep;
  rep.critical = critical;
  rep.rel = X.rel();
  const auto [lo, hi] = X.support();
  for (double r : radii) {
    const double first = lo + r;
    const double last = hi - r;
    if (first > last) {
      rep.omitted.push_back(r);
      continue;
    }
    const double h = std::min(max_spacing, r / 100.0);
    const auto steps = static_cast<std::size_t>(std::floor((last - first) / h + 1e-9));
    double inf = std::numeric_limits<double>::infinity();
    double sup = 0.0;
    for (std::size_t i = 0; i <= steps; ++i) {
      const double x = std::min(last, first + h * static_cast<double>(i));
      const double ratio =
          static_cast<double>(X.count(x - r, x + r)) / profile.mu(x - r, x + r);
      inf = std::min(inf, ratio);
      sup = std::max(sup, ratio);
    }
    rep.radii.push_back(r);
    rep.lower.push_back(inf);
    rep.upper.push_back(sup);
    rep.centers.push_back(steps + 1);
  }
  return rep;
}

double averaged_trace(const KernelEvaluator& ev, double alpha, double beta,
                      std::size_t quad_points) {
  if (!(beta > alpha)) throw ValidationError("averaged trace: need alpha < beta");
  if (quad_points < 2) throw ValidationError("averaged trace: need at least 2 nodes per panel");
  const BandwidthProfile& p = ev.profile();
  double u_max = 0.0;
  for (const auto& iv : ev.spectral_set().sqrt_image()) u_max = std::max(u_max, iv.second);
  const GaussLegendreRule rule = gauss_legendre(quad_points);

  std::vector<double> cuts{alpha};
  for (double t : p.knots())
    if (t > alpha && t < beta) cuts.push_back(t);
  cuts.push_back(beta);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const double q = p.q(p.interval_index(0.5 * (a + b)));
    const double width = std::numbers::pi / (2.0 * q * u_max);
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / width)));
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t k = 0; k < panels; ++k) {
      const double lo = a + h * static_cast<double>(k);
      total += integrate_panel(rule, [&](double y) { return ev.diagonal(y); }, lo, lo + h);
    }
  }
  return total / p.mu(alpha, beta);
}

TraceReport trace_convergence_report(const KernelEvaluator& ev,
                                     const std::vector<double>& r_list,
                                     std::size_t quad_points) {
  TraceReport rep;
  rep.critical = ev.spectral_set().critical_density();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    const double r = r_list[i];
    if (!(r > 0.0) || (i > 0 && !(r > r_list[i - 1])))
      throw ValidationError("trace report: radii must be positive and increasing");
    TraceRow row;
    row.r = r;
    row.trace = averaged_trace(ev, -r, r, quad_points);
    row.error = std::abs(row.trace - rep.critical);
    row.bound_ratio = row.error * std::sqrt(ev.profile().mu(-r, r));
    lo = std::min(lo, row.bound_ratio);
    hi = std::max(hi, row.bound_ratio);
    rep.rows.push_back(row);
  }
  rep.band = rep.rows.empty() ? 0.0 : (lo > 0.0 ? hi / lo : (hi > 0.0 ? INFINITY : 1.0));
  rep.error_decreasing = true;
  rep.growth = rep.rows.size() > 1;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    rep.error_decreasing = rep.error_decreasing && rep.rows[i].error < rep.rows[i - 1].error;
    rep.growth = rep.growth && rep.rows[i].bound_ratio > rep.rows[i - 1].bound_ratio;
  }
  return rep;
}

}  // namespace vbpw
