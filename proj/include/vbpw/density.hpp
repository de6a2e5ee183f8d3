#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "vbpw/kernel.hpp"
#include "vbpw/piecewise.hpp"

namespace vbpw {

/// Sorted finite set of reals with a bounding support interval.
class PointSet {
 public:
  /// Support defaults to [min, max] of the points. Throws ValidationError for
  /// non-finite points or a support that does not contain them.
  explicit PointSet(std::vector<double> points);
  PointSet(std::vector<double> points, std::pair<double, double> support);

  const std::vector<double>& points() const { return points_; }
  std::pair<double, double> support() const { return support_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// #(X intersected with [a, b]).
  std::size_t count(double a, double b) const;

  /// max_x #(X intersected with [x, x + 1]).
  std::size_t rel() const;

 private:
  std::vector<double> points_;
  std::pair<double, double> support_;
};

/// Uniform double in [0, 1) from a 64-bit draw; identical on every platform.
double unit_uniform(std::uint64_t bits);

/// Points in [lo, hi] with constant mu_p-gap 1/density, each displaced by at
/// most jitter/2 gaps (in mu_p distance) using a seeded mt19937_64.
PointSet mu_uniform_points(const BandwidthProfile& profile, double lo, double hi,
                           double density, double jitter = 0.0, std::uint64_t seed = 0);

struct DensityReport {
  std::vector<double> radii;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> centers;
  /// Radii dropped because no ball of that radius fits inside the support.
  std::vector<double> omitted;
  double critical = 0.0;
  std::size_t rel = 0;
};

/// Windowed mu_p-Beurling densities: for each radius, inf and sup over centres
/// x with [x - r, x + r] inside the support (grid spacing min(max_spacing,
/// r/100)) of #(X in B_r(x)) / mu_p(B_r(x)).
DensityReport beurling_densities(const BandwidthProfile& profile, const PointSet& X,
                                 const std::vector<double>& radii, double critical,
                                 double max_spacing = 0.1);

/// (1/mu_p(I)) int_I k(y, y) dy with Gauss-Legendre panels split at the knots
/// and no wider than pi / (2 q_j u_max). `quad_points` nodes per panel.
double averaged_trace(const KernelEvaluator& ev, double alpha, double beta,
                      std::size_t quad_points = 10);

struct TraceRow {
  double r = 0.0;
  double trace = 0.0;
  double error = 0.0;
  double bound_ratio = 0.0;  // error * sqrt(mu_p([-r, r]))
};

struct TraceReport {
  std::vector<TraceRow> rows;
  double critical = 0.0;
  /// max / min of bound_ratio over the rows.
  double band = 0.0;
  /// error strictly decreasing in r.
  bool error_decreasing = false;
  /// bound_ratio increases at every step.
  bool growth = false;
};

TraceReport trace_convergence_report(const KernelEvaluator& ev,
                                     const std::vector<double>& r_list,
                                     std::size_t quad_points = 10);

}  // namespace vbpw
