#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vbpw {

/// One piece I_k of the partition of the real line induced by the knots.
/// Pieces are half-open on the left: (t_k, t_{k+1}], with I_0 = (-inf, t_1]
/// and I_n = (t_n, +inf).
struct Interval {
  double lo;
  double hi;
  bool lo_open = true;
  bool hi_open = false;

  double length() const { return hi - lo; }
  bool contains(double x) const;
};

/// Piecewise-constant bandwidth profile p(x) = sum_k p_k chi_{I_k}(x).
///
/// Knots t_1 < ... < t_n are stored zero-based; `knot(k)` takes the
/// one-based jump index used throughout the transfer-matrix code. The local
/// frequencies q_k = 1/sqrt(p_k) are precomputed.
class BandwidthProfile {
 public:
  /// Throws ValidationError unless knots are finite and strictly increasing,
  /// levels are finite and strictly positive, and
  /// levels.size() == knots.size() + 1.
  BandwidthProfile(std::vector<double> knots, std::vector<double> levels);

  /// p(x) = level everywhere (no jumps).
  static BandwidthProfile constant(double level = 1.0);

  /// Number of jumps n.
  std::size_t jumps() const { return knots_.size(); }

  std::span<const double> knots() const { return knots_; }
  std::span<const double> levels() const { return levels_; }
  std::span<const double> frequencies() const { return q_; }

  /// t_k for 1 <= k <= n.
  double knot(std::size_t k) const { return knots_.at(k - 1); }
  double level(std::size_t k) const { return levels_.at(k); }
  /// q_k = p_k^{-1/2}.
  double q(std::size_t k) const { return q_.at(k); }

  double q_min() const;
  double q_max() const;

  /// p(x), using the (t_k, t_{k+1}] convention.
  double operator()(double x) const { return levels_[interval_index(x)]; }

  /// k such that x lies in I_k.
  std::size_t interval_index(double x) const;

  Interval interval(std::size_t k) const;

  /// mu_p([a, b]) = integral of p^{-1/2} over [a, b], evaluated exactly as a
  /// sum of q_k times overlap lengths. Throws ValidationError if a > b.
  double mu(double a, double b) const;

  /// Inverse of x -> mu(origin, x): the point x >= origin (or <= for negative
  /// mass) with signed mu-distance `mass` from `origin`.
  double mu_advance(double origin, double mass) const;

  bool operator==(const BandwidthProfile&) const = default;

 private:
  std::vector<double> knots_;
  std::vector<double> levels_;
  std::vector<double> q_;
};

/// mu_p as a free function.
double mu_p(const BandwidthProfile& profile, double a, double b);

}  // namespace vbpw
