#include "vbpw/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vbpw/errors.hpp"

namespace vbpw {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool Interval::contains(double x) const {
  const bool above = lo_open ? x > lo : x >= lo;
  const bool below = hi_open ? x < hi : x <= hi;
  return above && below;
}

BandwidthProfile::BandwidthProfile(std::vector<double> knots,
                                   std::vector<double> levels)
    : knots_(std::move(knots)), levels_(std::move(levels)) {
  if (levels_.size() != knots_.size() + 1) {
    throw ValidationError("profile: expected " +
                          std::to_string(knots_.size() + 1) +
                          " levels for " + std::to_string(knots_.size()) +
                          " knots, got " + std::to_string(levels_.size()));
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i])) {
      throw ValidationError("profile: knots[" + std::to_string(i) +
                            "] is not finite");
    }
    if (i > 0 && !(knots_[i] > knots_[i - 1])) {
      throw ValidationError("profile: knots must be strictly increasing (knots[" +
                            std::to_string(i) + "])");
    }
  }
  q_.reserve(levels_.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const double p = levels_[i];
    if (!std::isfinite(p) || !(p > 0.0)) {
      throw ValidationError("profile: levels[" + std::to_string(i) +
                            "] must be finite and > 0");
    }
    q_.push_back(1.0 / std::sqrt(p));
  }
}

BandwidthProfile BandwidthProfile::constant(double level) {
  return BandwidthProfile({}, {level});
}

double BandwidthProfile::q_min() const {
  return *std::min_element(q_.begin(), q_.end());
}

double BandwidthProfile::q_max() const {
  return *std::max_element(q_.begin(), q_.end());
}

std::size_t BandwidthProfile::interval_index(double x) const {
  // number of knots strictly below x; x == t_k therefore lands in I_{k-1}
  return static_cast<std::size_t>(
      std::lower_bound(knots_.begin(), knots_.end(), x) - knots_.begin());
}

Interval BandwidthProfile::interval(std::size_t k) const {
  if (k > jumps()) {
    throw ValidationError("profile: interval index out of range");
  }
  const double lo = k == 0 ? -kInf : knots_[k - 1];
  const double hi = k == jumps() ? kInf : knots_[k];
  return Interval{lo, hi, true, k != jumps() ? false : true};
}

double BandwidthProfile::mu(double a, double b) const {
  if (!(a <= b)) {
    throw ValidationError("mu_p: expected a <= b");
  }
  double total = 0.0;
  for (std::size_t k = 0; k <= jumps(); ++k) {
    const double lo = k == 0 ? -kInf : knots_[k - 1];
    const double hi = k == jumps() ? kInf : knots_[k];
    const double left = std::max(a, lo);
    const double right = std::min(b, hi);
    if (right > left) total += q_[k] * (right - left);
  }
  return total;
}

double BandwidthProfile::mu_advance(double origin, double mass) const {
  double x = origin;
  if (mass >= 0.0) {
    std::size_t k = interval_index(x);
    // a point sitting on a knot continues into the piece to its right
    if (k < jumps() && x == knots_[k]) ++k;
    while (true) {
      const double hi = k == jumps() ? kInf : knots_[k];
      const double room = q_[k] * (hi - x);
      if (mass <= room) return x + mass / q_[k];
      mass -= room;
      x = hi;
      ++k;
    }
  }
  mass = -mass;
  std::size_t k = interval_index(x);
  while (true) {
    const double lo = k == 0 ? -kInf : knots_[k - 1];
    const double room = q_[k] * (x - lo);
    if (mass <= room) return x - mass / q_[k];
    mass -= room;
    x = lo;
    --k;
  }
}

double mu_p(const BandwidthProfile& profile, double a, double b) {
  return profile.mu(a, b);
}

}  // namespace vbpw
