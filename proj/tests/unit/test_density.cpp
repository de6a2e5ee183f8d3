#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "vbpw/density.hpp"
#include "vbpw/errors.hpp"

namespace vbpw {
namespace {

using testing::figure_profile;
using testing::kPi;

std::vector<double> integers(int lo, int hi) {
  std::vector<double> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

TEST(PointSet, SortedAndCounted) {
  const PointSet X({3.0, -1.0, 2.0, 2.0});
  EXPECT_EQ(X.points().front(), -1.0);
  EXPECT_EQ(X.support().first, -1.0);
  EXPECT_EQ(X.support().second, 3.0);
  EXPECT_EQ(X.count(2.0, 3.0), 3u);
  EXPECT_EQ(X.count(-0.5, 1.5), 0u);
  EXPECT_EQ(X.rel(), 3u);
}

TEST(PointSet, Validation) {
  EXPECT_THROW(PointSet({NAN}), ValidationError);
  EXPECT_THROW(PointSet({0.0, 5.0}, {1.0, 6.0}), ValidationError);
}

TEST(PointSet, RelOfLattice) {
  EXPECT_EQ(PointSet(integers(-10, 10)).rel(), 2u);  // closed unit windows
}

TEST(UnitUniform, Range) {
  EXPECT_EQ(unit_uniform(0), 0.0);
  EXPECT_LT(unit_uniform(~std::uint64_t{0}), 1.0);
  EXPECT_EQ(unit_uniform(std::uint64_t{1} << 63), 0.5);
}

TEST(Beurling, IntegerLattice) {
  const PointSet X(integers(-100, 100));
  const DensityReport r = beurling_densities(BandwidthProfile::constant(), X, {10.0}, 1.0);
  ASSERT_EQ(r.lower.size(), 1u);
  EXPECT_GE(r.lower[0], 0.95);
  EXPECT_LE(r.upper[0], 1.05);
  EXPECT_LE(r.lower[0], r.upper[0]);
  EXPECT_TRUE(r.omitted.empty());
}

TEST(Beurling, MuUniformSetHasConstantDensity) {
  const BandwidthProfile p = figure_profile();
  const double delta = 0.2;
  const PointSet X = mu_uniform_points(p, -60.0, 60.0, 1.0 / delta);
  for (std::size_t i = 1; i < X.size(); ++i) {
    ASSERT_NEAR(p.mu(X.points()[i - 1], X.points()[i]), delta, 1e-10);
  }
  const DensityReport r = beurling_densities(p, X, {5.0, 10.0, 20.0}, 1.0);
  for (std::size_t i = 0; i < r.radii.size(); ++i) {
    const double mass = p.q_min() * 2 * r.radii[i];
    EXPECT_GE(r.lower[i], (1.0 / delta) * (1.0 - 1.5 * delta / mass));
    EXPECT_LE(r.upper[i], (1.0 / delta) * (1.0 + 1.5 * delta / mass));
  }
}

TEST(Beurling, GapGivesZeroLower) {
  std::vector<double> pts;
  for (int i = -100; i <= 100; ++i)
    if (std::abs(i) > 12) pts.push_back(i);
  const DensityReport r = beurling_densities(BandwidthProfile::constant(), PointSet(pts), {5.0, 20.0}, 1.0);
  EXPECT_EQ(r.lower[0], 0.0);
  EXPECT_GT(r.lower[1], 0.0);
}

TEST(Beurling, OversizedRadiusOmitted) {
  const DensityReport r =
      beurling_densities(BandwidthProfile::constant(), PointSet(integers(0, 10)), {2.0, 50.0}, 1.0);
  EXPECT_EQ(r.radii.size(), 1u);
  ASSERT_EQ(r.omitted.size(), 1u);
  EXPECT_EQ(r.omitted[0], 50.0);
}

TEST(Beurling, CountsMonotoneInRadius) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> xd(-50.0, 50.0);
  std::vector<double> pts(300);
  for (auto& x : pts) x = xd(rng);
  const PointSet X(pts);
  for (double c = -20; c <= 20; c += 0.7) {
    std::size_t prev = 0;
    for (double r : {1.0, 2.0, 4.0, 8.0}) {
      const std::size_t n = X.count(c - r, c + r);
      ASSERT_GE(n, prev);
      prev = n;
    }
  }
}

TEST(MuUniform, JitterStaysSortedAndSeeded) {
  const BandwidthProfile p = figure_profile();
  const PointSet a = mu_uniform_points(p, -20.0, 20.0, 2.0, 0.4, 7);
  const PointSet b = mu_uniform_points(p, -20.0, 20.0, 2.0, 0.4, 7);
  const PointSet c = mu_uniform_points(p, -20.0, 20.0, 2.0, 0.4, 8);
  EXPECT_EQ(a.points(), b.points());
  EXPECT_NE(a.points(), c.points());
  for (double x : a.points()) {
    EXPECT_GE(x, -20.0);
    EXPECT_LE(x, 20.0);
  }
  EXPECT_NEAR(static_cast<double>(a.size()), 2.0 * p.mu(-20.0, 20.0), 1.0);
}

TEST(Trace, ConstantProfileIsExact) {
  const double omega = 3.0;
  const KernelEvaluator ev(BandwidthProfile::constant(), SpectralSet::band(omega));
  EXPECT_NEAR(averaged_trace(ev, -7.0, 11.0), std::sqrt(omega) / kPi, 1e-12);
  const TraceReport r = trace_convergence_report(ev, {10.0, 20.0});
  for (const auto& row : r.rows) EXPECT_LT(row.error, 1e-12);
}

TEST(Trace, AdditiveOverPartition) {
  const KernelEvaluator ev(figure_profile(), SpectralSet::band(kPi * kPi));
  const BandwidthProfile& p = ev.profile();
  const double whole = averaged_trace(ev, -10.0, 10.0) * p.mu(-10.0, 10.0);
  double parts = 0.0;
  for (auto [a, b] : {std::pair{-10.0, -4.5}, {-4.5, 1.0}, {1.0, 10.0}})
    parts += averaged_trace(ev, a, b) * p.mu(a, b);
  EXPECT_NEAR(whole, parts, 1e-10 * whole);
}

TEST(Trace, IndependentOfRefinement) {
  const KernelEvaluator ev(figure_profile(), SpectralSet::band(kPi * kPi));
  const double a = averaged_trace(ev, -20.0, 20.0, 10);
  const double b = averaged_trace(ev, -20.0, 20.0, 20);
  EXPECT_NEAR(a, b, 1e-9 * a);
}

TEST(Trace, BetweenDiagonalBounds) {
  const KernelEvaluator ev(figure_profile(), SpectralSet::band(kPi * kPi));
  const BandwidthProfile& p = ev.profile();
  double lo = INFINITY, hi = 0.0;
  for (int i = -400; i <= 400; ++i) {
    lo = std::min(lo, ev.diagonal(0.05 * i));
    hi = std::max(hi, ev.diagonal(0.05 * i));
  }
  const double t = averaged_trace(ev, -20.0, 20.0) * p.mu(-20.0, 20.0) / 40.0;
  EXPECT_GE(t, lo);
  EXPECT_LE(t, hi);
}

TEST(Trace, FigureParametersConverge) {
  const KernelEvaluator ev(figure_profile(), SpectralSet::band(kPi * kPi));
  const TraceReport r = trace_convergence_report(ev, {10.0, 20.0, 40.0, 80.0});
  EXPECT_DOUBLE_EQ(r.critical, 1.0);
  EXPECT_TRUE(r.error_decreasing);
  EXPECT_FALSE(r.growth);
  EXPECT_LE(r.rows.back().error, 0.05);
  for (const auto& row : r.rows) EXPECT_LE(row.bound_ratio, 3.0 * r.rows.front().bound_ratio);
}

// One jump: kappa is constant so the diagonal is an elementary sum of sincs;
// compare the report against direct averaging of that closed expression.
TEST(Trace, SingleJumpAgainstElementaryDiagonal) {
  const BandwidthProfile p({0.0}, {1.0, 0.25});  // q = 1, 2
  const double omega = 1.0;
  const KernelEvaluator ev(p, SpectralSet::band(omega));
  ASSERT_EQ(ev.j_evaluator().mode(), JMode::elementary);
  const double kap = ev.kappa()(0.3);
  // on I_0: h1 = q_0 kappa, h2 = conj(a_0^+) b_0^+ / q_0 with b_0^- = 1, a_0^- = 0
  const ConnectionTable& t = ev.table();
  const double w = std::sqrt(omega);
  for (double y : {-5.0, -1.3}) {
    const cplx h2 = std::conj(t.aplus(0)(1.0)) * t.bplus(0)(1.0);  // constant for one jump
    const double expect = w / kPi + (h2 / kap * std::polar(1.0, -w * y) *
                                     testing::sinc(w * y) * (w / kPi)).real();
    EXPECT_NEAR(ev.diagonal(y), expect, 1e-12);
  }
  const TraceReport r = trace_convergence_report(ev, {10.0, 20.0, 40.0, 80.0});
  EXPECT_TRUE(r.error_decreasing);
  EXPECT_LE(r.rows.back().error, 0.05);
}

}  // namespace
}  // namespace vbpw
