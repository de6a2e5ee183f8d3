#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "vbpw/errors.hpp"
#include "vbpw/spectral.hpp"

namespace vbpw {
namespace {

using testing::figure_profile;
using testing::kPi;
using testing::random_profile;

JEvaluator make_j(const BandwidthProfile& p, const SpectralSet& set, JOptions o = {}) {
  return JEvaluator(p, kappa_of(p, ConnectionTable::build(p)), set, o);
}

// Composite Simpson rule on a fine uniform grid, written independently of the
// library quadrature.
cplx simpson_j(const Kappa& kappa, double a, double b, double s, int n = 200000) {
  const double h = (b - a) / n;
  cplx acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = a + h * i;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::polar(1.0 / kappa(u), s * u);
  }
  return acc * h / 3.0 / (2.0 * kPi);
}

// 2F1((k+1)/2, (k+2)/2; k+1; z) by its defining power series.
double hyp2f1(double a, double b, double c, double z) {
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < 20000; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

BandwidthProfile random_two_jump(std::mt19937_64& rng) { return random_profile(rng, 2, -5.0, 5.0, 0.25, 4.0); }

TEST(SpectralSet, Validation) {
  EXPECT_THROW(SpectralSet({}), ValidationError);
  EXPECT_THROW(SpectralSet({{-1.0, 1.0}}), ValidationError);
  EXPECT_THROW(SpectralSet({{2.0, 2.0}}), ValidationError);
  EXPECT_THROW(SpectralSet({{0.0, 2.0}, {1.0, 3.0}}), ValidationError);
  EXPECT_THROW(SpectralSet({{0.0, INFINITY}}), ValidationError);
}

TEST(SpectralSet, MeasuresAndOrdering) {
  const SpectralSet s({{9.0, 16.0}, {0.0, 1.0}});
  EXPECT_EQ(s.intervals().front().first, 0.0);
  EXPECT_DOUBLE_EQ(s.sqrt_measure(), 2.0);
  EXPECT_DOUBLE_EQ(s.critical_density(), 2.0 / kPi);
  EXPECT_FALSE(s.is_band());
  EXPECT_TRUE(SpectralSet::band(kPi * kPi).is_band());
  EXPECT_DOUBLE_EQ(SpectralSet::band(kPi * kPi).critical_density(), 1.0);
}

TEST(Kappa, ConstantProfile) {
  const BandwidthProfile p = BandwidthProfile::constant(4.0);  // q = 1/2
  const Kappa k = kappa_of(p, ConnectionTable::build(p));
  EXPECT_TRUE(k.is_constant());
  EXPECT_DOUBLE_EQ(k(3.0), 4.0);
  EXPECT_DOUBLE_EQ(k.lower_bound, 4.0);
}

TEST(Kappa, FigureProfileCosineView) {
  const BandwidthProfile p = figure_profile();
  const Kappa k = kappa_of(p, ConnectionTable::build(p));
  EXPECT_NEAR(k.cosine.constant, 1.28125, 1e-14);
  ASSERT_EQ(k.cosine.terms.size(), 1u);
  EXPECT_NEAR(k.cosine.terms[0].first, -0.28125, 1e-14);
  EXPECT_NEAR(k.cosine.terms[0].second, 24.0, 1e-13);
  const SeriesParameters sp = series_parameters(p);
  EXPECT_DOUBLE_EQ(sp.C, 1.28125);
  EXPECT_DOUBLE_EQ(sp.K, -0.28125);
  EXPECT_DOUBLE_EQ(sp.zeta, 24.0);
}

TEST(Kappa, TwoJumpFrequenciesAreZeroAndZeta) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const BandwidthProfile p = random_two_jump(rng);
    const Kappa k = kappa_of(p, ConnectionTable::build(p));
    const SeriesParameters sp = series_parameters(p);
    ASSERT_EQ(k.cosine.terms.size(), 1u);
    EXPECT_NEAR(k.cosine.terms[0].second, 2 * p.q(1) * (p.knot(2) - p.knot(1)), 1e-12);
    EXPECT_NEAR(k.cosine.constant, sp.C, 1e-12);
    EXPECT_NEAR(k.cosine.terms[0].first, sp.K, 1e-12);
  }
}

TEST(Kappa, BoundedBelow) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const BandwidthProfile p = random_profile(rng, trial % 6);
    const Kappa k = kappa_of(p, ConnectionTable::build(p));
    for (int i = 1; i <= 400; ++i) ASSERT_GE(k(0.05 * i), k.lower_bound * (1 - 1e-12));
  }
}

TEST(Kappa, SeriesParametersNeedTwoJumps) {
  EXPECT_THROW(series_parameters(BandwidthProfile({0.0}, {1.0, 2.0})), ValidationError);
}

TEST(SpectralDensity, DiagonalFormula) {
  const BandwidthProfile p = figure_profile();
  const Kappa k = kappa_of(p, ConnectionTable::build(p));
  const double lambda = 2.25;
  const Mat2r m = spectral_density_matrix(k, p, lambda);
  const double base = 1.0 / (4 * kPi * k(1.5) * 1.5);
  EXPECT_NEAR(m[0][0], base / p.q(0), 1e-15);
  EXPECT_NEAR(m[1][1], base / p.q(2), 1e-15);
  EXPECT_EQ(m[0][1], 0.0);
  EXPECT_THROW(spectral_density_matrix(k, p, 0.0), ValidationError);
}

TEST(JFunction, ElementaryForConstantKappa) {
  const double omega = 4.0;
  const JEvaluator j = make_j(BandwidthProfile::constant(), SpectralSet::band(omega));
  EXPECT_EQ(j.mode(), JMode::elementary);
  EXPECT_NEAR(std::abs(j(0.0) - cplx(1.0 / kPi)), 0.0, 1e-15);
  for (double s : {-3.0, 0.5, 7.0}) {
    const cplx expect = (std::polar(1.0, 2.0 * s) - 1.0) / cplx(0.0, s) / (2 * kPi);
    EXPECT_LT(std::abs(j(s) - expect), 1e-14);
    EXPECT_LT(std::abs(j(s) - j_quadrature(j.kappa(), j.spectral_set(), s)), 1e-13);
  }
}

TEST(JFunction, ConjugateSymmetry) {
  const JEvaluator j = make_j(figure_profile(), SpectralSet::band(kPi * kPi));
  for (double s : {0.3, 5.0, 23.7, 48.0}) EXPECT_LT(std::abs(j(-s) - std::conj(j(s))), 1e-12);
}

TEST(JFunction, ModeSelection) {
  const BandwidthProfile p = figure_profile();
  EXPECT_EQ(make_j(p, SpectralSet::band(kPi * kPi)).mode(), JMode::series);
  EXPECT_EQ(make_j(p, SpectralSet({{1.0, 4.0}})).mode(), JMode::quadrature);
  EXPECT_EQ(make_j(BandwidthProfile({-1.0, 0.0, 1.0}, {1.0, 2.0, 0.5, 1.0}), SpectralSet::band(1.0)).mode(),
            JMode::quadrature);
  JOptions forced;
  forced.mode = JMode::quadrature;
  EXPECT_EQ(make_j(p, SpectralSet::band(kPi * kPi), forced).mode(), JMode::quadrature);
  forced.mode = JMode::series;
  EXPECT_THROW(make_j(p, SpectralSet({{1.0, 4.0}}), forced), ValidationError);
}

TEST(JFunction, SeriesAgreesWithIndependentSimpson) {
  const JEvaluator j = make_j(figure_profile(), SpectralSet::band(kPi * kPi));
  for (double s : {0.0, 1.0, 6.5, 24.0, -31.0}) {
    const cplx ref = simpson_j(j.kappa(), 0.0, kPi, s);
    EXPECT_LT(std::abs(j.series(s, 1e-12).value - ref), 1e-10) << s;
  }
}

TEST(JFunction, SeriesAgreesWithQuadratureForRandomProfiles) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> sd(-50.0, 50.0);
  int tested = 0;
  while (tested < 3) {
    const BandwidthProfile p = random_two_jump(rng);
    if (std::abs(series_parameters(p).R) > 0.9) continue;
    ++tested;
    const JEvaluator j = make_j(p, SpectralSet::band(2.0 + tested));
    for (int i = 0; i < 40; ++i) {
      const double s = sd(rng);
      EXPECT_LE(std::abs(j.series(s, 1e-10).value - j.quadrature(s)), 1e-9);
    }
  }
}

TEST(JFunction, BoundDominatesEveryPartialSum) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 3; ++trial) {
    const BandwidthProfile p = random_two_jump(rng);
    if (std::abs(series_parameters(p).R) > 0.9) continue;
    const JEvaluator j = make_j(p, SpectralSet::band(3.0));
    const int M = j.series_terms(1e-10);
    for (double s : {-17.0, 0.0, 4.2, 33.3}) {
      const cplx ref = j.quadrature(s);
      for (int m = 0; m <= M; ++m) {
        ASSERT_LE(std::abs(j.series_partial(s, m) - ref), j.series_bound(m) + 1e-12);
      }
    }
  }
}

TEST(JFunction, BatchSeriesMatchesScalar) {
  const JEvaluator j = make_j(figure_profile(), SpectralSet::band(kPi * kPi));
  const std::vector<double> s = {-4.0, 0.0, 2.5, 30.0};
  const auto batch = j.series(s, 1e-10);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const SeriesValue v = j.series(s[i], 1e-10);
    EXPECT_EQ(batch[i].terms, v.terms);
    EXPECT_LT(std::abs(batch[i].value - v.value), 1e-15);
  }
}

TEST(JFunction, KZeroReducesToSinc) {
  // q_1 = q_0 makes K vanish even with a genuine second jump
  const BandwidthProfile p({-1.0, 2.0}, {1.0, 1.0, 0.25});
  const SeriesParameters sp = series_parameters(p);
  EXPECT_NEAR(sp.K, 0.0, 1e-15);
  const double omega = 9.0;
  const JEvaluator j = make_j(p, SpectralSet::band(omega));
  for (double s : {-2.0, 0.0, 1.1}) {
    EXPECT_NEAR(j.jr(s), 3.0 / (2 * kPi * sp.C) * testing::sinc(3.0 * s), 1e-14);
  }
}

TEST(JFunction, JrCoefficientsMatchHypergeometricForm) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 5; ++trial) {
    const BandwidthProfile p = random_two_jump(rng);
    const SeriesParameters sp = series_parameters(p);
    if (std::abs(sp.R) > 0.9) continue;
    const double omega = 2.0;
    const JEvaluator j = make_j(p, SpectralSet::band(omega));
    const auto c = j.jr_coefficients(6);
    for (int k = -6; k <= 6; ++k) {
      const int a = std::abs(k);
      const double expect = std::sqrt(omega) / (2 * sp.C * kPi) * std::pow(-sp.R / 2, a) *
                            hyp2f1((a + 1) / 2.0, (a + 2) / 2.0, a + 1.0, sp.R * sp.R);
      EXPECT_NEAR(c[k + 6], expect, 1e-14 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST(JFunction, JrCoefficientSignsFollowR) {
  const JEvaluator j = make_j(figure_profile(), SpectralSet::band(kPi * kPi));
  const auto c = j.jr_coefficients(4);
  for (int k = 0; k <= 4; ++k) EXPECT_GT(c[4 + k], 0.0);  // R < 0
}

TEST(JFunction, JrIsRealPartOfJ) {
  const JEvaluator j = make_j(figure_profile(), SpectralSet::band(kPi * kPi));
  for (double s : {0.0, 0.5, 12.0, 24.0, 47.5}) EXPECT_NEAR(j.jr(s), j(s).real(), 1e-12);
}

TEST(JFunction, JrZerosAtNonMultiplesOfZeta) {
  const JEvaluator j = make_j(figure_profile(), SpectralSet::band(kPi * kPi));
  for (int s = -50; s <= 50; ++s) {
    if (s % 24 == 0) {
      EXPECT_GT(j.jr(s), 1e-3);
    } else {
      EXPECT_LE(std::abs(j.jr(s)), 1e-12) << s;
    }
  }
}

TEST(JFunction, NodeTablesAgreeWithAdaptiveAcrossTiers) {
  JOptions o;
  o.mode = JMode::quadrature;
  const JEvaluator j = make_j(figure_profile(), SpectralSet({{0.5, 4.0}, {6.0, 9.0}}), o);
  for (double s : {0.0, 20.0, 31.9, 100.0, 400.0, 600.0}) {
    EXPECT_LT(std::abs(j(s) - j.quadrature(s)), 1e-11) << s;
  }
}

TEST(JFunction, MultiIntervalAgainstSimpson) {
  const BandwidthProfile p({-1.0, 0.5, 2.0}, {1.0, 0.5, 2.0, 1.0});
  const JEvaluator j = make_j(p, SpectralSet({{0.25, 1.0}, {2.25, 4.0}}));
  for (double s : {0.0, 3.0, -7.0}) {
    const cplx ref = simpson_j(j.kappa(), 0.5, 1.0, s) + simpson_j(j.kappa(), 1.5, 2.0, s);
    EXPECT_LT(std::abs(j(s) - ref), 1e-10);
  }
}

}  // namespace
}  // namespace vbpw
