#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "vbpw/appoly.hpp"
#include "vbpw/piecewise.hpp"
#include "vbpw/quadrature.hpp"
#include "vbpw/transfer.hpp"

namespace vbpw {

/// Finite union of disjoint bounded intervals Lambda in [0, inf), kept sorted.
class SpectralSet {
 public:
  /// Throws ValidationError for empty input, a < 0, a >= b, non-finite
  /// endpoints or overlapping intervals. Input order does not matter.
  explicit SpectralSet(std::vector<std::pair<double, double>> intervals);

  /// Lambda = [0, omega].
  static SpectralSet band(double omega);

  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

  /// Lambda^{1/2}: the intervals [sqrt a, sqrt b].
  std::vector<std::pair<double, double>> sqrt_image() const;

  /// |Lambda^{1/2}| = sum (sqrt b - sqrt a).
  double sqrt_measure() const;

  /// Critical density |Lambda^{1/2}| / pi.
  double critical_density() const;

  /// True for a single interval starting at 0.
  bool is_band() const;
  /// Right end of the last interval.
  double omega() const { return intervals_.back().second; }

 private:
  std::vector<std::pair<double, double>> intervals_;
};

/// Scalar spectral density kappa(u) = |a_0^+(u^2)|^2 / q_0^2.
struct Kappa {
  APPoly poly;
  CosineView cosine;
  double lower_bound = 0.0;  // 1/(q_0 q_n)

  /// Real part of poly(u).
  double operator()(double u) const;
  double max_frequency() const { return poly.max_abs_frequency(); }
  bool is_constant() const { return cosine.terms.empty(); }
};

/// Builds kappa from a_0^+ and checks it against |b_n^-|^2/q_n^2 on a u-grid;
/// disagreement beyond 1e-11 (relative to the size of kappa) throws
/// NumericalError.
Kappa kappa_of(const BandwidthProfile& profile, const ConnectionTable& table);

using Mat2r = std::array<std::array<double, 2>, 2>;

/// Density of dmu at lambda: diag(1/q_0, 1/q_n) / (4 pi kappa(sqrt lambda) sqrt lambda).
Mat2r spectral_density_matrix(const Kappa& kappa, const BandwidthProfile& profile,
                              double lambda);

/// J(s) = (1/2pi) int_{Lambda^{1/2}} e^{isu} / kappa(u) du by adaptive
/// 15-point Gauss-Legendre. Initial panels are at most
/// pi / (4(|s| + max kappa frequency)) wide.
AdaptiveResult j_quadrature_detailed(const Kappa& kappa, const SpectralSet& set, double s,
                                     double panel_tolerance = 1e-12);
cplx j_quadrature(const Kappa& kappa, const SpectralSet& set, double s);

/// kappa(u) = C + K cos(zeta u) for a two-jump profile, with R = K / C.
struct SeriesParameters {
  double C = 0.0;
  double K = 0.0;
  double zeta = 0.0;
  double R = 0.0;
};

/// C, K, zeta from the closed formulas in q_0, q_1, q_2 and T = t_2 - t_1.
/// Throws ValidationError unless the profile has exactly two jumps.
SeriesParameters series_parameters(const BandwidthProfile& profile);

struct SeriesValue {
  cplx value;
  int terms = 0;       // truncation index M
  double bound = 0.0;  // a-priori bound on |J - J_M|
};

enum class JMode { elementary, series, quadrature };

const char* to_string(JMode mode);

struct JOptions {
  /// Unset: elementary for constant kappa, series for two jumps with
  /// Lambda = [0, Omega] and |R| <= max_series_ratio, quadrature otherwise.
  std::optional<JMode> mode;
  double max_series_ratio = 0.95;
  /// Target for the series truncation in series mode.
  double series_eps = 1e-14;
};

/// Evaluates J(s) for a fixed profile and spectral set.
///
/// Quadrature mode samples 1/kappa once on Gauss-Legendre node tables sized
/// for |s| up to 32, 128 and 512, and falls back to the adaptive rule beyond.
class JEvaluator {
 public:
  JEvaluator(const BandwidthProfile& profile, Kappa kappa, SpectralSet set,
             JOptions options = {});

  JMode mode() const { return mode_; }
  const Kappa& kappa() const { return kappa_; }
  const SpectralSet& spectral_set() const { return set_; }
  bool has_series() const { return series_.has_value(); }
  /// Throws ValidationError when series data is unavailable.
  const SeriesParameters& series_parameters() const;

  cplx operator()(double s) const;

  /// J_M with the smallest M whose a-priori bound is <= eps.
  SeriesValue series(double s, double eps) const;
  /// series(s, eps) for many s, sharing the truncation work.
  std::vector<SeriesValue> series(const std::vector<double>& s, double eps) const;
  /// The partial sum J_M for an explicit M.
  cplx series_partial(double s, int M) const;
  /// (Omega^{1/2} / 2 C pi) |R|^{M+1} / (1 - |R|).
  double series_bound(int M) const;
  /// Smallest M with series_bound(M) <= eps.
  int series_terms(double eps) const;

  /// c_k for k = -kmax..kmax (index k + kmax) so that
  /// Re J(s) = sum_k c_k sinc(Omega^{1/2}(s - k zeta)).
  std::vector<double> jr_coefficients(int kmax) const;

  /// Re J through the c_k expansion.
  double jr(double s) const;

  cplx quadrature(double s) const { return j_quadrature(kappa_, set_, s); }

 private:
  struct NodeTable {
    double s_max = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;  // GL weight / (2 pi kappa(node))
  };

  cplx elementary(double s) const;
  cplx tabulated(double s) const;
  std::vector<double> series_weights(int M) const;
  static cplx series_sum(const std::vector<double>& d, double half_w, double zeta,
                         double scale, double s);

  Kappa kappa_;
  SpectralSet set_;
  JMode mode_;
  std::optional<SeriesParameters> series_;
  // series mode: d_k for k = 0..M (d_{-k} = d_k) at the configured eps
  std::vector<double> series_d_;
  int series_M_ = 0;
  std::vector<double> jr_c_;  // c_k, k >= 0, until negligible
  std::vector<NodeTable> tables_;
};

}  // namespace vbpw
