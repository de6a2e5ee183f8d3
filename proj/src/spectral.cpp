#include "vbpw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vbpw/errors.hpp"

namespace vbpw {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// e^{i h sigma} sinc(h sigma): (1/2h) int_0^{2h} e^{i sigma u} du
cplx half_exp_sinc(double h, double sigma) {
  const double x = h * sigma;
  return std::polar(sinc(x), x);
}

}  // namespace

SpectralSet::SpectralSet(std::vector<std::pair<double, double>> intervals)
    : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw ValidationError("spectral set: no intervals");
  for (const auto& [a, b] : intervals_) {
    if (!std::isfinite(a) || !std::isfinite(b))
      throw ValidationError("spectral set: endpoints must be finite");
    if (a < 0.0) throw ValidationError("spectral set: intervals must lie in [0, inf)");
    if (!(a < b)) throw ValidationError("spectral set: each interval needs a < b");
  }
  std::sort(intervals_.begin(), intervals_.end());
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    if (intervals_[i].first < intervals_[i - 1].second)
      throw ValidationError("spectral set: intervals overlap");
  }
}

SpectralSet SpectralSet::band(double omega) { return SpectralSet({{0.0, omega}}); }

std::vector<std::pair<double, double>> SpectralSet::sqrt_image() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(intervals_.size());
  for (const auto& [a, b] : intervals_) out.emplace_back(std::sqrt(a), std::sqrt(b));
  return out;
}

double SpectralSet::sqrt_measure() const {
  double m = 0.0;
  for (const auto& [a, b] : intervals_) m += std::sqrt(b) - std::sqrt(a);
  return m;
}

double SpectralSet::critical_density() const { return sqrt_measure() / kPi; }

bool SpectralSet::is_band() const {
  return intervals_.size() == 1 && intervals_.front().first == 0.0;
}

double Kappa::operator()(double u) const {
  double v = cosine.constant;
  for (const auto& [c, lambda] : cosine.terms) v += c * std::cos(lambda * u);
  return v;
}

Kappa kappa_of(const BandwidthProfile& profile, const ConnectionTable& table) {
  const std::size_t n = profile.jumps();
  const double q0 = profile.q(0);
  const double qn = profile.q(n);
  Kappa k;
  k.poly = (1.0 / (q0 * q0)) * table.aplus(0).modulus_squared();
  k.cosine = k.poly.cosine_view();
  k.lower_bound = 1.0 / (q0 * qn);

  const APPoly other = (1.0 / (qn * qn)) * table.bminus(n).modulus_squared();
  for (int i = 1; i <= 400; ++i) {
    const double u = 0.05 * i;
    const cplx a = k.poly(u);
    const cplx b = other(u);
    const double scale = std::max(1.0, std::abs(a));
    if (std::abs(a - b) > 1e-11 * scale) {
      throw NumericalError("kappa: |a_0^+|^2/q_0^2 and |b_n^-|^2/q_n^2 disagree at u = " +
                               std::to_string(u),
                           std::abs(a - b));
    }
  }
  return k;
}

Mat2r spectral_density_matrix(const Kappa& kappa, const BandwidthProfile& profile,
                              double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("spectral density: lambda must be > 0");
  const double root = std::sqrt(lambda);
  const double common = 1.0 / (4.0 * kPi * kappa(root) * root);
  return Mat2r{{{common / profile.q(0), 0.0}, {0.0, common / profile.q(profile.jumps())}}};
}

AdaptiveResult j_quadrature_detailed(const Kappa& kappa, const SpectralSet& set, double s,
                                     double panel_tolerance) {
  const double rate = std::abs(s) + kappa.max_frequency();
  auto integrand = [&](double u) { return std::polar(1.0 / kappa(u), s * u); };
  AdaptiveResult total;
  for (const auto& [a, b] : set.sqrt_image()) {
    AdaptiveOptions opts;
    opts.panel_tolerance = panel_tolerance;
    opts.max_panel_width = rate > 0.0 ? kPi / (4.0 * rate) : b - a;
    const AdaptiveResult r = integrate_adaptive(integrand, a, b, opts);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.panels += r.panels;
  }
  total.value /= 2.0 * kPi;
  total.error_estimate /= 2.0 * kPi;
  return total;
}

cplx j_quadrature(const Kappa& kappa, const SpectralSet& set, double s) {
  return j_quadrature_detailed(kappa, set, s).value;
}

SeriesParameters series_parameters(const BandwidthProfile& profile) {
  if (profile.jumps() != 2)
    throw ValidationError("series parameters need a profile with exactly two jumps");
  const double q0 = profile.q(0);
  const double q1 = profile.q(1);
  const double q2 = profile.q(2);
  const double T = profile.knot(2) - profile.knot(1);
  SeriesParameters p;
  const double plus = (1.0 + q0 / q1) * (1.0 + q1 / q2);
  const double minus = (1.0 - q0 / q1) * (1.0 - q1 / q2);
  p.C = (plus * plus + minus * minus) / (16.0 * q0 * q0);
  p.K = (1.0 - q0 * q0 / (q1 * q1)) * (1.0 - q1 * q1 / (q2 * q2)) / (8.0 * q0 * q0);
  p.zeta = 2.0 * q1 * T;
  p.R = p.K / p.C;
  return p;
}

const char* to_string(JMode mode) {
  switch (mode) {
    case JMode::elementary: return "elementary";
    case JMode::series: return "series";
    case JMode::quadrature: return "quadrature";
  }
  return "?";
}

JEvaluator::JEvaluator(const BandwidthProfile& profile, Kappa kappa, SpectralSet set,
                       JOptions options)
    : kappa_(std::move(kappa)), set_(std::move(set)), mode_(JMode::quadrature) {
  if (profile.jumps() == 2) {
    const SeriesParameters p = vbpw::series_parameters(profile);
    // the closed formulas must reproduce the symbolic kappa exactly
    const double scale = std::max(1.0, std::abs(p.C));
    double symbolic_k = 0.0;
    bool ok = std::abs(kappa_.cosine.constant - p.C) <= 1e-12 * scale;
    if (kappa_.cosine.terms.size() > 1) ok = false;
    if (kappa_.cosine.terms.size() == 1) {
      symbolic_k = kappa_.cosine.terms[0].first;
      ok = ok && std::abs(kappa_.cosine.terms[0].second - p.zeta) <=
                     1e-12 * std::max(1.0, p.zeta);
    }
    ok = ok && std::abs(symbolic_k - p.K) <= 1e-12 * scale;
    if (!ok) {
      throw NumericalError("kappa cosine view does not match C + K cos(zeta u)",
                           std::abs(symbolic_k - p.K));
    }
    series_ = p;
  }

  const bool series_ok = series_ && set_.is_band() && std::abs(series_->R) < 1.0;
  if (options.mode) {
    mode_ = *options.mode;
    if (mode_ == JMode::elementary && !kappa_.is_constant())
      throw ValidationError("elementary J needs a constant kappa");
    if (mode_ == JMode::series && !series_ok)
      throw ValidationError("series J needs two jumps and Lambda = [0, Omega]");
  } else if (kappa_.is_constant()) {
    mode_ = JMode::elementary;
  } else if (series_ok && std::abs(series_->R) <= options.max_series_ratio) {
    mode_ = JMode::series;
  }

  if (series_ok) {
    const int kmax_limit = 100000;
    std::vector<double> c;
    const double w = std::sqrt(set_.omega());
    const double scale = w / (2.0 * series_->C * kPi);
    const double x = -series_->R / 2.0;
    for (int k = 0; k < kmax_limit; ++k) {
      // sum_j C(2j+k, j) x^{2j+k}
      double term = std::pow(x, k);
      double sum = term;
      for (int j = 0; j < 100000 && term != 0.0; ++j) {
        term *= x * x * (2.0 * j + k + 1) * (2.0 * j + k + 2) /
                ((j + 1.0) * (j + k + 1.0));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
      }
      c.push_back(scale * sum);
      if (std::abs(c.back()) <= 1e-18 * std::abs(c.front())) break;
    }
    jr_c_ = std::move(c);
  }

  if (mode_ == JMode::series) {
    series_M_ = series_terms(options.series_eps);
    series_d_ = series_weights(series_M_);
  }

  if (mode_ == JMode::quadrature) {
    const auto& rule = gauss_legendre_15();
    const double f = kappa_.max_frequency();
    for (const double s_max : {32.0, 128.0, 512.0}) {
      NodeTable t;
      t.s_max = s_max;
      for (const auto& [a, b] : set_.sqrt_image()) {
        const auto panels = static_cast<std::size_t>(
            std::max(1.0, std::ceil((b - a) * (s_max + 4.0 * f) / kPi)));
        const double h = (b - a) / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
          const double lo = a + h * static_cast<double>(p);
          for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double u = lo + 0.5 * h * (rule.nodes[i] + 1.0);
            t.nodes.push_back(u);
            t.weights.push_back(0.5 * h * rule.weights[i] / (2.0 * kPi * kappa_(u)));
          }
        }
      }
      tables_.push_back(std::move(t));
    }
  }
}

const SeriesParameters& JEvaluator::series_parameters() const {
  if (!series_) throw ValidationError("series data needs a profile with two jumps");
  return *series_;
}

cplx JEvaluator::operator()(double s) const {
  switch (mode_) {
    case JMode::elementary: return elementary(s);
    case JMode::series: {
      const double w = std::sqrt(set_.omega());
      return series_sum(series_d_, 0.5 * w, series_->zeta,
                        w / (2.0 * series_->C * kPi), s);
    }
    case JMode::quadrature: return tabulated(s);
  }
  return {};
}

cplx JEvaluator::elementary(double s) const {
  cplx acc;
  for (const auto& [a, b] : set_.sqrt_image()) {
    acc += (b - a) * std::polar(sinc(0.5 * s * (b - a)), 0.5 * s * (a + b));
  }
  return acc / (2.0 * kPi * kappa_.cosine.constant);
}

cplx JEvaluator::tabulated(double s) const {
  for (const auto& t : tables_) {
    if (std::abs(s) <= t.s_max) {
      cplx acc;
      for (std::size_t i = 0; i < t.nodes.size(); ++i)
        acc += t.weights[i] * std::polar(1.0, s * t.nodes[i]);
      return acc;
    }
  }
  return j_quadrature(kappa_, set_, s);
}

double JEvaluator::series_bound(int M) const {
  const SeriesParameters& p = series_parameters();
  const double r = std::abs(p.R);
  if (r >= 1.0) throw NumericalError("series J: |R| >= 1", r);
  const double w = std::sqrt(set_.omega());
  return w / (2.0 * p.C * kPi) * std::pow(r, M + 1) / (1.0 - r);
}

int JEvaluator::series_terms(double eps) const {
  if (!(eps > 0.0)) throw ValidationError("series J: eps must be > 0");
  if (!set_.is_band()) throw ValidationError("series J needs Lambda = [0, Omega]");
  if (series_parameters().R == 0.0) return 0;
  int M = 0;
  while (series_bound(M) > eps) {
    if (++M > 1000000) throw NumericalError("series J: truncation index too large");
  }
  return M;
}

std::vector<double> JEvaluator::series_weights(int M) const {
  // Pascal rows of (-R/2)^m C(m, l); by symmetry only k = m - 2l >= 0 is kept
  const double x = -series_parameters().R / 2.0;
  std::vector<double> d(static_cast<std::size_t>(M) + 1, 0.0);
  std::vector<double> row{1.0};
  for (int m = 0; m <= M; ++m) {
    for (int l = 0; 2 * l <= m; ++l) d[static_cast<std::size_t>(m - 2 * l)] += row[l];
    std::vector<double> next(row.size() + 1, 0.0);
    for (std::size_t l = 0; l < next.size(); ++l) {
      const double left = l < row.size() ? row[l] : 0.0;
      const double right = l > 0 ? row[l - 1] : 0.0;
      next[l] = x * (left + right);
    }
    row = std::move(next);
  }
  return d;
}

cplx JEvaluator::series_sum(const std::vector<double>& d, double half_w, double zeta,
                            double scale, double s) {
  cplx acc = d[0] * half_exp_sinc(half_w, s);
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (d[k] == 0.0) continue;
    const double shift = static_cast<double>(k) * zeta;
    acc += d[k] * (half_exp_sinc(half_w, s + shift) + half_exp_sinc(half_w, s - shift));
  }
  return scale * acc;
}

SeriesValue JEvaluator::series(double s, double eps) const {
  SeriesValue v;
  v.terms = series_terms(eps);
  v.bound = series_bound(v.terms);
  v.value = series_partial(s, v.terms);
  return v;
}

std::vector<SeriesValue> JEvaluator::series(const std::vector<double>& s, double eps) const {
  const SeriesParameters& p = series_parameters();
  const int M = series_terms(eps);
  const double bound = series_bound(M);
  const std::vector<double> d = series_weights(M);
  const double w = std::sqrt(set_.omega());
  std::vector<SeriesValue> out;
  out.reserve(s.size());
  for (double si : s)
    out.push_back({series_sum(d, 0.5 * w, p.zeta, w / (2.0 * p.C * kPi), si), M, bound});
  return out;
}

cplx JEvaluator::series_partial(double s, int M) const {
  if (M < 0) throw ValidationError("series J: M must be >= 0");
  const SeriesParameters& p = series_parameters();
  if (!set_.is_band()) throw ValidationError("series J needs Lambda = [0, Omega]");
  const double w = std::sqrt(set_.omega());
  return series_sum(series_weights(M), 0.5 * w, p.zeta, w / (2.0 * p.C * kPi), s);
}

std::vector<double> JEvaluator::jr_coefficients(int kmax) const {
  if (jr_c_.empty()) throw ValidationError("J_r coefficients need two jumps and Lambda = [0, Omega]");
  if (kmax < 0) throw ValidationError("J_r coefficients: kmax must be >= 0");
  std::vector<double> out(2 * static_cast<std::size_t>(kmax) + 1, 0.0);
  for (int k = 0; k <= kmax && static_cast<std::size_t>(k) < jr_c_.size(); ++k) {
    out[kmax + k] = jr_c_[k];
    out[kmax - k] = jr_c_[k];
  }
  return out;
}

double JEvaluator::jr(double s) const {
  if (jr_c_.empty()) throw ValidationError("J_r needs two jumps and Lambda = [0, Omega]");
  const double w = std::sqrt(set_.omega());
  const double zeta = series_->zeta;
  double acc = jr_c_[0] * sinc(w * s);
  for (std::size_t k = 1; k < jr_c_.size(); ++k) {
    const double shift = static_cast<double>(k) * zeta;
    acc += jr_c_[k] * (sinc(w * (s - shift)) + sinc(w * (s + shift)));
  }
  return acc;
}

}  // namespace vbpw
