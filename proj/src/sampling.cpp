#include "vbpw/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vbpw/errors.hpp"

namespace vbpw {

namespace {

Eigen::MatrixXd kernel_matrix(const KernelEvaluator& ev, const std::vector<double>& rows,
                              const std::vector<double>& cols) {
  Eigen::MatrixXd m(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = ev(rows[i], cols[j]);
  return m;
}

}  // namespace

GramSystem::GramSystem(const KernelEvaluator& ev, const GridSpec& spec) {
  if (spec.margin_fraction < 0.0 || spec.margin_fraction >= 1.0)
    throw ValidationError("gram system: margin fraction must lie in [0, 1)");
  const double margin = 0.5 * spec.margin_fraction * (spec.hi - spec.lo);
  const double lo = spec.lo + margin;
  const double hi = spec.hi - margin;
  if (!(hi > lo)) throw ValidationError("gram system: window is empty after the margin");
  if (!(spec.oversampling > 0.0)) throw ValidationError("gram system: oversampling must be > 0");
  const double gap = std::numbers::pi / (spec.oversampling * ev.spectral_set().sqrt_measure());
  const BandwidthProfile& p = ev.profile();
  const double total = p.mu(lo, hi);
  for (double m = 0.0; m <= total + 1e-12; m += gap) y_.push_back(p.mu_advance(lo, m));

  const auto n = static_cast<Eigen::Index>(y_.size());
  g_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      g_(i, j) = ev(y_[i], y_[j]);
      g_(j, i) = g_(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g_);
  if (es.info() != Eigen::Success) throw NumericalError("gram system: eigen-solve failed");
  eigenvalues_ = es.eigenvalues();
  const double cut = spec.threshold * eigenvalues_(n - 1);
  Eigen::Index first = 0;
  while (first < n && !(eigenvalues_(first) > cut)) ++first;
  if (first == n || !(eigenvalues_(n - 1) > 0.0))
    throw NumericalError("gram system: numerically rank 0 after thresholding");
  const Eigen::Index r = n - first;
  basis_ = es.eigenvectors().rightCols(r) *
           eigenvalues_.tail(r).cwiseSqrt().cwiseInverse().asDiagonal();
}

FrameBounds empirical_frame_bounds(const KernelEvaluator& ev, const GramSystem& gram,
                                   const PointSet& X) {
  if (X.empty()) throw ValidationError("frame bounds: empty point set");
  const Eigen::MatrixXd kb = kernel_matrix(ev, X.points(), gram.grid()) * gram.basis();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kb.transpose() * kb,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("frame bounds: eigen-solve failed");
  FrameBounds fb;
  fb.A_hat = std::max(0.0, es.eigenvalues()(0));
  fb.B_hat = std::max(fb.A_hat, es.eigenvalues()(es.eigenvalues().size() - 1));
  fb.retained = gram.retained();
  return fb;
}

FrameBounds empirical_frame_bounds(const KernelEvaluator& ev, const PointSet& X,
                                   const GridSpec& spec) {
  return empirical_frame_bounds(ev, GramSystem(ev, spec), X);
}

Conditioning interpolation_conditioning(const KernelEvaluator& ev, const PointSet& X) {
  if (X.empty()) throw ValidationError("interpolation conditioning: empty point set");
  const auto& pts = X.points();
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i] == pts[i - 1]) throw ValidationError("interpolation conditioning: duplicate points");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kernel_matrix(ev, pts, pts),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("interpolation conditioning: eigen-solve failed");
  Conditioning c;
  c.lambda_min = es.eigenvalues()(0);
  c.lambda_max = es.eigenvalues()(es.eigenvalues().size() - 1);
  c.cond = c.lambda_min > 0.0 ? c.lambda_max / c.lambda_min : INFINITY;
  return c;
}

std::vector<SweepRow> density_sweep(const KernelEvaluator& ev,
                                    const std::vector<double>& factors,
                                    const SweepOptions& options) {
  for (double f : factors)
    if (!(f > 0.0)) throw ValidationError("sweep: density factors must be > 0");
  if (options.trials == 0) throw ValidationError("sweep: need at least one trial");
  const double critical = ev.spectral_set().critical_density();
  std::vector<SweepRow> rows;
  for (double w : options.windows) {
    if (!(w > 0.0)) throw ValidationError("sweep: windows must be > 0");
    GridSpec spec = options.grid;
    spec.lo = -w;
    spec.hi = w;
    const GramSystem gram(ev, spec);
    for (double f : factors) {
      SweepRow row;
      row.factor = f;
      row.window = w;
      row.seed = options.seed;
      for (std::size_t t = 0; t < options.trials; ++t) {
        const PointSet X = mu_uniform_points(ev.profile(), -w, w, f * critical,
                                             options.jitter, options.seed + t);
        const FrameBounds fb = empirical_frame_bounds(ev, gram, X);
        const Conditioning c = interpolation_conditioning(ev, X);
        if (t == 0) {
          row.A_hat = fb.A_hat;
          row.B_hat = fb.B_hat;
          row.lambda_min = c.lambda_min;
        } else {
          row.A_hat = std::min(row.A_hat, fb.A_hat);
          row.B_hat = std::max(row.B_hat, fb.B_hat);
          row.lambda_min = std::min(row.lambda_min, c.lambda_min);
        }
      }
      rows.push_back(row);
    }
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.factor != b.factor ? a.factor < b.factor : a.window < b.window;
  });
  return rows;
}

}  // namespace vbpw
