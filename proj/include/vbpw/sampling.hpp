#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vbpw/density.hpp"
#include "vbpw/kernel.hpp"

namespace vbpw {

/// Reference grid for the finite model of the space: f = sum_i c_i k(y_i, .)
/// with Y mu_p-uniform in [lo, hi] shrunk on both sides by
/// margin_fraction * (hi - lo) / 2. Probe sets use the full window, so the
/// model functions that leak past the Y-window are still sampled.
struct GridSpec {
  double lo = -40.0;
  double hi = 40.0;
  /// Y has mu_p-spacing pi / (oversampling |Lambda^{1/2}|).
  double oversampling = 8.0;
  /// Eigenvalues of G below threshold * lambda_max are discarded.
  double threshold = 1e-10;
  double margin_fraction = 0.25;
};

/// Gram system of the reference grid. G = V diag(lambda) V^T is decomposed
/// once; the retained columns are pre-scaled so that c = B z has
/// c^T G c = |z|^2.
class GramSystem {
 public:
  /// Throws NumericalError when nothing survives the threshold.
  GramSystem(const KernelEvaluator& ev, const GridSpec& spec);

  const std::vector<double>& grid() const { return y_; }
  const Eigen::MatrixXd& gram() const { return g_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  std::size_t retained() const { return static_cast<std::size_t>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

 private:
  std::vector<double> y_;
  Eigen::MatrixXd g_;
  Eigen::VectorXd eigenvalues_;  // ascending
  Eigen::MatrixXd basis_;
};

struct FrameBounds {
  double A_hat = 0.0;
  double B_hat = 0.0;
  std::size_t retained = 0;
};

/// min and max of |K_XY c|^2 / c^T G c over the retained subspace of G.
FrameBounds empirical_frame_bounds(const KernelEvaluator& ev, const GramSystem& gram,
                                   const PointSet& X);
FrameBounds empirical_frame_bounds(const KernelEvaluator& ev, const PointSet& X,
                                   const GridSpec& spec);

struct Conditioning {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double cond = 0.0;
};

/// Extreme eigenvalues of [k(x_i, x_j)]. Throws ValidationError for duplicate
/// points.
Conditioning interpolation_conditioning(const KernelEvaluator& ev, const PointSet& X);

struct SweepRow {
  double factor = 0.0;
  double window = 0.0;  // half-width of [-window, window]
  double A_hat = 0.0;
  double B_hat = 0.0;
  double lambda_min = 0.0;
  std::uint64_t seed = 0;
};

struct SweepOptions {
  std::vector<double> windows{20.0, 40.0, 80.0};
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  /// Jitter of the generated points, as a fraction of the mu_p-gap.
  double jitter = 0.2;
  GridSpec grid;  // lo/hi are overridden by each window
};

/// For every factor and window: X mu_p-uniform in [-window, window] at density
/// factor * |Lambda^{1/2}| / pi. Over the trials the row keeps the smallest
/// A_hat and lambda_min and the largest B_hat. Trial t uses seed + t.
std::vector<SweepRow> density_sweep(const KernelEvaluator& ev,
                                    const std::vector<double>& factors,
                                    const SweepOptions& options);

}  // namespace vbpw
