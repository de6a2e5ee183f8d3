#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "vbpw/appoly.hpp"
#include "vbpw/piecewise.hpp"
#include "vbpw/spectral.hpp"
#include "vbpw/transfer.hpp"

namespace vbpw {

/// One term alpha * exp(i beta(x, y) u) of theta on a block I_j x I_l, with
/// beta(x, y) = offset + x_coef * x + y_coef * y and x_coef = +-q_j,
/// y_coef = +-q_l.
struct ThetaTerm {
  cplx alpha;
  double offset = 0.0;
  double x_coef = 0.0;
  double y_coef = 0.0;

  double beta(double x, double y) const { return offset + x_coef * x + y_coef * y; }
};

struct ThetaDecomposition {
  std::size_t j = 0;
  std::size_t l = 0;
  std::vector<ThetaTerm> terms;

  /// theta(u, x, y) for (x, y) in I_j x I_l.
  cplx operator()(double u, double x, double y) const;
};

/// Expands (1/q_0) conj Phi^+(x) Phi^+(y) + (1/q_n) conj Phi^-(x) Phi^-(y) on
/// I_j x I_l into exponentials in u. Throws ValidationError for j, l > n.
ThetaDecomposition theta_decompose(const BandwidthProfile& profile,
                                   const ConnectionTable& table, std::size_t j,
                                   std::size_t l);

enum class KernelMode { generic, closed_form_n2 };

struct KernelOptions {
  KernelMode mode = KernelMode::generic;
  JOptions j;
};

/// Reproducing kernel k(x, y) of the variable-bandwidth Paley-Wiener space for
/// a piecewise-constant profile and a spectral set. All caches are built in
/// the constructor; evaluation is const and reentrant.
class KernelEvaluator {
 public:
  /// Throws ValidationError when closed_form_n2 is requested for anything but
  /// a two-jump profile with Lambda = [0, Omega].
  KernelEvaluator(BandwidthProfile profile, SpectralSet set, KernelOptions options = {});

  const BandwidthProfile& profile() const { return profile_; }
  const SpectralSet& spectral_set() const { return jev_.spectral_set(); }
  const ConnectionTable& table() const { return table_; }
  const Kappa& kappa() const { return jev_.kappa(); }
  const JEvaluator& j_evaluator() const { return jev_; }
  KernelMode mode() const { return mode_; }
  const ThetaDecomposition& theta(std::size_t j, std::size_t l) const;

  /// k(x, y) through the configured mode.
  double operator()(double x, double y) const;

  /// sum alpha J(beta) before taking the real part.
  cplx generic_complex(double x, double y) const;
  /// Re of generic_complex; throws NumericalError if the imaginary part
  /// exceeds 1e-9 relative to the size of the sum.
  double generic(double x, double y) const;
  /// Nine-block closed form for two jumps, in terms of J_r.
  double closed_form(double x, double y) const;
  /// k(y, y) from h_j^(1) and h_j^(2).
  double diagonal(double y) const;

  /// Symmetric matrix [k(x_i, x_j)].
  std::vector<std::vector<double>> gram(const std::vector<double>& points) const;

 private:
  struct DiagonalData {
    double constant = 0.0;       // 2 Re sum d_b J(b) for h^(1)
    std::vector<APPoly::Term> h2;  // terms of h^(2)
    double q = 0.0;
  };

  BandwidthProfile profile_;
  ConnectionTable table_;
  JEvaluator jev_;
  KernelMode mode_;
  std::vector<ThetaDecomposition> theta_;  // (n+1)^2 blocks, row-major
  std::vector<DiagonalData> diag_;
};

double kernel_eval(const KernelEvaluator& ev, double x, double y);
double kernel_closed_n2(const KernelEvaluator& ev, double x, double y);
double kernel_diagonal(const KernelEvaluator& ev, double y);

/// Square grid [-radius, radius]^2 with the given step.
struct DecayGrid {
  double radius = 20.0;
  double step = 0.25;
};

struct DecayReport {
  /// sup |k(x, y)| (1 + |x - y|) over the grid.
  double c_decay = 0.0;
  /// Per unit-width bin of |x - y|: (bin start, max |k| (1 + |x - y|)).
  std::vector<std::pair<double, double>> envelope;
  /// Set when the envelope over the outer quarter of distances exceeds its
  /// maximum over the inner three quarters.
  bool growth = false;
};

/// Throws ValidationError unless Lambda = [0, Omega].
DecayReport decay_fit(const KernelEvaluator& ev, const DecayGrid& grid);

}  // namespace vbpw
