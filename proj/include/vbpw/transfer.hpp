#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "vbpw/appoly.hpp"
#include "vbpw/piecewise.hpp"

namespace vbpw {

using Mat2c = std::array<std::array<cplx, 2>, 2>;

Mat2c operator*(const Mat2c& a, const Mat2c& b);
double max_abs_difference(const Mat2c& a, const Mat2c& b);

/// 2x2 matrix whose entries are almost periodic polynomials in u = sqrt(z).
struct TransferMatrix {
  std::array<std::array<APPoly, 2>, 2> entries;

  const APPoly& operator()(int r, int c) const { return entries[r][c]; }

  APPoly determinant() const;
  Mat2c evaluate(double u) const;

  friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);
};

/// L_k: maps the local amplitudes (a, b) on I_{k-1} to those on I_k across the
/// jump at t_k. Valid for 1 <= k <= n; throws ValidationError otherwise.
TransferMatrix build_L(const BandwidthProfile& profile, std::size_t k);

/// R_k = L_k^{-1}, written out directly rather than inverted numerically.
TransferMatrix build_R(const BandwidthProfile& profile, std::size_t k);

enum class Branch { plus, minus };

/// Connection coefficients a_k^{+-}, b_k^{+-} (k = 0..n) of the fundamental
/// system, as polynomials in u. Immutable once built.
class ConnectionTable {
 public:
  /// Right-to-left R products for Phi^+, left-to-right L products for Phi^-.
  static ConnectionTable build(const BandwidthProfile& profile);

  /// Arbitrary coefficient lists; used to feed deliberately inconsistent data
  /// into the verification checks.
  static ConnectionTable from_coefficients(std::vector<APPoly> aplus,
                                           std::vector<APPoly> bplus,
                                           std::vector<APPoly> aminus,
                                           std::vector<APPoly> bminus);

  std::size_t jumps() const { return aplus_.size() - 1; }

  const APPoly& a(Branch s, std::size_t k) const {
    return s == Branch::plus ? aplus_.at(k) : aminus_.at(k);
  }
  const APPoly& b(Branch s, std::size_t k) const {
    return s == Branch::plus ? bplus_.at(k) : bminus_.at(k);
  }
  const APPoly& aplus(std::size_t k) const { return aplus_.at(k); }
  const APPoly& bplus(std::size_t k) const { return bplus_.at(k); }
  const APPoly& aminus(std::size_t k) const { return aminus_.at(k); }
  const APPoly& bminus(std::size_t k) const { return bminus_.at(k); }

  nlohmann::json to_json() const;

 private:
  std::vector<APPoly> aplus_, bplus_, aminus_, bminus_;
};

/// Value and x-derivative of a local exponential solution.
struct LocalValue {
  cplx value;
  cplx derivative;
};

/// Phi^{+-}(u^2, x) using the local form on I_{interval_index(x)}.
/// Throws ValidationError for u <= 0.
cplx phi(const BandwidthProfile& profile, const ConnectionTable& table, Branch sign,
         double u, double x);

/// The local form attached to piece k evaluated at any x (also outside I_k,
/// which gives the one-sided limits at the piece's endpoints).
LocalValue phi_local(const BandwidthProfile& profile, const ConnectionTable& table,
                     Branch sign, std::size_t k, double u, double x);

/// Absolute residuals of the exact identities between connection
/// coefficients, all at lambda = u^2. Each entry is a max over k.
struct IdentityResiduals {
  double wronskian = 0.0;         // a_0^+/q_0 = (a_k^+ b_k^- - a_k^- b_k^+)/q_k = b_n^-/q_n
  double modulus = 0.0;           // q_0(|b_k^-|^2-|a_k^-|^2) = q_n(|a_k^+|^2-|b_k^+|^2) = q_k
  double modulus_balance = 0.0;   // |a_k^+|^2/q_0 + |a_k^-|^2/q_n = |b_k^+|^2/q_0 + |b_k^-|^2/q_n
  double conjugate_wronskian = 0.0;  // b_0^+/q_0 = (b_k^+ conj b_k^- - a_k^+ conj a_k^-)/q_k = -conj a_n^-/q_n
  double kappa_chain = 0.0;       // |b_0^+|^2/q_0^2 + 1/(q_0 q_n) = |a_0^+|^2/q_0^2 = |b_n^-|^2/q_n^2 = ...
  double left_product = 0.0;      // L_j...L_1 = [[conj b_j^-, a_j^-], [conj a_j^-, b_j^-]]
  double right_product = 0.0;     // R_{l+1}...R_n = [[a_l^+, conj b_l^+], [b_l^+, conj a_l^+]]

  double max() const;
};

IdentityResiduals wronskian_identities(const BandwidthProfile& profile,
                                       const ConnectionTable& table, double u);

/// max(prod_k (1 + q_{k-1}/q_k), prod_k (1 + q_k/q_{k-1})) + 1, a uniform
/// bound on |Phi^+| and |Phi^-| for real u > 0.
double phi_uniform_bound(const BandwidthProfile& profile);

}  // namespace vbpw
