#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace vbpw {

using cplx = std::complex<double>;

/// Real-valued cosine expansion c_0 + sum_j c_j cos(lambda_j u), lambda_j > 0.
struct CosineView {
  double constant = 0.0;
  std::vector<std::pair<double, double>> terms;  // (c_j, lambda_j)
};

/// Almost periodic trigonometric polynomial  f(u) = sum_b c_b exp(i b u)
/// with finitely many real frequencies b and complex coefficients c_b.
///
/// Values are immutable and always canonical: terms are sorted by frequency,
/// frequencies closer than kFrequencyTolerance * (1 + max|b|) are merged and
/// coefficients that are negligible relative to the operands' largest
/// coefficient (kPruneTolerance) are dropped.
class APPoly {
 public:
  struct Term {
    double freq;
    cplx coef;
  };

  static constexpr double kFrequencyTolerance = 1e-9;
  static constexpr double kPruneTolerance = 1e-14;

  /// The zero polynomial.
  APPoly() = default;

  static APPoly constant(cplx c);
  static APPoly monomial(cplx c, double freq);

  /// Canonicalizes an arbitrary term list.
  static APPoly from_terms(std::vector<Term> terms);

  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// sum_b c_b exp(i b u), Neumaier-compensated.
  cplx operator()(double u) const;

  /// Coefficient stored at frequency `freq` (within merge tolerance), else 0.
  cplx coefficient(double freq) const;

  double max_abs_frequency() const;
  double max_abs_coefficient() const;

  /// Complex conjugate as a function of real u: frequencies negated,
  /// coefficients conjugated.
  APPoly conj() const;

  /// f * conj(f); Hermitian, hence real-valued on the real line.
  APPoly modulus_squared() const;

  /// c_{-b} == conj(c_b) for every stored term, to the given relative tolerance.
  bool is_hermitian(double tol = 1e-12) const;

  /// Throws NumericalError unless the polynomial is Hermitian.
  CosineView cosine_view(double tol = 1e-12) const;

  /// [{"freq": b, "re": _, "im": _}, ...] sorted by frequency.
  nlohmann::json to_json() const;

  friend APPoly operator+(const APPoly& f, const APPoly& g);
  friend APPoly operator-(const APPoly& f, const APPoly& g);
  friend APPoly operator*(const APPoly& f, const APPoly& g);
  friend APPoly operator*(cplx s, const APPoly& f);
  friend APPoly operator*(const APPoly& f, cplx s) { return s * f; }
  APPoly operator-() const { return cplx(-1.0) * *this; }

 private:
  std::vector<Term> terms_;
};

// Named forms of the algebra.
inline APPoly ap_add(const APPoly& f, const APPoly& g) { return f + g; }
inline APPoly ap_mul(const APPoly& f, const APPoly& g) { return f * g; }
inline APPoly ap_conj(const APPoly& f) { return f.conj(); }
inline APPoly ap_modulus_squared(const APPoly& f) { return f.modulus_squared(); }
inline cplx ap_eval(const APPoly& f, double u) { return f(u); }

}  // namespace vbpw
