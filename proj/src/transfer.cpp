#include "vbpw/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "vbpw/errors.hpp"

namespace vbpw {

namespace {

const cplx kI(0.0, 1.0);

void check_jump_index(const BandwidthProfile& profile, std::size_t k) {
  if (k < 1 || k > profile.jumps()) {
    throw ValidationError("transfer matrix index out of range: k = " +
                          std::to_string(k) + ", jumps = " +
                          std::to_string(profile.jumps()));
  }
}

Mat2c identity2() { return Mat2c{{{cplx(1.0), cplx(0.0)}, {cplx(0.0), cplx(1.0)}}}; }

}  // namespace

Mat2c operator*(const Mat2c& a, const Mat2c& b) {
  Mat2c c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

double max_abs_difference(const Mat2c& a, const Mat2c& b) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

APPoly TransferMatrix::determinant() const {
  return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
}

Mat2c TransferMatrix::evaluate(double u) const {
  Mat2c m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m[i][j] = entries[i][j](u);
  return m;
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
  TransferMatrix c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      c.entries[i][j] = a.entries[i][0] * b.entries[0][j] + a.entries[i][1] * b.entries[1][j];
  return c;
}

TransferMatrix build_L(const BandwidthProfile& profile, std::size_t k) {
  check_jump_index(profile, k);
  const double q_prev = profile.q(k - 1);
  const double q_next = profile.q(k);
  const double t = profile.knot(k);
  const double ratio = q_next / q_prev;
  const double eta = t * (q_prev - q_next);
  const double theta = t * (q_prev + q_next);
  TransferMatrix m;
  m.entries[0][0] = APPoly::monomial(0.5 * (1.0 + ratio), eta);
  m.entries[0][1] = APPoly::monomial(0.5 * (1.0 - ratio), -theta);
  m.entries[1][0] = APPoly::monomial(0.5 * (1.0 - ratio), theta);
  m.entries[1][1] = APPoly::monomial(0.5 * (1.0 + ratio), -eta);
  return m;
}

TransferMatrix build_R(const BandwidthProfile& profile, std::size_t k) {
  check_jump_index(profile, k);
  const double q_prev = profile.q(k - 1);
  const double q_next = profile.q(k);
  const double t = profile.knot(k);
  const double ratio = q_prev / q_next;
  const double eta = t * (q_prev - q_next);
  const double theta = t * (q_prev + q_next);
  TransferMatrix m;
  m.entries[0][0] = APPoly::monomial(0.5 * (1.0 + ratio), -eta);
  m.entries[0][1] = APPoly::monomial(0.5 * (1.0 - ratio), -theta);
  m.entries[1][0] = APPoly::monomial(0.5 * (1.0 - ratio), theta);
  m.entries[1][1] = APPoly::monomial(0.5 * (1.0 + ratio), eta);
  return m;
}

ConnectionTable ConnectionTable::build(const BandwidthProfile& profile) {
  const std::size_t n = profile.jumps();
  ConnectionTable t;
  t.aplus_.resize(n + 1);
  t.bplus_.resize(n + 1);
  t.aminus_.resize(n + 1);
  t.bminus_.resize(n + 1);

  t.aplus_[n] = APPoly::constant(1.0);
  t.bplus_[n] = APPoly{};
  for (std::size_t l = n; l-- > 0;) {
    const TransferMatrix r = build_R(profile, l + 1);
    t.aplus_[l] = r(0, 0) * t.aplus_[l + 1] + r(0, 1) * t.bplus_[l + 1];
    t.bplus_[l] = r(1, 0) * t.aplus_[l + 1] + r(1, 1) * t.bplus_[l + 1];
  }

  t.aminus_[0] = APPoly{};
  t.bminus_[0] = APPoly::constant(1.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const TransferMatrix m = build_L(profile, j);
    t.aminus_[j] = m(0, 0) * t.aminus_[j - 1] + m(0, 1) * t.bminus_[j - 1];
    t.bminus_[j] = m(1, 0) * t.aminus_[j - 1] + m(1, 1) * t.bminus_[j - 1];
  }
  return t;
}

ConnectionTable ConnectionTable::from_coefficients(std::vector<APPoly> aplus,
                                                   std::vector<APPoly> bplus,
                                                   std::vector<APPoly> aminus,
                                                   std::vector<APPoly> bminus) {
  const std::size_t size = aplus.size();
  if (size == 0 || bplus.size() != size || aminus.size() != size || bminus.size() != size) {
    throw ValidationError("connection table: coefficient lists must be non-empty and equal in length");
  }
  ConnectionTable t;
  t.aplus_ = std::move(aplus);
  t.bplus_ = std::move(bplus);
  t.aminus_ = std::move(aminus);
  t.bminus_ = std::move(bminus);
  return t;
}

nlohmann::json ConnectionTable::to_json() const {
  auto list = [](const std::vector<APPoly>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : v) arr.push_back(p.to_json());
    return arr;
  };
  return {{"aplus", list(aplus_)},
          {"bplus", list(bplus_)},
          {"aminus", list(aminus_)},
          {"bminus", list(bminus_)}};
}

LocalValue phi_local(const BandwidthProfile& profile, const ConnectionTable& table,
                     Branch sign, std::size_t k, double u, double x) {
  if (!(u > 0.0)) throw ValidationError("phi: u must be > 0");
  const double w = profile.q(k) * u;
  const cplx a = table.a(sign, k)(u);
  const cplx b = table.b(sign, k)(u);
  const cplx ep = std::polar(1.0, w * x);
  const cplx em = std::conj(ep);
  return {a * ep + b * em, kI * w * (a * ep - b * em)};
}

cplx phi(const BandwidthProfile& profile, const ConnectionTable& table, Branch sign,
         double u, double x) {
  return phi_local(profile, table, sign, profile.interval_index(x), u, x).value;
}

double IdentityResiduals::max() const {
  return std::max({wronskian, modulus, modulus_balance, conjugate_wronskian,
                   kappa_chain, left_product, right_product});
}

IdentityResiduals wronskian_identities(const BandwidthProfile& profile,
                                       const ConnectionTable& table, double u) {
  if (!(u > 0.0)) throw ValidationError("wronskian identities: u must be > 0");
  const std::size_t n = profile.jumps();
  const double q0 = profile.q(0);
  const double qn = profile.q(n);

  std::vector<cplx> ap(n + 1), bp(n + 1), am(n + 1), bm(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    ap[k] = table.aplus(k)(u);
    bp[k] = table.bplus(k)(u);
    am[k] = table.aminus(k)(u);
    bm[k] = table.bminus(k)(u);
  }

  IdentityResiduals r;
  const cplx w0 = ap[0] / q0;
  const cplx c0 = bp[0] / q0;
  r.wronskian = std::abs(w0 - bm[n] / qn);
  r.conjugate_wronskian = std::abs(c0 + std::conj(am[n]) / qn);
  for (std::size_t k = 0; k <= n; ++k) {
    const double qk = profile.q(k);
    r.wronskian = std::max(r.wronskian, std::abs(w0 - (ap[k] * bm[k] - am[k] * bp[k]) / qk));
    r.conjugate_wronskian = std::max(
        r.conjugate_wronskian,
        std::abs(c0 - (bp[k] * std::conj(bm[k]) - ap[k] * std::conj(am[k])) / qk));
    const double minus_side = q0 * (std::norm(bm[k]) - std::norm(am[k]));
    const double plus_side = qn * (std::norm(ap[k]) - std::norm(bp[k]));
    r.modulus = std::max({r.modulus, std::abs(minus_side - qk), std::abs(plus_side - qk)});
    r.modulus_balance = std::max(
        r.modulus_balance, std::abs((std::norm(ap[k]) / q0 + std::norm(am[k]) / qn) -
                                    (std::norm(bp[k]) / q0 + std::norm(bm[k]) / qn)));
  }

  const double base = 1.0 / (q0 * qn);
  const double chain[] = {std::norm(bp[0]) / (q0 * q0) + base, std::norm(ap[0]) / (q0 * q0),
                          std::norm(bm[n]) / (qn * qn), base + std::norm(am[n]) / (qn * qn)};
  r.kappa_chain = *std::max_element(std::begin(chain), std::end(chain)) -
                  *std::min_element(std::begin(chain), std::end(chain));

  // SU(1,1) structure: the numerically multiplied transfer matrices must
  // reproduce the symbolic coefficient table
  Mat2c left = identity2();
  for (std::size_t j = 1; j <= n; ++j) {
    left = build_L(profile, j).evaluate(u) * left;
    const Mat2c expected{{{std::conj(bm[j]), am[j]}, {std::conj(am[j]), bm[j]}}};
    r.left_product = std::max(r.left_product, max_abs_difference(left, expected));
  }
  Mat2c right = identity2();
  for (std::size_t l = n; l-- > 0;) {
    right = build_R(profile, l + 1).evaluate(u) * right;
    const Mat2c expected{{{ap[l], std::conj(bp[l])}, {bp[l], std::conj(ap[l])}}};
    r.right_product = std::max(r.right_product, max_abs_difference(right, expected));
  }
  return r;
}

double phi_uniform_bound(const BandwidthProfile& profile) {
  double plus = 1.0;
  double minus = 1.0;
  for (std::size_t k = 1; k <= profile.jumps(); ++k) {
    plus *= 1.0 + profile.q(k - 1) / profile.q(k);
    minus *= 1.0 + profile.q(k) / profile.q(k - 1);
  }
  return std::max(plus, minus) + 1.0;
}

}  // namespace vbpw
