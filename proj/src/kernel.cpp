#include "vbpw/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "vbpw/errors.hpp"

namespace vbpw {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

void append_group(std::vector<ThetaTerm>& out, const APPoly& group, double x_coef,
                  double y_coef) {
  for (const auto& t : group.terms()) out.push_back({t.coef, t.freq, x_coef, y_coef});
}

}  // namespace

cplx ThetaDecomposition::operator()(double u, double x, double y) const {
  cplx acc;
  for (const auto& t : terms) acc += t.alpha * std::polar(1.0, t.beta(x, y) * u);
  return acc;
}

ThetaDecomposition theta_decompose(const BandwidthProfile& profile,
                                   const ConnectionTable& table, std::size_t j,
                                   std::size_t l) {
  const std::size_t n = profile.jumps();
  if (j > n || l > n) {
    throw ValidationError("theta: block index out of range (" + std::to_string(j) + ", " +
                          std::to_string(l) + ")");
  }
  const cplx wp = 1.0 / profile.q(0);
  const cplx wm = 1.0 / profile.q(n);
  const APPoly ap_j = table.aplus(j).conj();
  const APPoly bp_j = table.bplus(j).conj();
  const APPoly am_j = table.aminus(j).conj();
  const APPoly bm_j = table.bminus(j).conj();
  const double qj = profile.q(j);
  const double ql = profile.q(l);

  ThetaDecomposition d;
  d.j = j;
  d.l = l;
  append_group(d.terms, wp * (ap_j * table.aplus(l)) + wm * (am_j * table.aminus(l)), -qj, ql);
  append_group(d.terms, wp * (ap_j * table.bplus(l)) + wm * (am_j * table.bminus(l)), -qj, -ql);
  append_group(d.terms, wp * (bp_j * table.aplus(l)) + wm * (bm_j * table.aminus(l)), qj, ql);
  append_group(d.terms, wp * (bp_j * table.bplus(l)) + wm * (bm_j * table.bminus(l)), qj, -ql);
  return d;
}

KernelEvaluator::KernelEvaluator(BandwidthProfile profile, SpectralSet set,
                                 KernelOptions options)
    : profile_(std::move(profile)),
      table_(ConnectionTable::build(profile_)),
      jev_(profile_, kappa_of(profile_, table_), std::move(set), options.j),
      mode_(options.mode) {
  if (mode_ == KernelMode::closed_form_n2 &&
      (profile_.jumps() != 2 || !jev_.spectral_set().is_band())) {
    throw ValidationError("closed-form kernel needs two jumps and Lambda = [0, Omega]");
  }
  const std::size_t n = profile_.jumps();
  theta_.reserve((n + 1) * (n + 1));
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t l = 0; l <= n; ++l) theta_.push_back(theta_decompose(profile_, table_, j, l));

  const double wp = 1.0 / profile_.q(0);
  const double wm = 1.0 / profile_.q(n);
  diag_.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const APPoly h1 = wp * table_.aplus(j).modulus_squared() +
                      wm * table_.aminus(j).modulus_squared();
    const APPoly h2 = wp * (table_.aplus(j).conj() * table_.bplus(j)) +
                      wm * (table_.aminus(j).conj() * table_.bminus(j));
    cplx acc;
    for (const auto& t : h1.terms()) acc += t.coef * jev_(t.freq);
    diag_[j].constant = 2.0 * acc.real();
    diag_[j].h2.assign(h2.terms().begin(), h2.terms().end());
    diag_[j].q = profile_.q(j);
  }
}

const ThetaDecomposition& KernelEvaluator::theta(std::size_t j, std::size_t l) const {
  const std::size_t n = profile_.jumps();
  if (j > n || l > n) throw ValidationError("theta: block index out of range");
  return theta_[j * (n + 1) + l];
}

double KernelEvaluator::operator()(double x, double y) const {
  return mode_ == KernelMode::closed_form_n2 ? closed_form(x, y) : generic(x, y);
}

cplx KernelEvaluator::generic_complex(double x, double y) const {
  const ThetaDecomposition& d =
      theta(profile_.interval_index(x), profile_.interval_index(y));
  cplx acc;
  for (const auto& t : d.terms) acc += t.alpha * jev_(t.beta(x, y));
  return acc;
}

double KernelEvaluator::generic(double x, double y) const {
  const ThetaDecomposition& d =
      theta(profile_.interval_index(x), profile_.interval_index(y));
  cplx acc;
  double size = 0.0;
  for (const auto& t : d.terms) {
    const cplx term = t.alpha * jev_(t.beta(x, y));
    acc += term;
    size += std::abs(term);
  }
  if (std::abs(acc.imag()) > 1e-9 * std::max(1.0, size)) {
    throw NumericalError("kernel: imaginary residue " + std::to_string(acc.imag()) +
                             " at (" + std::to_string(x) + ", " + std::to_string(y) + ")",
                         std::abs(acc.imag()));
  }
  return acc.real();
}

double KernelEvaluator::closed_form(double x, double y) const {
  if (profile_.jumps() != 2 || !jev_.spectral_set().is_band()) {
    throw ValidationError("closed-form kernel needs two jumps and Lambda = [0, Omega]");
  }
  const double q0 = profile_.q(0);
  const double q1 = profile_.q(1);
  const double q2 = profile_.q(2);
  const double T = profile_.knot(2) - profile_.knot(1);
  const double c = 0.5 * (profile_.knot(1) + profile_.knot(2));
  const double w = std::sqrt(jev_.spectral_set().omega());
  auto jr = [this](double s) { return jev_.jr(s); };

  auto k00 = [&](double x, double y) {
    return q0 * w / kPi * sinc(q0 * w * (x - y)) +
           (1.0 - q0 * q0 / (q1 * q1)) * (1.0 + q1 * q1 / (q2 * q2)) / (4.0 * q0) *
               jr(q0 * (x + y + T)) +
           std::pow(1.0 - q0 / q1, 2) * (1.0 - q1 * q1 / (q2 * q2)) / (8.0 * q0) *
               jr(q0 * (x + y + T) + 2.0 * q1 * T) +
           std::pow(1.0 + q0 / q1, 2) * (1.0 - q1 * q1 / (q2 * q2)) / (8.0 * q0) *
               jr(q0 * (x + y + T) - 2.0 * q1 * T);
  };
  auto k11 = [&](double x, double y) {
    return 0.5 * ((1.0 + q1 * q1 / (q2 * q2)) / q0 + (1.0 + q1 * q1 / (q0 * q0)) / q2) *
               jr(q1 * (x - y)) +
           (1.0 - q1 * q1 / (q2 * q2)) / (2.0 * q0) * jr(q1 * (x + y - T)) +
           (1.0 - q1 * q1 / (q0 * q0)) / (2.0 * q2) * jr(q1 * (x + y + T));
  };
  auto k22 = [&](double x, double y) {
    return q2 * w / kPi * sinc(q2 * w * (x - y)) +
           (1.0 + q1 * q1 / (q0 * q0)) * (1.0 - q2 * q2 / (q1 * q1)) / (4.0 * q2) *
               jr(q2 * (x + y - T)) +
           (1.0 - q1 * q1 / (q0 * q0)) * std::pow(1.0 - q2 / q1, 2) / (8.0 * q2) *
               jr(q2 * (x + y - T) - 2.0 * q1 * T) +
           (1.0 - q1 * q1 / (q0 * q0)) * std::pow(1.0 + q2 / q1, 2) / (8.0 * q2) *
               jr(q2 * (x + y - T) + 2.0 * q1 * T);
  };
  auto k01 = [&](double x, double y) {
    const double xs = q0 * (x + 0.5 * T);
    return (1.0 + q0 / q1) * std::pow(1.0 + q1 / q2, 2) / (4.0 * q0) *
               jr(xs - q1 * (y + 0.5 * T)) +
           (1.0 - q0 / q1) * std::pow(1.0 - q1 / q2, 2) / (4.0 * q0) *
               jr(xs + q1 * (y + 0.5 * T)) +
           (1.0 + q0 / q1) * (1.0 - q1 * q1 / (q2 * q2)) / (4.0 * q0) *
               jr(xs + q1 * (y - 1.5 * T)) +
           (1.0 - q0 / q1) * (1.0 - q1 * q1 / (q2 * q2)) / (4.0 * q0) *
               jr(xs - q1 * (y - 1.5 * T));
  };
  auto k02 = [&](double x, double y) {
    const double xs = q0 * (x + 0.5 * T);
    const double ys = q2 * (y - 0.5 * T);
    return (1.0 - q0 / q1) * (1.0 - q1 / q2) / (2.0 * q0) * jr(xs + q1 * T - ys) +
           (1.0 + q0 / q1) * (1.0 + q1 / q2) / (2.0 * q0) * jr(xs - q1 * T - ys);
  };
  auto k12 = [&](double x, double y) {
    const double ys = q2 * (y - 0.5 * T);
    return std::pow(1.0 + q1 / q0, 2) * (1.0 + q2 / q1) / (4.0 * q2) *
               jr(q1 * (x - 0.5 * T) - ys) +
           std::pow(1.0 - q1 / q0, 2) * (1.0 - q2 / q1) / (4.0 * q2) *
               jr(q1 * (x - 0.5 * T) + ys) +
           (1.0 - q1 * q1 / (q0 * q0)) * (1.0 + q2 / q1) / (4.0 * q2) *
               jr(q1 * (x + 1.5 * T) + ys) +
           (1.0 - q1 * q1 / (q0 * q0)) * (1.0 - q2 / q1) / (4.0 * q2) *
               jr(q1 * (x + 1.5 * T) - ys);
  };

  const std::size_t j = profile_.interval_index(x);
  const std::size_t l = profile_.interval_index(y);
  const double X = x - c;
  const double Y = y - c;
  switch (j * 3 + l) {
    case 0: return k00(X, Y);
    case 1: return k01(X, Y);
    case 2: return k02(X, Y);
    case 3: return k01(Y, X);
    case 4: return k11(X, Y);
    case 5: return k12(X, Y);
    case 6: return k02(Y, X);
    case 7: return k12(Y, X);
    default: return k22(X, Y);
  }
}

double KernelEvaluator::diagonal(double y) const {
  const DiagonalData& d = diag_[profile_.interval_index(y)];
  cplx acc;
  for (const auto& t : d.h2) acc += t.coef * jev_(t.freq - 2.0 * d.q * y);
  return d.constant + 2.0 * acc.real();
}

std::vector<std::vector<double>> KernelEvaluator::gram(const std::vector<double>& points) const {
  const std::size_t m = points.size();
  std::vector<std::vector<double>> g(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      g[i][j] = (*this)(points[i], points[j]);
      g[j][i] = g[i][j];
    }
  }
  return g;
}

double kernel_eval(const KernelEvaluator& ev, double x, double y) { return ev(x, y); }
double kernel_closed_n2(const KernelEvaluator& ev, double x, double y) {
  return ev.closed_form(x, y);
}
double kernel_diagonal(const KernelEvaluator& ev, double y) { return ev.diagonal(y); }

DecayReport decay_fit(const KernelEvaluator& ev, const DecayGrid& grid) {
  if (!ev.spectral_set().is_band())
    throw ValidationError("decay fit is defined for Lambda = [0, Omega] only");
  if (!(grid.radius > 0.0) || !(grid.step > 0.0))
    throw ValidationError("decay fit: radius and step must be > 0");
  const auto count = static_cast<std::size_t>(std::floor(2.0 * grid.radius / grid.step + 1e-9)) + 1;
  std::vector<double> pts(count);
  for (std::size_t i = 0; i < count; ++i) pts[i] = -grid.radius + grid.step * static_cast<double>(i);

  std::map<long, double> bins;
  DecayReport rep;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i; j < count; ++j) {
      const double dist = std::abs(pts[i] - pts[j]);
      const double v = std::abs(ev(pts[i], pts[j])) * (1.0 + dist);
      rep.c_decay = std::max(rep.c_decay, v);
      double& b = bins[static_cast<long>(std::floor(dist))];
      b = std::max(b, v);
    }
  }
  const double max_dist = 2.0 * grid.radius;
  double inner = 0.0;
  double outer = 0.0;
  for (const auto& [bin, v] : bins) {
    rep.envelope.emplace_back(static_cast<double>(bin), v);
    double& side = static_cast<double>(bin) >= 0.75 * max_dist ? outer : inner;
    side = std::max(side, v);
  }
  rep.growth = outer > inner;
  return rep;
}

}  // namespace vbpw
