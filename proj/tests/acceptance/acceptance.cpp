// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <Eigen/Dense>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "../test_support.hpp"
#include "vbpw/density.hpp"
#include "vbpw/kernel.hpp"
#include "vbpw/sampling.hpp"
#include "vbpw/spectral.hpp"
#include "vbpw/transfer.hpp"

namespace {

using namespace vbpw;
using testing::figure_profile;
using testing::kPi;
using testing::random_profile;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

BandwidthProfile two_jump_with_ratio(std::mt19937_64& rng, double max_ratio) {
  for (;;) {
    BandwidthProfile p = random_profile(rng, 2);
    if (std::abs(series_parameters(p).R) <= max_ratio) return p;
  }
}

Outcome identity_suite() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> ud(0.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const BandwidthProfile p = random_profile(rng, i % 7);
    const ConnectionTable t = ConnectionTable::build(p);
    for (int k = 0; k < 50; ++k) {
      double u = ud(rng);
      if (u == 0.0) u = 1e-3;
      worst = std::max(worst, wronskian_identities(p, t, u).max());
    }
  }
  return {worst <= 1e-9, fmt("max residual %.3g", worst)};
}

Outcome kappa_closed_form() {
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const BandwidthProfile p = random_profile(rng, 2);
    const Kappa k = kappa_of(p, ConnectionTable::build(p));
    const SeriesParameters sp = series_parameters(p);
    if (k.cosine.terms.size() != 1) return {false, "cosine view does not have exactly one term"};
    worst = std::max({worst, std::abs(k.cosine.constant - sp.C), std::abs(k.cosine.terms[0].first - sp.K),
                      std::abs(k.cosine.terms[0].second - sp.zeta)});
  }
  const BandwidthProfile f = figure_profile();
  const Kappa kf = kappa_of(f, ConnectionTable::build(f));
  const double fig = std::max({std::abs(kf.cosine.constant - 1.28125),
                               std::abs(kf.cosine.terms.at(0).first + 0.28125),
                               std::abs(kf.cosine.terms.at(0).second - 24.0)});
  return {worst <= 1e-12 && fig <= 1e-12,
          fmt("random max diff %.3g", worst) + fmt(", figure diff %.3g", fig)};
}

Outcome series_vs_quadrature() {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> sd(-50.0, 50.0);
  double worst = 0.0, worst_excess = -INFINITY;
  int max_m = 0;
  for (int i = 0; i < 3; ++i) {
    const BandwidthProfile p = two_jump_with_ratio(rng, 0.9);
    const JEvaluator j(p, kappa_of(p, ConnectionTable::build(p)), SpectralSet::band(kPi * kPi));
    const int M = j.series_terms(1e-10);
    max_m = std::max(max_m, M);
    for (int k = 0; k < 200; ++k) {
      const double s = sd(rng);
      const cplx quad = j.quadrature(s);
      worst = std::max(worst, std::abs(j.series(s, 1e-10).value - quad));
      for (int m = 0; m <= M; ++m)
        worst_excess = std::max(worst_excess, std::abs(j.series_partial(s, m) - quad) - j.series_bound(m));
    }
  }
  // the bound may only be "violated" by the quadrature tolerance itself
  return {worst <= 1e-9 && worst_excess <= 1e-11,
          fmt("max |J_series - J_quad| %.3g", worst) + fmt(", max partial-sum excess over bound %.3g", worst_excess) +
              fmt(", M up to %.0f", max_m)};
}

Outcome jr_zeros() {
  const BandwidthProfile p = figure_profile();
  const JEvaluator j(p, kappa_of(p, ConnectionTable::build(p)), SpectralSet::band(kPi * kPi));
  double worst = 0.0;
  for (int s = -50; s <= 50; ++s)
    if (s % 24 != 0) worst = std::max(worst, std::abs(j.jr(s)));
  return {worst <= 1e-8, fmt("max |J_r| off multiples of 24: %.3g", worst)};
}

double closed_vs_generic(const BandwidthProfile& p, const SpectralSet& set) {
  KernelOptions closed_opts;
  closed_opts.mode = KernelMode::closed_form_n2;
  KernelOptions generic_opts;
  generic_opts.j.mode = JMode::quadrature;
  const KernelEvaluator closed(p, set, closed_opts);
  const KernelEvaluator generic(p, set, generic_opts);
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i)
    for (int k = 0; k <= 40; ++k) {
      const double x = -10.0 + 0.5 * i, y = -10.0 + 0.5 * k;
      worst = std::max(worst, std::abs(closed(x, y) - generic.generic(x, y)));
    }
  return worst;
}

Outcome closed_form_kernel() {
  double worst = closed_vs_generic(figure_profile(), SpectralSet::band(kPi * kPi));
  std::mt19937_64 rng(1005);
  for (int i = 0; i < 3; ++i)
    worst = std::max(worst, closed_vs_generic(two_jump_with_ratio(rng, 0.9), SpectralSet::band(kPi * kPi)));
  return {worst <= 1e-8, fmt("max |closed - generic| %.3g", worst)};
}

Outcome classical_degeneration() {
  const double omega = 2.0;
  const double w = std::sqrt(omega);
  const KernelEvaluator ev(BandwidthProfile::constant(), SpectralSet::band(omega));
  double worst = 0.0, worst_diag = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double x = -10.0 + 0.5 * i;
    for (int k = 0; k <= 40; ++k) {
      const double y = -10.0 + 0.5 * k;
      worst = std::max(worst, std::abs(ev(x, y) - w / kPi * testing::sinc(w * (x - y))));
    }
    worst_diag = std::max(worst_diag, std::abs(ev.diagonal(x) - w / kPi));
  }
  return {worst <= 1e-10 && worst_diag <= 1e-12,
          fmt("kernel diff %.3g", worst) + fmt(", diagonal diff %.3g", worst_diag)};
}

// The error is required to decay at least like mu_p^{-1/2}: error * sqrt(mu)
// may not rise above three times its value at the smallest radius and may not
// increase at every step. The literal max/min spread is reported as well.
Outcome averaged_trace_rate() {
  const KernelEvaluator ev(figure_profile(), SpectralSet::band(kPi * kPi));
  const TraceReport r = trace_convergence_report(ev, {10.0, 20.0, 40.0, 80.0});
  double worst_ratio = 0.0;
  std::string rows;
  for (const auto& row : r.rows) {
    worst_ratio = std::max(worst_ratio, row.bound_ratio / r.rows.front().bound_ratio);
    rows += fmt(" r=%.0f:", row.r) + fmt("%.3g", row.error);
  }
  const double last = r.rows.back().error;
  return {worst_ratio <= 3.0 && !r.growth && last <= 0.05,
          "errors" + rows + fmt("; max ratio to r=10 %.3g", worst_ratio) +
              fmt("; max/min spread %.3g", r.band)};
}

Outcome kernel_psd_symmetry() {
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> xd(-15.0, 15.0);
  double worst_psd = 0.0, worst_sym = 0.0;
  const KernelEvaluator fig(figure_profile(), SpectralSet::band(kPi * kPi));
  for (int trial = 0; trial < 20; ++trial) {
    std::unique_ptr<KernelEvaluator> other;
    if (trial % 2) other = std::make_unique<KernelEvaluator>(random_profile(rng, 1 + trial % 5), SpectralSet::band(2.0));
    const KernelEvaluator& ev = other ? *other : fig;
    std::vector<double> pts(40);
    for (auto& x : pts) x = xd(rng);
    Eigen::MatrixXd g(40, 40);
    for (int i = 0; i < 40; ++i)
      for (int k = 0; k < 40; ++k) g(i, k) = ev(pts[i], pts[k]);
    worst_sym = std::max(worst_sym, (g - g.transpose()).cwiseAbs().maxCoeff());
    const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (g + g.transpose())).eigenvalues();
    worst_psd = std::max(worst_psd, -e.minCoeff() / e.maxCoeff());
  }
  return {worst_psd <= 1e-8 && worst_sym <= 1e-10,
          fmt("max -lambda_min/lambda_max %.3g", worst_psd) + fmt(", symmetry residual %.3g", worst_sym)};
}

Outcome density_trend() {
  const KernelEvaluator ev(BandwidthProfile::constant(), SpectralSet::band(kPi * kPi));
  SweepOptions o;
  o.trials = 3;
  o.seed = 2024;
  const auto rows = density_sweep(ev, {0.6, 1.5}, o);
  const double a_floor = 1e-3, lambda_floor = 0.1;
  bool ok = true;
  std::string detail;
  double prev_a = INFINITY;
  for (const auto& r : rows) {
    detail += fmt(" [f=%.1f", r.factor) + fmt(" W=%.0f", r.window) + fmt(" A=%.3g", r.A_hat) +
              fmt(" lmin=%.3g]", r.lambda_min);
    if (r.factor == 1.5) ok = ok && r.A_hat >= a_floor;
    if (r.factor == 0.6) {
      ok = ok && r.A_hat <= 1.1 * prev_a && r.lambda_min >= lambda_floor;
      prev_a = r.A_hat;
    }
  }
  return {ok, "floors A>=1e-3, lambda_min>=0.1;" + detail};
}

Outcome determinism() {
  const std::string profile = testing::temp_path("acc_profile.json");
  const std::string spectrum = testing::temp_path("acc_spectrum.json");
  testing::write_text(profile, R"({"knots": [-3, 3], "levels": [1, 0.25, 1]})");
  testing::write_text(spectrum, R"({"intervals": [[0, 9.869604401089358]]})");
  const std::string flat = testing::temp_path("acc_flat.json");
  testing::write_text(flat, R"({"knots": [], "levels": [1]})");
  const std::string err = testing::temp_path("acc_stderr.txt");
  const std::string runs[] = {
      "verify --profile " + profile + " --spectrum " + spectrum + " --seed 7",
      "sweep --profile " + flat + " --spectrum " + spectrum + " --windows 20,40 --trials 2 --seed 7",
  };
  for (const auto& args : runs) {
    const std::string a = testing::temp_path("acc_run_a.txt"), b = testing::temp_path("acc_run_b.txt");
    if (testing::run_tool(args, a, err) != 0 || testing::run_tool(args, b, err) != 0)
      return {false, "command failed: " + args};
    const std::string ta = testing::read_text(a), tb = testing::read_text(b);
    if (ta.empty() || ta != tb) return {false, "outputs differ: " + args.substr(0, args.find(' '))};
  }
  return {true, "verify and sweep outputs byte-identical"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "identity suite", 10.0, identity_suite},
      {2, "kappa closed form", 0.0, kappa_closed_form},
      {3, "J series vs quadrature", 30.0, series_vs_quadrature},
      {4, "J_r zeros", 0.0, jr_zeros},
      {5, "closed-form kernel vs generic", 60.0, closed_form_kernel},
      {6, "classical degeneration", 0.0, classical_degeneration},
      {7, "averaged trace rate", 0.0, averaged_trace_rate},
      {8, "kernel PSD and symmetry", 0.0, kernel_psd_symmetry},
      {9, "density trend sweep", 300.0, density_trend},
      {10, "determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      o.pass = false;
      o.detail += fmt("; over time budget (%.0f s)", c.budget_seconds);
    }
    std::printf("criterion %2d %-32s %s  (%.2f s) %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
