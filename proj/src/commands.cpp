#include "vbpw/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "vbpw/density.hpp"
#include "vbpw/errors.hpp"
#include "vbpw/io.hpp"
#include "vbpw/kernel.hpp"
#include "vbpw/sampling.hpp"
#include "vbpw/spectral.hpp"
#include "vbpw/transfer.hpp"

namespace vbpw {

namespace {

using nlohmann::json;

struct Common {
  std::string profile;
  std::string spectrum;
  std::string out;
  std::uint64_t seed = 0;
  std::string grid;
  std::string radii;
};

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  double lo = 0.0, hi = 0.0;
  long n = 0;
  try {
    if (parts.size() != 3) throw std::invalid_argument("");
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("");
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    n = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ValidationError(std::string(flag) + ": expected lo:hi:count, got \"" + text + "\"");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo || n < 1 || n > 10000000)
    throw ValidationError(std::string(flag) + ": need finite lo <= hi and 1 <= count");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != p.size() || !std::isfinite(v))
      throw ValidationError(std::string(flag) + ": not a number: \"" + p + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError(std::string(flag) + ": empty list");
  return out;
}

BandwidthProfile need_profile(const Common& c) {
  if (c.profile.empty()) throw ValidationError("--profile is required");
  return load_profile(c.profile);
}

SpectralSet need_spectrum(const Common& c) {
  if (c.spectrum.empty()) throw ValidationError("--spectrum is required");
  return load_spectrum(c.spectrum);
}

json base_config(const char* command, const BandwidthProfile& p) {
  return {{"command", command}, {"profile", profile_to_json(p)}};
}

json stamp(json report, const json& config) {
  report["tool"] = kToolName;
  report["version"] = kToolVersion;
  report["config_hash"] = config_hash(config);
  return report;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// kappa ----------------------------------------------------------------------

int cmd_kappa(const Common& c, const std::string& cosine_path) {
  const BandwidthProfile p = need_profile(c);
  const std::vector<double> u = parse_grid(c.grid.empty() ? "0:20:401" : c.grid, "--grid");
  const Kappa k = kappa_of(p, ConnectionTable::build(p));

  CsvWriter csv({"u", "kappa"});
  for (double x : u) csv.row({x, k(x)});

  json config = base_config("kappa", p);
  config["grid"] = c.grid;
  json terms = json::array();
  for (const auto& [coef, lambda] : k.cosine.terms) terms.push_back({{"c", coef}, {"lambda", lambda}});
  const json view = stamp({{"constant", k.cosine.constant},
                           {"terms", terms},
                           {"lower_bound", k.lower_bound}},
                          config);
  write_output(c.out, csv.str());
  std::string cos_out = cosine_path;
  if (cos_out.empty() && !c.out.empty() && c.out != "-") cos_out = c.out + ".cosine.json";
  if (!cos_out.empty()) write_output(cos_out, dump(view));
  return kExitOk;
}

// jfun -----------------------------------------------------------------------

std::optional<JMode> parse_mode(const std::string& m) {
  if (m == "auto") return std::nullopt;
  if (m == "series") return JMode::series;
  if (m == "quadrature") return JMode::quadrature;
  if (m == "elementary") return JMode::elementary;
  throw ValidationError("--mode: expected auto, series, quadrature or elementary");
}

int cmd_jfun(const Common& c, const std::string& mode, double eps, bool compare) {
  const BandwidthProfile p = need_profile(c);
  const SpectralSet set = need_spectrum(c);
  const std::vector<double> s = parse_grid(c.grid.empty() ? "-50:50:2001" : c.grid, "--grid");
  if (!(eps > 0.0)) throw ValidationError("--eps must be > 0");
  JOptions opts;
  opts.mode = parse_mode(mode);
  const JEvaluator jev(p, kappa_of(p, ConnectionTable::build(p)), set, opts);

  std::vector<std::string> header{"s", "re_J", "im_J", "M_used", "bound"};
  if (compare) {
    header.insert(header.end(), {"re_quad", "im_quad", "abs_diff"});
  }
  CsvWriter csv(header);
  std::vector<SeriesValue> sv;
  if (jev.mode() == JMode::series) sv = jev.series(s, eps);
  for (std::size_t i = 0; i < s.size(); ++i) {
    cplx v;
    double m_used = 0.0;
    double bound = 0.0;
    if (jev.mode() == JMode::series) {
      v = sv[i].value;
      m_used = sv[i].terms;
      bound = sv[i].bound;
    } else if (jev.mode() == JMode::quadrature) {
      const AdaptiveResult r = j_quadrature_detailed(jev.kappa(), set, s[i]);
      v = r.value;
      bound = r.error_estimate;
    } else {
      v = jev(s[i]);
    }
    std::vector<double> row{s[i], v.real(), v.imag(), m_used, bound};
    if (compare) {
      const cplx q = j_quadrature(jev.kappa(), set, s[i]);
      row.insert(row.end(), {q.real(), q.imag(), std::abs(v - q)});
    }
    csv.row(row);
  }
  write_output(c.out, csv.str());
  return kExitOk;
}

// kernel ---------------------------------------------------------------------

int cmd_kernel(const Common& c, const std::string& what, double x0, bool closed_form,
               bool quadrature_j) {
  const BandwidthProfile p = need_profile(c);
  const SpectralSet set = need_spectrum(c);
  KernelOptions opts;
  if (closed_form) opts.mode = KernelMode::closed_form_n2;
  if (quadrature_j) opts.j.mode = JMode::quadrature;
  const std::vector<double> g = parse_grid(c.grid.empty() ? "-10:10:41" : c.grid, "--grid");
  const KernelEvaluator ev(p, set, opts);

  if (what == "grid") {
    CsvWriter csv({"x", "y", "k"});
    for (double x : g)
      for (double y : g) csv.row({x, y, ev(x, y)});
    write_output(c.out, csv.str());
  } else if (what == "slice") {
    CsvWriter csv({"y", "k"});
    for (double y : g) csv.row({y, ev(x0, y)});
    write_output(c.out, csv.str());
  } else if (what == "diag") {
    CsvWriter csv({"y", "k"});
    for (double y : g) csv.row({y, ev.diagonal(y)});
    write_output(c.out, csv.str());
  } else {
    throw ValidationError("kernel: mode must be grid, slice or diag");
  }
  return kExitOk;
}

// density --------------------------------------------------------------------

int cmd_density(const Common& c, const std::string& points_path) {
  const BandwidthProfile p = need_profile(c);
  const SpectralSet set = need_spectrum(c);
  if (points_path.empty()) throw ValidationError("--points is required");
  const PointSet X = load_points(points_path);
  const std::vector<double> radii = parse_list(c.radii.empty() ? "5,10,20" : c.radii, "--radii");
  const DensityReport rep = beurling_densities(p, X, radii, set.critical_density());

  json config = base_config("density", p);
  config["spectrum"] = spectrum_to_json(set);
  config["points"] = X.points();
  config["radii"] = radii;
  json out = {{"radii", rep.radii},       {"lower", rep.lower},
              {"upper", rep.upper},       {"centers", rep.centers},
              {"omitted", rep.omitted},   {"critical", rep.critical},
              {"rel", rep.rel},           {"label", "windowed finite-data densities"}};
  write_output(c.out, dump(stamp(out, config)));
  return kExitOk;
}

// trace ----------------------------------------------------------------------

int cmd_trace(const Common& c, std::size_t nodes) {
  const BandwidthProfile p = need_profile(c);
  const SpectralSet set = need_spectrum(c);
  const std::vector<double> radii =
      parse_list(c.radii.empty() ? "10,20,40,80" : c.radii, "--radii");
  const KernelEvaluator ev(p, set);
  const TraceReport rep = trace_convergence_report(ev, radii, nodes);

  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"r", r.r}, {"trace", r.trace}, {"error", r.error}, {"bound_ratio", r.bound_ratio}});
  json config = base_config("trace", p);
  config["spectrum"] = spectrum_to_json(set);
  config["radii"] = radii;
  config["nodes"] = nodes;
  json out = {{"rows", rows},
              {"critical", rep.critical},
              {"band", std::isfinite(rep.band) ? json(rep.band) : json(nullptr)},
              {"error_decreasing", rep.error_decreasing},
              {"growth", rep.growth}};
  write_output(c.out, dump(stamp(out, config)));
  return kExitOk;
}

// sweep ----------------------------------------------------------------------

int cmd_sweep(const Common& c, const std::string& factors_text, const std::string& windows_text,
              const SweepOptions& base) {
  const BandwidthProfile p = need_profile(c);
  const SpectralSet set = need_spectrum(c);
  const std::vector<double> factors = parse_list(factors_text, "--factors");
  SweepOptions opts = base;
  opts.windows = parse_list(windows_text, "--windows");
  opts.seed = c.seed;
  const KernelEvaluator ev(p, set);
  const std::vector<SweepRow> rows = density_sweep(ev, factors, opts);

  json list = json::array();
  for (const auto& r : rows) {
    list.push_back({{"factor", r.factor},
                    {"window", r.window},
                    {"A_hat", r.A_hat},
                    {"B_hat", r.B_hat},
                    {"lambda_min", r.lambda_min},
                    {"seed", r.seed}});
  }
  json config = base_config("sweep", p);
  config["spectrum"] = spectrum_to_json(set);
  config["factors"] = factors;
  config["windows"] = opts.windows;
  config["trials"] = opts.trials;
  config["jitter"] = opts.jitter;
  config["oversampling"] = opts.grid.oversampling;
  config["threshold"] = opts.grid.threshold;
  config["margin_fraction"] = opts.grid.margin_fraction;
  config["seed"] = opts.seed;
  json out = {{"rows", list}, {"label", "empirical"}, {"seed", opts.seed}};
  write_output(c.out, dump(stamp(out, config)));
  return kExitOk;
}

// verify ---------------------------------------------------------------------

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

Check check_le(const std::string& name, double value, double tol) {
  return {name, value, tol, std::isfinite(value) && value <= tol};
}

ConnectionTable corrupted(const ConnectionTable& t) {
  std::vector<APPoly> ap, bp, am, bm;
  for (std::size_t k = 0; k <= t.jumps(); ++k) {
    ap.push_back(t.aplus(k));
    bp.push_back(t.bplus(k));
    am.push_back(t.aminus(k));
    bm.push_back(t.bminus(k));
  }
  ap[0] = cplx(1.01) * ap[0];
  return ConnectionTable::from_coefficients(ap, bp, am, bm);
}

double constant_deviation(const APPoly& f, double expected) {
  double dev = std::abs(f.coefficient(0.0) - expected);
  for (const auto& t : f.terms())
    if (t.freq != 0.0) dev = std::max(dev, std::abs(t.coef));
  return dev;
}

int cmd_verify(const Common& c, bool corrupt) {
  const BandwidthProfile p = need_profile(c);
  const SpectralSet set = need_spectrum(c);
  std::mt19937_64 rng(c.seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng()); };

  const ConnectionTable built = ConnectionTable::build(p);
  const ConnectionTable table = corrupt ? corrupted(built) : built;
  std::vector<Check> checks;

  IdentityResiduals worst;
  for (int i = 0; i < 50; ++i) {
    const double u = 20.0 * (1.0 - unit_uniform(rng()));
    const IdentityResiduals r = wronskian_identities(p, table, u);
    worst.wronskian = std::max(worst.wronskian, r.wronskian);
    worst.modulus = std::max(worst.modulus, r.modulus);
    worst.modulus_balance = std::max(worst.modulus_balance, r.modulus_balance);
    worst.conjugate_wronskian = std::max(worst.conjugate_wronskian, r.conjugate_wronskian);
    worst.kappa_chain = std::max(worst.kappa_chain, r.kappa_chain);
    worst.left_product = std::max(worst.left_product, r.left_product);
    worst.right_product = std::max(worst.right_product, r.right_product);
  }
  checks.push_back(check_le("wronskian", worst.wronskian, 1e-9));
  checks.push_back(check_le("modulus", worst.modulus, 1e-9));
  checks.push_back(check_le("modulus_balance", worst.modulus_balance, 1e-9));
  checks.push_back(check_le("conjugate_wronskian", worst.conjugate_wronskian, 1e-9));
  checks.push_back(check_le("kappa_chain", worst.kappa_chain, 1e-9));
  checks.push_back(check_le("left_product", worst.left_product, 1e-9));
  checks.push_back(check_le("right_product", worst.right_product, 1e-9));

  double det_dev = 0.0;
  double inv_dev = 0.0;
  for (std::size_t k = 1; k <= p.jumps(); ++k) {
    const TransferMatrix L = build_L(p, k);
    const TransferMatrix R = build_R(p, k);
    det_dev = std::max(det_dev, constant_deviation(L.determinant(), p.q(k) / p.q(k - 1)));
    det_dev = std::max(det_dev, constant_deviation(R.determinant(), p.q(k - 1) / p.q(k)));
    const TransferMatrix I = L * R;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        inv_dev = std::max(inv_dev, constant_deviation(I(i, j), i == j ? 1.0 : 0.0));
  }
  checks.push_back(check_le("transfer_determinant", det_dev, 1e-12));
  checks.push_back(check_le("transfer_inverse", inv_dev, 1e-12));

  const KernelEvaluator ev(p, set);
  const Kappa& kappa = ev.kappa();
  double deficit = 0.0;
  double imag = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double u = 0.05 * i;
    const cplx v = kappa.poly(u);
    deficit = std::max(deficit, kappa.lower_bound - v.real());
    imag = std::max(imag, std::abs(v.imag()));
  }
  checks.push_back(check_le("kappa_lower_bound", deficit, 1e-12));
  checks.push_back(check_le("kappa_real", imag, 1e-12));

  double jsym = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double s = uniform(-50.0, 50.0);
    jsym = std::max(jsym, std::abs(ev.j_evaluator()(-s) - std::conj(ev.j_evaluator()(s))));
  }
  checks.push_back(check_le("j_conjugate_symmetry", jsym, 1e-10));

  const double lo = (p.jumps() ? p.knots().front() : 0.0) - 10.0;
  const double hi = (p.jumps() ? p.knots().back() : 0.0) + 10.0;
  double sym = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = uniform(lo, hi);
    const double y = uniform(lo, hi);
    sym = std::max(sym, std::abs(ev(x, y) - ev(y, x)));
  }
  checks.push_back(check_le("kernel_symmetry", sym, 1e-10));

  std::vector<double> pts;
  for (int i = 0; i < 40; ++i) pts.push_back(uniform(lo, hi));
  const auto g = ev.gram(pts);
  Eigen::MatrixXd gm(40, 40);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) gm(i, j) = g[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("verify: eigen-solve failed");
  const double lmax = es.eigenvalues()(39);
  checks.push_back(check_le("kernel_psd", std::max(0.0, -es.eigenvalues()(0)) / lmax, 1e-8));

  double diag = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double y = uniform(lo, hi);
    diag = std::max(diag, std::abs(ev.diagonal(y) - ev(y, y)));
  }
  checks.push_back(check_le("diagonal_agreement", diag, 1e-9));

  const JEvaluator& jev = ev.j_evaluator();
  if (jev.has_series() && set.is_band() && std::abs(jev.series_parameters().R) < 1.0) {
    double excess = -INFINITY;
    const int M = jev.series_terms(1e-10);
    for (int i = 0; i < 20; ++i) {
      const double s = uniform(-50.0, 50.0);
      const cplx q = j_quadrature(kappa, set, s);
      for (int m : {0, 1, 2, M / 2, M}) {
        excess = std::max(excess, std::abs(jev.series_partial(s, m) - q) - jev.series_bound(m));
      }
    }
    checks.push_back(check_le("series_bound", excess, 1e-10));
  }

  bool all = true;
  json list = json::array();
  for (const auto& ch : checks) {
    all = all && ch.pass;
    list.push_back({{"name", ch.name}, {"value", ch.value}, {"tolerance", ch.tolerance},
                    {"pass", ch.pass}});
  }
  json config = base_config("verify", p);
  config["spectrum"] = spectrum_to_json(set);
  config["seed"] = c.seed;
  config["corrupt_table"] = corrupt;
  json out = {{"checks", list}, {"pass", all}, {"seed", c.seed}};
  write_output(c.out, dump(stamp(out, config)));
  if (!all) {
    for (const auto& ch : checks)
      if (!ch.pass) std::cerr << "verification failed: " << ch.name << "\n";
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Reproducing kernels and sampling densities of variable-bandwidth spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common c;
  auto add_common = [&c](CLI::App* sub, bool grid, bool radii) {
    sub->add_option("--profile", c.profile, "profile JSON {\"knots\":[...],\"levels\":[...]}");
    sub->add_option("--spectrum", c.spectrum, "spectral set JSON {\"intervals\":[[a,b],...]}");
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--seed", c.seed, "random seed")->default_val(0);
    if (grid) sub->add_option("--grid", c.grid, "lo:hi:count");
    if (radii) sub->add_option("--radii", c.radii, "comma-separated radii");
  };

  auto* kappa = app.add_subcommand("kappa", "spectral density kappa on a u-grid");
  add_common(kappa, true, false);
  std::string cosine_path;
  kappa->add_option("--cosine", cosine_path, "write the cosine view as JSON here");

  auto* jfun = app.add_subcommand("jfun", "the integral J(s) on an s-grid");
  add_common(jfun, true, false);
  std::string jmode = "auto";
  double eps = 1e-10;
  bool compare = false;
  jfun->add_option("--mode", jmode, "auto|series|quadrature|elementary");
  jfun->add_option("--eps", eps, "series truncation target");
  jfun->add_flag("--compare", compare, "add adaptive-quadrature columns");

  auto* kernel = app.add_subcommand("kernel", "reproducing kernel: grid, slice or diag");
  add_common(kernel, true, false);
  std::string kernel_what;
  double x0 = 0.0;
  bool closed_form = false;
  bool quadrature_j = false;
  kernel->add_option("mode", kernel_what, "grid|slice|diag")->required();
  kernel->add_option("--x0", x0, "slice position");
  kernel->add_flag("--closed-form", closed_form, "two-jump closed form");
  kernel->add_flag("--quadrature-j", quadrature_j, "evaluate J by quadrature");

  auto* density = app.add_subcommand("density", "windowed Beurling densities of a point set");
  add_common(density, false, true);
  std::string points_path;
  density->add_option("--points", points_path, "one number per line, or CSV with column x");

  auto* trace = app.add_subcommand("trace", "averaged kernel trace over [-r, r]");
  add_common(trace, false, true);
  std::size_t nodes = 10;
  trace->add_option("--nodes", nodes, "Gauss-Legendre nodes per panel");

  auto* sweep = app.add_subcommand("sweep", "empirical frame bounds across densities");
  add_common(sweep, false, false);
  std::string factors = "0.6,1.5";
  std::string windows = "20,40,80";
  SweepOptions sweep_opts;
  sweep->add_option("--factors", factors, "density factors relative to critical");
  sweep->add_option("--windows", windows, "window half-widths");
  sweep->add_option("--trials", sweep_opts.trials, "trials per factor and window");
  sweep->add_option("--jitter", sweep_opts.jitter, "point jitter as a fraction of the gap");
  sweep->add_option("--oversampling", sweep_opts.grid.oversampling, "reference grid oversampling");
  sweep->add_option("--threshold", sweep_opts.grid.threshold, "relative Gram eigenvalue cut");
  sweep->add_option("--margin", sweep_opts.grid.margin_fraction, "reference grid margin fraction");

  auto* verify = app.add_subcommand("verify", "check the exact identities and kernel properties");
  add_common(verify, false, false);
  bool corrupt = false;
  verify->add_flag("--corrupt-table", corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*kappa) return cmd_kappa(c, cosine_path);
    if (*jfun) return cmd_jfun(c, jmode, eps, compare);
    if (*kernel) return cmd_kernel(c, kernel_what, x0, closed_form, quadrature_j);
    if (*density) return cmd_density(c, points_path);
    if (*trace) return cmd_trace(c, nodes);
    if (*sweep) return cmd_sweep(c, factors, windows, sweep_opts);
    if (*verify) return cmd_verify(c, corrupt);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}

}  // namespace vbpw
