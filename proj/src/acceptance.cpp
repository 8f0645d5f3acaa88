#include "bergman/acceptance.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <random>
#include <sstream>

#include "bergman/berezin.hpp"
#include "bergman/dbar.hpp"
#include "bergman/expansion.hpp"
#include "bergman/experiments.hpp"
#include "bergman/fock.hpp"
#include "bergman/kernel.hpp"
#include "bergman/potential.hpp"
#include "bergman/version.hpp"

namespace bergman {

namespace {

struct Detail {
  std::ostringstream os;
  bool first = true;
  void add(const std::string& key, double v) {
    if (!first) os << ';';
    first = false;
    os << key << '=' << format17(v);
  }
  std::string str() const { return os.str(); }
};

// 1. dA normalization and gaussian integrals
CriterionResult criterion_normalization() {
  CriterionResult r{1, "normalization", true, ""};
  Detail d;
  const auto disk = build_radial_quadrature(1.0, 40, 16);
  const double disk_mass = integrate(disk, [](cd) { return 1.0; });
  d.add("disk_mass", disk_mass);
  if (std::abs(disk_mass - 1.0) > 1e-10) r.pass = false;

  const auto plane = build_radial_quadrature(6.0, 400, 16);
  for (double m : {1.0, 4.0, 25.0}) {
    const double v = integrate(plane, [m](cd z) { return std::exp(-m * std::norm(z)); });
    d.add("gauss_m" + std::to_string(static_cast<int>(m)), v);
    if (std::abs(v - 1.0 / m) > 1e-8) r.pass = false;
  }
  r.detail = d.str();
  return r;
}

// 2. quadrature-built kernel vs m E_{n-1}(m z conj(w))
CriterionResult criterion_fock_closed_form() {
  CriterionResult r{2, "fock_closed_form", true, ""};
  Detail d;
  const Weight w = make_fock();
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::pair<double, int> cases[] = {{4.0, 4}, {10.0, 12}, {30.0, 30}};
  for (const auto& [m, n] : cases) {
    const auto basis = build_space(w, m, n, default_quadrature(w, m, n));
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const cd z{u(rng), u(rng)}, v{u(rng), u(rng)};
      const cd closed = fock_kernel(m, n, z, v);
      const cd built = kernel_eval(basis, z, v);
      worst = std::max(worst, std::abs(built - closed) / std::abs(closed));
    }
    d.add("rel_m" + std::to_string(static_cast<int>(m)) + "_n" + std::to_string(n), worst);
    if (worst > 1e-7) r.pass = false;
  }
  r.detail = d.str();
  return r;
}

// 3. every berezin density integrates to 1
CriterionResult criterion_berezin_mass() {
  CriterionResult r{3, "berezin_mass", true, ""};
  Detail d;
  const Weight weights[] = {make_fock(), make_radial_power(2), make_quartic_perturbation(0.1)};
  const std::pair<double, int> mn[] = {{6.0, 6}, {12.0, 12}, {12.0, 16}};
  const cd z0s[] = {cd{0.0, 0.0}, cd{0.4, 0.0}, cd{0.3, 0.3}};
  double worst = 0.0;
  for (const auto& w : weights)
    for (const auto& [m, n] : mn) {
      const auto quad = default_quadrature(w, m, n);
      const auto basis = build_space(w, m, n, quad);
      for (cd z0 : z0s) {
        const auto ev = make_berezin(basis, z0);
        const double mass = integrate(quad, [&](cd z) { return density(ev, z); });
        worst = std::max(worst, std::abs(mass - 1.0));
      }
    }
  d.add("worst_mass_gap", worst);
  if (worst > 1e-6) r.pass = false;
  r.detail = d.str();
  return r;
}

// 4. fock at z0 = 0 is exactly gaussian for every n
CriterionResult criterion_exact_gaussian() {
  CriterionResult r{4, "exact_gaussian", true, ""};
  Detail d;
  const Weight w = make_fock();
  const auto tvq = tv_quadrature();
  double worst = 0.0;
  for (double m : {5.0, 50.0})
    for (int n : {1, 8, 40}) {
      const auto basis = build_space(w, m, n, default_quadrature(w, m, n));
      const double tv = tv_to_gaussian(make_berezin(basis, cd{0.0, 0.0}), tvq);
      worst = std::max(worst, tv);
    }
  d.add("worst_tv", worst);
  if (worst > 1e-6) r.pass = false;
  r.detail = d.str();
  return r;
}

// 5. diagonal expansion residual at rate 1/m
CriterionResult criterion_diagonal_expansion() {
  CriterionResult r{5, "diagonal_expansion", true, ""};
  Detail d;
  const Weight w = make_quartic_perturbation(0.1);
  const cd z0{0.3, 0.0};
  double r16 = 0.0, prev = 0.0;
  bool decreasing = true;
  double worst_scaled = 0.0;
  for (double m : {16.0, 32.0, 64.0}) {
    const int n = static_cast<int>(m);
    const auto basis = build_space(w, m, n, default_quadrature(w, m, n));
    const double res = diag_residual(basis, w, z0);
    d.add("residual_m" + std::to_string(static_cast<int>(m)), res);
    if (m == 16.0)
      r16 = res;
    else if (res >= prev)
      decreasing = false;
    worst_scaled = std::max(worst_scaled, res * m);
    prev = res;
  }
  if (!decreasing) r.pass = false;
  if (worst_scaled > 2.0 * 16.0 * r16) r.pass = false;
  d.add("worst_scaled", worst_scaled);
  d.add("bound_scaled", 2.0 * 16.0 * r16);
  r.detail = d.str();
  return r;
}

// 6. tv to the gaussian decreases along the m schedule
CriterionResult criterion_gaussian_convergence() {
  CriterionResult r{6, "gaussian_convergence", true, ""};
  Detail d;
  const Weight w = make_quartic_perturbation(0.1);
  const cd z0{0.3, 0.0};
  const auto tvq = tv_quadrature();
  double prev = std::numeric_limits<double>::infinity();
  for (double m : {16.0, 32.0, 64.0}) {
    const int n = static_cast<int>(m);
    const auto basis = build_space(w, m, n, default_quadrature(w, m, n));
    const double tv = tv_to_gaussian(make_berezin(basis, z0), tvq);
    d.add("tv_m" + std::to_string(static_cast<int>(m)), tv);
    if (tv >= prev) r.pass = false;
    prev = tv;
  }
  r.detail = d.str();
  return r;
}

// 7. droplet concentration: exterior mass decays geometrically in m
CriterionResult criterion_droplet_concentration() {
  CriterionResult r{7, "droplet_concentration", true, ""};
  Detail d;
  const Weight w = make_fock();
  const auto outside = [](cd z) { return std::abs(z) > 1.2; };
  std::vector<double> ms = {20.0, 40.0, 80.0};
  std::vector<double> log_mass;
  double prev = 0.0;
  for (double m : ms) {
    const int n = static_cast<int>(m);
    const auto quad = default_quadrature(w, m, n);
    const auto basis = build_space(w, m, n, quad);
    const double mass = mass_outside(make_berezin(basis, cd{0.0, 0.0}), outside, quad);
    d.add("mass_m" + std::to_string(static_cast<int>(m)), mass);
    if (!log_mass.empty() && !(mass * 5.0 <= prev)) r.pass = false;
    log_mass.push_back(std::log(mass));
    prev = mass;
  }
  // linear fit of log mass against m
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    sx += ms[i];
    sy += log_mass[i];
    sxx += ms[i] * ms[i];
    sxy += ms[i] * log_mass[i];
  }
  const double npts = static_cast<double>(ms.size());
  const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / npts;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / npts;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double fit = slope * ms[i] + intercept;
    ss_res += (log_mass[i] - fit) * (log_mass[i] - fit);
    ss_tot += (log_mass[i] - mean) * (log_mass[i] - mean);
  }
  const double r2 = 1.0 - ss_res / ss_tot;
  d.add("r_squared", r2);
  if (!(r2 >= 0.9)) r.pass = false;
  r.detail = d.str();
  return r;
}

// 8. off-diagonal damping slopes, sqrt(m) growth with slack
CriterionResult criterion_offdiag_damping() {
  CriterionResult r{8, "offdiag_damping", true, ""};
  Detail d;
  for (const Weight& w : {make_fock(), make_quartic_perturbation(0.1)}) {
    const auto eq = radial_equilibrium_result(w, 1.0);
    const double d_K = *eq.droplet_radius;
    std::vector<double> distances;
    for (int s = 1; s <= 11; ++s) distances.push_back(d_K * s / 12.0);
    double s16 = 0.0, s64 = 0.0;
    for (double m : {16.0, 64.0}) {
      const int n = static_cast<int>(m);
      const auto basis = build_space(w, m, n, default_quadrature(w, m, n));
      const auto report =
          offdiag_profile(basis, cd{0.0, 0.0}, cd{1.0, 0.0}, distances, eq);
      (m == 16.0 ? s16 : s64) = report.fitted_slope;
    }
    const std::string tag = w.descriptor.at("kind").get<std::string>();
    d.add("slope16_" + tag, s16);
    d.add("slope64_" + tag, s64);
    if (!(s16 < 0.0 && s64 < 0.0)) r.pass = false;
    if (!(std::abs(s64) >= 1.5 * std::abs(s16))) r.pass = false;
  }
  r.detail = d.str();
  return r;
}

// 9. obstacle solver against the radial closed forms
CriterionResult criterion_obstacle_solver() {
  CriterionResult r{9, "obstacle_solver", true, ""};
  Detail d;
  {
    GridSpec spec;
    spec.extent = 3.0;
    spec.spacing = 0.02;
    const auto res = psor_obstacle_solve(make_fock(), 1.0, spec);
    const double radius = droplet_radius_estimate(res);
    d.add("fock_radius", radius);
    d.add("fock_mass", res.diagnostics.mass);
    if (std::abs(radius - 1.0) > 2.0 * spec.spacing) r.pass = false;
    if (std::abs(res.diagnostics.mass - 1.0) > 1e-3) r.pass = false;
  }
  {
    GridSpec spec;
    spec.extent = 2.0;
    spec.spacing = 0.02;
    const auto res = psor_obstacle_solve(make_radial_power(2), 1.0, spec);
    const double radius = droplet_radius_estimate(res);
    const double expect = std::pow(0.5, 0.25);
    d.add("p2_radius", radius);
    d.add("p2_expected", expect);
    d.add("p2_mass", res.diagnostics.mass);
    if (std::abs(radius - expect) > 2.0 * spec.spacing) r.pass = false;
    if (std::abs(res.diagnostics.mass - 1.0) > 1e-3) r.pass = false;
  }
  r.detail = d.str();
  return r;
}

// 10. szego leading term vs direct summation
CriterionResult criterion_szego() {
  CriterionResult r{10, "szego", true, ""};
  Detail d;
  const auto rel_err = [](int l, double x) {
    const double exact = trunc_exp_log(l, l * x).log_magnitude;
    return std::abs(std::expm1(szego_asymptotic(l, x).log_magnitude - exact));
  };
  const double e200 = rel_err(200, 2.0);
  const double e400 = rel_err(400, 2.0);
  d.add("rel_l200", e200);
  d.add("rel_l400", e400);
  if (!(e200 <= 2e-2)) r.pass = false;
  if (!(e400 < e200)) r.pass = false;
  r.detail = d.str();
  return r;
}

// 11. pv moments: closed form vs quadrature, and the 1/z0 limit
CriterionResult criterion_fock_moments() {
  CriterionResult r{11, "fock_moments", true, ""};
  Detail d;
  const cd z0{1.5, 0.0};
  const auto quad = build_radial_quadrature(4.0, 360, 128);
  for (int j : {1, 2}) {
    const cd closed = pv_moment(10.0, 12, j, z0);
    const cd viaQuad = pv_moment_quadrature(10.0, 12, j, z0, quad);
    const double gap = std::abs(closed - viaQuad);
    d.add("quad_gap_j" + std::to_string(j), gap);
    if (gap > 1e-6) r.pass = false;
  }
  const double limit_gap = std::abs(pv_moment(50.0, 50, 1, z0) - 1.0 / z0);
  d.add("limit_gap", limit_gap);
  if (limit_gap > 1e-3) r.pass = false;
  r.detail = d.str();
  return r;
}

// 12. harmonic-measure limit at an exterior point
CriterionResult criterion_harmonic_measure() {
  CriterionResult r{12, "harmonic_measure", true, ""};
  Detail d;
  HarmonicMeasureSpec spec;
  spec.tau = 1.0;
  spec.z0 = cd{1.5, 0.0};
  const auto rows = th5_experiment(spec, th5_test_function(1.0), {64.0, 256.0});
  double gap64 = 0.0, gap256 = 0.0;
  for (const auto& row : rows) {
    if (row.schedule != "round_m_tau") continue;
    (row.m == 64.0 ? gap64 : gap256) = row.gap;
  }
  d.add("gap_m64", gap64);
  d.add("gap_m256", gap256);
  if (!(gap256 < gap64)) r.pass = false;
  if (!(gap256 <= 5e-2)) r.pass = false;
  r.detail = d.str();
  return r;
}

// 13. dbar minimal-solution bound in regime
CriterionResult criterion_dbar_bound() {
  CriterionResult r{13, "dbar_bound", true, ""};
  Detail d;
  for (const Weight& w : {make_fock(), make_quartic_perturbation(0.1)}) {
    const auto eq = radial_equilibrium_result(w, 1.0);
    const auto params = make_dbar_params(1.0, 0.5, eq, w, cd{0.0, 0.0}, 0.3);
    const auto f = make_bump(cd{0.0, 0.0}, 0.3);
    const std::string tag = w.descriptor.at("kind").get<std::string>();
    for (double m : {8.0, 16.0, 32.0}) {
      const int n = static_cast<int>(m);
      const auto quad = build_radial_quadrature(default_r_max(w, m, n), 240, 96);
      const auto basis = build_space(w, m, n, quad);
      const auto rec = verify_cor_bh(basis, f, params, eq, quad);
      d.add("ratio_" + tag + "_m" + std::to_string(static_cast<int>(m)), rec.ratio);
      if (!rec.regime_ok) r.pass = false;
      if (!(rec.ratio <= 1.0)) r.pass = false;
      if (!(rec.orthogonality_residual_rel <= 1e-6)) r.pass = false;
    }
  }
  r.detail = d.str();
  return r;
}

std::string report_csv(const std::vector<CriterionResult>& criteria) {
  std::ostringstream os;
  os << "# version=" << kVersion << "\n";
  os << "id,name,pass,detail\n";
  for (const auto& c : criteria)
    os << c.id << ',' << c.name << ',' << (c.pass ? 1 : 0) << ",\"" << c.detail << "\"\n";
  return os.str();
}

}  // namespace

AcceptanceReport run_acceptance_once() {
  AcceptanceReport report;
  report.criteria = {
      criterion_normalization(),    criterion_fock_closed_form(),
      criterion_berezin_mass(),     criterion_exact_gaussian(),
      criterion_diagonal_expansion(), criterion_gaussian_convergence(),
      criterion_droplet_concentration(), criterion_offdiag_damping(),
      criterion_obstacle_solver(),  criterion_szego(),
      criterion_fock_moments(),     criterion_harmonic_measure(),
      criterion_dbar_bound()};
  report.all_pass = true;
  for (const auto& c : report.criteria) report.all_pass = report.all_pass && c.pass;
  report.csv = report_csv(report.criteria);
  return report;
}

int run_accept(const std::string& out_dir, bool deterministic, std::ostream& log) {
  AcceptanceReport first = run_acceptance_once();

  // criterion 14: a full rerun must reproduce the summary byte for byte
  const AcceptanceReport second = run_acceptance_once();
  CriterionResult det{14, "determinism", first.csv == second.csv,
                      std::string("deterministic_flag=") + (deterministic ? "1" : "0")};
  first.criteria.push_back(det);
  first.all_pass = first.all_pass && det.pass;
  first.csv = report_csv(first.criteria);

  for (const auto& c : first.criteria) {
    log << (c.pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name;
    if (!c.detail.empty()) log << "  [" << c.detail << "]";
    log << "\n";
  }
  log << (first.all_pass ? "ACCEPTANCE: all criteria passed"
                         : "ACCEPTANCE: some criteria FAILED")
      << "\n";

  if (!out_dir.empty()) {
    write_atomic((std::filesystem::path(out_dir) / "acceptance.csv").string(), first.csv);
  }
  return first.all_pass ? 0 : 1;
}

}  // namespace bergman
