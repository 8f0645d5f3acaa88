#include "bergman/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "bergman/berezin.hpp"
#include "bergman/dbar.hpp"
#include "bergman/errors.hpp"
#include "bergman/expansion.hpp"
#include "bergman/fock.hpp"
#include "bergman/kernel.hpp"
#include "bergman/potential.hpp"
#include "bergman/version.hpp"

namespace fs = std::filesystem;

namespace bergman {

int NRule::n_for(double m, double tau) const {
  int n;
  if (kind == "round_m_tau")
    n = static_cast<int>(std::lround(m * tau));
  else if (kind == "m_tau_plus_M")
    n = static_cast<int>(std::lround(m * tau + M));
  else
    throw ConfigError("n_rule.kind: unknown rule \"" + kind + "\"");
  if (n < 1) throw ConfigError("n_rule: produces n < 1 at m = " + std::to_string(m));
  return n;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

namespace {

cd parse_point(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(path + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig c;
  c.raw = j;
  if (j.contains("weight")) {
    c.weight_descriptor = j.at("weight");
    try {
      weight_from_json(c.weight_descriptor);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("weight: ") + e.what());
    }
  }
  if (j.contains("tau")) {
    c.tau = j.at("tau").get<double>();
    if (!(c.tau > 0.0)) throw ConfigError("tau: must be > 0");
  }
  if (j.contains("m_schedule")) {
    c.m_schedule = j.at("m_schedule").get<std::vector<double>>();
    if (c.m_schedule.empty()) throw ConfigError("m_schedule: must be nonempty");
    for (std::size_t i = 0; i < c.m_schedule.size(); ++i) {
      if (!(c.m_schedule[i] > 0.0)) throw ConfigError("m_schedule: entries must be > 0");
      if (i > 0 && c.m_schedule[i] <= c.m_schedule[i - 1])
        throw ConfigError("m_schedule: must be strictly increasing");
    }
  }
  if (j.contains("n_rule")) {
    const auto& r = j.at("n_rule");
    if (!r.is_object() || !r.contains("kind")) throw ConfigError("n_rule: expected {\"kind\": ...}");
    c.n_rule.kind = r.at("kind").get<std::string>();
    if (c.n_rule.kind != "round_m_tau" && c.n_rule.kind != "m_tau_plus_M")
      throw ConfigError("n_rule.kind: unknown rule \"" + c.n_rule.kind + "\"");
    if (c.n_rule.kind == "m_tau_plus_M") {
      if (!r.contains("M")) throw ConfigError("n_rule.M: required for m_tau_plus_M");
      c.n_rule.M = r.at("M").get<double>();
    }
  }
  if (j.contains("z0")) {
    const auto& arr = j.at("z0");
    if (!arr.is_array() || arr.empty()) throw ConfigError("z0: expected a nonempty list of points");
    c.z0_list.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      c.z0_list.push_back(parse_point(arr[i], "z0[" + std::to_string(i) + "]"));
  }
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    if (q.contains("r_max")) c.quadrature.r_max = q.at("r_max").get<double>();
    if (q.contains("n_radial")) c.quadrature.n_radial = q.at("n_radial").get<int>();
    if (q.contains("n_angular")) c.quadrature.n_angular = q.at("n_angular").get<int>();
    if (c.quadrature.r_max < 0.0) throw ConfigError("quadrature.r_max: must be >= 0");
    if (c.quadrature.n_radial != 0 && c.quadrature.n_radial < 2)
      throw ConfigError("quadrature.n_radial: must be >= 2");
    if (c.quadrature.n_angular != 0 && c.quadrature.n_angular < 4)
      throw ConfigError("quadrature.n_angular: must be >= 4");
  }
  if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

std::uint64_t config_hash(const nlohmann::json& j) {
  const std::string dump = j.dump();  // nlohmann keeps object keys sorted
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = p.parent_path() / (p.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("write_atomic: cannot open " + tmp.string());
    out << content;
  }
  fs::rename(tmp, p);
}

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string header_comment(const ExperimentConfig& c) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "# config_hash=%016llx version=%s\n",
                static_cast<unsigned long long>(config_hash(c.raw)), kVersion);
  return buf;
}

std::string out_path(const ExperimentConfig& c, const RunOptions& opt, const std::string& name) {
  const std::string dir = opt.out_dir.empty() ? c.out_dir : opt.out_dir;
  return (fs::path(dir) / name).string();
}

PlanarQuadrature quadrature_for(const ExperimentConfig& c, const Weight& w, double m, int n) {
  if (c.quadrature.r_max > 0.0 && c.quadrature.n_radial > 0 && c.quadrature.n_angular > 0)
    return build_radial_quadrature(c.quadrature.r_max, c.quadrature.n_radial,
                                   c.quadrature.n_angular);
  return default_quadrature(w, m, n);
}

// ordered parallel map: task i writes slot i; output order is fixed, so the
// files are identical for any thread count
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  const int k = std::min<std::size_t>(threads, count);
  for (int t = 0; t < k; ++t)
    workers.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    }));
  for (auto& f : workers) f.get();
}

int effective_threads(const RunOptions& opt) { return opt.deterministic ? 1 : std::max(1, opt.threads); }

EquilibriumResult equilibrium_for(const ExperimentConfig& c, const Weight& w) {
  if (w.is_radial) return radial_equilibrium_result(w, c.tau);
  GridSpec spec;
  if (c.raw.contains("grid")) {
    const auto& g = c.raw.at("grid");
    if (g.contains("extent")) spec.extent = g.at("extent").get<double>();
    if (g.contains("spacing")) spec.spacing = g.at("spacing").get<double>();
    if (g.contains("omega")) spec.omega = g.at("omega").get<double>();
    if (g.contains("max_iter")) spec.max_iter = g.at("max_iter").get<int>();
    if (g.contains("tol")) spec.tol = g.at("tol").get<double>();
  }
  return psor_obstacle_solve(w, c.tau, spec);
}

}  // namespace

std::vector<std::string> run_kernel_diag(const ExperimentConfig& c, const RunOptions& opt) {
  const Weight w = weight_from_json(c.weight_descriptor);
  struct Row {
    double m;
    int n;
    cd z0;
    double one_pt, expansion, residual;
  };
  std::vector<Row> rows(c.m_schedule.size() * c.z0_list.size());
  parallel_for(c.m_schedule.size(), effective_threads(opt), [&](std::size_t i) {
    const double m = c.m_schedule[i];
    const int n = c.n_rule.n_for(m, c.tau);
    const auto basis = build_space(w, m, n, quadrature_for(c, w, m, n));
    for (std::size_t k = 0; k < c.z0_list.size(); ++k) {
      const cd z0 = c.z0_list[k];
      Row& r = rows[i * c.z0_list.size() + k];
      r.m = m;
      r.n = n;
      r.z0 = z0;
      r.one_pt = one_point(basis, z0);
      r.expansion = diag_expansion(w, m, z0);
      r.residual = std::abs(r.one_pt - r.expansion);
    }
  });
  std::ostringstream os;
  os << header_comment(c) << "m,n,z0_re,z0_im,one_point,diag_expansion,residual,residual_times_m\n";
  for (const auto& r : rows)
    os << format17(r.m) << ',' << r.n << ',' << format17(r.z0.real()) << ','
       << format17(r.z0.imag()) << ',' << format17(r.one_pt) << ',' << format17(r.expansion)
       << ',' << format17(r.residual) << ',' << format17(r.residual * r.m) << '\n';
  const std::string path = out_path(c, opt, "kernel_diag.csv");
  write_atomic(path, os.str());
  return {path};
}

std::vector<std::string> run_berezin_conc(const ExperimentConfig& c, const RunOptions& opt) {
  const Weight w = weight_from_json(c.weight_descriptor);
  const double region_radius =
      c.raw.contains("region_radius") ? c.raw.at("region_radius").get<double>() : 1.2;
  struct Row {
    double m;
    int n;
    cd z0;
    double mass;
  };
  std::vector<Row> rows(c.m_schedule.size() * c.z0_list.size());
  parallel_for(c.m_schedule.size(), effective_threads(opt), [&](std::size_t i) {
    const double m = c.m_schedule[i];
    const int n = c.n_rule.n_for(m, c.tau);
    const auto quad = quadrature_for(c, w, m, n);
    const auto basis = build_space(w, m, n, quad);
    for (std::size_t k = 0; k < c.z0_list.size(); ++k) {
      const auto ev = make_berezin(basis, c.z0_list[k]);
      rows[i * c.z0_list.size() + k] = {
          m, n, c.z0_list[k],
          mass_outside(ev, [&](cd z) { return std::abs(z) > region_radius; }, quad)};
    }
  });
  std::ostringstream os;
  os << header_comment(c) << "m,n,z0_re,z0_im,region_radius,mass_outside\n";
  for (const auto& r : rows)
    os << format17(r.m) << ',' << r.n << ',' << format17(r.z0.real()) << ','
       << format17(r.z0.imag()) << ',' << format17(region_radius) << ',' << format17(r.mass)
       << '\n';
  const std::string path = out_path(c, opt, "berezin_conc.csv");
  write_atomic(path, os.str());
  return {path};
}

std::vector<std::string> run_gaussian_tv(const ExperimentConfig& c, const RunOptions& opt) {
  const Weight w = weight_from_json(c.weight_descriptor);
  struct Row {
    double m;
    int n;
    cd z0;
    double tv;
  };
  std::vector<Row> rows(c.m_schedule.size() * c.z0_list.size());
  const auto tvq = tv_quadrature();
  parallel_for(c.m_schedule.size(), effective_threads(opt), [&](std::size_t i) {
    const double m = c.m_schedule[i];
    const int n = c.n_rule.n_for(m, c.tau);
    const auto basis = build_space(w, m, n, quadrature_for(c, w, m, n));
    for (std::size_t k = 0; k < c.z0_list.size(); ++k) {
      const auto ev = make_berezin(basis, c.z0_list[k]);
      rows[i * c.z0_list.size() + k] = {m, n, c.z0_list[k], tv_to_gaussian(ev, tvq)};
    }
  });
  std::ostringstream os;
  os << header_comment(c) << "m,n,z0_re,z0_im,tv\n";
  for (const auto& r : rows)
    os << format17(r.m) << ',' << r.n << ',' << format17(r.z0.real()) << ','
       << format17(r.z0.imag()) << ',' << format17(r.tv) << '\n';
  const std::string path = out_path(c, opt, "gaussian_tv.csv");
  write_atomic(path, os.str());
  return {path};
}

std::vector<std::string> run_offdiag(const ExperimentConfig& c, const RunOptions& opt) {
  const Weight w = weight_from_json(c.weight_descriptor);
  const auto eq = equilibrium_for(c, w);
  cd direction{1.0, 0.0};
  if (c.raw.contains("direction")) direction = parse_point(c.raw.at("direction"), "direction");

  struct Item {
    double m;
    int n;
    cd z0;
    OffDiagReport report;
  };
  std::vector<Item> items(c.m_schedule.size() * c.z0_list.size());
  parallel_for(c.m_schedule.size(), effective_threads(opt), [&](std::size_t i) {
    const double m = c.m_schedule[i];
    const int n = c.n_rule.n_for(m, c.tau);
    const auto basis = build_space(w, m, n, quadrature_for(c, w, m, n));
    for (std::size_t k = 0; k < c.z0_list.size(); ++k) {
      const cd z0 = c.z0_list[k];
      std::vector<double> distances;
      if (c.raw.contains("distances")) {
        distances = c.raw.at("distances").get<std::vector<double>>();
      } else {
        const double d = std::abs(eq.droplet_radius ? *eq.droplet_radius - std::abs(z0) : 0.5);
        for (int s = 1; s <= 12; ++s) distances.push_back(d * s / 12.0);
      }
      items[i * c.z0_list.size() + k] = {m, n, z0,
                                         offdiag_profile(basis, z0, direction, distances, eq)};
    }
  });

  std::vector<std::string> files;
  std::ostringstream summary;
  summary << header_comment(c) << "m,n,z0_re,z0_im,d_K,a_K,fitted_slope\n";
  for (std::size_t idx = 0; idx < items.size(); ++idx) {
    const auto& it = items[idx];
    summary << format17(it.m) << ',' << it.n << ',' << format17(it.z0.real()) << ','
            << format17(it.z0.imag()) << ',' << format17(it.report.d_K) << ','
            << format17(it.report.a_K) << ',' << format17(it.report.fitted_slope) << '\n';
    std::ostringstream os;
    os << header_comment(c);
    offdiag_to_csv(it.report, os);
    const std::string path =
        out_path(c, opt, "offdiag_profile_" + std::to_string(idx) + ".csv");
    write_atomic(path, os.str());
    files.push_back(path);
  }
  const std::string path = out_path(c, opt, "offdiag_summary.csv");
  write_atomic(path, summary.str());
  files.push_back(path);
  return files;
}

std::vector<std::string> run_obstacle(const ExperimentConfig& c, const RunOptions& opt) {
  const Weight w = weight_from_json(c.weight_descriptor);
  GridSpec spec;
  if (c.raw.contains("grid")) {
    const auto& g = c.raw.at("grid");
    if (g.contains("extent")) spec.extent = g.at("extent").get<double>();
    if (g.contains("spacing")) spec.spacing = g.at("spacing").get<double>();
    if (g.contains("omega")) spec.omega = g.at("omega").get<double>();
    if (g.contains("max_iter")) spec.max_iter = g.at("max_iter").get<int>();
    if (g.contains("tol")) spec.tol = g.at("tol").get<double>();
  }
  const auto res = psor_obstacle_solve(w, c.tau, spec);
  const auto& g = *res.grid;

  std::ostringstream grid_os;
  grid_os << header_comment(c) << "x,y,Q,Qhat,in_droplet\n";
  for (int i = 0; i < g.size; ++i)
    for (int j = 0; j < g.size; ++j) {
      const cd z{g.x_of(i), g.x_of(j)};
      grid_os << format17(z.real()) << ',' << format17(z.imag()) << ',' << format17(w.Q(z))
              << ',' << format17(g.u[g.index(i, j)]) << ',' << (g.mask[g.index(i, j)] ? 1 : 0)
              << '\n';
    }
  const std::string grid_path = out_path(c, opt, "obstacle_grid.csv");
  write_atomic(grid_path, grid_os.str());

  std::ostringstream os;
  os << header_comment(c)
     << "radius_estimate,radial_radius,mass,boundary_c,q_tau,c_tau,sweeps,outer_iterations,"
        "final_residual\n";
  const double radial_radius = w.is_radial ? radial_droplet_radius(w, c.tau) : 0.0;
  os << format17(droplet_radius_estimate(res)) << ',' << format17(radial_radius) << ','
     << format17(res.diagnostics.mass) << ',' << format17(g.boundary_c) << ','
     << format17(res.q_tau) << ',' << format17(res.c_tau) << ',' << res.diagnostics.sweeps
     << ',' << res.diagnostics.outer_iterations << ','
     << format17(res.diagnostics.final_residual) << '\n';
  const std::string path = out_path(c, opt, "obstacle_summary.csv");
  write_atomic(path, os.str());
  return {grid_path, path};
}

std::vector<std::string> run_fock_harmonic(const ExperimentConfig& c, const RunOptions& opt) {
  HarmonicMeasureSpec spec;
  spec.tau = c.tau;
  spec.z0 = c.z0_list.front();
  if (c.raw.contains("boundary_samples"))
    spec.boundary_samples = c.raw.at("boundary_samples").get<int>();
  const auto rows = th5_experiment(spec, th5_test_function(c.tau), c.m_schedule);
  std::ostringstream os;
  os << header_comment(c) << "m,n,schedule,berezin,harmonic,gap\n";
  for (const auto& r : rows)
    os << format17(r.m) << ',' << r.n << ',' << r.schedule << ',' << format17(r.berezin_value)
       << ',' << format17(r.harmonic_value) << ',' << format17(r.gap) << '\n';
  const std::string path = out_path(c, opt, "fock_harmonic.csv");
  write_atomic(path, os.str());
  return {path};
}

std::vector<std::string> run_fock_moments(const ExperimentConfig& c, const RunOptions& opt) {
  std::vector<int> orders{0, 1, 2};
  if (c.raw.contains("orders")) orders = c.raw.at("orders").get<std::vector<int>>();
  std::vector<double> radii{0.5, 1.0};
  if (c.raw.contains("radii")) radii = c.raw.at("radii").get<std::vector<double>>();

  std::ostringstream os;
  os << header_comment(c)
     << "kind,m,n,order,z0_re,z0_im,r,closed_re,closed_im,quadrature_re,quadrature_im,"
        "abs_diff\n";
  const auto quad = build_radial_quadrature(4.0, 360, 128);
  for (double m : c.m_schedule) {
    const int n = c.n_rule.n_for(m, c.tau);
    for (cd z0 : c.z0_list) {
      for (int j : orders) {
        if (n < j + 1) continue;
        const cd closed = pv_moment(m, n, j, z0);
        const cd viaQuad = pv_moment_quadrature(m, n, j, z0, quad);
        os << "pv," << format17(m) << ',' << n << ',' << j << ',' << format17(z0.real()) << ','
           << format17(z0.imag()) << ",inf," << format17(closed.real()) << ','
           << format17(closed.imag()) << ',' << format17(viaQuad.real()) << ','
           << format17(viaQuad.imag()) << ',' << format17(std::abs(closed - viaQuad)) << '\n';
        for (double r : radii) {
          const cd rc = restricted_moment(m, n, j, z0, r);
          const cd rq = restricted_moment_quadrature(m, n, j, z0, r, 300, 96);
          os << "restricted," << format17(m) << ',' << n << ',' << j << ','
             << format17(z0.real()) << ',' << format17(z0.imag()) << ',' << format17(r) << ','
             << format17(rc.real()) << ',' << format17(rc.imag()) << ',' << format17(rq.real())
             << ',' << format17(rq.imag()) << ',' << format17(std::abs(rc - rq)) << '\n';
        }
      }
    }
  }
  const std::string path = out_path(c, opt, "fock_moments.csv");
  write_atomic(path, os.str());
  return {path};
}

std::vector<std::string> run_dbar_bound(const ExperimentConfig& c, const RunOptions& opt) {
  const Weight w = weight_from_json(c.weight_descriptor);
  const double M0 = c.raw.contains("M0") ? c.raw.at("M0").get<double>() : 1.0;
  const double bpar = c.raw.contains("bpar") ? c.raw.at("bpar").get<double>() : 0.5;
  cd bump_center{0.0, 0.0};
  double bump_radius = 0.3;
  if (c.raw.contains("bump")) {
    const auto& b = c.raw.at("bump");
    if (b.contains("center")) bump_center = parse_point(b.at("center"), "bump.center");
    if (b.contains("radius")) bump_radius = b.at("radius").get<double>();
  }
  const auto eq = equilibrium_for(c, w);
  const auto params = make_dbar_params(M0, bpar, eq, w, bump_center, bump_radius);
  const auto f = make_bump(bump_center, bump_radius);

  std::vector<CorBhRecord> records(c.m_schedule.size());
  parallel_for(c.m_schedule.size(), effective_threads(opt), [&](std::size_t i) {
    const double m = c.m_schedule[i];
    const int n = c.n_rule.n_for(m, c.tau);
    const auto quad = build_radial_quadrature(default_r_max(w, m, n), 240, 96);
    const auto basis = build_space(w, m, n, quad);
    records[i] = verify_cor_bh(basis, f, params, eq, quad);
  });

  nlohmann::json out;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(c.raw)));
  out["config_hash"] = buf;
  out["version"] = kVersion;
  out["M0"] = M0;
  out["bpar"] = bpar;
  out["q_tau"] = params.q_tau;
  out["c_tau"] = params.c_tau;
  out["a"] = params.a;
  out["m0"] = params.m0;
  out["records"] = nlohmann::json::array();
  for (const auto& r : records) out["records"].push_back(cor_bh_to_json(r));
  const std::string path = out_path(c, opt, "dbar_bound.json");
  write_atomic(path, out.dump(2) + "\n");
  return {path};
}

}  // namespace bergman
