#include "bergman/expansion.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "bergman/berezin.hpp"
#include "bergman/errors.hpp"

namespace bergman {

namespace {
const BivariateAnalytic& psi_or_throw(const Weight& w, const char* op) {
  if (!w.psi) throw UnsupportedWeightError(std::string(op) + ": weight carries no psi");
  return *w.psi;
}
}  // namespace

cd b0(const Weight& w, cd z, cd v) { return psi_or_throw(w, "b0").d1d2(z, v); }

cd b1(const Weight& w, cd z, cd v) {
  const auto& psi = psi_or_throw(w, "b1");
  const cd g = psi.d1d2(z, v);
  if (g == cd{0.0, 0.0}) throw Error("b1: d1 d2 psi vanishes at the evaluation point");
  return (psi.d11d22(z, v) * g - psi.d11d2(z, v) * psi.d1d22(z, v)) / (2.0 * g * g);
}

ExpansionEvaluator make_expansion(const Weight& w, double m) {
  psi_or_throw(w, "make_expansion");
  if (!(m > 0.0)) throw std::invalid_argument("make_expansion: m must be > 0");
  return ExpansionEvaluator{w, m};
}

LogValue approx_kernel_log(const ExpansionEvaluator& ev, cd z, cd w) {
  const auto& psi = *ev.weight.psi;
  const cd wbar = std::conj(w);
  const cd amp = ev.m * b0(ev.weight, z, wbar) + b1(ev.weight, z, wbar);
  const cd p = psi.eval(z, wbar);
  const double log_mag = std::log(std::abs(amp)) + ev.m * p.real() -
                         0.5 * ev.m * (ev.weight.Q(z) + ev.weight.Q(w));
  const double ph = std::arg(amp) + ev.m * p.imag();
  return LogValue::from_log(log_mag, cd{std::cos(ph), std::sin(ph)});
}

double diag_expansion(const Weight& w, double m, cd z) {
  const double lap = w.laplacian(z);
  if (!(lap > 0.0)) throw NotInXError("diag_expansion: lap Q(z) <= 0");
  if (w.psi) {
    const cd zbar = std::conj(z);
    return (m * b0(w, z, zbar) + b1(w, z, zbar)).real();
  }
  const auto log_lap = [&](cd v) { return std::log(w.laplacian(v)); };
  return m * lap + 0.5 * fd_laplacian(log_lap, z);
}

double diag_residual(const BergmanSpaceBasis& basis, const Weight& w, cd z) {
  return std::abs(one_point(basis, z) - diag_expansion(w, basis.m, z));
}

namespace {

// dist(z0, complement of S_tau intersect X), sampled on rays for the grid route
double dist_to_complement(const EquilibriumResult& eq, const Weight& w, cd z0) {
  if (eq.droplet_radius) {
    double d = *eq.droplet_radius - std::abs(z0);
    // trim by the closest point where lap Q <= 0 (none for the built-ins)
    const int n_dir = 32;
    for (int k = 0; k < n_dir; ++k) {
      const double th = 2.0 * M_PI * k / n_dir;
      for (double t = 0.01; t < d; t += 0.01) {
        const cd z = z0 + t * cd{std::cos(th), std::sin(th)};
        if (!(w.laplacian(z) > 0.0)) {
          d = std::min(d, t);
          break;
        }
      }
    }
    return d;
  }
  if (!eq.grid) throw Error("offdiag_profile: equilibrium result carries no droplet data");
  const auto& g = *eq.grid;
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.size; ++i)
    for (int j = 0; j < g.size; ++j) {
      const cd z{g.x_of(i), g.x_of(j)};
      if (g.mask[g.index(i, j)] && w.laplacian(z) > 0.0) continue;
      d = std::min(d, std::abs(z - z0));
    }
  return d;
}

}  // namespace

OffDiagReport offdiag_profile(const BergmanSpaceBasis& basis, cd z0, cd direction,
                              const std::vector<double>& distances,
                              const EquilibriumResult& equilibrium) {
  if (distances.empty()) throw std::invalid_argument("offdiag_profile: empty distance list");
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (!(distances[i] > 0.0) || (i > 0 && distances[i] <= distances[i - 1]))
      throw std::invalid_argument("offdiag_profile: distances must be positive increasing");
  }
  const cd dir = direction / std::abs(direction);

  OffDiagReport report;
  report.z0 = z0;
  report.ray_direction = dir;
  report.d_K = dist_to_complement(equilibrium, basis.weight, z0);
  if (!(report.d_K > 0.0))
    throw std::invalid_argument("offdiag_profile: z0 is not interior to S_tau intersect X");

  double a_K = std::numeric_limits<double>::infinity();
  const int n_a = 24;
  for (int k = 0; k < n_a; ++k) {
    const double th = 2.0 * M_PI * k / n_a;
    for (double t = 0.0; t <= 0.5 * report.d_K + 1e-12; t += 0.05 * report.d_K + 1e-12)
      a_K = std::min(a_K, basis.weight.laplacian(z0 + t * cd{std::cos(th), std::sin(th)}));
  }
  report.a_K = a_K;

  const BerezinEvaluator ev = make_berezin(basis, z0);
  const double log_ref = log_one_point(basis, z0);
  for (double t : distances) {
    const cd z = z0 + t * dir;
    OffDiagSample s;
    s.distance = t;
    s.log_density = log_density(ev, z);
    s.compensation = basis.m * (basis.weight.Q(z) - equilibrium.eval_Qhat(z));
    report.samples.push_back(s);
  }

  // OLS of the compensated log profile against distance, restricted to
  // t <= d_K; underflowed samples are dropped
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& s : report.samples) {
    if (s.distance > report.d_K) continue;
    if (s.log_density < log_ref - 700.0 || s.log_density == kNegInf) continue;
    const double y = s.log_density + s.compensation;
    sx += s.distance;
    sy += y;
    sxx += s.distance * s.distance;
    sxy += s.distance * y;
    ++cnt;
  }
  if (cnt >= 2) {
    const double denom = cnt * sxx - sx * sx;
    report.fitted_slope = denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
  }
  return report;
}

void offdiag_to_csv(const OffDiagReport& report, std::ostream& os) {
  os << "distance,log_density,compensation\n";
  char buf[128];
  for (const auto& s : report.samples) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", s.distance, s.log_density,
                  s.compensation);
    os << buf;
  }
}

}  // namespace bergman
