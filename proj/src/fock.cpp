#include "bergman/fock.hpp"

#include <cmath>
#include <stdexcept>

#include "bergman/errors.hpp"

namespace bergman {

namespace {
LogValue trunc_exp_log_of(int k, cd zeta) {
  const double a = std::abs(zeta);
  if (a == 0.0) return k >= 0 ? LogValue::from_real(1.0) : LogValue::zero();
  return trunc_exp_log_complex(k, std::log(a), std::arg(zeta));
}
}  // namespace

cd fock_kernel(double m, int n, cd z, cd w) {
  if (n < 1) throw std::invalid_argument("fock_kernel: n must be >= 1");
  if (!(m > 0.0)) throw std::invalid_argument("fock_kernel: m must be > 0");
  return m * trunc_exp(n - 1, m * z * std::conj(w));
}

LogValue fock_weighted_kernel_log(double m, int n, cd z, cd w) {
  if (n < 1) throw std::invalid_argument("fock_weighted_kernel_log: n must be >= 1");
  const LogValue e = trunc_exp_log_of(n - 1, m * z * std::conj(w));
  if (e.is_zero()) return e;
  return LogValue::from_log(
      std::log(m) + e.log_magnitude - 0.5 * m * (std::norm(z) + std::norm(w)), e.phase);
}

double fock_log_density(double m, int n, cd z, cd z0) {
  const LogValue k = fock_weighted_kernel_log(m, n, z, z0);
  if (k.is_zero()) return kNegInf;
  const LogValue d = fock_weighted_kernel_log(m, n, z0, z0);
  return 2.0 * k.log_magnitude - d.log_magnitude;
}

cd pv_moment(double m, int n, int j, cd z0) {
  if (z0 == cd{0.0, 0.0}) throw std::invalid_argument("pv_moment: z0 must be nonzero");
  if (j < 0) throw std::invalid_argument("pv_moment: j must be >= 0");
  if (n < j + 1) throw DegreeError("pv_moment: requires n >= j+1");
  const double x = m * std::norm(z0);
  double ratio = 0.0;  // E_{j-1}(x)/E_{n-1}(x), with E_{-1} == 0
  if (j >= 1) {
    const LogValue num = trunc_exp_log(j - 1, x);
    const LogValue den = trunc_exp_log(n - 1, x);
    ratio = std::exp(num.log_magnitude - den.log_magnitude);
  }
  const double la = std::log(std::abs(z0)), th = std::arg(z0);
  const cd zminusj = std::exp(-j * la) * cd{std::cos(j * th), -std::sin(j * th)};
  return zminusj * (1.0 - ratio);
}

cd restricted_moment(double m, int n, int nu, cd z0, double r) {
  if (z0 == cd{0.0, 0.0}) throw std::invalid_argument("restricted_moment: z0 must be nonzero");
  if (!(r > 0.0)) throw std::invalid_argument("restricted_moment: r must be > 0");
  if (nu < 0) throw std::invalid_argument("restricted_moment: nu must be >= 0");
  if (n < nu + 1) throw DegreeError("restricted_moment: requires n >= nu+1");
  const double x = m * std::norm(z0);
  const double lx = std::log(x);
  const double y = m * r * r;
  LogSum sum;  // all terms positive
  for (int j = nu; j < n; ++j) {
    sum.add_log(j * lx - std::lgamma(j + 1.0) - std::lgamma(j - nu + 1.0) +
                log_lower_incomplete_gamma(j - nu + 1, y));
  }
  const LogValue den = trunc_exp_log(n - 1, x);
  const double la = std::log(std::abs(z0)), th = std::arg(z0);
  const LogValue z_pow = LogValue::from_log(-nu * la, cd{std::cos(nu * th), -std::sin(nu * th)});
  return (sum.total() / den * z_pow).value();
}

cd pv_moment_quadrature(double m, int n, int j, cd z0, const PlanarQuadrature& quad) {
  if (z0 == cd{0.0, 0.0}) throw std::invalid_argument("pv_moment_quadrature: z0 must be nonzero");
  return integrate_complex(quad, [&](cd z) {
    const double ld = fock_log_density(m, n, z, z0);
    if (ld == kNegInf) return cd{0.0, 0.0};
    const double la = std::log(std::abs(z)), th = std::arg(z);
    const double mag = std::exp(ld - j * la);
    return cd{mag * std::cos(j * th), -mag * std::sin(j * th)};
  });
}

cd restricted_moment_quadrature(double m, int n, int nu, cd z0, double r, int n_radial,
                                int n_angular) {
  const PlanarQuadrature quad = build_radial_quadrature(r, n_radial, n_angular);
  return pv_moment_quadrature(m, n, nu, z0, quad);
}

LogValue szego_asymptotic(int l, double x) {
  if (l < 1) throw std::invalid_argument("szego_asymptotic: l must be >= 1");
  if (!(x > 1.05)) throw std::invalid_argument("szego_asymptotic: requires x > 1 + margin");
  const double log_mag = -0.5 * std::log(2.0 * M_PI * l) + l * (1.0 + std::log(x)) +
                         std::log(x / (x - 1.0));
  return LogValue::from_log(log_mag);
}

double harmonic_extension(const HarmonicMeasureSpec& spec,
                          const std::function<double(cd)>& f_boundary) {
  const double tau = spec.tau;
  if (!(std::norm(spec.z0) > tau))
    throw std::invalid_argument("harmonic_extension: requires |z0|^2 > tau");
  const int N = std::max(16, spec.boundary_samples);
  const double rt = std::sqrt(tau);
  double sum = 0.0;
  for (int k = 0; k < N; ++k) {
    const double th = 2.0 * M_PI * k / N;
    const cd zeta{rt * std::cos(th), rt * std::sin(th)};
    const double poisson = (std::norm(spec.z0) - tau) / std::norm(spec.z0 - zeta);
    sum += f_boundary(zeta) * poisson;
  }
  return sum / N;
}

std::function<double(cd)> th5_test_function(double tau) {
  return [tau](cd z) { return z.real() / std::max(std::norm(z), 0.25 * tau); };
}

std::vector<Th5Row> th5_experiment(const HarmonicMeasureSpec& spec,
                                   const std::function<double(cd)>& f,
                                   const std::vector<double>& m_list) {
  const double tau = spec.tau;
  if (!(std::norm(spec.z0) > tau))
    throw std::invalid_argument("th5_experiment: requires |z0|^2 > tau");
  const double r_max = std::max(3.0 * std::sqrt(tau), std::abs(spec.z0) + 1.0);
  const double harmonic = harmonic_extension(spec, f);

  std::vector<Th5Row> rows;
  for (double m : m_list) {
    struct Sched {
      const char* name;
      int n;
    };
    const Sched schedules[] = {
        {"round_m_tau", std::max(1, static_cast<int>(std::lround(m * tau)))},
        {"m_tau_plus_sqrt_m",
         std::max(1, static_cast<int>(std::lround(m * tau + std::sqrt(m))))}};
    for (const auto& sch : schedules) {
      const int n_radial = std::max(240, static_cast<int>(std::ceil(12.0 * r_max * std::sqrt(m))));
      const int n_angular = std::max(256, 2 * static_cast<int>(std::ceil(std::sqrt(m))) * 16);
      const PlanarQuadrature quad =
          build_radial_quadrature(r_max, std::min(n_radial, 640), std::min(n_angular, 1024));
      const double val = integrate(quad, [&](cd z) {
        const double ld = fock_log_density(m, sch.n, z, spec.z0);
        return ld == kNegInf ? 0.0 : f(z) * std::exp(ld);
      });
      Th5Row row;
      row.m = m;
      row.n = sch.n;
      row.schedule = sch.name;
      row.berezin_value = val;
      row.harmonic_value = harmonic;
      row.gap = std::abs(val - harmonic);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace bergman
