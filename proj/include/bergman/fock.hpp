#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bergman/numerics.hpp"

namespace bergman {

/// A principal-value or restricted Berezin moment of the Fock weight,
/// together with the method that produced it.
struct FockMomentResult {
  int order = 0;  // j (pv) or nu (restricted)
  double m = 1.0;
  int n = 1;
  cd z0;
  cd value;
  std::string method;  // "closed-form" | "quadrature"
};

struct HarmonicMeasureSpec {
  double tau = 1.0;
  cd z0;                      // |z0|^2 > tau
  int boundary_samples = 512;
};

/// K_{m,n}(z,w) = m E_{n-1}(m z conj(w)). Direct compensated summation for
/// |m z conj(w)| <= 30, dominant-term log summation beyond.
cd fock_kernel(double m, int n, cd z, cd w);

/// log K_{m,n}(z,w) e^{-m(|z|^2+|w|^2)/2}, safe at any m.
LogValue fock_weighted_kernel_log(double m, int n, cd z, cd w);

/// log of the Berezin density at z for insertion point z0.
double fock_log_density(double m, int n, cd z, cd z0);

/// p.v. integral of z^{-j} against the Berezin measure:
/// z0^{-j} (1 - E_{j-1}(m|z0|^2) / E_{n-1}(m|z0|^2)), E-ratio in log domain.
cd pv_moment(double m, int n, int j, cd z0);

/// Same moment restricted to the disk D(0;r), via the incomplete-gamma sum.
cd restricted_moment(double m, int n, int nu, cd z0, double r);

/// p.v. moment by quadrature on an angularly symmetric grid (the z^{-j}
/// singularity cancels across each ring). Oracle for pv_moment.
cd pv_moment_quadrature(double m, int n, int j, cd z0, const PlanarQuadrature& quad);
cd restricted_moment_quadrature(double m, int n, int nu, cd z0, double r, int n_radial,
                                int n_angular);

/// Leading Szego term for E_l(l x), x > 1:
/// (2 pi l)^{-1/2} (e x)^l  x/(x-1), returned in the log domain.
LogValue szego_asymptotic(int l, double x);

/// Poisson integral for the exterior of the disk |zeta| = sqrt(tau):
/// average of f over the circle against (|z0|^2 - tau)/|z0 - sqrt(tau) e^{it}|^2.
double harmonic_extension(const HarmonicMeasureSpec& spec,
                          const std::function<double(cd)>& f_boundary);

/// The built-in boundary-matched test function: Re(conj(z)/max(|z|^2, tau/4)),
/// which equals Re(1/z) for |z| >= sqrt(tau)/2.
std::function<double(cd)> th5_test_function(double tau);

struct Th5Row {
  double m = 0.0;
  int n = 0;
  std::string schedule;  // "round_m_tau" | "m_tau_plus_sqrt_m" (probe, no threshold)
  double berezin_value = 0.0;
  double harmonic_value = 0.0;
  double gap = 0.0;
};

/// Berezin transform of f at the exterior point against the closed-form Fock
/// kernel, per m in m_list, compared with the harmonic extension.
std::vector<Th5Row> th5_experiment(const HarmonicMeasureSpec& spec,
                                   const std::function<double(cd)>& f,
                                   const std::vector<double>& m_list);

}  // namespace bergman
