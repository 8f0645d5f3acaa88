#pragma once

#include <iosfwd>
#include <vector>

#include "bergman/kernel.hpp"
#include "bergman/potential.hpp"

namespace bergman {

/// b0(z,w) = d1 d2 psi(z,w). On the anti-diagonal b0(z, conj z) = lap Q(z).
cd b0(const Weight& w, cd z, cd v);

/// b1 = (1/2) d1 d2 log(d1 d2 psi), via the quotient formula
/// (d1^2 d2^2 psi * b0 - d1^2 d2 psi * d1 d2^2 psi) / (2 b0^2).
/// On the anti-diagonal b1(z, conj z) = (1/2) lap log lap Q(z).
cd b1(const Weight& w, cd z, cd v);

/// Evaluator for the first-order approximating kernel
/// K_m^1(z,w) = (m b0(z, conj w) + b1(z, conj w)) e^{m psi(z, conj w)}.
struct ExpansionEvaluator {
  Weight weight;  // must carry psi
  double m = 1.0;
};

ExpansionEvaluator make_expansion(const Weight& w, double m);

/// The weighted form K_m^1(z,w) e^{-m(Q(z)+Q(w))/2}, in the log domain.
LogValue approx_kernel_log(const ExpansionEvaluator& ev, cd z, cd w);

/// Diagonal expansion m lap Q(z) + (1/2) lap log lap Q(z). Uses closed-form
/// psi derivatives when available, finite differences otherwise.
double diag_expansion(const Weight& w, double m, cd z);

/// |one_point(z) - diag_expansion(z)|; the quantity bounded by C/m.
double diag_residual(const BergmanSpaceBasis& basis, const Weight& w, cd z);

struct OffDiagSample {
  double distance = 0.0;
  double log_density = 0.0;
  double compensation = 0.0;  // m (Q - Qhat_tau)(z)
};

/// Compensated log profile of the Berezin density along a ray from z0,
/// with an OLS slope over distances t <= d_K. The slope of the compensated
/// profile scales like sqrt(m) under the off-diagonal damping bound.
struct OffDiagReport {
  cd z0;
  cd ray_direction;
  std::vector<OffDiagSample> samples;
  double fitted_slope = 0.0;
  double d_K = 0.0;  // dist(z0, complement of S_tau intersect X)
  double a_K = 0.0;  // inf lap Q over {dist(z, z0) <= d_K/2}
};

OffDiagReport offdiag_profile(const BergmanSpaceBasis& basis, cd z0, cd direction,
                              const std::vector<double>& distances,
                              const EquilibriumResult& equilibrium);

/// CSV rows (distance, log_density, compensation).
void offdiag_to_csv(const OffDiagReport& report, std::ostream& os);

}  // namespace bergman
