#pragma once

#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "bergman/numerics.hpp"

namespace bergman {

/// Holomorphic extension psi of a real-analytic weight from the
/// anti-diagonal: psi(z, conj(z)) = Q(z). Carries the mixed partials the
/// first-order kernel expansion needs.
struct BivariateAnalytic {
  std::function<cd(cd, cd)> eval;
  std::function<cd(cd, cd)> d1;
  std::function<cd(cd, cd)> d2;
  std::function<cd(cd, cd)> d1d2;
  std::function<cd(cd, cd)> d11d2;   // d1^2 d2
  std::function<cd(cd, cd)> d1d22;   // d1 d2^2
  std::function<cd(cd, cd)> d11d22;  // d1^2 d2^2
};

struct RadialProfile {
  std::function<double(double)> value;  // Q as a function of r = |z|
  std::function<double(double)> deriv;  // dQ/dr
};

/// The weight Q together with its laplacian (in the dA = dxdy/pi,
/// lap = (1/4)(d_xx + d_yy) normalization), growth data, and, when Q is
/// real-analytic with a known extension, the bivariate psi.
struct Weight {
  std::function<double(cd)> Q;
  std::function<double(cd)> laplacian;
  double growth_rho = 1.0;
  bool is_radial = false;
  std::optional<RadialProfile> radial;
  std::optional<BivariateAnalytic> psi;
  double min_Q = 0.0;  // used by the default truncation-radius rule
  nlohmann::json descriptor;
};

/// Q(z) = |z|^2. Laplacian 1, psi(z,w) = z w.
Weight make_fock();

/// Q(z) = |z|^{2p}, p >= 1. Laplacian p^2 |z|^{2(p-1)}, psi(z,w) = (zw)^p.
Weight make_radial_power(int p);

/// Q(z) = |z|^2 + c|z|^4, c > 0. Strictly subharmonic everywhere, so X = C.
Weight make_quartic_perturbation(double c);

/// Construct from a descriptor {"kind": "fock"|"radial_power"|"quartic", "p": int, "c": real}.
Weight weight_from_json(const nlohmann::json& j);
nlohmann::json weight_to_json(const Weight& w);

/// Finite-difference laplacian of Q at z (5-point stencil, 1/4 normalization),
/// step h = 1e-5 * max(1, |z|). Used to synthesize derivatives for
/// user-supplied weights and as an oracle in tests.
double fd_laplacian(const std::function<double(cd)>& Q, cd z);

}  // namespace bergman
