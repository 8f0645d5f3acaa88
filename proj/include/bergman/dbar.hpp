#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

#include "bergman/kernel.hpp"
#include "bergman/potential.hpp"

namespace bergman {

/// Largest integer strictly smaller than x: ceil(x) - 1 at integers,
/// floor(x) otherwise.
long strict_int_below(double x);

/// Cf(w) = int f(z)/(w-z) dA(z). Nodes closer to w than their half-spacing
/// are skipped: the kernel integrates to zero over a disk centred at w.
cd cauchy_transform(const std::function<cd(cd)>& f, const PlanarQuadrature& quad, cd w);

/// Coefficients <u, e_j>_{mQ} for j < n.
std::vector<cd> bergman_project(const BergmanSpaceBasis& basis, const std::function<cd(cd)>& u,
                                const PlanarQuadrature& quad);

/// The norm-minimal solution u* = Cf - P_{m,n}[Cf] of dbar u = f in L^2_{mQ,n}.
struct MinimalSolution {
  std::vector<cd> values;        // u* at the requested eval points
  std::vector<cd> coefficients;  // <Cf, e_j>_{mQ}
  double norm_mQ = 0.0;          // ||u*||_{mQ}
  double cauchy_norm_mQ = 0.0;   // ||Cf||_{mQ}
  double orthogonality_residual = 0.0;  // max_j |<u*, e_j>_{mQ}|
};

MinimalSolution minimal_solution(const BergmanSpaceBasis& basis, const std::function<cd(cd)>& f,
                                 const PlanarQuadrature& quad, const std::vector<cd>& eval_points);

/// Constants entering the dbar bound
/// ||u*||^2 <= 2 e^{M0 q_tau} / (a m + bpar c_tau) ||f||^2.
struct DbarBoundParams {
  double M0 = 1.0;
  double bpar = 0.5;   // must satisfy bpar log(1+|z|^2) <= M0 Qhat_tau(z)
  double q_tau = 0.0;
  double c_tau = 0.0;
  double a = 0.0;      // ess-inf of lap Q over supp f
  double m0 = 0.0;     // max{2 M0, (1+M0)/tau}
};

/// Builds the parameter pack and checks the growth relation on sample rings.
DbarBoundParams make_dbar_params(double M0, double bpar, const EquilibriumResult& equilibrium,
                                 const Weight& w, cd supp_center, double supp_radius);

struct CorBhRecord {
  double m = 0.0;
  int n = 0;
  bool regime_ok = false;
  double lhs = 0.0;    // ||u*||^2_{mQ}
  double rhs = 0.0;    // bound
  double ratio = 0.0;  // lhs/rhs (0 when both vanish)
  double norm_f_sq = 0.0;
  double orthogonality_residual_rel = 0.0;
};

/// Runs the full pipeline for one (m, n) and evaluates both sides of the
/// bound. An out-of-regime configuration is reported, not fatal.
CorBhRecord verify_cor_bh(const BergmanSpaceBasis& basis, const std::function<cd(cd)>& f,
                          const DbarBoundParams& params, const EquilibriumResult& equilibrium,
                          const PlanarQuadrature& quad);

nlohmann::json cor_bh_to_json(const CorBhRecord& r);

/// Radially symmetric C^inf bump supported in D(center, radius):
/// exp(-t/(1-t)) with t = |z-center|^2/radius^2.
std::function<cd(cd)> make_bump(cd center, double radius);

/// inf of lap Q over a sampled disk (the support of a test bump).
double inf_laplacian_on_disk(const Weight& w, cd center, double radius);

}  // namespace bergman
