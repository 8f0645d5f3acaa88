#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bergman/numerics.hpp"
#include "bergman/weights.hpp"

namespace bergman {

struct GridSpec {
  double extent = 3.0;    // grid covers [-extent, extent]^2
  double spacing = 0.02;  // h
  double omega = 1.8;     // SOR relaxation factor
  int max_iter = 200000;  // sweep budget per solve
  double tol = 1e-8;      // sup-norm update tolerance
};

/// Grid data produced by the obstacle solver.
struct DropletGrid {
  double extent = 0.0;
  double spacing = 0.0;
  int size = 0;                // nodes per side
  std::vector<double> u;       // equilibrium potential values, row-major
  std::vector<bool> mask;      // coincidence set {u >= Q - tol_mask}
  double boundary_c = 0.0;     // additive constant in the far-field tau log|z|^2 + c

  double x_of(int i) const { return -extent + i * spacing; }
  int index(int i, int j) const { return i * size + j; }
};

struct SolverDiagnostics {
  long sweeps = 0;
  int outer_iterations = 0;
  double final_residual = 0.0;
  double mass = 0.0;
};

/// The equilibrium potential Qhat_tau (largest subharmonic minorant of Q with
/// tau log|z|^2 + O(1) growth) and the coincidence set S_tau = {Q = Qhat_tau}.
struct EquilibriumResult {
  double tau = 1.0;
  std::function<double(cd)> eval_Qhat;
  std::optional<double> droplet_radius;  // radial route
  std::optional<DropletGrid> grid;       // obstacle-solver route
  double q_tau = 0.0;  // sup_{S_tau} Q
  double c_tau = 0.0;  // inf_{S_tau} (1+|z|^2)^{-2}
  SolverDiagnostics diagnostics;

  bool in_droplet(cd z) const;
};

/// R_tau solving r Q'(r)/2 = tau by bisection; the droplet is the closed disk
/// of that radius. Requires a strictly increasing radial profile.
double radial_droplet_radius(const Weight& w, double tau);

/// Closed-form potential for radial weights: Q inside the droplet,
/// Q(R) + tau log(|z|^2/R^2) outside.
double radial_equilibrium(const Weight& w, double tau, cd z);

EquilibriumResult radial_equilibrium_result(const Weight& w, double tau);

/// Projected SOR for the discrete obstacle problem: the largest grid function
/// below Q that is discretely subharmonic, with far-field data
/// tau log|z|^2 + c. The constant c is adjusted by an outer loop until the
/// total discrete Laplacian mass equals tau.
EquilibriumResult psor_obstacle_solve(const Weight& w, double tau, const GridSpec& spec);

/// (q_tau, c_tau) recomputed from droplet samples.
std::pair<double, double> constants(const EquilibriumResult& result, const Weight& w);

/// Radius of the droplet: exact for the radial route, area-equivalent radius
/// of the mask for the grid route.
double droplet_radius_estimate(const EquilibriumResult& result);

}  // namespace bergman
