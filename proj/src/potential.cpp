#include "bergman/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

double mask_tol(double q) { return 1e-6 * (1.0 + std::abs(q)); }

// One PSOR pass over the interior in lexicographic order; returns sup update.
double psor_sweep(std::vector<double>& u, const std::vector<double>& qv, int size, double omega) {
  double max_update = 0.0;
  for (int i = 1; i < size - 1; ++i) {
    const double* up = &u[(i - 1) * size];
    const double* dn = &u[(i + 1) * size];
    double* row = &u[i * size];
    const double* qrow = &qv[i * size];
    for (int j = 1; j < size - 1; ++j) {
      const double avg = 0.25 * (up[j] + dn[j] + row[j - 1] + row[j + 1]);
      double unew = row[j] + omega * (avg - row[j]);
      if (unew > qrow[j]) unew = qrow[j];
      const double d = std::abs(unew - row[j]);
      if (d > max_update) max_update = d;
      row[j] = unew;
    }
  }
  return max_update;
}

// Total discrete Laplacian mass: sum lap_h(u) h^2 / pi with lap_h = (1/4) 5-point.
double grid_mass(const std::vector<double>& u, int size) {
  double s = 0.0;
  for (int i = 1; i < size - 1; ++i) {
    const double* up = &u[(i - 1) * size];
    const double* dn = &u[(i + 1) * size];
    const double* row = &u[i * size];
    for (int j = 1; j < size - 1; ++j)
      s += up[j] + dn[j] + row[j - 1] + row[j + 1] - 4.0 * row[j];
  }
  return s / (4.0 * M_PI);
}

struct Level {
  int size = 0;
  double h = 0.0;
  double extent = 0.0;
  std::vector<double> qv;      // obstacle values
  std::vector<double> log_sq;  // log |z|^2, clamped near the origin
  std::vector<double> u;

  double x_of(int i) const { return -extent + i * h; }
  int idx(int i, int j) const { return i * size + j; }

  void set_boundary(double tau, double c) {
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        if (i != 0 && j != 0 && i != size - 1 && j != size - 1) continue;
        u[idx(i, j)] = tau * log_sq[idx(i, j)] + c;
      }
  }

  bool contact_touches_ring() const {
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        if (i > 2 && j > 2 && i < size - 3 && j < size - 3) continue;
        if (u[idx(i, j)] >= qv[idx(i, j)] - mask_tol(qv[idx(i, j)])) return true;
      }
    return false;
  }
};

Level make_level(const Weight& w, double extent, double h) {
  Level lv;
  lv.size = 2 * static_cast<int>(std::round(extent / h)) + 1;
  lv.h = h;
  lv.extent = 0.5 * (lv.size - 1) * h;
  lv.qv.resize(static_cast<std::size_t>(lv.size) * lv.size);
  lv.log_sq.resize(lv.qv.size());
  lv.u.assign(lv.qv.size(), 0.0);
  for (int i = 0; i < lv.size; ++i)
    for (int j = 0; j < lv.size; ++j) {
      const cd z{lv.x_of(i), lv.x_of(j)};
      lv.qv[lv.idx(i, j)] = w.Q(z);
      lv.log_sq[lv.idx(i, j)] = std::log(std::max(std::norm(z), 0.25 * h * h));
    }
  return lv;
}

// bilinear prolongation: sample the coarse field at the fine node positions
void prolong(const Level& coarse, Level& fine) {
  for (int i = 0; i < fine.size; ++i)
    for (int j = 0; j < fine.size; ++j) {
      const double x = (fine.x_of(i) + coarse.extent) / coarse.h;
      const double y = (fine.x_of(j) + coarse.extent) / coarse.h;
      const int i0 = std::clamp(static_cast<int>(x), 0, coarse.size - 2);
      const int j0 = std::clamp(static_cast<int>(y), 0, coarse.size - 2);
      const double fx = std::clamp(x - i0, 0.0, 1.0), fy = std::clamp(y - j0, 0.0, 1.0);
      const double v = (1 - fx) * (1 - fy) * coarse.u[coarse.idx(i0, j0)] +
                       fx * (1 - fy) * coarse.u[coarse.idx(i0 + 1, j0)] +
                       (1 - fx) * fy * coarse.u[coarse.idx(i0, j0 + 1)] +
                       fx * fy * coarse.u[coarse.idx(i0 + 1, j0 + 1)];
      fine.u[fine.idx(i, j)] = std::min(v, fine.qv[fine.idx(i, j)]);
    }
}

}  // namespace

bool EquilibriumResult::in_droplet(cd z) const {
  if (droplet_radius) return std::abs(z) <= *droplet_radius;
  if (!grid) return false;
  const auto& g = *grid;
  const int i = static_cast<int>(std::lround((z.real() + g.extent) / g.spacing));
  const int j = static_cast<int>(std::lround((z.imag() + g.extent) / g.spacing));
  if (i < 0 || j < 0 || i >= g.size || j >= g.size) return false;
  return g.mask[g.index(i, j)];
}

double radial_droplet_radius(const Weight& w, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("radial_droplet_radius: tau must be > 0");
  if (!w.is_radial || !w.radial)
    throw std::invalid_argument("radial_droplet_radius: weight is not radial");
  const auto g = [&](double r) { return 0.5 * r * w.radial->deriv(r) - tau; };
  double lo = 1e-8, hi = 1e-8;
  bool bracketed = false;
  for (int it = 0; it < 400; ++it) {
    hi = (it == 0) ? 0.1 : hi * 1.3;
    if (g(hi) > 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
  }
  if (!bracketed)
    throw GrowthViolationError("radial_droplet_radius: no root of r Q'(r)/2 = tau in bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double radial_equilibrium(const Weight& w, double tau, cd z) {
  const double R = radial_droplet_radius(w, tau);
  const double r = std::abs(z);
  if (r <= R) return w.radial->value(r);
  return w.radial->value(R) + tau * std::log(r * r / (R * R));
}

EquilibriumResult radial_equilibrium_result(const Weight& w, double tau) {
  const double R = radial_droplet_radius(w, tau);
  EquilibriumResult res;
  res.tau = tau;
  res.droplet_radius = R;
  const auto profile = *w.radial;
  res.eval_Qhat = [profile, tau, R](cd z) {
    const double r = std::abs(z);
    if (r <= R) return profile.value(r);
    return profile.value(R) + tau * std::log(r * r / (R * R));
  };
  res.q_tau = profile.value(R);
  res.c_tau = std::pow(1.0 + R * R, -2.0);
  return res;
}

EquilibriumResult psor_obstacle_solve(const Weight& w, double tau, const GridSpec& spec) {
  if (!(tau > 0.0)) throw std::invalid_argument("psor_obstacle_solve: tau must be > 0");
  if (!(spec.extent > 0.0) || !(spec.spacing > 0.0) || spec.extent <= 8.0 * spec.spacing)
    throw std::invalid_argument("psor_obstacle_solve: bad grid spec");

  SolverDiagnostics diag;
  const auto converge = [&](Level& lv, double tol) {
    for (long sweeps = 1; sweeps <= spec.max_iter; ++sweeps) {
      const double upd = psor_sweep(lv.u, lv.qv, lv.size, spec.omega);
      ++diag.sweeps;
      if (upd <= tol) {
        diag.final_residual = upd;
        return;
      }
    }
    throw SolverFailureError("psor_obstacle_solve: sweep budget exhausted", diag.final_residual);
  };
  const auto solve_at = [&](Level& lv, double c, double tol) {
    lv.set_boundary(tau, c);
    converge(lv, tol);
    ++diag.outer_iterations;
    return grid_mass(lv.u, lv.size);
  };

  // initial constant: tangency constant of the pure log minorant
  double c0 = std::numeric_limits<double>::infinity();
  if (w.is_radial && w.radial) {
    const double R = radial_droplet_radius(w, tau);
    c0 = w.radial->value(R) - tau * std::log(R * R);
  }

  // coarse-to-fine cascade; the boundary constant is bisected on each level,
  // with the bracket inherited from the previous one
  const double mass_tol = 2e-4;
  Level prev;
  double c_lo = 0.0, c_hi = 0.0, c = 0.0;
  bool first = true;
  for (double factor : {4.0, 2.0, 1.0}) {
    Level lv = make_level(w, spec.extent, spec.spacing * factor);
    if (first) {
      if (!std::isfinite(c0)) {
        c0 = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < lv.qv.size(); ++k)
          c0 = std::min(c0, lv.qv[k] - tau * lv.log_sq[k]);
      }
      for (std::size_t k = 0; k < lv.u.size(); ++k)
        lv.u[k] = std::min(lv.qv[k], tau * lv.log_sq[k] + c0);
      c_lo = c0 - 1.0;
      c_hi = c0 + 1.0;
      // mass(c) is increasing in c: larger boundary data pushes u against the
      // obstacle over a larger contact set
      double mass_lo = solve_at(lv, c_lo, spec.tol);
      for (int it = 0; it < 12 && mass_lo > tau; ++it) {
        c_lo -= std::pow(2.0, it);
        mass_lo = solve_at(lv, c_lo, spec.tol);
      }
      double mass_hi = solve_at(lv, c_hi, spec.tol);
      for (int it = 0; it < 12 && mass_hi < tau; ++it) {
        if (lv.contact_touches_ring())
          throw DomainTooSmallError(
              "psor_obstacle_solve: coincidence set touches the boundary ring");
        c_hi += std::pow(2.0, it);
        mass_hi = solve_at(lv, c_hi, spec.tol);
      }
      if (mass_lo > tau || mass_hi < tau)
        throw SolverFailureError("psor_obstacle_solve: could not bracket the boundary constant",
                                 std::min(std::abs(mass_lo - tau), std::abs(mass_hi - tau)));
      first = false;
    } else {
      prolong(prev, lv);
      // refresh the bracket around the previous constant
      double width = std::max(0.05, 0.25 * (c_hi - c_lo));
      c_lo = c - width;
      c_hi = c + width;
      while (solve_at(lv, c_lo, spec.tol) > tau && width < 64.0) {
        width *= 2.0;
        c_lo = c - width;
      }
      while (solve_at(lv, c_hi, spec.tol) < tau && width < 64.0) {
        if (lv.contact_touches_ring())
          throw DomainTooSmallError(
              "psor_obstacle_solve: coincidence set touches the boundary ring");
        width *= 2.0;
        c_hi = c + width;
      }
    }
    for (int it = 0; it < 60; ++it) {
      c = 0.5 * (c_lo + c_hi);
      const double mass = solve_at(lv, c, spec.tol);
      if (std::abs(mass - tau) <= (factor == 1.0 ? mass_tol : 4.0 * mass_tol)) break;
      (mass < tau ? c_lo : c_hi) = c;
      if (c_hi - c_lo < 1e-12) break;
    }
    prev = std::move(lv);
  }

  Level& lv = prev;
  // deep polish so that off-contact residuals sit far below the mask tolerance
  converge(lv, spec.tol * 1e-2);
  diag.mass = grid_mass(lv.u, lv.size);

  DropletGrid grid;
  grid.extent = lv.extent;
  grid.spacing = lv.h;
  grid.size = lv.size;
  grid.u = lv.u;
  grid.boundary_c = c;
  grid.mask.assign(lv.u.size(), false);
  for (std::size_t k = 0; k < lv.u.size(); ++k)
    grid.mask[k] = lv.u[k] >= lv.qv[k] - mask_tol(lv.qv[k]);

  if (lv.contact_touches_ring())
    throw DomainTooSmallError("psor_obstacle_solve: coincidence set touches the boundary ring");

  EquilibriumResult result;
  result.tau = tau;
  result.grid = std::move(grid);
  result.diagnostics = diag;

  const auto& g = *result.grid;
  double q_tau = -std::numeric_limits<double>::infinity();
  double c_tau = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.size; ++i)
    for (int j = 0; j < g.size; ++j) {
      const int k = g.index(i, j);
      if (!g.mask[k]) continue;
      const cd z{g.x_of(i), g.x_of(j)};
      q_tau = std::max(q_tau, lv.qv[k]);
      c_tau = std::min(c_tau, std::pow(1.0 + std::norm(z), -2.0));
    }
  result.q_tau = q_tau;
  result.c_tau = c_tau;

  auto grid_copy = *result.grid;
  const double tau_c = tau, bc = c;
  result.eval_Qhat = [grid_copy, tau_c, bc](cd z) {
    const auto& gg = grid_copy;
    const double x = (z.real() + gg.extent) / gg.spacing;
    const double y = (z.imag() + gg.extent) / gg.spacing;
    if (x < 0.0 || y < 0.0 || x > gg.size - 1 || y > gg.size - 1)
      return tau_c * std::log(std::norm(z)) + bc;
    const int i0 = std::min(static_cast<int>(x), gg.size - 2);
    const int j0 = std::min(static_cast<int>(y), gg.size - 2);
    const double fx = x - i0, fy = y - j0;
    const double v00 = gg.u[gg.index(i0, j0)], v10 = gg.u[gg.index(i0 + 1, j0)];
    const double v01 = gg.u[gg.index(i0, j0 + 1)], v11 = gg.u[gg.index(i0 + 1, j0 + 1)];
    return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
  };
  return result;
}

std::pair<double, double> constants(const EquilibriumResult& result, const Weight& w) {
  if (result.droplet_radius) {
    const double R = *result.droplet_radius;
    double q_tau = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 400; ++i) q_tau = std::max(q_tau, w.radial->value(R * i / 400.0));
    return {q_tau, std::pow(1.0 + R * R, -2.0)};
  }
  return {result.q_tau, result.c_tau};
}

double droplet_radius_estimate(const EquilibriumResult& result) {
  if (result.droplet_radius) return *result.droplet_radius;
  if (!result.grid) throw Error("droplet_radius_estimate: no droplet data");
  const auto& g = *result.grid;
  long count = 0;
  for (bool b : g.mask) count += b ? 1 : 0;
  return g.spacing * std::sqrt(static_cast<double>(count) / M_PI);
}

}  // namespace bergman
