#include <doctest.h>

#include <cmath>
#include <random>

#include "bergman/errors.hpp"
#include "bergman/potential.hpp"

using namespace bergman;

TEST_CASE("radial droplet radii") {
  const Weight fock = make_fock();
  CHECK(radial_droplet_radius(fock, 1.0) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(radial_droplet_radius(fock, 0.25) == doctest::Approx(0.5).epsilon(1e-11));

  // r (4 r^3)/2 = 2 r^4 = tau
  const Weight p2 = make_radial_power(2);
  CHECK(radial_droplet_radius(p2, 1.0) == doctest::Approx(std::pow(0.5, 0.25)).epsilon(1e-11));

  double prev = 0.0;
  for (double tau : {0.25, 0.5, 1.0, 2.0}) {
    const double R = radial_droplet_radius(fock, tau);
    CHECK(R > prev);
    prev = R;
  }
}

TEST_CASE("radial equilibrium potential") {
  const Weight w = make_fock();
  CHECK(radial_equilibrium(w, 1.0, cd{2.0, 0.0}) ==
        doctest::Approx(1.0 + std::log(4.0)).epsilon(1e-12));
  // branches match at the droplet boundary
  const double R = radial_droplet_radius(w, 1.0);
  CHECK(radial_equilibrium(w, 1.0, cd{R - 1e-9, 0.0}) ==
        doctest::Approx(radial_equilibrium(w, 1.0, cd{R + 1e-9, 0.0})).epsilon(1e-7));
  // coincidence inside
  for (double r : {0.1, 0.5, 0.9}) {
    CHECK(radial_equilibrium(w, 1.0, cd{r, 0.0}) == doctest::Approx(r * r).epsilon(1e-12));
  }
}

TEST_CASE("radial equilibrium result constants") {
  const Weight w = make_fock();
  const auto res = radial_equilibrium_result(w, 1.0);
  auto [q_tau, c_tau] = constants(res, w);
  CHECK(q_tau == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c_tau == doctest::Approx(0.25).epsilon(1e-10));

  const auto res25 = radial_equilibrium_result(w, 0.25);
  auto [q25, c25] = constants(res25, w);
  CHECK(q25 == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(c25 == doctest::Approx(std::pow(1.25, -2.0)).epsilon(1e-10));
  CHECK(q25 <= q_tau);
}

TEST_CASE("psor solver reproduces the fock droplet") {
  const Weight w = make_fock();
  GridSpec spec;
  spec.extent = 3.0;
  spec.spacing = 0.02;
  const auto res = psor_obstacle_solve(w, 1.0, spec);

  CHECK(std::abs(droplet_radius_estimate(res) - 1.0) <= 2.0 * spec.spacing);
  CHECK(std::abs(res.diagnostics.mass - 1.0) <= 1e-3);
  CHECK(res.q_tau == doctest::Approx(1.0).epsilon(0.05));
  CHECK(res.c_tau == doctest::Approx(0.25).epsilon(0.05));

  // obstacle inequality: exact on grid nodes
  const auto& g = *res.grid;
  for (int i = 0; i < g.size; i += 3)
    for (int j = 0; j < g.size; j += 3) {
      const cd z{g.x_of(i), g.x_of(j)};
      CHECK(g.u[g.index(i, j)] <= w.Q(z) + 1e-12);
    }

  // off-grid evaluation carries O(h^2) bilinear interpolation error
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  const double h2 = spec.spacing * spec.spacing;
  for (int i = 0; i < 200; ++i) {
    const cd z{u(rng), u(rng)};
    CHECK(res.eval_Qhat(z) <= w.Q(z) + h2);
    CHECK(res.eval_Qhat(z) ==
          doctest::Approx(radial_equilibrium(w, 1.0, z)).epsilon(5e-3));
  }
}

TEST_CASE("psor agrees with the radial route for the quartic power weight") {
  const Weight w = make_radial_power(2);
  GridSpec spec;
  spec.extent = 2.0;
  spec.spacing = 0.02;
  const auto res = psor_obstacle_solve(w, 1.0, spec);
  const double R = std::pow(0.5, 0.25);
  CHECK(std::abs(droplet_radius_estimate(res) - R) <= 2.0 * spec.spacing);
  CHECK(std::abs(res.diagnostics.mass - 1.0) <= 1e-3);
}

TEST_CASE("psor potential is harmonic off the droplet") {
  const Weight w = make_fock();
  GridSpec spec;
  spec.extent = 2.5;
  spec.spacing = 0.025;
  const auto res = psor_obstacle_solve(w, 1.0, spec);
  const auto& g = *res.grid;

  // dilate the mask by two cells
  std::vector<bool> near(g.mask.size(), false);
  for (int i = 0; i < g.size; ++i)
    for (int j = 0; j < g.size; ++j) {
      if (!g.mask[g.index(i, j)]) continue;
      for (int di = -2; di <= 2; ++di)
        for (int dj = -2; dj <= 2; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && jj >= 0 && ii < g.size && jj < g.size) near[g.index(ii, jj)] = true;
        }
    }
  double max_resid = 0.0;
  for (int i = 1; i + 1 < g.size; ++i)
    for (int j = 1; j + 1 < g.size; ++j) {
      if (near[g.index(i, j)]) continue;
      const double lap_h2 = 0.25 * (g.u[g.index(i - 1, j)] + g.u[g.index(i + 1, j)] +
                                    g.u[g.index(i, j - 1)] + g.u[g.index(i, j + 1)] -
                                    4.0 * g.u[g.index(i, j)]);
      max_resid = std::max(max_resid, std::abs(lap_h2));
    }
  CHECK(max_resid <= 10.0 * spec.tol);
}

TEST_CASE("equilibrium gradient is continuous across the droplet boundary") {
  const Weight w = make_fock();
  GridSpec spec;
  spec.extent = 2.5;
  spec.spacing = 0.02;
  const auto res = psor_obstacle_solve(w, 1.0, spec);
  const auto& g = *res.grid;
  const double h = g.spacing;
  // one-sided radial differences from either side of |z| = 1 along the x axis
  const int mid = (g.size - 1) / 2;
  const int ib = mid + static_cast<int>(std::round(1.0 / h));
  const double inner = (g.u[g.index(ib, mid)] - g.u[g.index(ib - 2, mid)]) / (2.0 * h);
  const double outer = (g.u[g.index(ib + 2, mid)] - g.u[g.index(ib, mid)]) / (2.0 * h);
  CHECK(std::abs(inner - outer) <= 40.0 * h);  // O(h) jump at a C^{1,1} fold
}

TEST_CASE("solver rejects domains that truncate the droplet") {
  const Weight w = make_fock();
  GridSpec spec;
  spec.extent = 0.8;  // droplet radius 1 cannot fit
  spec.spacing = 0.02;
  CHECK_THROWS_AS(psor_obstacle_solve(w, 1.0, spec), DomainTooSmallError);
}

TEST_CASE("far-field growth of the equilibrium potential") {
  const Weight w = make_quartic_perturbation(0.1);
  const auto res = radial_equilibrium_result(w, 1.0);
  for (double r : {5.0, 20.0, 100.0}) {
    const double diff = res.eval_Qhat(cd{r, 0.0}) - std::log(r * r);
    CHECK(std::abs(diff) < 2.0);  // tau log|z|^2 + O(1)
  }
}

TEST_CASE("argument validation") {
  const Weight w = make_fock();
  CHECK_THROWS_AS(radial_droplet_radius(w, -1.0), std::invalid_argument);
  GridSpec bad;
  bad.extent = -1.0;
  CHECK_THROWS_AS(psor_obstacle_solve(w, 1.0, bad), std::invalid_argument);
}
