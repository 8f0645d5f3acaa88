#include <doctest.h>

#include <cmath>
#include <random>

#include "bergman/dbar.hpp"
#include "bergman/errors.hpp"

using namespace bergman;

namespace {

std::mt19937 rng(20240811);

// unweighted basis element e_j(z)
cd basis_eval(const BergmanSpaceBasis& basis, int j, cd z) {
  std::vector<LogValue> e;
  basis.log_weighted_basis(z, e);
  const double lift = 0.5 * basis.m * basis.weight.Q(z);
  return LogValue::from_log(e[j].log_magnitude + lift, e[j].phase).value();
}

PlanarQuadrature dbar_quadrature(const Weight& w, double m, int n) {
  const double r_max = default_r_max(w, m, n);
  return build_radial_quadrature(r_max, 240, 96);
}

}  // namespace

TEST_CASE("strict integer below") {
  CHECK(strict_int_below(3.0) == 2);
  CHECK(strict_int_below(3.5) == 3);
  CHECK(strict_int_below(-1.2) == -2);
  CHECK(strict_int_below(0.0) == -1);
  CHECK(strict_int_below(-2.0) == -3);
}

TEST_CASE("cauchy transform of zero and of a bump") {
  const auto quad = build_radial_quadrature(1.0, 100, 64);
  const auto zero = [](cd) { return cd{0.0, 0.0}; };
  CHECK(cauchy_transform(zero, quad, cd{0.3, 0.1}) == cd{0.0, 0.0});

  // far field ~ mass / w
  const auto f = make_bump(cd{0.0, 0.0}, 0.3);
  const double mass = integrate(quad, [&](cd z) { return f(z).real(); });
  const cd w{30.0, 5.0};
  const cd far = cauchy_transform(f, quad, w);
  CHECK(std::abs(far - mass / w) < 1e-2 * std::abs(mass / w));
}

TEST_CASE("cauchy transform solves dbar u = f") {
  const auto quad = build_cartesian_quadrature(0.45, 0.004);
  const auto f = make_bump(cd{0.0, 0.0}, 0.3);
  const cd at{0.1, 0.05};
  const double h = 0.02;
  const cd dx = (cauchy_transform(f, quad, at + cd{h, 0}) -
                 cauchy_transform(f, quad, at - cd{h, 0})) /
                (2.0 * h);
  const cd dy = (cauchy_transform(f, quad, at + cd{0, h}) -
                 cauchy_transform(f, quad, at - cd{0, h})) /
                (2.0 * h);
  const cd dbar = 0.5 * (dx + cd{0, 1} * dy);
  CHECK(std::abs(dbar - f(at)) < 0.02);
}

TEST_CASE("projection of a basis element is a coordinate vector") {
  const Weight w = make_fock();
  const double m = 6.0;
  const int n = 7;
  const auto quad = dbar_quadrature(w, m, n);
  const auto basis = build_space(w, m, n, quad);
  const int k = 3;
  const auto u = [&](cd z) { return basis_eval(basis, k, z); };
  const auto coeff = bergman_project(basis, u, quad);
  for (int j = 0; j < n; ++j) {
    const double expect = (j == k) ? 1.0 : 0.0;
    CHECK(std::abs(coeff[j] - cd{expect, 0.0}) < 1e-9);
  }
}

TEST_CASE("antiholomorphic data projects to zero for radial weights") {
  const Weight w = make_fock();
  const double m = 6.0;
  const int n = 6;
  const auto quad = dbar_quadrature(w, m, n);
  const auto basis = build_space(w, m, n, quad);
  const auto bump = make_bump(cd{0.0, 0.0}, 0.4);
  const auto u = [&](cd z) { return std::conj(z) * bump(z); };
  for (cd c : bergman_project(basis, u, quad)) CHECK(std::abs(c) < 1e-10);
}

TEST_CASE("projection is idempotent") {
  const Weight w = make_quartic_perturbation(0.1);
  const double m = 6.0;
  const int n = 6;
  const auto quad = dbar_quadrature(w, m, n);
  const auto basis = build_space(w, m, n, quad);
  const auto bump = make_bump(cd{0.2, 0.0}, 0.4);
  const auto u = [&](cd z) { return (z + std::conj(z) * std::conj(z)) * bump(z) + 0.3; };
  const auto c1 = bergman_project(basis, u, quad);
  const auto proj = [&](cd z) {
    cd acc{0.0, 0.0};
    for (int j = 0; j < n; ++j) acc += c1[j] * basis_eval(basis, j, z);
    return acc;
  };
  const auto c2 = bergman_project(basis, proj, quad);
  for (int j = 0; j < n; ++j) CHECK(std::abs(c1[j] - c2[j]) < 1e-10 * std::max(1.0, std::abs(c1[j])));
}

TEST_CASE("minimal solution: orthogonality, norm bound, minimality") {
  const Weight w = make_fock();
  const double m = 8.0;
  const int n = 8;
  const auto quad = dbar_quadrature(w, m, n);
  const auto basis = build_space(w, m, n, quad);
  const auto f = make_bump(cd{0.0, 0.0}, 0.3);

  const auto zero = minimal_solution(basis, [](cd) { return cd{0.0, 0.0}; }, quad,
                                     {cd{0.1, 0.0}});
  CHECK(zero.norm_mQ == 0.0);
  CHECK(std::abs(zero.values[0]) == 0.0);

  const auto sol = minimal_solution(basis, f, quad, {});
  CHECK(sol.norm_mQ > 0.0);
  CHECK(sol.norm_mQ <= sol.cauchy_norm_mQ * (1.0 + 1e-12));
  CHECK(sol.orthogonality_residual <= 1e-7 * sol.norm_mQ);

  // Pythagoras against random elements of the space:
  // weighted u* values on the nodes, through the public surface
  const auto vals = minimal_solution(basis, f, quad, quad.nodes).values;
  std::vector<cd> ustar_w(quad.size());
  std::vector<std::vector<cd>> we(quad.size());
  {
    std::vector<LogValue> e;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      ustar_w[i] = vals[i] * std::exp(-0.5 * m * w.Q(quad.nodes[i]));
      basis.log_weighted_basis(quad.nodes[i], e);
      we[i].resize(n);
      for (int j = 0; j < n; ++j) we[i][j] = e[j].value();
    }
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cd> g(n);
    for (auto& c : g) c = cd{u(rng), u(rng)};
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      cd gz{0.0, 0.0};
      for (int j = 0; j < n; ++j) gz += g[j] * we[i][j];
      norm_sq += quad.weights[i] * std::norm(ustar_w[i] + gz);
    }
    CHECK(std::sqrt(norm_sq) >= sol.norm_mQ - 1e-9);
  }
}

TEST_CASE("dbar bound holds in regime") {
  for (const Weight& w : {make_fock(), make_quartic_perturbation(0.1)}) {
    const auto eq = radial_equilibrium_result(w, 1.0);
    const auto f = make_bump(cd{0.0, 0.0}, 0.3);
    const auto params = make_dbar_params(1.0, 0.5, eq, w, cd{0.0, 0.0}, 0.3);
    CHECK(params.m0 == doctest::Approx(2.0));
    double prev_ratio = 1e9;
    for (double m : {8.0, 16.0, 32.0}) {
      const int n = static_cast<int>(m);
      const auto quad = dbar_quadrature(w, m, n);
      const auto basis = build_space(w, m, n, quad);
      const auto rec = verify_cor_bh(basis, f, params, eq, quad);
      CHECK(rec.regime_ok);
      CHECK(rec.ratio <= 1.0);
      CHECK(rec.ratio <= prev_ratio * 1.5);  // rhs ~ 1/m matched by lhs
      CHECK(rec.orthogonality_residual_rel <= 1e-6);
      prev_ratio = rec.ratio;
    }
  }
}

TEST_CASE("dbar bound conventions and regime flag") {
  const Weight w = make_fock();
  const auto eq = radial_equilibrium_result(w, 1.0);
  const auto params = make_dbar_params(1.0, 0.5, eq, w, cd{0.0, 0.0}, 0.3);
  const auto quad = dbar_quadrature(w, 8.0, 8);
  const auto basis = build_space(w, 8.0, 8, quad);

  const auto zero = verify_cor_bh(basis, [](cd) { return cd{0.0, 0.0}; }, params, eq, quad);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.ratio == 0.0);

  // n far below the admissible degree window: reported, not fatal
  const auto low = build_space(w, 8.0, 2, quad);
  const auto rec = verify_cor_bh(low, make_bump(cd{0.0, 0.0}, 0.3), params, eq, quad);
  CHECK(!rec.regime_ok);
  CHECK(rec.lhs > 0.0);
}

TEST_CASE("parameter validation rejects a growth violation") {
  const Weight w = make_fock();
  const auto eq = radial_equilibrium_result(w, 1.0);
  CHECK_THROWS_AS(make_dbar_params(1.0, 50.0, eq, w, cd{0.0, 0.0}, 0.3),
                  std::invalid_argument);
}
