#include <doctest.h>

#include <cmath>
#include <random>

#include "bergman/errors.hpp"
#include "bergman/kernel.hpp"
#include "bergman/potential.hpp"

using namespace bergman;

namespace {

std::mt19937 rng(20240811);
cd random_point(double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng)};
}

// independent oracle: radial monomial norm by composite Simpson
double radial_norm_oracle(const Weight& w, double m, int j, double r_hi) {
  const int N = 400000;
  const double h = r_hi / N;
  auto f = [&](double r) {
    return 2.0 * std::pow(r, 2 * j + 1) * std::exp(-m * w.radial->value(r));
  };
  double sum = f(0.0) + f(r_hi);
  for (int i = 1; i < N; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("fock monomial norms are factorials") {
  const Weight w = make_fock();
  const auto basis = build_space(w, 1.0, 6, default_quadrature(w, 1.0, 6));
  for (int j = 0; j <= 5; ++j) {
    const double expect = std::lgamma(j + 1.0);  // log j!
    CHECK(std::abs(basis.radial_log_norms[j] - expect) < 1e-10 * std::max(1.0, expect));
  }
}

TEST_CASE("n = 1 kernel is the constant m") {
  const Weight w = make_fock();
  const auto basis = build_space(w, 3.0, 1, default_quadrature(w, 3.0, 1));
  for (int i = 0; i < 10; ++i) {
    const cd z = random_point(1.5), v = random_point(1.5);
    CHECK(std::abs(kernel_eval(basis, z, v) - cd{3.0, 0.0}) < 1e-9);
  }
}

TEST_CASE("radial power norms match an independent quadrature oracle") {
  const Weight w = make_radial_power(2);
  const auto basis = build_space(w, 2.0, 4, default_quadrature(w, 2.0, 4));
  for (int j = 0; j < 4; ++j) {
    const double oracle = radial_norm_oracle(w, 2.0, j, 5.0);
    CHECK(std::exp(basis.radial_log_norms[j]) ==
          doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("kernel value at the paper's closed-form point") {
  const Weight w = make_fock();
  const auto basis = build_space(w, 1.0, 3, default_quadrature(w, 1.0, 3));
  // m E_{n-1}(m z wbar) with m = 1, zwbar = 1: E_2(1) = 2.5
  CHECK(std::abs(kernel_eval(basis, cd{1.0, 0.0}, cd{1.0, 0.0}) - cd{2.5, 0.0}) < 1e-10);
}

TEST_CASE("kernel is Hermitian") {
  const Weight w = make_quartic_perturbation(0.1);
  const auto basis = build_space(w, 4.0, 8, default_quadrature(w, 4.0, 8));
  for (int i = 0; i < 100; ++i) {
    const cd z = random_point(1.5), v = random_point(1.5);
    const cd a = kernel_eval(basis, z, v);
    const cd b = std::conj(kernel_eval(basis, v, z));
    CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("reproducing property") {
  const Weight w = make_fock();
  const double m = 2.0;
  const auto quad = default_quadrature(w, m, 5);
  const auto basis = build_space(w, m, 5, quad);
  const cd z0{0.4, 0.0};
  const cd val = integrate_complex(quad, [&](cd z) {
    return z * z * std::conj(kernel_eval(basis, z, z0)) * std::exp(-m * w.Q(z));
  });
  CHECK(std::abs(val - z0 * z0) < 1e-8);

  // random polynomials of degree < n
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<cd> c(5);
    for (auto& x : c) x = cd{u(rng), u(rng)};
    auto p = [&](cd z) {
      cd acc{0.0, 0.0}, zp{1.0, 0.0};
      for (const cd& ck : c) {
        acc += ck * zp;
        zp *= z;
      }
      return acc;
    };
    const cd w0 = random_point(0.7);
    const cd got = integrate_complex(quad, [&](cd z) {
      return p(z) * std::conj(kernel_eval(basis, z, w0)) * std::exp(-m * w.Q(z));
    });
    CHECK(std::abs(got - p(w0)) < 1e-7 * std::max(1.0, std::abs(p(w0))));
  }
}

TEST_CASE("weighted kernel: diagonal, Cauchy-Schwarz, large-m safety") {
  const Weight w = make_fock();
  const auto basis = build_space(w, 100.0, 30, default_quadrature(w, 100.0, 30));
  for (int i = 0; i < 100; ++i) {
    const cd z = random_point(1.2), v = random_point(1.2);
    const LogValue k = weighted_kernel(basis, z, v);
    const double lhs = 2.0 * k.log_magnitude;
    const double rhs = log_one_point(basis, z) + log_one_point(basis, v);
    CHECK(lhs <= rhs + 1e-9);
  }
  const LogValue diag = weighted_kernel(basis, cd{0.5, 0.1}, cd{0.5, 0.1});
  CHECK(diag.log_magnitude ==
        doctest::Approx(log_one_point(basis, cd{0.5, 0.1})).epsilon(1e-12));

  // closed form at m = 100 stays finite through the log domain
  const LogValue k = weighted_kernel(basis, cd{0.2, 0.0}, cd{0.3, 0.0});
  const double expect = std::log(100.0) + trunc_exp_log(29, 100.0 * 0.06).log_magnitude -
                        50.0 * (0.04 + 0.09);
  CHECK(k.log_magnitude == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("one-point function values and positivity") {
  const Weight w = make_fock();
  const auto basis = build_space(w, 5.0, 4, default_quadrature(w, 5.0, 4));
  CHECK(one_point(basis, cd{0.0, 0.0}) == doctest::Approx(5.0).epsilon(1e-10));
  for (int i = 0; i < 50; ++i) CHECK(one_point(basis, random_point(2.0)) >= 0.0);
}

TEST_CASE("one-point decay has the equilibrium shape") {
  // fit C at m = 20, then the same C bounds the m = 40 profile
  const Weight w = make_fock();
  const double tau = 1.0;
  const auto fit_C = [&](double m) {
    const int n = static_cast<int>(m * tau);
    const auto basis = build_space(w, m, n, default_quadrature(w, m, n));
    double C = 0.0;
    for (double r = 0.0; r <= 2.0 + 1e-9; r += 0.1) {
      const cd z{r, 0.0};
      const double bound_log = std::log(m) - m * (w.Q(z) - radial_equilibrium(w, tau, z));
      C = std::max(C, std::exp(log_one_point(basis, z) - bound_log));
    }
    return C;
  };
  const double C20 = fit_C(20.0);
  CHECK(C20 < 10.0);  // O(1) constant
  const double C40 = fit_C(40.0);
  CHECK(C40 <= C20 * 1.05);
}

TEST_CASE("radial and gram construction paths agree") {
  for (const Weight& w : {make_fock(), make_quartic_perturbation(0.1)}) {
    const double m = 4.0;
    const int n = 10;
    const auto quad = default_quadrature(w, m, n);
    const auto radial = build_space(w, m, n, quad);
    const auto gram = build_space_gram(w, m, n, quad);
    CHECK(radial.radial_path);
    CHECK(!gram.radial_path);
    for (int i = 0; i < 40; ++i) {
      const cd z = random_point(1.5), v = random_point(1.5);
      const cd a = kernel_eval(radial, z, v);
      const cd b = kernel_eval(gram, z, v);
      CHECK(std::abs(a - b) <= 1e-7 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("one-point function is nondecreasing in n") {
  const Weight w = make_quartic_perturbation(0.1);
  const double m = 8.0;
  const auto quad = default_quadrature(w, m, 12);
  const auto small = build_space(w, m, 6, quad);
  const auto large = build_space(w, m, 12, quad);
  for (int i = 0; i < 50; ++i) {
    const cd z = random_point(2.0);
    CHECK(one_point(large, z) >= one_point(small, z) - 1e-12);
  }
}

TEST_CASE("conditioning failure is loud") {
  const Weight w = make_fock();
  const auto tiny = build_radial_quadrature(4.0, 2, 4);  // rank-deficient moments
  CHECK_THROWS_AS(build_space_gram(w, 1.0, 10, tiny), ConditioningError);
}

TEST_CASE("basis serialization round-trips") {
  const Weight w = make_quartic_perturbation(0.1);
  const auto quad = default_quadrature(w, 6.0, 8);
  for (const auto& basis :
       {build_space(w, 6.0, 8, quad), build_space_gram(w, 6.0, 8, quad)}) {
    const auto back = basis_from_json(basis_to_json(basis));
    for (int i = 0; i < 20; ++i) {
      const cd z = random_point(1.5), v = random_point(1.5);
      const cd a = kernel_eval(basis, z, v);
      const cd b = kernel_eval(back, z, v);
      CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("radial log norms are log-convex") {
  const Weight w = make_fock();
  const auto basis = build_space(w, 3.0, 12, default_quadrature(w, 3.0, 12));
  const auto& h = basis.radial_log_norms;
  for (std::size_t j = 1; j + 1 < h.size(); ++j) CHECK(2.0 * h[j] <= h[j - 1] + h[j + 1] + 1e-12);
}

TEST_CASE("build argument validation") {
  const Weight w = make_fock();
  const auto quad = default_quadrature(w, 1.0, 2);
  CHECK_THROWS_AS(build_space(w, -1.0, 2, quad), std::invalid_argument);
  CHECK_THROWS_AS(build_space(w, 1.0, 0, quad), std::invalid_argument);
}
