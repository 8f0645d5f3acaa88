#include "bergman/dbar.hpp"

#include <cmath>
#include <stdexcept>

#include "bergman/errors.hpp"

namespace bergman {

long strict_int_below(double x) {
  const double f = std::floor(x);
  if (f == x) return static_cast<long>(std::ceil(x)) - 1;
  return static_cast<long>(f);
}

cd cauchy_transform(const std::function<cd(cd)>& f, const PlanarQuadrature& quad, cd w) {
  cd sum{0.0, 0.0};
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const cd z = quad.nodes[i];
    if (std::abs(w - z) < quad.cell_radius[i]) continue;
    const cd fv = f(z);
    if (fv == cd{0.0, 0.0}) continue;
    sum += quad.weights[i] * fv / (w - z);
  }
  return sum;
}

namespace {

// weighted basis values we_j(z) = e_j(z) e^{-mQ(z)/2} on all quadrature nodes
void weighted_basis_table(const BergmanSpaceBasis& basis, const PlanarQuadrature& quad,
                          std::vector<std::vector<cd>>& table) {
  table.assign(basis.n, std::vector<cd>(quad.size()));
  std::vector<LogValue> e;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    basis.log_weighted_basis(quad.nodes[i], e);
    for (int j = 0; j < basis.n; ++j) table[j][i] = e[j].value();
  }
}

}  // namespace

std::vector<cd> bergman_project(const BergmanSpaceBasis& basis, const std::function<cd(cd)>& u,
                                const PlanarQuadrature& quad) {
  std::vector<std::vector<cd>> we;
  weighted_basis_table(basis, quad, we);
  std::vector<cd> coeff(basis.n, cd{0.0, 0.0});
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double half_mq = 0.5 * basis.m * basis.weight.Q(quad.nodes[i]);
    const cd uv = u(quad.nodes[i]) * std::exp(-half_mq) * quad.weights[i];
    if (uv == cd{0.0, 0.0}) continue;
    for (int j = 0; j < basis.n; ++j) coeff[j] += uv * std::conj(we[j][i]);
  }
  return coeff;
}

MinimalSolution minimal_solution(const BergmanSpaceBasis& basis, const std::function<cd(cd)>& f,
                                 const PlanarQuadrature& quad,
                                 const std::vector<cd>& eval_points) {
  const std::size_t N = quad.size();

  // compact list of source nodes where f is nonzero
  struct Src {
    cd node;
    cd wf;  // weight * f
    double cell;
  };
  std::vector<Src> src;
  for (std::size_t i = 0; i < N; ++i) {
    const cd fv = f(quad.nodes[i]);
    if (fv == cd{0.0, 0.0}) continue;
    src.push_back({quad.nodes[i], quad.weights[i] * fv, quad.cell_radius[i]});
  }

  const auto cauchy_at = [&](cd w) {
    cd sum{0.0, 0.0};
    for (const Src& s : src) {
      if (std::abs(w - s.node) < s.cell) continue;
      sum += s.wf / (w - s.node);
    }
    return sum;
  };

  // weighted Cauchy transform v = Cf e^{-mQ/2} on the nodes
  std::vector<cd> v(N);
  for (std::size_t i = 0; i < N; ++i)
    v[i] = cauchy_at(quad.nodes[i]) *
           std::exp(-0.5 * basis.m * basis.weight.Q(quad.nodes[i]));

  std::vector<std::vector<cd>> we;
  weighted_basis_table(basis, quad, we);

  MinimalSolution sol;
  sol.coefficients.assign(basis.n, cd{0.0, 0.0});
  for (int j = 0; j < basis.n; ++j) {
    cd c{0.0, 0.0};
    for (std::size_t i = 0; i < N; ++i) c += quad.weights[i] * v[i] * std::conj(we[j][i]);
    sol.coefficients[j] = c;
  }

  double norm_sq = 0.0, cauchy_sq = 0.0, max_resid = 0.0;
  std::vector<cd> ustar_w(N);
  for (std::size_t i = 0; i < N; ++i) {
    cd proj{0.0, 0.0};
    for (int j = 0; j < basis.n; ++j) proj += sol.coefficients[j] * we[j][i];
    ustar_w[i] = v[i] - proj;
    norm_sq += quad.weights[i] * std::norm(ustar_w[i]);
    cauchy_sq += quad.weights[i] * std::norm(v[i]);
  }
  for (int j = 0; j < basis.n; ++j) {
    cd r{0.0, 0.0};
    for (std::size_t i = 0; i < N; ++i) r += quad.weights[i] * ustar_w[i] * std::conj(we[j][i]);
    max_resid = std::max(max_resid, std::abs(r));
  }
  sol.norm_mQ = std::sqrt(norm_sq);
  sol.cauchy_norm_mQ = std::sqrt(cauchy_sq);
  sol.orthogonality_residual = max_resid;

  std::vector<LogValue> e;
  for (cd p : eval_points) {
    const cd cfp = cauchy_at(p);
    basis.log_weighted_basis(p, e);
    const double lift = 0.5 * basis.m * basis.weight.Q(p);
    cd proj{0.0, 0.0};
    for (int j = 0; j < basis.n; ++j)
      proj += sol.coefficients[j] * LogValue::from_log(e[j].log_magnitude + lift, e[j].phase).value();
    sol.values.push_back(cfp - proj);
  }
  return sol;
}

DbarBoundParams make_dbar_params(double M0, double bpar, const EquilibriumResult& equilibrium,
                                 const Weight& w, cd supp_center, double supp_radius) {
  if (!(M0 > 0.0) || !(bpar > 0.0))
    throw std::invalid_argument("make_dbar_params: M0 and bpar must be > 0");
  DbarBoundParams p;
  p.M0 = M0;
  p.bpar = bpar;
  auto [q_tau, c_tau] = constants(equilibrium, w);
  p.q_tau = q_tau;
  p.c_tau = c_tau;
  p.a = inf_laplacian_on_disk(w, supp_center, supp_radius);
  p.m0 = std::max(2.0 * M0, (1.0 + M0) / equilibrium.tau);

  // growth relation bpar log(1+|z|^2) <= M0 Qhat_tau on sample rings
  for (double r : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    for (int k = 0; k < 16; ++k) {
      const double th = 2.0 * M_PI * k / 16.0;
      const cd z{r * std::cos(th), r * std::sin(th)};
      if (bpar * std::log1p(std::norm(z)) > M0 * equilibrium.eval_Qhat(z) + 1e-9)
        throw std::invalid_argument(
            "make_dbar_params: bpar log(1+|z|^2) exceeds M0 Qhat_tau at |z| = " +
            std::to_string(r));
    }
  }
  return p;
}

CorBhRecord verify_cor_bh(const BergmanSpaceBasis& basis, const std::function<cd(cd)>& f,
                          const DbarBoundParams& params, const EquilibriumResult& equilibrium,
                          const PlanarQuadrature& quad) {
  CorBhRecord rec;
  rec.m = basis.m;
  rec.n = basis.n;
  rec.regime_ok = basis.n >= strict_int_below((basis.m - params.M0) * equilibrium.tau + params.bpar) &&
                  basis.m >= params.m0;

  rec.norm_f_sq = integrate(quad, [&](cd z) {
    const cd fv = f(z);
    return fv == cd{0.0, 0.0} ? 0.0 : std::norm(fv) * std::exp(-basis.m * basis.weight.Q(z));
  });
  if (rec.norm_f_sq == 0.0) return rec;  // lhs = rhs = 0, ratio 0 convention

  const MinimalSolution sol = minimal_solution(basis, f, quad, {});
  rec.lhs = sol.norm_mQ * sol.norm_mQ;
  rec.rhs = 2.0 * std::exp(params.M0 * params.q_tau) /
            (params.a * basis.m + params.bpar * params.c_tau) * rec.norm_f_sq;
  rec.ratio = rec.lhs / rec.rhs;
  rec.orthogonality_residual_rel =
      sol.norm_mQ > 0.0 ? sol.orthogonality_residual / sol.norm_mQ : 0.0;
  return rec;
}

nlohmann::json cor_bh_to_json(const CorBhRecord& r) {
  return nlohmann::json{{"m", r.m},
                        {"n", r.n},
                        {"regime_ok", r.regime_ok},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"ratio", r.ratio},
                        {"norm_f_sq", r.norm_f_sq},
                        {"orthogonality_residual_rel", r.orthogonality_residual_rel}};
}

std::function<cd(cd)> make_bump(cd center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_bump: radius must be > 0");
  return [center, radius](cd z) {
    const double t = std::norm(z - center) / (radius * radius);
    if (t >= 1.0) return cd{0.0, 0.0};
    return cd{std::exp(-t / (1.0 - t)), 0.0};
  };
}

double inf_laplacian_on_disk(const Weight& w, cd center, double radius) {
  double a = std::numeric_limits<double>::infinity();
  const int n = 40;
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k < 24; ++k) {
      const double r = radius * i / n;
      const double th = 2.0 * M_PI * k / 24.0;
      a = std::min(a, w.laplacian(center + cd{r * std::cos(th), r * std::sin(th)}));
    }
  return a;
}

}  // namespace bergman
