#include "bergman/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

void check_build_args(const Weight&, double m, int n) {
  if (!(m > 0.0)) throw std::invalid_argument("build_space: m must be > 0");
  if (n < 1) throw std::invalid_argument("build_space: n must be >= 1");
}

// 1-D log-domain monomial norms for radial weights:
// h_j = 2 int_0^rmax r^{2j+1} e^{-m Q(r)} dr
std::vector<double> radial_log_norms(const Weight& w, double m, int n, double r_max) {
  const int n1d = std::max(400, 6 * n);
  std::vector<double> r, wr;
  gauss_legendre(n1d, 0.0, r_max, r, wr);
  std::vector<double> lw(n1d), lr(n1d), mq(n1d);
  for (int i = 0; i < n1d; ++i) {
    lw[i] = std::log(2.0 * wr[i]);
    lr[i] = std::log(r[i]);
    mq[i] = m * w.radial->value(r[i]);
  }
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    LogSum s;
    for (int i = 0; i < n1d; ++i) s.add_log((2.0 * j + 1.0) * lr[i] - mq[i] + lw[i]);
    out[j] = s.total().log_magnitude;
  }
  // moment log-convexity: h_j^2 <= h_{j-1} h_{j+1}
  for (int j = 1; j + 1 < n; ++j) {
    if (2.0 * out[j] > out[j - 1] + out[j + 1] + 1e-9)
      throw Error("radial norms violate log-convexity; quadrature too coarse");
  }
  return out;
}

}  // namespace

double default_r_max(const Weight& w, double m, int n) {
  const double target_abs = 80.0 + m * w.min_Q;
  // negative log of the top monomial moment integrand r^{2(n-1)} e^{-mQ}
  const auto g = [&](double r) { return m * w.Q(cd{r, 0.0}) - 2.0 * (n - 1) * std::log(r); };
  // walk outward past the integrand peak, then accept once the tail sits both
  // below e^{-80 - m min Q} absolutely and below 1e-30 of the peak
  double g_min = std::numeric_limits<double>::infinity();
  double g_prev = std::numeric_limits<double>::infinity();
  double r = 0.05;
  for (int it = 0; it < 4000; ++it) {
    const double gr = g(r);
    g_min = std::min(g_min, gr);
    if (gr >= g_prev && gr >= std::max(target_abs, g_min + 69.0)) return r;
    g_prev = gr;
    r *= 1.04;
  }
  throw GrowthViolationError("default_r_max: tail criterion unattained; weight grows too slowly");
}

PlanarQuadrature default_quadrature(const Weight& w, double m, int n) {
  const double r_max = default_r_max(w, m, n);
  int n_radial = std::max({120, 3 * n, static_cast<int>(std::ceil(10.0 * r_max * std::sqrt(m)))});
  n_radial = std::min(n_radial, 700);
  const int n_angular = std::max(64, 2 * n + 8);
  return build_radial_quadrature(r_max, n_radial, n_angular);
}

BergmanSpaceBasis build_space_gram(const Weight& w, double m, int n,
                                   const PlanarQuadrature& quad) {
  check_build_args(w, m, n);
  BergmanSpaceBasis basis;
  basis.weight = w;
  basis.m = m;
  basis.n = n;
  basis.radial_path = false;
  basis.quadrature = quad;

  const std::size_t N = quad.size();
  std::vector<double> log_abs(N), half_mq(N), theta(N);
  for (std::size_t i = 0; i < N; ++i) {
    const cd z = quad.nodes[i];
    log_abs[i] = std::abs(z) == 0.0 ? kNegInf : std::log(std::abs(z));
    theta[i] = std::arg(z);
    half_mq[i] = 0.5 * m * w.Q(z);
  }

  // diagonal moments give the scaling that brings the Gram matrix to unit diagonal
  basis.scale_log.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    LogSum s;
    for (std::size_t i = 0; i < N; ++i) {
      const double t = (j == 0) ? 0.0 : 2.0 * j * log_abs[i];
      s.add_log(t - 2.0 * half_mq[i] + std::log(quad.weights[i]));
    }
    basis.scale_log[j] = 0.5 * s.total().log_magnitude;
  }

  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd v(n);
  for (std::size_t i = 0; i < N; ++i) {
    for (int j = 0; j < n; ++j) {
      const double lm = (j == 0 ? 0.0 : j * log_abs[i]) - basis.scale_log[j] - half_mq[i];
      const double mag = std::exp(lm);
      v(j) = cd{mag * std::cos(j * theta[i]), mag * std::sin(j * theta[i])};
    }
    G.selfadjointView<Eigen::Lower>().rankUpdate(v, quad.weights[i]);
  }
  G = G.selfadjointView<Eigen::Lower>();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  const double cond = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(lmin > 0.0) || cond > 1e12) {
    const int rank = (eig.eigenvalues().array() > lmax * 1e-14).count();
    throw ConditioningError(
        "build_space: scaled Gram matrix is not positive definite to working precision "
        "(condition estimate " + std::to_string(cond) + ", rank estimate " +
            std::to_string(rank) + " of " + std::to_string(n) + ")",
        cond, rank);
  }

  Eigen::LLT<Eigen::MatrixXcd> llt(G);
  if (llt.info() != Eigen::Success)
    throw ConditioningError("build_space: Cholesky factorization failed", cond, n);
  Eigen::MatrixXcd L = llt.matrixL();
  basis.coeff = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(n, n));
  return basis;
}

BergmanSpaceBasis build_space(const Weight& w, double m, int n, const PlanarQuadrature& quad) {
  check_build_args(w, m, n);
  if (!w.is_radial || !w.radial) return build_space_gram(w, m, n, quad);
  BergmanSpaceBasis basis;
  basis.weight = w;
  basis.m = m;
  basis.n = n;
  basis.radial_path = true;
  basis.quadrature = quad;
  basis.radial_log_norms = radial_log_norms(w, m, n, quad.r_max);
  return basis;
}

void BergmanSpaceBasis::log_weighted_basis(cd z, std::vector<LogValue>& out) const {
  out.assign(n, LogValue::zero());
  const double la = std::abs(z) == 0.0 ? kNegInf : std::log(std::abs(z));
  const double th = std::arg(z);
  const double half_mq = 0.5 * m * weight.Q(z);
  if (radial_path) {
    for (int j = 0; j < n; ++j) {
      if (j > 0 && la == kNegInf) break;  // higher monomials vanish at the origin
      const double lm = (j == 0 ? 0.0 : j * la) - 0.5 * radial_log_norms[j] - half_mq;
      out[j] = LogValue::from_log(lm, cd{std::cos(j * th), std::sin(j * th)});
    }
    return;
  }
  std::vector<LogValue> phi(n);
  for (int j = 0; j < n; ++j) {
    if (j > 0 && la == kNegInf) {
      phi[j] = LogValue::zero();
      continue;
    }
    const double lm = (j == 0 ? 0.0 : j * la) - scale_log[j] - half_mq;
    phi[j] = LogValue::from_log(lm, cd{std::cos(j * th), std::sin(j * th)});
  }
  for (int i = 0; i < n; ++i) {
    LogSum s;
    for (int j = 0; j <= i; ++j) {  // coeff is lower triangular
      const cd c = coeff(i, j);
      if (c == cd{0.0, 0.0} || phi[j].is_zero()) continue;
      s.add(LogValue::from_complex(c) * phi[j]);
    }
    out[i] = s.total();
  }
}

LogValue weighted_kernel(const BergmanSpaceBasis& basis, cd z, cd w) {
  std::vector<LogValue> ez, ew;
  basis.log_weighted_basis(z, ez);
  basis.log_weighted_basis(w, ew);
  LogSum s;
  for (int j = 0; j < basis.n; ++j) {
    if (ez[j].is_zero() || ew[j].is_zero()) continue;
    s.add_log(ez[j].log_magnitude + ew[j].log_magnitude, ez[j].phase * std::conj(ew[j].phase));
  }
  return s.total();
}

cd kernel_eval(const BergmanSpaceBasis& basis, cd z, cd w) {
  const LogValue lv = weighted_kernel(basis, z, w);
  const double lift = 0.5 * basis.m * (basis.weight.Q(z) + basis.weight.Q(w));
  return LogValue::from_log(lv.log_magnitude + lift, lv.phase).value();
}

double log_one_point(const BergmanSpaceBasis& basis, cd z) {
  std::vector<LogValue> e;
  basis.log_weighted_basis(z, e);
  LogSum s;
  for (int j = 0; j < basis.n; ++j) {
    if (e[j].is_zero()) continue;
    s.add_log(2.0 * e[j].log_magnitude);
  }
  return s.total().log_magnitude;
}

double one_point(const BergmanSpaceBasis& basis, cd z) {
  const double l = log_one_point(basis, z);
  return l == kNegInf ? 0.0 : std::exp(l);
}

nlohmann::json basis_to_json(const BergmanSpaceBasis& basis) {
  nlohmann::json j;
  j["weight"] = weight_to_json(basis.weight);
  j["m"] = basis.m;
  j["n"] = basis.n;
  j["path"] = basis.radial_path ? "radial" : "gram";
  j["r_max"] = basis.quadrature.r_max;
  if (basis.radial_path) {
    j["radial_log_norms"] = basis.radial_log_norms;
  } else {
    j["scale_log"] = basis.scale_log;
    std::vector<std::vector<double>> re(basis.n), im(basis.n);
    for (int r = 0; r < basis.n; ++r)
      for (int c = 0; c < basis.n; ++c) {
        re[r].push_back(basis.coeff(r, c).real());
        im[r].push_back(basis.coeff(r, c).imag());
      }
    j["coeff_re"] = re;
    j["coeff_im"] = im;
  }
  return j;
}

BergmanSpaceBasis basis_from_json(const nlohmann::json& j) {
  BergmanSpaceBasis basis;
  basis.weight = weight_from_json(j.at("weight"));
  basis.m = j.at("m").get<double>();
  basis.n = j.at("n").get<int>();
  basis.radial_path = j.at("path").get<std::string>() == "radial";
  const double r_max = j.at("r_max").get<double>();
  basis.quadrature = build_radial_quadrature(r_max, std::max(120, 3 * basis.n),
                                             std::max(64, 2 * basis.n + 8));
  if (basis.radial_path) {
    basis.radial_log_norms = j.at("radial_log_norms").get<std::vector<double>>();
  } else {
    basis.scale_log = j.at("scale_log").get<std::vector<double>>();
    const auto re = j.at("coeff_re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("coeff_im").get<std::vector<std::vector<double>>>();
    basis.coeff.resize(basis.n, basis.n);
    for (int r = 0; r < basis.n; ++r)
      for (int c = 0; c < basis.n; ++c) basis.coeff(r, c) = cd{re[r][c], im[r][c]};
  }
  return basis;
}

}  // namespace bergman
