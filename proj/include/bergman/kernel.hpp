#pragma once

#include <vector>

#include <json.hpp>

#include "bergman/numerics.hpp"
#include "bergman/weights.hpp"

#if defined(__GNUC__)
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wdeprecated-enum-enum-conversion"
#endif
#include <Eigen/Dense>
#if defined(__GNUC__)
#pragma GCC diagnostic pop
#endif

namespace bergman {

/// Orthonormal structure of H_{m,n}, the analytic polynomials of degree < n
/// with finite e^{-mQ}-weighted L2 norm. Radial weights store the monomial
/// log-norms log h_j with h_j = int |z|^{2j} e^{-mQ} dA; general weights store
/// a triangular factor of the scaled monomial Gram matrix.
struct BergmanSpaceBasis {
  Weight weight;
  double m = 1.0;
  int n = 1;
  bool radial_path = true;
  std::vector<double> radial_log_norms;  // radial path: log h_j, j = 0..n-1
  std::vector<double> scale_log;         // general path: 0.5*log of diagonal moments
  Eigen::MatrixXcd coeff;                // general path: rows give e_i in the scaled monomials
  PlanarQuadrature quadrature;

  /// log of e_j(z) e^{-mQ(z)/2} for j = 0..n-1. The weighted form is bounded
  /// by sqrt(one_point), so individual terms never overflow.
  void log_weighted_basis(cd z, std::vector<LogValue>& out) const;
};

/// Smallest truncation radius with m Q(r) - 2(n-1) log r >= 80 + m min Q,
/// which puts the tail of every monomial moment below 1e-30 of its peak.
double default_r_max(const Weight& w, double m, int n);

/// Radial-tensor rule adequate for degree-2(n-1) moments against e^{-mQ}.
PlanarQuadrature default_quadrature(const Weight& w, double m, int n);

/// Build the orthonormal basis data. Radial weights take a 1-D log-domain
/// route; others assemble and factor the scaled Gram matrix. Throws
/// ConditioningError when the scaled Gram matrix cannot be trusted.
BergmanSpaceBasis build_space(const Weight& w, double m, int n, const PlanarQuadrature& quad);

/// Force the Gram-matrix route (used to cross-check the radial path).
BergmanSpaceBasis build_space_gram(const Weight& w, double m, int n,
                                   const PlanarQuadrature& quad);

/// K_{m,n}(z,w) = sum_j e_j(z) conj(e_j(w)). Plain complex value; may
/// overflow for large m far from the diagonal (use weighted_kernel there).
cd kernel_eval(const BergmanSpaceBasis& basis, cd z, cd w);

/// K_{m,n}(z,w) e^{-m(Q(z)+Q(w))/2}, accumulated term-by-term in the log
/// domain so that magnitudes down to e^{-5000} survive.
LogValue weighted_kernel(const BergmanSpaceBasis& basis, cd z, cd w);

/// K_{m,n}(z,z) e^{-mQ(z)} >= 0.
double one_point(const BergmanSpaceBasis& basis, cd z);
double log_one_point(const BergmanSpaceBasis& basis, cd z);

nlohmann::json basis_to_json(const BergmanSpaceBasis& basis);
BergmanSpaceBasis basis_from_json(const nlohmann::json& j);

}  // namespace bergman
