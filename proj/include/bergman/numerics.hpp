#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace bergman {

using cd = std::complex<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// A complex number carried as log-magnitude plus unit phase, so that
/// quantities like e^{mQ} with m ~ 100 never leave the representable range.
/// Zero is encoded as log_magnitude = -inf.
struct LogValue {
  double log_magnitude = kNegInf;
  cd phase{1.0, 0.0};  // unit modulus (sign, for real quantities)

  static LogValue zero() { return {}; }
  static LogValue from_real(double x);
  static LogValue from_complex(cd v);
  static LogValue from_log(double log_magnitude, cd phase = cd{1.0, 0.0});

  bool is_zero() const { return log_magnitude == kNegInf; }
  /// exp(log_magnitude) * phase; may over/underflow if the magnitude is extreme.
  cd value() const;
  double abs_value() const;

  LogValue operator*(const LogValue& o) const;
  LogValue operator/(const LogValue& o) const;
};

/// Streaming log-sum-exp accumulator for complex terms given as LogValue.
/// Terms are combined in insertion order; summation is sequential and
/// bit-deterministic for a fixed term sequence.
class LogSum {
 public:
  void add(const LogValue& t);
  void add_log(double log_magnitude, cd phase = cd{1.0, 0.0});
  LogValue total() const;

 private:
  double log_ref_ = kNegInf;
  cd acc_{0.0, 0.0};
};

enum class QuadScheme { RadialTensor, CartesianGrid };

/// Nodes and weights for integrals against dA = dxdy/pi over a truncated
/// region of the plane. Weights are dA-calibrated: summing the weights of a
/// rule built on the unit disk gives 1.
struct PlanarQuadrature {
  std::vector<cd> nodes;
  std::vector<double> weights;
  std::vector<double> cell_radius;  // half local node spacing, for singular-node exclusion
  double r_max = 0.0;               // truncation radius (half-extent for cartesian)
  QuadScheme scheme = QuadScheme::RadialTensor;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes/weights on [a, b], computed by Newton iteration on
/// the Legendre recurrence. Accurate to ~1e-15 for n up to several hundred.
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Gauss-Legendre in radius tensored with a uniform angular grid.
/// Weights carry the r dr Jacobian and the 1/pi normalization.
PlanarQuadrature build_radial_quadrature(double r_max, int n_radial, int n_angular);

/// Midpoint rule on a square grid [-extent, extent]^2 with the given spacing.
PlanarQuadrature build_cartesian_quadrature(double extent, double spacing);

/// Chunked Kahan summation of f over the rule. The reduction always combines
/// fixed-size chunks in index order, so results are bit-identical regardless
/// of how the chunks are evaluated.
double integrate(const PlanarQuadrature& q, const std::function<double(cd)>& f);
cd integrate_complex(const PlanarQuadrature& q, const std::function<cd(cd)>& f);

/// log E_k(x) for the truncated exponential E_k(x) = sum_{j<=k} x^j/j!,
/// x >= 0, by streaming log-sum-exp. Nondecreasing in k.
LogValue trunc_exp_log(int k, double x);

/// log E_k(zeta) for complex zeta given as (log|zeta|, arg zeta).
/// Sums relative to the dominant term, so it is stable for |zeta| far beyond
/// the overflow range of e^{|zeta|}.
LogValue trunc_exp_log_complex(int k, double log_abs, double arg);

/// E_k with the E_{-1} == 0 convention, as a plain complex value.
cd trunc_exp(int k, cd zeta);

/// Lower incomplete gamma integral_0^x s^{a-1} e^{-s} ds for integer a >= 1,
/// relative error <= 1e-12. Series for x < a+1, continued fraction otherwise.
double lower_incomplete_gamma(int a, double x);
double log_lower_incomplete_gamma(int a, double x);

}  // namespace bergman
