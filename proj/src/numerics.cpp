#include "bergman/numerics.hpp"

#include <cmath>
#include <stdexcept>

#include "bergman/errors.hpp"

namespace bergman {

LogValue LogValue::from_real(double x) {
  if (x == 0.0) return zero();
  return {std::log(std::abs(x)), cd{x > 0 ? 1.0 : -1.0, 0.0}};
}

LogValue LogValue::from_complex(cd v) {
  double a = std::abs(v);
  if (a == 0.0) return zero();
  return {std::log(a), v / a};
}

LogValue LogValue::from_log(double log_magnitude, cd phase) {
  if (log_magnitude == kNegInf) return zero();
  return {log_magnitude, phase};
}

cd LogValue::value() const {
  if (is_zero()) return cd{0.0, 0.0};
  return std::exp(log_magnitude) * phase;
}

double LogValue::abs_value() const { return is_zero() ? 0.0 : std::exp(log_magnitude); }

LogValue LogValue::operator*(const LogValue& o) const {
  if (is_zero() || o.is_zero()) return zero();
  return {log_magnitude + o.log_magnitude, phase * o.phase};
}

LogValue LogValue::operator/(const LogValue& o) const {
  if (o.is_zero()) throw Error("LogValue: division by zero");
  if (is_zero()) return zero();
  return {log_magnitude - o.log_magnitude, phase / o.phase};
}

void LogSum::add(const LogValue& t) {
  if (t.is_zero()) return;
  if (t.log_magnitude > log_ref_) {
    // rescale the running sum to the new reference magnitude
    acc_ *= std::exp(log_ref_ - t.log_magnitude);
    log_ref_ = t.log_magnitude;
    acc_ += t.phase;
  } else {
    acc_ += std::exp(t.log_magnitude - log_ref_) * t.phase;
  }
}

void LogSum::add_log(double log_magnitude, cd phase) {
  add(LogValue::from_log(log_magnitude, phase));
}

LogValue LogSum::total() const {
  double a = std::abs(acc_);
  if (a == 0.0 || log_ref_ == kNegInf) return LogValue::zero();
  return {log_ref_ + std::log(a), acc_ / a};
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi-type initial guess, then Newton on the recurrence
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = mid - half * x;
    nodes[n - 1 - i] = mid + half * x;
    double w = 2.0 * half / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

PlanarQuadrature build_radial_quadrature(double r_max, int n_radial, int n_angular) {
  if (!(r_max > 0.0)) throw std::invalid_argument("build_radial_quadrature: r_max must be > 0");
  if (n_radial < 2) throw std::invalid_argument("build_radial_quadrature: n_radial must be >= 2");
  if (n_angular < 4) throw std::invalid_argument("build_radial_quadrature: n_angular must be >= 4");

  std::vector<double> r, wr;
  gauss_legendre(n_radial, 0.0, r_max, r, wr);

  PlanarQuadrature q;
  q.r_max = r_max;
  q.scheme = QuadScheme::RadialTensor;
  q.nodes.reserve(static_cast<std::size_t>(n_radial) * n_angular);
  q.weights.reserve(q.nodes.capacity());
  q.cell_radius.reserve(q.nodes.capacity());

  const double dtheta = 2.0 * M_PI / n_angular;
  for (int i = 0; i < n_radial; ++i) {
    // dA = r dr dtheta / pi
    const double w = 2.0 * wr[i] * r[i] / n_angular;
    const double gap_lo = (i == 0) ? r[0] : r[i] - r[i - 1];
    const double gap_hi = (i == n_radial - 1) ? r_max - r[i] : r[i + 1] - r[i];
    const double cell = 0.5 * std::max(std::max(gap_lo, gap_hi), r[i] * dtheta);
    for (int j = 0; j < n_angular; ++j) {
      const double th = dtheta * j;
      q.nodes.emplace_back(r[i] * std::cos(th), r[i] * std::sin(th));
      q.weights.push_back(w);
      q.cell_radius.push_back(cell);
    }
  }
  return q;
}

PlanarQuadrature build_cartesian_quadrature(double extent, double spacing) {
  if (!(extent > 0.0) || !(spacing > 0.0))
    throw std::invalid_argument("build_cartesian_quadrature: extent and spacing must be > 0");
  const int n = static_cast<int>(std::floor(2.0 * extent / spacing));
  PlanarQuadrature q;
  q.r_max = extent;
  q.scheme = QuadScheme::CartesianGrid;
  const double w = spacing * spacing / M_PI;
  for (int i = 0; i < n; ++i) {
    const double x = -extent + (i + 0.5) * spacing;
    for (int j = 0; j < n; ++j) {
      const double y = -extent + (j + 0.5) * spacing;
      q.nodes.emplace_back(x, y);
      q.weights.push_back(w);
      q.cell_radius.push_back(0.5 * spacing);
    }
  }
  return q;
}

namespace {
constexpr std::size_t kChunk = 1024;

template <typename T>
T integrate_impl(const PlanarQuadrature& q, const std::function<T(cd)>& f) {
  // Kahan within each fixed-size chunk, chunks combined in index order.
  T total{};
  for (std::size_t begin = 0; begin < q.size(); begin += kChunk) {
    const std::size_t end = std::min(begin + kChunk, q.size());
    T sum{}, comp{};
    for (std::size_t i = begin; i < end; ++i) {
      T term = f(q.nodes[i]) * q.weights[i] - comp;
      T t = sum + term;
      comp = (t - sum) - term;
      sum = t;
    }
    total += sum;
  }
  return total;
}
}  // namespace

double integrate(const PlanarQuadrature& q, const std::function<double(cd)>& f) {
  return integrate_impl<double>(q, f);
}

cd integrate_complex(const PlanarQuadrature& q, const std::function<cd(cd)>& f) {
  return integrate_impl<cd>(q, f);
}

LogValue trunc_exp_log(int k, double x) {
  if (k < 0) return LogValue::zero();  // E_{-1} == 0 convention
  if (x < 0.0) throw std::invalid_argument("trunc_exp_log: x must be >= 0");
  if (x == 0.0) return LogValue::from_real(1.0);
  const double lx = std::log(x);
  // dominant term index; fixed for all k >= floor(x) so that increasing k
  // only appends nonnegative terms to the same scaled sum
  const int jstar = std::min(k, static_cast<int>(std::floor(x)));
  const double lref = jstar * lx - std::lgamma(jstar + 1.0);
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    sum += std::exp(j * lx - std::lgamma(j + 1.0) - lref);
  }
  return LogValue::from_log(lref + std::log(sum));
}

LogValue trunc_exp_log_complex(int k, double log_abs, double arg) {
  if (k < 0) return LogValue::zero();
  if (log_abs == kNegInf) return LogValue::from_real(1.0);
  int jstar = 0;
  {
    const double a = std::exp(std::min(log_abs, 700.0));
    jstar = std::min(k, static_cast<int>(std::floor(a)));
    if (jstar < 0) jstar = 0;
  }
  const double lref = jstar * log_abs - std::lgamma(jstar + 1.0);
  cd sum{0.0, 0.0};
  for (int j = 0; j <= k; ++j) {
    const double lt = j * log_abs - std::lgamma(j + 1.0) - lref;
    if (lt < -46.0) continue;  // below double roundoff relative to the peak
    const double t = std::exp(lt);
    sum += cd{t * std::cos(j * arg), t * std::sin(j * arg)};
  }
  const double a = std::abs(sum);
  if (a == 0.0) return LogValue::zero();
  return LogValue::from_log(lref + std::log(a), sum / a);
}

cd trunc_exp(int k, cd zeta) {
  if (k < 0) return cd{0.0, 0.0};
  const double a = std::abs(zeta);
  if (a <= 30.0) {
    // direct compensated summation
    cd sum{0.0, 0.0}, comp{0.0, 0.0}, term{1.0, 0.0};
    for (int j = 0; j <= k; ++j) {
      cd y = term - comp;
      cd t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      term *= zeta / static_cast<double>(j + 1);
    }
    return sum;
  }
  return trunc_exp_log_complex(k, std::log(a), std::arg(zeta)).value();
}

namespace {

// log of the series form: gamma(a,x) = x^a e^{-x} sum_{n>=0} x^n / (a (a+1) ... (a+n))
double log_lig_series(int a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return a * std::log(x) - x + std::log(sum);
}

// log of the upper gamma via Lentz continued fraction (x >= a+1)
double log_upper_gamma_cf(int a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return a * std::log(x) - x + std::log(h);
}

}  // namespace

double log_lower_incomplete_gamma(int a, double x) {
  if (a < 1) throw std::invalid_argument("lower_incomplete_gamma: a must be >= 1");
  if (x < 0.0) throw std::invalid_argument("lower_incomplete_gamma: x must be >= 0");
  if (x == 0.0) return kNegInf;
  if (x < a + 1.0) return log_lig_series(a, x);
  const double lg = std::lgamma(static_cast<double>(a));
  const double lupper = log_upper_gamma_cf(a, x);
  // gamma = Gamma(a) - Gamma(a,x); in this branch the upper part is the minority
  return lg + std::log1p(-std::exp(lupper - lg));
}

double lower_incomplete_gamma(int a, double x) {
  const double l = log_lower_incomplete_gamma(a, x);
  return l == kNegInf ? 0.0 : std::exp(l);
}

}  // namespace bergman
