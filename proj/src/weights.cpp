#include "bergman/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace bergman {

double fd_laplacian(const std::function<double(cd)>& Q, cd z) {
  const double h = 1e-5 * std::max(1.0, std::abs(z));
  const double s = Q(z + cd{h, 0}) + Q(z - cd{h, 0}) + Q(z + cd{0, h}) + Q(z - cd{0, h});
  return 0.25 * (s - 4.0 * Q(z)) / (h * h);
}

Weight make_fock() {
  Weight w;
  w.Q = [](cd z) { return std::norm(z); };
  w.laplacian = [](cd) { return 1.0; };
  w.growth_rho = 1.0;  // tau <= 1 permitted for Fock
  w.is_radial = true;
  w.radial = RadialProfile{[](double r) { return r * r; }, [](double r) { return 2.0 * r; }};
  BivariateAnalytic psi;
  psi.eval = [](cd z, cd w2) { return z * w2; };
  psi.d1 = [](cd, cd w2) { return w2; };
  psi.d2 = [](cd z, cd) { return z; };
  psi.d1d2 = [](cd, cd) { return cd{1.0, 0.0}; };
  psi.d11d2 = [](cd, cd) { return cd{0.0, 0.0}; };
  psi.d1d22 = [](cd, cd) { return cd{0.0, 0.0}; };
  psi.d11d22 = [](cd, cd) { return cd{0.0, 0.0}; };
  w.psi = psi;
  w.min_Q = 0.0;
  w.descriptor = {{"kind", "fock"}};
  return w;
}

Weight make_radial_power(int p) {
  if (p < 1) throw std::invalid_argument("make_radial_power: p must be >= 1");
  Weight w;
  const double pd = p;
  w.Q = [p](cd z) { return std::pow(std::norm(z), p); };
  w.laplacian = [p, pd](cd z) { return pd * pd * std::pow(std::norm(z), p - 1); };
  w.growth_rho = pd;
  w.is_radial = true;
  w.radial = RadialProfile{[p](double r) { return std::pow(r, 2 * p); },
                           [p, pd](double r) { return 2.0 * pd * std::pow(r, 2 * p - 1); }};
  BivariateAnalytic psi;
  psi.eval = [p](cd z, cd w2) { return std::pow(z * w2, p); };
  psi.d1 = [p, pd](cd z, cd w2) { return pd * std::pow(z, p - 1) * std::pow(w2, p); };
  psi.d2 = [p, pd](cd z, cd w2) { return pd * std::pow(z, p) * std::pow(w2, p - 1); };
  psi.d1d2 = [p, pd](cd z, cd w2) { return pd * pd * std::pow(z * w2, p - 1); };
  psi.d11d2 = [p, pd](cd z, cd w2) {
    return pd * pd * (pd - 1.0) * std::pow(z, p - 2) * std::pow(w2, p - 1);
  };
  psi.d1d22 = [p, pd](cd z, cd w2) {
    return pd * pd * (pd - 1.0) * std::pow(z, p - 1) * std::pow(w2, p - 2);
  };
  psi.d11d22 = [p, pd](cd z, cd w2) {
    return pd * pd * (pd - 1.0) * (pd - 1.0) * std::pow(z * w2, p - 2);
  };
  w.psi = psi;
  w.min_Q = 0.0;
  w.descriptor = {{"kind", "radial_power"}, {"p", p}};
  return w;
}

Weight make_quartic_perturbation(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("make_quartic_perturbation: c must be > 0");
  Weight w;
  w.Q = [c](cd z) {
    const double s = std::norm(z);
    return s + c * s * s;
  };
  w.laplacian = [c](cd z) { return 1.0 + 4.0 * c * std::norm(z); };
  w.growth_rho = 2.0;
  w.is_radial = true;
  w.radial = RadialProfile{
      [c](double r) { return r * r + c * r * r * r * r; },
      [c](double r) { return 2.0 * r + 4.0 * c * r * r * r; }};
  BivariateAnalytic psi;
  psi.eval = [c](cd z, cd w2) {
    const cd s = z * w2;
    return s + c * s * s;
  };
  psi.d1 = [c](cd z, cd w2) { return w2 + 2.0 * c * z * w2 * w2; };
  psi.d2 = [c](cd z, cd w2) { return z + 2.0 * c * z * z * w2; };
  psi.d1d2 = [c](cd z, cd w2) { return cd{1.0, 0.0} + 4.0 * c * z * w2; };
  psi.d11d2 = [c](cd, cd w2) { return 4.0 * c * w2; };
  psi.d1d22 = [c](cd z, cd) { return 4.0 * c * z; };
  psi.d11d22 = [c](cd, cd) { return cd{4.0 * c, 0.0}; };
  w.psi = psi;
  w.min_Q = 0.0;
  w.descriptor = {{"kind", "quartic"}, {"c", c}};
  return w;
}

Weight weight_from_json(const nlohmann::json& j) {
  if (!j.contains("kind")) throw std::invalid_argument("weight descriptor: missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fock") return make_fock();
  if (kind == "radial_power") return make_radial_power(j.at("p").get<int>());
  if (kind == "quartic") return make_quartic_perturbation(j.at("c").get<double>());
  throw std::invalid_argument("weight descriptor: unknown kind \"" + kind + "\"");
}

nlohmann::json weight_to_json(const Weight& w) { return w.descriptor; }

}  // namespace bergman
