#include "bergman/berezin.hpp"

#include <cmath>

#include "bergman/errors.hpp"

namespace bergman {

BerezinEvaluator make_berezin(const BergmanSpaceBasis& basis, cd z0) {
  BerezinEvaluator ev;
  ev.basis = &basis;
  ev.z0 = z0;
  ev.log_one_point_z0 = log_one_point(basis, z0);
  if (ev.log_one_point_z0 == kNegInf)
    throw Error("make_berezin: one-point function vanished at z0 (numerical underflow)");
  return ev;
}

double log_density(const BerezinEvaluator& ev, cd z) {
  const LogValue k = weighted_kernel(*ev.basis, z, ev.z0);
  if (k.is_zero()) return kNegInf;
  return 2.0 * k.log_magnitude - ev.log_one_point_z0;
}

double density(const BerezinEvaluator& ev, cd z) {
  const double l = log_density(ev, z);
  return l == kNegInf ? 0.0 : std::exp(l);
}

double transform(const BerezinEvaluator& ev, const std::function<double(cd)>& f,
                 const PlanarQuadrature& quad) {
  return integrate(quad, [&](cd z) { return f(z) * density(ev, z); });
}

double normalized_density(const BerezinEvaluator& ev, cd z) {
  const double lap = ev.basis->weight.laplacian(ev.z0);
  if (!(lap > 0.0)) throw NotInXError("normalized_density: lap Q(z0) <= 0, z0 not in X");
  const double scale = std::sqrt(ev.basis->m * lap);
  return density(ev, ev.z0 + z / scale) / (ev.basis->m * lap);
}

PlanarQuadrature tv_quadrature() { return build_radial_quadrature(8.0, 160, 64); }

double tv_to_gaussian(const BerezinEvaluator& ev, const PlanarQuadrature& quad) {
  const double lap = ev.basis->weight.laplacian(ev.z0);
  if (!(lap > 0.0)) throw NotInXError("tv_to_gaussian: lap Q(z0) <= 0, z0 not in X");
  return integrate(quad, [&](cd z) {
    return std::abs(normalized_density(ev, z) - std::exp(-std::norm(z)));
  });
}

double mass_outside(const BerezinEvaluator& ev, const std::function<bool(cd)>& indicator,
                    const PlanarQuadrature& quad) {
  return integrate(quad, [&](cd z) { return indicator(z) ? density(ev, z) : 0.0; });
}

}  // namespace bergman
