#pragma once

#include <functional>

#include "bergman/kernel.hpp"

namespace bergman {

/// Evaluator for the Berezin density at a fixed insertion point z0:
/// |K_{m,n}(z,z0)|^2 / K_{m,n}(z0,z0) * e^{-mQ(z)}, a probability density
/// against dA.
struct BerezinEvaluator {
  const BergmanSpaceBasis* basis = nullptr;
  cd z0;
  double log_one_point_z0 = 0.0;
};

BerezinEvaluator make_berezin(const BergmanSpaceBasis& basis, cd z0);

double density(const BerezinEvaluator& ev, cd z);
double log_density(const BerezinEvaluator& ev, cd z);

/// Berezin transform of f at z0: integral of f against the density.
double transform(const BerezinEvaluator& ev, const std::function<double(cd)>& f,
                 const PlanarQuadrature& quad);

/// Blow-up form at scale sqrt(m lap Q(z0)); tends to the standard Gaussian
/// e^{-|z|^2} at interior points. Throws NotInXError when lap Q(z0) <= 0.
double normalized_density(const BerezinEvaluator& ev, cd z);

/// Total-variation distance between the normalized density and e^{-|z|^2},
/// integrated over the support of `quad` (given in rescaled coordinates).
double tv_to_gaussian(const BerezinEvaluator& ev, const PlanarQuadrature& quad);

/// Rule in rescaled coordinates for tv_to_gaussian; both densities are
/// sub-Gaussian there, so r_max = 8 leaves a tail below 1e-12.
PlanarQuadrature tv_quadrature();

/// Mass of the density over {z : indicator(z) true}; pass the complement of
/// a droplet neighborhood to measure escaping mass.
double mass_outside(const BerezinEvaluator& ev, const std::function<bool(cd)>& indicator,
                    const PlanarQuadrature& quad);

}  // namespace bergman
