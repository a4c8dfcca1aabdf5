#pragma once

#include "catflow/group_action.hpp"

namespace catflow {

enum class IsometryClass { Elliptic, Hyperbolic, Unresolved };

// Closed-form translation length:
//   Euclidean: |projection of the offset onto the fixed space of Q|
//   tree:      length of the cyclically reduced word
//   Mobius:    2 arccosh(|tr|/2) for |tr| > 2, else 0
double translation_length(const Space& space, const Isometry& g);

IsometryClass classify(const Space& space, const Isometry& g, double tol = 1e-9);

// Axis of a hyperbolic isometry as a full line with g . c(t) = c(t + l(g)).
GeneralizedGeodesic axis(const Space& space, const Isometry& g);

// displacement(g, x) <= l(g) + tol
bool min_set_test(const Space& space, const Isometry& g, const SpacePoint& x, double tol);

}  // namespace catflow
