#pragma once

#include "waldgeo/wald.hpp"

namespace waldgeo {

// Geodesic distance in the BHV tree space between two single-component
// trees with finite edge lengths.  Pendant lengths contribute a Euclidean
// product factor; internal splits go through the successive path-space
// refinement (min-weight vertex covers of the incompatibility graph via
// max-flow).  Trees sharing a topology reduce to the plain Euclidean norm
// of the length difference.
double bhv_distance(const Wald& w1, const Wald& w2);

// Upper bound: the cone path through the star stratum,
// sqrt((|int_1| + |int_2|)^2 + sum_u (pendant difference)^2).
double bhv_cone_bound(const Wald& w1, const Wald& w2);

}  // namespace waldgeo
