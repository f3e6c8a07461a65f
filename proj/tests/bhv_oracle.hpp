#pragma once

#include "waldgeo/wald.hpp"

namespace waldgeo::testing {

// Reference BHV distance for small trees: exhaustive search over ordered
// support-sequence pairs instead of max-flow refinement.  Exponential in
// the number of internal splits; use for N <= 6.
double bhv_distance_exhaustive(const Wald& w1, const Wald& w2);

}  // namespace waldgeo::testing
