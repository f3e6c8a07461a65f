#pragma once

#include <string>
#include <string_view>

#include "waldgeo/forest_graph.hpp"

namespace waldgeo {

// Grammar (whitespace ignored between tokens):
//   forest  := tree (";" tree)* [";"]
//   tree    := subtree
//   subtree := "(" subtree ("," subtree)+ ")" [":" number] | leaf [":" number]
//   leaf    := positive integer
// Numbers are branch lengths by default (lambda = 1 - exp(-ell)); with
// Parametrization::kLambda they are weights in [0,1].  The token "inf"
// maps to weight 1 in either mode.  A missing annotation means weight 0.
ForestGraph parse_newick(std::string_view text,
                         Parametrization param = Parametrization::kLength);

// Convenience: parse then canonicalize.
Wald parse_wald(std::string_view text, Parametrization param = Parametrization::kLength);

// Serializes a canonical wald, one ";"-terminated tree per component with
// isolated leaves as bare labels.  Each multi-leaf component is written
// rooted next to its lowest leaf; weight 1 never occurs in a canonical
// wald, but infinite lengths would be emitted as "inf".
std::string to_newick(const Wald& w, Parametrization param = Parametrization::kLength);

}  // namespace waldgeo
