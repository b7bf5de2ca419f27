// Tiny finite structures as refutation certificates: if some structure makes
// every axiom true and the goal false, no derivation of the goal exists.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "satclass/syntax.hpp"

namespace satclass {

struct Structure {
  std::uint32_t size = 1;                                  // domain {0..size-1}
  std::vector<std::vector<bool>> predicates;               // indexed by tuple number
  std::vector<std::vector<std::uint32_t>> functions;       // same
  std::map<std::uint32_t, std::uint32_t> constants;        // c_i -> element

  // Universal closure of f.
  bool satisfies(const Expr& f) const;
};

// Structures with domain size 1, 2, 3 (while within budget), every constant
// occurring in the input interpreted in all possible ways. Free variables are
// read universally.
std::optional<Structure> find_countermodel(const std::vector<Expr>& axioms, const Expr& goal, const Signature& sig,
                                           std::size_t budget = 4096);

}  // namespace satclass
