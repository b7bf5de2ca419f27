#include "satclass/world.hpp"

#include <stdexcept>

namespace satclass {

namespace {

bool has_open_formulas(const Signature& sig) {
  if (sig.has_equality()) return true;
  for (const auto& p : sig.predicates())
    if (p.arity > 0) return true;
  return false;
}

}  // namespace

World::World(TheoryHandle s, FiniteModel m, Bounds b) : theory(std::move(s)), model(std::move(m)), bounds(std::move(b)) {
  if (!(model.signature() == theory.signature())) throw std::invalid_argument("model and theory signatures differ");
  const Alphabet& a = theory.alphabet();
  std::map<std::uint32_t, std::uint32_t> den;
  if (has_open_formulas(theory.signature())) {
    auto psi = first_one_free_variable_formulas(a, model.carrier(), bounds.n_max + 1);
    grid = std::make_unique<HenkinGrid>(a, model.carrier(), std::move(psi));
    grid->build(bounds.n_max);
    den = henkin_denotations(*grid, model);
  }
  expanded = model.with_constants(den);
  gamma = std::make_unique<Gamma>(OmegaContext{theory, model.carrier(), bounds.proof_bound, bounds.witness_bound});
}

void World::build_universe() {
  const auto& carrier = model.carrier();
  const HenkinGrid* g = grid.get();
  universe = std::make_unique<Universe>(theory.alphabet(), bounds.K, [&carrier, g](std::uint32_t c) {
    return carrier.count(c) > 0 || (g && g->is_henkin_constant(c));
  });
  if (grid) {
    am = build_AM(*gamma, *grid, *universe);
  } else {
    HenkinGrid empty(theory.alphabet(), carrier, {});
    am = build_AM(*gamma, empty, *universe);
  }
}

}  // namespace satclass
