// Everything the tree and the checker share for one theory and model:
// the grid, its denotations, the omega context, the universe and A_M.
#pragma once

#include <memory>
#include <optional>

#include "satclass/henkin.hpp"
#include "satclass/model.hpp"
#include "satclass/omega.hpp"
#include "satclass/tree.hpp"

namespace satclass {

struct Bounds {
  GodelCode K;
  GodelCode proof_bound;
  GodelCode witness_bound;
  std::size_t n_max = 3;
};

struct World {
  TheoryHandle theory;
  FiniteModel model;
  Bounds bounds;
  std::unique_ptr<HenkinGrid> grid;   // rows 0..n_max, none for propositional signatures
  std::optional<FiniteModel> expanded;  // model plus grid denotations
  std::unique_ptr<Gamma> gamma;
  std::unique_ptr<Universe> universe;
  AxiomSetAM am;

  World(TheoryHandle s, FiniteModel m, Bounds b);
  // Steps split so a caller can stop early: grid and gamma are built at
  // construction, the universe and A_M here.
  void build_universe();
  std::size_t grid_rows() const { return grid ? grid->rows() : 0; }
};

}  // namespace satclass
