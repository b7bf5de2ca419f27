// Iterated omega-rule provability over a finite carrier:
//   Gamma_0[a]     = box_S[a]                       (bounded)
//   Gamma_{n+1}[a] = some psi(y): Gamma_n[psi(c)] for every carrier c,
//                    and box_S[forall y psi -> a]
#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "satclass/model.hpp"
#include "satclass/proof.hpp"

namespace satclass {

struct OmegaContext {
  TheoryHandle theory;
  std::set<std::uint32_t> carrier;
  GodelCode proof_bound;
  GodelCode witness_bound;
  // The exhaustive part of the witness search walks codes below
  // min(witness_bound, witness_walk_cap); goal-directed candidates are added.
  std::uint64_t witness_walk_cap = 20000;
};

struct Witness {
  Expr psi;
  std::uint32_t y;
};

class Gamma {
 public:
  explicit Gamma(OmegaContext ctx, SearchLimits limits = {});

  const OmegaContext& context() const { return ctx_; }
  Prover& prover() { return prover_; }

  bool holds(std::size_t n, const Expr& alpha);
  // The least-coded witness used at level n >= 1.
  std::optional<Witness> witness(std::size_t n, const Expr& alpha);
  // Some proof search behind a verdict hit the expansion cap.
  bool exhausted() const;

  std::vector<Witness> candidates(const Expr& alpha);

 private:
  struct Entry {
    bool holds = false;
    std::optional<Witness> witness;
  };
  Entry compute(std::size_t n, const Expr& alpha);
  bool box(const Expr& f);

  OmegaContext ctx_;
  Prover prover_;
  std::vector<Expr> walk_;
  mutable std::mutex mu_;
  std::map<std::pair<std::size_t, Word>, Entry> memo_;
  bool exhausted_ = false;
};

bool gamma_holds(const OmegaContext& ctx, std::size_t n, const Expr& alpha);

struct LawInstance {
  int law;  // 1, 2 or 3
  std::size_t n;
  std::vector<Expr> formulas;  // phi, or alpha and beta
  bool premise = false;
  bool closed = false;
  std::string closed_at;  // bounds at which the conclusion held
};

struct GammaLawReport {
  std::vector<LawInstance> instances;
  std::size_t counterexamples = 0;
  bool ok() const { return counterexamples == 0; }
};

// Laws: (1) box[phi] => Gamma_0[phi]; (2) Gamma_n[phi] => Gamma_{n+1}[phi];
// (3) Gamma_n[a -> b] and Gamma_n[a] => Gamma_n[b], retried at enlarged
// bounds, then by gluing the premise derivations (kernel-checked, code
// unbounded) before a counterexample is reported.
GammaLawReport check_gamma_laws(const OmegaContext& ctx, const std::vector<Expr>& samples, std::size_t n_max);

// (n, Gamma_n[bot]) for n <= n_max.
std::vector<std::pair<std::size_t, bool>> q_axioms(Gamma& g, std::size_t n_max);

enum class EliminationOutcome { Eliminated, LocallySatisfiable, BoundsExhausted };

struct EliminationResult {
  EliminationOutcome outcome = EliminationOutcome::LocallySatisfiable;
  std::optional<std::size_t> m_prime;
  std::map<std::uint32_t, std::size_t> level;  // least n refuting each eliminated element
  std::optional<std::uint32_t> realizer;       // element with no refutation up to n_max
  bool self_check = false;                     // Gamma_{m'}[theta | ~exists x psi]
};

// If every carrier z has some n <= n_max with Gamma_n[theta | ~psi(c_z)],
// m' = max n + 1 and Gamma_{m'}[theta | ~exists x psi] is verified.
EliminationResult eliminate_existential(Gamma& g, const FiniteModel& m, const Expr& theta, const Expr& psi,
                                        std::size_t n_max);

}  // namespace satclass
