// Hilbert-style predicate calculus: axiom schemas, derivations, checking and
// bounded search for least-coded derivations.
#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "satclass/coding.hpp"
#include "satclass/syntax.hpp"

namespace satclass {

// Logical axiom schemas, matched structurally. Equality schemas apply only
// when the signature has equality.
enum class Schema : int {
  K = 1,          // a -> (b -> a)
  S,              // (a -> (b -> c)) -> ((a -> b) -> (a -> c))
  AndElimL,       // (a & b) -> a
  AndElimR,       // (a & b) -> b
  AndIntro,       // a -> (b -> (a & b))
  OrIntroL,       // a -> (a | b)
  OrIntroR,       // b -> (a | b)
  OrElim,         // (a -> c) -> ((b -> c) -> ((a | b) -> c))
  NegElim,        // ~a -> (a -> b)
  NegIntro,       // (a -> b) -> ((a -> ~b) -> ~a)
  DoubleNeg,      // ~~a -> a
  Verum,          // top
  ExFalso,        // bot -> a
  ForallElim,     // (forall v a) -> a[v/t]
  ExistsIntro,    // a[v/t] -> (exists v a)
  ForallImp,      // (forall v (b -> a)) -> (b -> forall v a), v not free in b
  ExistsImp,      // (forall v (a -> b)) -> ((exists v a) -> b), v not free in b
  ForallNotExists,  // (forall v ~a) -> ~(exists v a)
  ForallOrNotExists,  // (forall v (b | ~a)) -> (b | ~(exists v a)), v not free in b
  Identity,       // a -> a
  EqRefl,         // t = t
  EqSubst,        // s = t -> (a[v/s] -> a[v/t]), a atomic
};

std::string schema_name(Schema s);
std::optional<Schema> match_logical_axiom(const Expr& phi);

// True when `target` is `pattern` with every free occurrence of v replaced by
// one and the same closed term (or left as v).
bool is_instance_of(const Expr& pattern, std::uint32_t v, const Expr& target);

// Registered axiom-scheme generators; instances are admitted below a code bound.
struct SchemeRef {
  std::string name;
  GodelCode bound;
};

class TheoryHandle {
 public:
  TheoryHandle() = default;
  TheoryHandle(std::string name, const Signature& sig, std::vector<Expr> axioms, std::vector<SchemeRef> schemes = {});

  const std::string& name() const { return name_; }
  const Signature& signature() const { return alphabet_.signature(); }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Expr>& axioms() const { return axioms_; }
  const std::vector<SchemeRef>& schemes() const { return schemes_; }

  bool is_axiom(const Expr& phi) const;
  // Axioms (explicit and scheme-generated) with code < bound, increasing code.
  std::vector<Expr> axioms_below(const GodelCode& bound) const;

  TheoryHandle with_axiom(const Expr& phi) const;

  // Header `theory NAME`, then one axiom per line or `scheme NAME BOUND`.
  static TheoryHandle parse(std::string_view text, const Signature& sig);
  std::string to_text() const;

  static const std::vector<std::string>& registered_schemes();

 private:
  std::string name_;
  Alphabet alphabet_{Signature({{"p", 0}}, {}, false)};
  std::vector<Expr> axioms_;
  std::vector<Word> axiom_words_;  // sorted, for membership
  std::vector<SchemeRef> schemes_;
};

struct LogicalAxiomStep {
  Schema schema;
  bool operator==(const LogicalAxiomStep&) const = default;
};
struct TheoryAxiomStep {
  bool operator==(const TheoryAxiomStep&) const = default;
};
struct ModusPonens {
  std::size_t premise;      // index of a
  std::size_t implication;  // index of a -> b
  bool operator==(const ModusPonens&) const = default;
};
struct Generalization {
  std::size_t premise;
  bool operator==(const Generalization&) const = default;
};
// A proper axiom of a pure-calculus derivation (an assumption).
struct Hypothesis {
  bool operator==(const Hypothesis&) const = default;
};
using Justification = std::variant<LogicalAxiomStep, TheoryAxiomStep, ModusPonens, Generalization, Hypothesis>;

struct Step {
  Expr formula;
  Justification justification;
};

struct Derivation {
  std::vector<Step> steps;

  const Expr& conclusion() const { return steps.back().formula; }
  std::vector<Expr> formulas() const;
};

struct CheckResult {
  bool ok = true;
  std::optional<std::size_t> failing_step;
  std::string reason;
  explicit operator bool() const { return ok; }
};

CheckResult check_derivation(const Derivation& d, const TheoryHandle& s);

// Canonical justification of a formula sequence: logical axiom, theory axiom,
// least modus ponens, least generalization; absent if some step is unjustified.
std::optional<Derivation> justify(const std::vector<Expr>& steps, const TheoryHandle& s);

// Pure-calculus reading used by the truth tree: every step that is not a
// logical axiom or a rule consequence of earlier steps is a proper axiom.
Derivation justify_with_hypotheses(const std::vector<Expr>& steps);

GodelCode encode(const Derivation& d, const Alphabet& a);

enum class SearchStatus { Found, NoneBelowBound, Exhausted };

struct ProofResult {
  SearchStatus status = SearchStatus::NoneBelowBound;
  std::optional<Derivation> derivation;
  std::optional<GodelCode> code;
  std::size_t expansions = 0;
  explicit operator bool() const { return status == SearchStatus::Found; }
};

struct SearchLimits {
  // Cap on search-tree expansions per goal; hitting it yields Exhausted.
  std::size_t max_expansions = 200'000;
};

// Bounded prover for one theory with a memo table shared by all queries.
// Search space: derivations whose steps come from the subformula pool of the
// goal and the theory axioms, closed under carrier instances, plus antecedents
// forced by axiom schemas. Within that space the least-coded derivation below
// the bound is returned.
class Prover {
 public:
  explicit Prover(TheoryHandle theory, SearchLimits limits = {});

  const TheoryHandle& theory() const { return theory_; }
  ProofResult prove(const Expr& goal, const GodelCode& bound);

  std::size_t cache_size() const;

 private:
  struct Entry {
    std::size_t max_len;  // searched up to this word length
    ProofResult result;
  };
  ProofResult search(const Expr& goal, std::size_t max_len);

  TheoryHandle theory_;
  SearchLimits limits_;
  mutable std::mutex mu_;
  std::unordered_map<Word, Entry> cache_;
};

ProofResult prove_bounded(const Expr& goal, const TheoryHandle& s, const GodelCode& code_bound);

struct ConsistencyReport {
  bool consistent = true;
  bool skeleton_satisfiable = true;
  bool model_certificate = false;  // settled by a model of gamma, no search run
  SearchStatus bottom_search = SearchStatus::NoneBelowBound;
  std::optional<Derivation> refutation;
};

// Inconsistent iff the propositional skeleton is unsatisfiable (a conclusive
// refutation) or bot has a derivation with code below the bound.
ConsistencyReport is_consistent_bounded(const std::vector<Expr>& gamma, const Signature& sig,
                                        const GodelCode& code_bound);

// Satisfiability of the propositional skeleton: atoms and quantified
// subformulas are opaque letters.
bool skeleton_satisfiable(const std::vector<Expr>& gamma);

}  // namespace satclass
