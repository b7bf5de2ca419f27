// The binary tree B_M over a code universe [0, K): nodes are truth
// assignments t with
//   (i)   (t)_s = 1 only for sentence codes s,
//   (ii)  every A_M member below l(t) carries 1,
//   (iii) s and ~s below l(t) carry complementary bits,
//   (iv)  for every derivation d < l(t) whose proper axioms carry 1, every
//         sentence step carries 1.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "satclass/henkin.hpp"
#include "satclass/model.hpp"
#include "satclass/omega.hpp"
#include "satclass/proof.hpp"

namespace satclass {

// Decoded view of every code below K.
class Universe {
 public:
  struct Deriv {
    std::uint64_t code;
    std::vector<std::uint64_t> hypotheses;  // proper axioms (codes)
    std::vector<std::uint64_t> sentences;   // sentence steps
    bool open_hypothesis = false;           // a proper axiom that is not a sentence
  };

  // Sentences are closed formulas whose constants all satisfy `constant_ok`.
  Universe(const Alphabet& a, const GodelCode& K, std::function<bool(std::uint32_t)> constant_ok);

  const Alphabet& alphabet() const { return alpha_; }
  std::uint64_t size() const { return size_; }
  bool is_sentence(std::uint64_t c) const { return c < size_ && sentence_[c]; }
  const Expr& formula(std::uint64_t c) const;  // sentence codes only
  std::optional<std::uint64_t> code_of(const Expr& e) const;
  std::optional<std::uint64_t> negation(std::uint64_t c) const;  // code of ~s if below K
  std::optional<std::uint64_t> negated(std::uint64_t c) const;   // t when s = ~t
  const std::vector<std::uint64_t>& sentences() const { return order_; }
  const std::vector<Deriv>& derivations() const { return derivs_; }

 private:
  Alphabet alpha_;
  std::uint64_t size_;
  std::vector<char> sentence_;
  std::map<std::uint64_t, Expr> formulas_;
  std::vector<std::uint64_t> order_;
  std::map<std::uint64_t, std::uint64_t> neg_, base_;
  std::vector<Deriv> derivs_;
};

struct AMEntry {
  enum class Source { Provable, WitnessAxiom };
  Expr formula;
  GodelCode code;
  Source source;
  std::optional<std::size_t> n;                  // for F_n
  std::optional<GodelCode> derivation_code;      // for provable members
};

// A_M = { phi | box_0[phi] } u { F_n | n < code(F_n) }, exact below the universe.
class AxiomSetAM {
 public:
  AxiomSetAM() = default;
  bool contains(std::uint64_t code) const { return below_.count(code) > 0; }
  const std::vector<AMEntry>& entries() const { return entries_; }
  // Members below the universe plus every built F_n.
  std::vector<Expr> formulas() const;
  std::vector<std::uint64_t> codes_below() const { return {below_.begin(), below_.end()}; }
  // Universe sentences whose membership search hit the expansion cap.
  std::size_t exhausted() const { return exhausted_; }

  nlohmann::json to_json(const Signature& sig) const;

 private:
  friend AxiomSetAM build_AM(Gamma&, const HenkinGrid&, const Universe&);
  std::vector<AMEntry> entries_;
  std::set<std::uint64_t> below_;
  std::size_t exhausted_ = 0;
};

AxiomSetAM build_AM(Gamma& gamma, const HenkinGrid& g, const Universe& u);

class TruthAssignment {
 public:
  explicit TruthAssignment(std::uint64_t length = 0) : bits_(length, 0) {}
  std::uint64_t length() const { return bits_.size(); }
  bool bit(std::uint64_t c) const { return bits_.at(c) != 0; }
  void set(std::uint64_t c, bool v) { bits_.at(c) = v ? 1 : 0; }
  TruthAssignment prefix(std::uint64_t k) const;
  std::vector<std::uint64_t> ones() const;
  bool operator==(const TruthAssignment&) const = default;

  // [[bit, run], ...] starting at code 0
  nlohmann::json rle() const;
  static TruthAssignment from_rle(const nlohmann::json& j);

 private:
  std::vector<char> bits_;
};

struct NodeCheck {
  bool ok = true;
  int clause = 0;  // first failing clause, 1..4
  std::uint64_t code = 0;
  std::string detail;
  explicit operator bool() const { return ok; }
};

NodeCheck is_node(const TruthAssignment& t, const AxiomSetAM& am, const Universe& u);

// Clause (iv) for one explicit formula sequence: if every proper axiom is a
// sentence with bit 1, every sentence step must have bit 1. Used where the
// derivation codes above any dense universe.
NodeCheck derivation_clause(const std::vector<Expr>& steps, const std::function<bool(const Expr&)>& bit);

// Preferred bit for a free sentence; absent means "try 1 on the lower-coded
// member of the pair first".
using Guide = std::function<std::optional<bool>(const Expr&)>;

struct ClosureResult {
  std::optional<TruthAssignment> node;
  std::map<std::uint64_t, std::string> provenance;  // why each 1-bit is set
  std::size_t backtracks = 0;
  std::string diagnostic;  // set when no completion exists
};

// k-closure: A_M bits and the seed, closed under derivations below k, then
// the free sentences decided in code order, preferred value first, with
// backtracking. `seed` maps codes to forced bits.
ClosureResult k_closure(std::uint64_t k, const std::map<std::uint64_t, bool>& seed, const AxiomSetAM& am,
                        const Universe& u, const Guide& guide = {});

class PathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PathResult {
  TruthAssignment path;
  std::map<std::uint64_t, std::string> provenance;
  ConsistencyReport consistency;
  std::size_t backtracks = 0;
};

// Checks A_M first (a model of every member settles it, otherwise
// is_consistent_bounded), then builds the length-K node.
PathResult find_path(const AxiomSetAM& am, const Universe& u, const Signature& sig, const GodelCode& proof_bound,
                     const Guide& guide = {}, const FiniteModel* model = nullptr);

// Guide that prefers the model's truth value wherever it is defined.
Guide model_guide(const FiniteModel& m);

struct TruthSet {
  std::set<std::uint64_t> codes;
  std::vector<std::string> violations;  // empty when every check passed
};

// T = ones of p, verified consistent, complete, closed below K and
// containing A_M below K.
TruthSet extract_T(const TruthAssignment& p, const AxiomSetAM& am, const Universe& u);

nlohmann::json path_json(const PathResult& p, const Universe& u, const Signature& sig);

}  // namespace satclass
