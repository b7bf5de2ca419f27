// Henkin witness scheme: the recurrence a_i, tuple ranks, the constant grid
// c_ij, the witness axioms F_n, correct sequences and their order.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <json.hpp>

#include "satclass/coding.hpp"
#include "satclass/model.hpp"
#include "satclass/syntax.hpp"

namespace satclass {

// a_0 = 1, a_{i+1} = a_i (a_i + 1); i_max <= 8.
std::vector<BigInt> a_sequence(std::size_t i_max);

// Tuples (j_0..j_i) with 0 <= j_k <= a_k, ranked in ascending lexicographic
// order; there are a_{i+1} of them. Supports i <= 6.
std::vector<std::uint64_t> tuple_of_rank(std::size_t i, std::uint64_t r);
std::uint64_t rank_of_tuple(const std::vector<std::uint64_t>& components);

// First `count` formulas with exactly one free variable over the carrier
// constants, in code order (psi_0, psi_1, ...). Throws if the signature has
// no such formula.
std::vector<Expr> first_one_free_variable_formulas(const Alphabet& a, const std::set<std::uint32_t>& carrier,
                                                   std::size_t count);

struct Allocation {
  std::uint32_t constant;
  Expr formula;  // the defining formula u of C(u)
  GodelCode code;
};

class HenkinGrid {
 public:
  HenkinGrid(Alphabet alphabet, std::set<std::uint32_t> carrier, std::vector<Expr> psi);

  const Alphabet& alphabet() const { return alpha_; }
  const std::set<std::uint32_t>& carrier() const { return carrier_; }
  const std::vector<Expr>& psi() const { return psi_; }

  // C(u): the same formula always gets the same fresh constant.
  std::uint32_t allocate(const Expr& u);
  const std::vector<Allocation>& allocations() const { return allocs_; }
  bool is_henkin_constant(std::uint32_t c) const;
  const Allocation& allocation(std::uint32_t c) const;

  // Fills rows 0..i_max. Row i has a_i + 1 entries.
  void build(std::size_t i_max);
  std::size_t rows() const { return grid_.size(); }
  std::uint32_t constant(std::size_t i, std::size_t j) const;
  const std::vector<std::uint32_t>& row(std::size_t i) const;

  // exists x psi_n -> OR_j psi_n(c_nj); x is psi_n's own free variable.
  Expr F(std::size_t n) const;

  nlohmann::json to_json(const Signature& sig) const;

 private:
  Expr defining_formula(std::size_t i, std::uint64_t j) const;

  Alphabet alpha_;
  std::set<std::uint32_t> carrier_;
  std::vector<Expr> psi_;
  std::uint32_t next_;
  std::map<Word, std::uint32_t> by_word_;
  std::vector<Allocation> allocs_;
  std::vector<std::vector<std::uint32_t>> grid_;
};

// Correct sequence ~phi*_{m_1}, ..., ~phi*_{m_v} for ms over {1..w}; base[m-1]
// is phi_m.
std::vector<Expr> star_sequence(HenkinGrid& g, const std::vector<std::size_t>& ms, const std::vector<Expr>& base);

// less when a precedes b; (1..w) is least and the empty sequence greatest.
std::strong_ordering prec(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

// Denotation of each allocated constant: the least carrier element a with
// M |= ~u(c_a) for its defining formula u, else the least carrier element.
// Constants are processed in allocation order, so earlier ones are available.
std::map<std::uint32_t, std::uint32_t> henkin_denotations(const HenkinGrid& g, const FiniteModel& m);

}  // namespace satclass
