// Finite-carrier models of L(C|M): the carrier is a nonempty finite set of
// naturals and the constant c_u denotes u for every u in the carrier.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "satclass/syntax.hpp"

namespace satclass {

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Tuple = std::vector<std::uint32_t>;

class FiniteModel {
 public:
  FiniteModel(Signature sig, std::set<std::uint32_t> carrier, std::vector<std::set<Tuple>> predicates,
              std::vector<std::map<Tuple, std::uint32_t>> functions);

  const Signature& signature() const { return sig_; }
  const std::set<std::uint32_t>& carrier() const { return carrier_; }
  const std::vector<std::set<Tuple>>& predicate_tables() const { return preds_; }
  const std::vector<std::map<Tuple, std::uint32_t>>& function_tables() const { return funs_; }

  // Interprets further constants (Henkin witnesses) by carrier elements.
  FiniteModel with_constants(const std::map<std::uint32_t, std::uint32_t>& denotations) const;
  const std::map<std::uint32_t, std::uint32_t>& extra_constants() const { return extra_; }
  bool interprets_constant(std::uint32_t c) const { return carrier_.count(c) || extra_.count(c); }
  bool interprets(const Expr& e) const;

  std::uint32_t term_value(const Expr& t) const;
  // Closed formulas only; constants must be interpreted.
  int evaluate(const Expr& sigma) const;
  // Variable-free atoms only.
  int atomic_truth(const Expr& sigma) const;

  // carrier 0 1 2
  // table p: (0) (2)
  // table f: (0 1) (1 0)      function tables list graph tuples (args..., value)
  static FiniteModel parse(std::string_view text, const Signature& sig);
  std::string to_text() const;

 private:
  int eval(const Expr& f, std::map<std::uint32_t, std::uint32_t>& env) const;
  std::uint32_t value(const Expr& t, const std::map<std::uint32_t, std::uint32_t>& env) const;

  Signature sig_;
  std::set<std::uint32_t> carrier_;
  std::vector<std::set<Tuple>> preds_;
  std::vector<std::map<Tuple, std::uint32_t>> funs_;
  std::map<std::uint32_t, std::uint32_t> extra_;
};

// A type phi_n(x, c_{u1}, ..., c_{uk}), n = 0, 1, ..., given by a total generator.
class RecursiveType {
 public:
  using Generator = std::function<Expr(std::size_t n, const std::vector<std::uint32_t>& params)>;

  RecursiveType(Generator gen, std::vector<std::uint32_t> params, std::uint32_t variable = 0);

  // Throws if the generated formula has a free variable other than x.
  Expr member(std::size_t n) const;
  std::uint32_t variable() const { return var_; }
  const std::vector<std::uint32_t>& parameters() const { return params_; }

 private:
  Generator gen_;
  std::vector<std::uint32_t> params_;
  std::uint32_t var_;
};

// Least carrier element realizing phi_0..phi_{n_max}, if any.
std::optional<std::uint32_t> saturation_witness(const FiniteModel& m, const RecursiveType& t, std::size_t n_max);

}  // namespace satclass
