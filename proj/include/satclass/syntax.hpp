// First-order syntax over a finite signature extended by Henkin constants c0, c1, ...
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace satclass {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct Symbol {
  std::string name;
  int arity = 0;
  bool operator==(const Symbol&) const = default;
};

class Signature {
 public:
  Signature() = default;
  Signature(std::vector<Symbol> predicates, std::vector<Symbol> functions, bool equality);

  const std::vector<Symbol>& predicates() const { return predicates_; }
  const std::vector<Symbol>& functions() const { return functions_; }
  bool has_equality() const { return equality_; }

  std::optional<int> find_predicate(std::string_view name) const;
  std::optional<int> find_function(std::string_view name) const;

  // `pred p 1`, `fun f 2`, `equality`; '#' starts a comment.
  static Signature parse(std::string_view text);
  std::string to_text() const;

  bool operator==(const Signature&) const = default;

 private:
  void validate() const;

  std::vector<Symbol> predicates_;
  std::vector<Symbol> functions_;
  bool equality_ = false;
};

enum class Kind : std::uint8_t {
  Var,
  Const,
  App,    // function application, index = function symbol
  Atom,   // predicate application, index = predicate symbol
  Eq,
  Bot,
  Top,
  Not,
  And,
  Or,
  Imp,
  Exists,  // index = bound variable
  Forall,
};

bool is_term_kind(Kind k);

class Expr {
 public:
  Expr() = default;

  static Expr var(std::uint32_t i);
  static Expr constant(std::uint32_t i);
  static Expr app(std::uint32_t fn, std::vector<Expr> args);
  static Expr atom(std::uint32_t pred, std::vector<Expr> args);
  static Expr eq(Expr lhs, Expr rhs);
  static Expr bot();
  static Expr top();
  static Expr neg(Expr e);
  static Expr conj(Expr a, Expr b);
  static Expr disj(Expr a, Expr b);
  static Expr imp(Expr a, Expr b);
  static Expr exists(std::uint32_t v, Expr body);
  static Expr forall(std::uint32_t v, Expr body);
  // Left-nested disjunction of a nonempty list.
  static Expr disj_all(const std::vector<Expr>& parts);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  std::uint32_t index() const { return node_->index; }
  const std::vector<Expr>& children() const { return node_->children; }
  const Expr& child(std::size_t i) const { return node_->children.at(i); }

  bool is_term() const { return is_term_kind(kind()); }
  bool is_formula() const { return !is_term(); }
  bool is_atomic() const;
  bool is_closed() const { return free_vars().empty(); }
  bool is_sentence() const { return is_formula() && is_closed(); }

  std::set<std::uint32_t> free_vars() const;
  std::set<std::uint32_t> constants() const;
  std::size_t size() const;

  // Well-formedness against a signature: arities and term/formula positions.
  void check(const Signature& sig) const;

  bool operator==(const Expr& other) const;
  bool operator!=(const Expr& other) const { return !(*this == other); }

 private:
  struct Node {
    Kind kind;
    std::uint32_t index;
    std::vector<Expr> children;
  };
  static Expr make(Kind k, std::uint32_t index, std::vector<Expr> children);

  std::shared_ptr<const Node> node_;
};

// Capture-free replacement of free occurrences of v by a closed term t.
Expr substitute(const Expr& phi, std::uint32_t v, const Expr& t);

// Replaces constant c_from by the closed term t everywhere.
Expr replace_constant(const Expr& phi, std::uint32_t from, const Expr& t);

// Prefix grammar:
//   term    ::= vN | cN | f | (f term*)
//   formula ::= bot | top | p | (p term*) | (= term term) | (not F)
//             | (and F F) | (or F F) | (imp F F) | (forall vN F) | (exists vN F)
Expr parse_formula(std::string_view text, const Signature& sig);
Expr parse_term(std::string_view text, const Signature& sig);
std::string to_text(const Expr& e, const Signature& sig);

}  // namespace satclass
