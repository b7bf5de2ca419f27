// Godel numbering: expressions are written in Polish notation over a finite
// alphabet and a word is read as a numeral in bijective base k. Longer words get
// larger codes and equal-length words compare lexicographically, so a proper
// subexpression (a shorter subword) always has a smaller code.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "satclass/syntax.hpp"

namespace satclass {

using BigInt = boost::multiprecision::cpp_int;

class GodelCode {
 public:
  GodelCode() = default;
  GodelCode(std::uint64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  explicit GodelCode(BigInt v) : value_(std::move(v)) {}

  const BigInt& value() const { return value_; }
  std::string str() const { return value_.str(); }
  static GodelCode parse(const std::string& decimal);

  // Codes used as bit indices must fit in memory anyway.
  bool fits_u64() const { return value_ <= std::numeric_limits<std::uint64_t>::max(); }
  std::uint64_t to_u64() const;

  auto operator<=>(const GodelCode& o) const {
    if (value_ < o.value_) return std::strong_ordering::less;
    if (value_ > o.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  bool operator==(const GodelCode& o) const { return value_ == o.value_; }

 private:
  BigInt value_;
};

// Word over the alphabet {1..k}.
using Word = std::u16string;

// Fixed letters; predicate letters follow, then function letters.
namespace letter {
inline constexpr char16_t Bot = 1;
inline constexpr char16_t Top = 2;
inline constexpr char16_t Not = 3;
inline constexpr char16_t And = 4;
inline constexpr char16_t Or = 5;
inline constexpr char16_t Imp = 6;
inline constexpr char16_t Exists = 7;
inline constexpr char16_t Forall = 8;
inline constexpr char16_t Var = 9;
inline constexpr char16_t Const = 10;
inline constexpr char16_t Tick = 11;  // index successor: v'' is v2
inline constexpr char16_t Sep = 12;   // ends each step of a derivation
inline constexpr char16_t Eq = 13;    // present only with equality
}  // namespace letter

class Alphabet {
 public:
  explicit Alphabet(const Signature& sig);

  std::uint32_t size() const { return size_; }
  char16_t predicate_letter(std::uint32_t p) const { return static_cast<char16_t>(pred_base_ + p); }
  char16_t function_letter(std::uint32_t f) const { return static_cast<char16_t>(fun_base_ + f); }
  const Signature& signature() const { return sig_; }

  Word word(const Expr& e) const;
  Word word(const std::vector<Expr>& steps) const;
  std::optional<Expr> parse_expr(const Word& w) const;
  // One or more formulas, each followed by Sep.
  std::optional<std::vector<Expr>> parse_sequence(const Word& w) const;

  GodelCode code(const Word& w) const;
  Word word(const GodelCode& c) const;

 private:
  void write(const Expr& e, Word& out) const;
  std::optional<Expr> read(const Word& w, std::size_t& pos) const;
  std::optional<Expr> read_term(const Word& w, std::size_t& pos) const;
  std::optional<std::uint32_t> read_index(const Word& w, std::size_t& pos) const;

  Signature sig_;
  std::uint32_t pred_base_;
  std::uint32_t fun_base_;
  std::uint32_t size_;
};

GodelCode encode(const Expr& e, const Alphabet& a);
GodelCode encode_sequence(const std::vector<Expr>& steps, const Alphabet& a);

struct Undecodable {
  bool operator==(const Undecodable&) const = default;
};
// A code names a term or formula, a formula sequence, or nothing.
using Decoded = std::variant<Undecodable, Expr, std::vector<Expr>>;

Decoded decode(const GodelCode& c, const Alphabet& a);
// Throws SyntaxError when the code is not an expression.
Expr decode_expr(const GodelCode& c, const Alphabet& a);

// Least code of a word longer than len: every word of length <= len is below it.
GodelCode length_bound(const Alphabet& a, std::size_t len);
// "4096" or "len:40" (the length_bound for 40).
GodelCode parse_bound(const std::string& text, const Alphabet& a);

// Walks every word in code order 1, 2, 3, ...
class WordCursor {
 public:
  explicit WordCursor(std::uint32_t k) : k_(k) {}
  const Word& word() const { return w_; }
  std::uint64_t code() const { return code_; }
  void next();

 private:
  std::uint32_t k_;
  Word w_;
  std::uint64_t code_ = 0;
};

// Formulas with exactly one free variable whose constants all lie in `carrier`,
// code < bound, in increasing code order.
std::vector<Expr> enumerate_one_free_variable_formulas(const Alphabet& a, const std::set<std::uint32_t>& carrier,
                                                       const GodelCode& bound);

// Same walk but admits closed formulas too (witness candidates for the omega rule).
std::vector<Expr> enumerate_unary_formulas(const Alphabet& a, const std::set<std::uint32_t>& carrier,
                                           const GodelCode& bound);

}  // namespace satclass
