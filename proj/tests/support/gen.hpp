// Random expressions and formula sequences for property tests.
#pragma once

#include <random>
#include <vector>

#include "satclass/syntax.hpp"

namespace satclass::testing {

// p/1, q/2, r/0; f/1, g/2, k/0
inline Signature mixed_signature(bool equality = false) {
  return Signature({{"p", 1}, {"q", 2}, {"r", 0}}, {{"f", 1}, {"g", 2}, {"k", 0}}, equality);
}

class ExprGen {
 public:
  ExprGen(const Signature& sig, std::uint64_t seed) : sig_(sig), rng_(seed) {}

  Expr term(int depth) {
    int pick = uniform(0, depth > 0 && !sig_.functions().empty() ? 3 : 1);
    if (pick == 0) return Expr::var(uniform(0, 3));
    if (pick == 1) return Expr::constant(uniform(0, 12));
    auto f = static_cast<std::uint32_t>(uniform(0, static_cast<int>(sig_.functions().size()) - 1));
    std::vector<Expr> args;
    for (int i = 0; i < sig_.functions()[f].arity; ++i) args.push_back(term(depth - 1));
    return Expr::app(f, std::move(args));
  }

  Expr formula(int depth) {
    int pick = uniform(0, depth > 0 ? 9 : 2);
    switch (pick) {
      case 0: {
        if (sig_.has_equality() && uniform(0, 3) == 0) return Expr::eq(term(1), term(1));
        auto p = static_cast<std::uint32_t>(uniform(0, static_cast<int>(sig_.predicates().size()) - 1));
        std::vector<Expr> args;
        for (int i = 0; i < sig_.predicates()[p].arity; ++i) args.push_back(term(1));
        return Expr::atom(p, std::move(args));
      }
      case 1: return uniform(0, 1) ? Expr::bot() : Expr::top();
      case 2: return atom();
      case 3: return Expr::neg(formula(depth - 1));
      case 4: return Expr::conj(formula(depth - 1), formula(depth - 1));
      case 5: return Expr::disj(formula(depth - 1), formula(depth - 1));
      case 6: return Expr::imp(formula(depth - 1), formula(depth - 1));
      case 7: return Expr::exists(uniform(0, 3), formula(depth - 1));
      default: return Expr::forall(uniform(0, 3), formula(depth - 1));
    }
  }

  std::vector<Expr> sequence(int max_len, int depth) {
    std::vector<Expr> out;
    int n = uniform(1, max_len);
    for (int i = 0; i < n; ++i) out.push_back(formula(depth));
    return out;
  }

 private:
  Expr atom() {
    auto p = static_cast<std::uint32_t>(uniform(0, static_cast<int>(sig_.predicates().size()) - 1));
    std::vector<Expr> args;
    for (int i = 0; i < sig_.predicates()[p].arity; ++i) args.push_back(term(0));
    return Expr::atom(p, std::move(args));
  }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Signature sig_;
  std::mt19937_64 rng_;
};

// Every proper subexpression, terms included.
inline void proper_subexpressions(const Expr& e, std::vector<Expr>& out) {
  for (const auto& c : e.children()) {
    out.push_back(c);
    proper_subexpressions(c, out);
  }
}

}  // namespace satclass::testing
