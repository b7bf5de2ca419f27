#include "satclass/countermodel.hpp"

#include <stdexcept>

namespace satclass {

namespace {

using Env = std::map<std::uint32_t, std::uint32_t>;

std::size_t tuple_number(const std::vector<std::uint32_t>& args, std::uint32_t d) {
  std::size_t n = 0;
  for (auto a : args) n = n * d + a;
  return n;
}

std::uint32_t term(const Structure& s, const Expr& t, const Env& env) {
  switch (t.kind()) {
    case Kind::Var: return env.at(t.index());
    case Kind::Const: return s.constants.at(t.index());
    default: {
      std::vector<std::uint32_t> args;
      for (const auto& c : t.children()) args.push_back(term(s, c, env));
      return s.functions[t.index()][tuple_number(args, s.size)];
    }
  }
}

bool holds(const Structure& s, const Expr& f, Env& env) {
  switch (f.kind()) {
    case Kind::Bot: return false;
    case Kind::Top: return true;
    case Kind::Atom: {
      std::vector<std::uint32_t> args;
      for (const auto& c : f.children()) args.push_back(term(s, c, env));
      return s.predicates[f.index()][tuple_number(args, s.size)];
    }
    case Kind::Eq: return term(s, f.child(0), env) == term(s, f.child(1), env);
    case Kind::Not: return !holds(s, f.child(0), env);
    case Kind::And: return holds(s, f.child(0), env) && holds(s, f.child(1), env);
    case Kind::Or: return holds(s, f.child(0), env) || holds(s, f.child(1), env);
    case Kind::Imp: return !holds(s, f.child(0), env) || holds(s, f.child(1), env);
    case Kind::Exists:
    case Kind::Forall: {
      const bool ex = f.kind() == Kind::Exists;
      auto it = env.find(f.index());
      std::optional<std::uint32_t> saved;
      if (it != env.end()) saved = it->second;
      bool r = !ex;
      for (std::uint32_t a = 0; a < s.size && r == !ex; ++a) {
        env[f.index()] = a;
        r = holds(s, f.child(0), env);
      }
      if (saved) env[f.index()] = *saved;
      else env.erase(f.index());
      return r;
    }
    default:
      throw std::invalid_argument("not a formula");
  }
}

Expr closure(Expr f) {
  for (auto v : f.free_vars()) f = Expr::forall(v, f);
  return f;
}

std::size_t power(std::size_t b, std::size_t e, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > cap / std::max<std::size_t>(b, 1)) return cap + 1;
    r *= b;
  }
  return r;
}

}  // namespace

bool Structure::satisfies(const Expr& f) const {
  Env env;
  return holds(*this, closure(f), env);
}

std::optional<Structure> find_countermodel(const std::vector<Expr>& axioms, const Expr& goal, const Signature& sig,
                                           std::size_t budget) {
  std::set<std::uint32_t> consts = goal.constants();
  std::vector<Expr> closed;
  for (const auto& a : axioms) {
    for (auto c : a.constants()) consts.insert(c);
    closed.push_back(closure(a));
  }
  const Expr g = closure(goal);

  for (std::uint32_t d = 1; d <= 3; ++d) {
    // slots: predicate bits, function values, constant values
    std::vector<std::uint32_t> radix;
    bool too_big = false;
    auto slots = [&](int arity, std::uint32_t r) {
      std::size_t n = power(d, arity, 64);
      if (n > 64) too_big = true;
      else radix.insert(radix.end(), n, r);
    };
    for (const auto& p : sig.predicates()) slots(p.arity, 2);
    for (const auto& f : sig.functions()) slots(f.arity, d);
    radix.insert(radix.end(), consts.size(), d);
    std::size_t total = 1;
    for (auto r : radix) {
      if (too_big || total > budget / r) {
        too_big = true;
        break;
      }
      total *= r;
    }
    if (too_big) break;
    budget -= total;

    std::vector<std::uint32_t> digit(radix.size(), 0);
    for (std::size_t count = 0; count < total; ++count) {
      Structure s;
      s.size = d;
      std::size_t k = 0;
      for (const auto& p : sig.predicates()) {
        std::vector<bool> table(power(d, p.arity, SIZE_MAX));
        for (std::size_t i = 0; i < table.size(); ++i) table[i] = digit[k++] != 0;
        s.predicates.push_back(std::move(table));
      }
      for (const auto& f : sig.functions()) {
        std::vector<std::uint32_t> table(power(d, f.arity, SIZE_MAX));
        for (auto& v : table) v = digit[k++];
        s.functions.push_back(std::move(table));
      }
      for (auto c : consts) s.constants[c] = digit[k++];

      Env env;
      bool model = true;
      for (const auto& a : closed)
        if (!(model = holds(s, a, env))) break;
      if (model && !holds(s, g, env)) return s;

      for (std::size_t i = 0; i < digit.size(); ++i) {
        if (++digit[i] < radix[i]) break;
        digit[i] = 0;
      }
    }
  }
  return std::nullopt;
}

}  // namespace satclass
