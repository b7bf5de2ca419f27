#include "satclass/coding.hpp"

#include <algorithm>
#include <stdexcept>

namespace satclass {

GodelCode GodelCode::parse(const std::string& decimal) {
  if (decimal.empty() || !std::all_of(decimal.begin(), decimal.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw std::invalid_argument("not a decimal code: '" + decimal + "'");
  return GodelCode(BigInt(decimal));
}

std::uint64_t GodelCode::to_u64() const {
  if (!fits_u64()) throw std::overflow_error("code does not fit in 64 bits: " + str());
  return value_.convert_to<std::uint64_t>();
}

Alphabet::Alphabet(const Signature& sig) : sig_(sig) {
  pred_base_ = sig.has_equality() ? letter::Eq + 1 : letter::Eq;
  fun_base_ = pred_base_ + static_cast<std::uint32_t>(sig.predicates().size());
  size_ = fun_base_ + static_cast<std::uint32_t>(sig.functions().size()) - 1;
}

void Alphabet::write(const Expr& e, Word& out) const {
  auto indexed = [&](char16_t head, std::uint32_t i) {
    out += head;
    out.append(i, letter::Tick);
  };
  switch (e.kind()) {
    case Kind::Var: indexed(letter::Var, e.index()); return;
    case Kind::Const: indexed(letter::Const, e.index()); return;
    case Kind::App: out += function_letter(e.index()); break;
    case Kind::Atom: out += predicate_letter(e.index()); break;
    case Kind::Eq:
      if (!sig_.has_equality()) throw SyntaxError("equality not in signature");
      out += letter::Eq;
      break;
    case Kind::Bot: out += letter::Bot; return;
    case Kind::Top: out += letter::Top; return;
    case Kind::Not: out += letter::Not; break;
    case Kind::And: out += letter::And; break;
    case Kind::Or: out += letter::Or; break;
    case Kind::Imp: out += letter::Imp; break;
    case Kind::Exists:
    case Kind::Forall:
      out += e.kind() == Kind::Exists ? letter::Exists : letter::Forall;
      indexed(letter::Var, e.index());
      break;
  }
  for (const auto& c : e.children()) write(c, out);
}

Word Alphabet::word(const Expr& e) const {
  e.check(sig_);
  Word w;
  write(e, w);
  return w;
}

Word Alphabet::word(const std::vector<Expr>& steps) const {
  if (steps.empty()) throw std::invalid_argument("empty sequence has no code");
  Word w;
  for (const auto& s : steps) {
    if (!s.is_formula()) throw SyntaxError("sequence step is not a formula");
    s.check(sig_);
    write(s, w);
    w += letter::Sep;
  }
  return w;
}

std::optional<std::uint32_t> Alphabet::read_index(const Word& w, std::size_t& pos) const {
  std::uint32_t n = 0;
  while (pos < w.size() && w[pos] == letter::Tick) {
    ++n;
    ++pos;
  }
  return n;
}

std::optional<Expr> Alphabet::read_term(const Word& w, std::size_t& pos) const {
  if (pos >= w.size()) return std::nullopt;
  char16_t ch = w[pos++];
  if (ch == letter::Var) return Expr::var(*read_index(w, pos));
  if (ch == letter::Const) return Expr::constant(*read_index(w, pos));
  if (ch >= fun_base_ && ch <= size_) {
    std::uint32_t f = ch - fun_base_;
    std::vector<Expr> args;
    for (int i = 0; i < sig_.functions()[f].arity; ++i) {
      auto t = read_term(w, pos);
      if (!t) return std::nullopt;
      args.push_back(std::move(*t));
    }
    return Expr::app(f, std::move(args));
  }
  return std::nullopt;
}

std::optional<Expr> Alphabet::read(const Word& w, std::size_t& pos) const {
  if (pos >= w.size()) return std::nullopt;
  char16_t ch = w[pos];
  if (ch == letter::Var || ch == letter::Const || (ch >= fun_base_ && ch <= size_)) return read_term(w, pos);
  ++pos;
  auto formula = [&]() -> std::optional<Expr> {
    auto e = read(w, pos);
    if (!e || !e->is_formula()) return std::nullopt;
    return e;
  };
  switch (ch) {
    case letter::Bot: return Expr::bot();
    case letter::Top: return Expr::top();
    case letter::Not: {
      auto a = formula();
      if (!a) return std::nullopt;
      return Expr::neg(*a);
    }
    case letter::And:
    case letter::Or:
    case letter::Imp: {
      auto a = formula();
      if (!a) return std::nullopt;
      auto b = formula();
      if (!b) return std::nullopt;
      return ch == letter::And ? Expr::conj(*a, *b) : ch == letter::Or ? Expr::disj(*a, *b) : Expr::imp(*a, *b);
    }
    case letter::Exists:
    case letter::Forall: {
      if (pos >= w.size() || w[pos] != letter::Var) return std::nullopt;
      ++pos;
      std::uint32_t v = *read_index(w, pos);
      auto body = formula();
      if (!body) return std::nullopt;
      return ch == letter::Exists ? Expr::exists(v, *body) : Expr::forall(v, *body);
    }
    default: break;
  }
  if (sig_.has_equality() && ch == letter::Eq) {
    auto a = read_term(w, pos);
    if (!a) return std::nullopt;
    auto b = read_term(w, pos);
    if (!b) return std::nullopt;
    return Expr::eq(*a, *b);
  }
  if (ch >= pred_base_ && ch < fun_base_) {
    std::uint32_t p = ch - pred_base_;
    std::vector<Expr> args;
    for (int i = 0; i < sig_.predicates()[p].arity; ++i) {
      auto t = read_term(w, pos);
      if (!t) return std::nullopt;
      args.push_back(std::move(*t));
    }
    return Expr::atom(p, std::move(args));
  }
  return std::nullopt;
}

std::optional<Expr> Alphabet::parse_expr(const Word& w) const {
  std::size_t pos = 0;
  auto e = read(w, pos);
  if (!e || pos != w.size()) return std::nullopt;
  return e;
}

std::optional<std::vector<Expr>> Alphabet::parse_sequence(const Word& w) const {
  std::vector<Expr> steps;
  std::size_t pos = 0;
  while (true) {
    auto e = read(w, pos);
    if (!e || !e->is_formula()) return std::nullopt;
    steps.push_back(std::move(*e));
    if (pos == w.size() || w[pos] != letter::Sep) return std::nullopt;
    if (++pos == w.size()) return steps;
  }
}

GodelCode Alphabet::code(const Word& w) const {
  BigInt v = 0;
  for (char16_t d : w) {
    if (d == 0 || d > size_) throw std::invalid_argument("letter outside alphabet");
    v = v * size_ + d;
  }
  return GodelCode(std::move(v));
}

Word Alphabet::word(const GodelCode& c) const {
  Word w;
  BigInt v = c.value();
  if (v < 0) throw std::invalid_argument("negative code");
  const BigInt k = size_;
  while (v > 0) {
    BigInt r = v % k;
    std::uint32_t d = r == 0 ? size_ : r.convert_to<std::uint32_t>();
    w += static_cast<char16_t>(d);
    v = (v - d) / k;
  }
  std::reverse(w.begin(), w.end());
  return w;
}

GodelCode encode(const Expr& e, const Alphabet& a) { return a.code(a.word(e)); }

GodelCode encode_sequence(const std::vector<Expr>& steps, const Alphabet& a) { return a.code(a.word(steps)); }

GodelCode length_bound(const Alphabet& a, std::size_t len) { return a.code(Word(len + 1, char16_t{1})); }

GodelCode parse_bound(const std::string& text, const Alphabet& a) {
  if (text.rfind("len:", 0) == 0) {
    const std::string n = text.substr(4);
    if (n.empty() || n.size() > 5 || !std::all_of(n.begin(), n.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw std::invalid_argument("bad length bound '" + text + "'");
    return length_bound(a, std::stoul(n));
  }
  return GodelCode::parse(text);
}

Decoded decode(const GodelCode& c, const Alphabet& a) {
  Word w = a.word(c);
  if (w.empty()) return Undecodable{};
  if (auto e = a.parse_expr(w)) return *e;
  if (auto s = a.parse_sequence(w)) return *s;
  return Undecodable{};
}

Expr decode_expr(const GodelCode& c, const Alphabet& a) {
  auto e = a.parse_expr(a.word(c));
  if (!e) throw SyntaxError("code " + c.str() + " does not denote an expression");
  return *e;
}

void WordCursor::next() {
  ++code_;
  std::size_t i = w_.size();
  while (i > 0) {
    --i;
    if (w_[i] < k_) {
      ++w_[i];
      return;
    }
    w_[i] = 1;
  }
  w_.insert(w_.begin(), 1);
}

namespace {

template <typename Keep>
std::vector<Expr> walk_formulas(const Alphabet& a, const GodelCode& bound, Keep keep) {
  std::vector<Expr> out;
  if (bound <= GodelCode(1)) return out;
  constexpr std::uint64_t kWalkLimit = 50'000'000;
  std::uint64_t limit = bound.fits_u64() ? bound.to_u64() : kWalkLimit + 1;
  if (limit > kWalkLimit) throw std::length_error("formula walk bound too large: " + bound.str());
  WordCursor cur(a.size());
  for (cur.next(); cur.code() < limit; cur.next()) {
    // A formula never starts with a term letter or a separator.
    char16_t head = cur.word().front();
    if (head == letter::Var || head == letter::Const || head == letter::Tick || head == letter::Sep) continue;
    auto e = a.parse_expr(cur.word());
    if (e && e->is_formula() && keep(*e)) out.push_back(std::move(*e));
  }
  return out;
}

bool constants_within(const Expr& e, const std::set<std::uint32_t>& carrier) {
  for (auto c : e.constants())
    if (!carrier.count(c)) return false;
  return true;
}

}  // namespace

std::vector<Expr> enumerate_one_free_variable_formulas(const Alphabet& a, const std::set<std::uint32_t>& carrier,
                                                       const GodelCode& bound) {
  return walk_formulas(a, bound, [&](const Expr& e) {
    return e.free_vars().size() == 1 && constants_within(e, carrier);
  });
}

std::vector<Expr> enumerate_unary_formulas(const Alphabet& a, const std::set<std::uint32_t>& carrier,
                                           const GodelCode& bound) {
  return walk_formulas(a, bound, [&](const Expr& e) {
    return e.free_vars().size() <= 1 && constants_within(e, carrier);
  });
}

}  // namespace satclass
