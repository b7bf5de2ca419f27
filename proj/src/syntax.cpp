#include "satclass/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace satclass {

SyntaxError::SyntaxError(const std::string& msg, int line, int column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg
                                  : msg),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::vector<Symbol> predicates, std::vector<Symbol> functions, bool equality)
    : predicates_(std::move(predicates)), functions_(std::move(functions)), equality_(equality) {
  validate();
}

void Signature::validate() const {
  if (predicates_.empty()) throw SyntaxError("signature needs at least one predicate symbol");
  std::unordered_set<std::string> seen;
  auto reserved = [](const std::string& n) {
    static const std::unordered_set<std::string> kw = {"not", "and",    "or",  "imp", "forall",
                                                       "exists", "bot", "top", "=",   "pred",
                                                       "fun", "equality"};
    if (kw.count(n)) return true;
    // vN / cN are variable and constant tokens
    if (n.size() >= 2 && (n[0] == 'v' || n[0] == 'c') &&
        std::all_of(n.begin() + 1, n.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      return true;
    return false;
  };
  for (const auto* list : {&predicates_, &functions_}) {
    for (const auto& s : *list) {
      if (s.name.empty()) throw SyntaxError("empty symbol name");
      if (s.arity < 0) throw SyntaxError("negative arity for " + s.name);
      if (reserved(s.name)) throw SyntaxError("reserved symbol name: " + s.name);
      if (!seen.insert(s.name).second) throw SyntaxError("duplicate symbol: " + s.name);
    }
  }
}

std::optional<int> Signature::find_predicate(std::string_view name) const {
  for (std::size_t i = 0; i < predicates_.size(); ++i)
    if (predicates_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> Signature::find_function(std::string_view name) const {
  for (std::size_t i = 0; i < functions_.size(); ++i)
    if (functions_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

Signature Signature::parse(std::string_view text) {
  std::vector<Symbol> preds, funs;
  bool eq = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "equality") {
      eq = true;
      continue;
    }
    if (kw != "pred" && kw != "fun") throw SyntaxError("unknown declaration '" + kw + "'", lineno, 1);
    Symbol s;
    if (!(ls >> s.name >> s.arity)) throw SyntaxError("expected '<name> <arity>'", lineno, 1);
    std::string extra;
    if (ls >> extra) throw SyntaxError("trailing token '" + extra + "'", lineno, 1);
    (kw == "pred" ? preds : funs).push_back(std::move(s));
  }
  return Signature(std::move(preds), std::move(funs), eq);
}

std::string Signature::to_text() const {
  std::ostringstream out;
  for (const auto& p : predicates_) out << "pred " << p.name << ' ' << p.arity << '\n';
  for (const auto& f : functions_) out << "fun " << f.name << ' ' << f.arity << '\n';
  if (equality_) out << "equality\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Expr

bool is_term_kind(Kind k) { return k == Kind::Var || k == Kind::Const || k == Kind::App; }

Expr Expr::make(Kind k, std::uint32_t index, std::vector<Expr> children) {
  Expr e;
  e.node_ = std::make_shared<const Node>(Node{k, index, std::move(children)});
  return e;
}

Expr Expr::var(std::uint32_t i) { return make(Kind::Var, i, {}); }
Expr Expr::constant(std::uint32_t i) { return make(Kind::Const, i, {}); }
Expr Expr::app(std::uint32_t fn, std::vector<Expr> args) { return make(Kind::App, fn, std::move(args)); }
Expr Expr::atom(std::uint32_t pred, std::vector<Expr> args) { return make(Kind::Atom, pred, std::move(args)); }
Expr Expr::eq(Expr lhs, Expr rhs) { return make(Kind::Eq, 0, {std::move(lhs), std::move(rhs)}); }
Expr Expr::bot() { return make(Kind::Bot, 0, {}); }
Expr Expr::top() { return make(Kind::Top, 0, {}); }
Expr Expr::neg(Expr e) { return make(Kind::Not, 0, {std::move(e)}); }
Expr Expr::conj(Expr a, Expr b) { return make(Kind::And, 0, {std::move(a), std::move(b)}); }
Expr Expr::disj(Expr a, Expr b) { return make(Kind::Or, 0, {std::move(a), std::move(b)}); }
Expr Expr::imp(Expr a, Expr b) { return make(Kind::Imp, 0, {std::move(a), std::move(b)}); }
Expr Expr::exists(std::uint32_t v, Expr body) { return make(Kind::Exists, v, {std::move(body)}); }
Expr Expr::forall(std::uint32_t v, Expr body) { return make(Kind::Forall, v, {std::move(body)}); }

Expr Expr::disj_all(const std::vector<Expr>& parts) {
  if (parts.empty()) throw std::invalid_argument("disj_all: empty disjunction");
  Expr acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
  return acc;
}

bool Expr::is_atomic() const {
  switch (kind()) {
    case Kind::Atom:
    case Kind::Eq:
    case Kind::Bot:
    case Kind::Top:
      return true;
    default:
      return false;
  }
}

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  if (node_->kind != other.node_->kind || node_->index != other.node_->index ||
      node_->children.size() != other.node_->children.size())
    return false;
  for (std::size_t i = 0; i < node_->children.size(); ++i)
    if (node_->children[i] != other.node_->children[i]) return false;
  return true;
}

namespace {

void collect_free(const Expr& e, std::multiset<std::uint32_t>& bound, std::set<std::uint32_t>& out) {
  switch (e.kind()) {
    case Kind::Var:
      if (!bound.count(e.index())) out.insert(e.index());
      return;
    case Kind::Exists:
    case Kind::Forall: {
      auto it = bound.insert(e.index());
      collect_free(e.child(0), bound, out);
      bound.erase(it);
      return;
    }
    default:
      for (const auto& c : e.children()) collect_free(c, bound, out);
  }
}

void collect_constants(const Expr& e, std::set<std::uint32_t>& out) {
  if (e.kind() == Kind::Const) out.insert(e.index());
  for (const auto& c : e.children()) collect_constants(c, out);
}

}  // namespace

std::set<std::uint32_t> Expr::free_vars() const {
  std::multiset<std::uint32_t> bound;
  std::set<std::uint32_t> out;
  collect_free(*this, bound, out);
  return out;
}

std::set<std::uint32_t> Expr::constants() const {
  std::set<std::uint32_t> out;
  collect_constants(*this, out);
  return out;
}

std::size_t Expr::size() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.size();
  return n;
}

void Expr::check(const Signature& sig) const {
  if (!valid()) throw SyntaxError("null expression");
  auto need_terms = [&] {
    for (const auto& c : children())
      if (!c.is_term()) throw SyntaxError("formula in term position");
  };
  auto need_formulas = [&] {
    for (const auto& c : children())
      if (!c.is_formula()) throw SyntaxError("term in formula position");
  };
  switch (kind()) {
    case Kind::Var:
    case Kind::Const:
    case Kind::Bot:
    case Kind::Top:
      if (!children().empty()) throw SyntaxError("nullary node with children");
      return;
    case Kind::App:
      if (index() >= sig.functions().size()) throw SyntaxError("unknown function symbol");
      if (children().size() != static_cast<std::size_t>(sig.functions()[index()].arity))
        throw SyntaxError("arity mismatch for " + sig.functions()[index()].name);
      need_terms();
      break;
    case Kind::Atom:
      if (index() >= sig.predicates().size()) throw SyntaxError("unknown predicate symbol");
      if (children().size() != static_cast<std::size_t>(sig.predicates()[index()].arity))
        throw SyntaxError("arity mismatch for " + sig.predicates()[index()].name);
      need_terms();
      break;
    case Kind::Eq:
      if (!sig.has_equality()) throw SyntaxError("equality not in signature");
      if (children().size() != 2) throw SyntaxError("equality needs two terms");
      need_terms();
      break;
    case Kind::Not:
    case Kind::Exists:
    case Kind::Forall:
      if (children().size() != 1) throw SyntaxError("unary connective arity");
      need_formulas();
      break;
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
      if (children().size() != 2) throw SyntaxError("binary connective arity");
      need_formulas();
      break;
  }
  for (const auto& c : children()) c.check(sig);
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

bool is_closed_term(const Expr& t) {
  if (t.kind() == Kind::Var) return false;
  if (t.kind() == Kind::Const) return true;
  if (t.kind() != Kind::App) return false;
  for (const auto& c : t.children())
    if (!is_closed_term(c)) return false;
  return true;
}

template <typename Leaf>
Expr rebuild(const Expr& e, const Leaf& leaf, std::uint32_t v, bool stop_at_binder) {
  if (auto r = leaf(e)) return *r;
  if (e.children().empty()) return e;
  if (stop_at_binder && (e.kind() == Kind::Exists || e.kind() == Kind::Forall) && e.index() == v) return e;
  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  bool changed = false;
  for (const auto& c : e.children()) {
    kids.push_back(rebuild(c, leaf, v, stop_at_binder));
    changed = changed || kids.back() != c;
  }
  if (!changed) return e;
  switch (e.kind()) {
    case Kind::App: return Expr::app(e.index(), std::move(kids));
    case Kind::Atom: return Expr::atom(e.index(), std::move(kids));
    case Kind::Eq: return Expr::eq(kids[0], kids[1]);
    case Kind::Not: return Expr::neg(kids[0]);
    case Kind::And: return Expr::conj(kids[0], kids[1]);
    case Kind::Or: return Expr::disj(kids[0], kids[1]);
    case Kind::Imp: return Expr::imp(kids[0], kids[1]);
    case Kind::Exists: return Expr::exists(e.index(), kids[0]);
    case Kind::Forall: return Expr::forall(e.index(), kids[0]);
    default: return e;
  }
}

}  // namespace

Expr substitute(const Expr& phi, std::uint32_t v, const Expr& t) {
  if (!t.valid() || !is_closed_term(t)) throw std::invalid_argument("substitute: replacement must be a closed term");
  auto leaf = [&](const Expr& e) -> std::optional<Expr> {
    if (e.kind() == Kind::Var && e.index() == v) return t;
    return std::nullopt;
  };
  return rebuild(phi, leaf, v, true);
}

Expr replace_constant(const Expr& phi, std::uint32_t from, const Expr& t) {
  if (!t.valid() || !is_closed_term(t)) throw std::invalid_argument("replace_constant: replacement must be a closed term");
  auto leaf = [&](const Expr& e) -> std::optional<Expr> {
    if (e.kind() == Kind::Const && e.index() == from) return t;
    return std::nullopt;
  };
  return rebuild(phi, leaf, 0, false);
}

// ---------------------------------------------------------------------------
// Text grammar

namespace {

struct Token {
  enum Type { LParen, RParen, Atom, End } type;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip();
    Token t{Token::End, "", line_, col_};
    if (pos_ >= s_.size()) return t;
    char ch = s_[pos_];
    if (ch == '(' || ch == ')') {
      t.type = ch == '(' ? Token::LParen : Token::RParen;
      t.text = ch;
      advance();
      return t;
    }
    t.type = Token::Atom;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
           s_[pos_] != ')') {
      t.text += s_[pos_];
      advance();
    }
    return t;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::optional<std::uint32_t> indexed(const std::string& tok, char prefix) {
  if (tok.size() < 2 || tok[0] != prefix) return std::nullopt;
  std::uint64_t v = 0;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return std::nullopt;
    v = v * 10 + static_cast<unsigned>(tok[i] - '0');
    if (v > 0xffffffffu) return std::nullopt;
  }
  if (tok.size() > 2 && tok[1] == '0') return std::nullopt;
  return static_cast<std::uint32_t>(v);
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : lex_(text), sig_(sig) { cur_ = lex_.next(); }

  Expr formula() {
    Token t = cur_;
    if (t.type == Token::Atom) {
      shift();
      if (t.text == "bot") return Expr::bot();
      if (t.text == "top") return Expr::top();
      if (auto p = sig_.find_predicate(t.text)) {
        check_arity(sig_.predicates()[*p], 0, t);
        return Expr::atom(*p, {});
      }
      fail("expected formula, got '" + t.text + "'", t);
    }
    if (t.type != Token::LParen) fail("expected formula", t);
    shift();
    Token head = cur_;
    if (head.type != Token::Atom) fail("expected connective or predicate", head);
    shift();
    Expr result;
    if (head.text == "not") {
      result = Expr::neg(formula());
    } else if (head.text == "and" || head.text == "or" || head.text == "imp") {
      Expr a = formula();
      Expr b = formula();
      result = head.text == "and" ? Expr::conj(a, b) : head.text == "or" ? Expr::disj(a, b) : Expr::imp(a, b);
    } else if (head.text == "forall" || head.text == "exists") {
      Token vt = cur_;
      auto v = vt.type == Token::Atom ? indexed(vt.text, 'v') : std::nullopt;
      if (!v) fail("expected bound variable vN", vt);
      shift();
      Expr body = formula();
      result = head.text == "forall" ? Expr::forall(*v, body) : Expr::exists(*v, body);
    } else if (head.text == "=") {
      if (!sig_.has_equality()) fail("equality not declared in signature", head);
      Expr a = term();
      Expr b = term();
      result = Expr::eq(a, b);
    } else if (head.text == "bot" || head.text == "top") {
      result = head.text == "bot" ? Expr::bot() : Expr::top();
    } else if (auto p = sig_.find_predicate(head.text)) {
      std::vector<Expr> args;
      while (cur_.type != Token::RParen && cur_.type != Token::End) args.push_back(term());
      check_arity(sig_.predicates()[*p], args.size(), head);
      result = Expr::atom(*p, std::move(args));
    } else {
      fail("unknown connective or predicate '" + head.text + "'", head);
    }
    expect_rparen();
    return result;
  }

  Expr term() {
    Token t = cur_;
    if (t.type == Token::Atom) {
      shift();
      if (auto v = indexed(t.text, 'v')) return Expr::var(*v);
      if (auto c = indexed(t.text, 'c')) return Expr::constant(*c);
      if (auto f = sig_.find_function(t.text)) {
        check_arity(sig_.functions()[*f], 0, t);
        return Expr::app(*f, {});
      }
      fail("expected term, got '" + t.text + "'", t);
    }
    if (t.type != Token::LParen) fail("expected term", t);
    shift();
    Token head = cur_;
    if (head.type != Token::Atom) fail("expected function symbol", head);
    auto f = sig_.find_function(head.text);
    if (!f) fail("unknown function symbol '" + head.text + "'", head);
    shift();
    std::vector<Expr> args;
    while (cur_.type != Token::RParen && cur_.type != Token::End) args.push_back(term());
    check_arity(sig_.functions()[*f], args.size(), head);
    expect_rparen();
    return Expr::app(*f, std::move(args));
  }

  void finish() {
    if (cur_.type != Token::End) fail("trailing input '" + cur_.text + "'", cur_);
  }

 private:
  void shift() { cur_ = lex_.next(); }
  void expect_rparen() {
    if (cur_.type != Token::RParen) fail("expected ')'", cur_);
    shift();
  }
  void check_arity(const Symbol& s, std::size_t n, const Token& at) {
    if (static_cast<int>(n) != s.arity)
      fail(s.name + " expects " + std::to_string(s.arity) + " argument(s), got " + std::to_string(n), at);
  }
  [[noreturn]] void fail(const std::string& msg, const Token& at) {
    throw SyntaxError(at.type == Token::End ? msg + " (at end of input)" : msg, at.line, at.column);
  }

  Lexer lex_;
  const Signature& sig_;
  Token cur_;
};

void print(const Expr& e, const Signature& sig, std::string& out) {
  auto sub = [&](const char* head) {
    out += '(';
    out += head;
    for (const auto& c : e.children()) {
      out += ' ';
      print(c, sig, out);
    }
    out += ')';
  };
  switch (e.kind()) {
    case Kind::Var: out += "v" + std::to_string(e.index()); return;
    case Kind::Const: out += "c" + std::to_string(e.index()); return;
    case Kind::App: {
      const auto& name = sig.functions().at(e.index()).name;
      if (e.children().empty()) out += name;
      else sub(name.c_str());
      return;
    }
    case Kind::Atom: {
      const auto& name = sig.predicates().at(e.index()).name;
      if (e.children().empty()) out += name;
      else sub(name.c_str());
      return;
    }
    case Kind::Eq: sub("="); return;
    case Kind::Bot: out += "bot"; return;
    case Kind::Top: out += "top"; return;
    case Kind::Not: sub("not"); return;
    case Kind::And: sub("and"); return;
    case Kind::Or: sub("or"); return;
    case Kind::Imp: sub("imp"); return;
    case Kind::Exists:
    case Kind::Forall:
      out += e.kind() == Kind::Exists ? "(exists v" : "(forall v";
      out += std::to_string(e.index()) + ' ';
      print(e.child(0), sig, out);
      out += ')';
      return;
  }
}

}  // namespace

Expr parse_formula(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Expr e = p.formula();
  p.finish();
  return e;
}

Expr parse_term(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Expr e = p.term();
  p.finish();
  return e;
}

std::string to_text(const Expr& e, const Signature& sig) {
  std::string out;
  print(e, sig, out);
  return out;
}

}  // namespace satclass
