#include "satclass/model.hpp"

#include <algorithm>
#include <sstream>

namespace satclass {

FiniteModel::FiniteModel(Signature sig, std::set<std::uint32_t> carrier, std::vector<std::set<Tuple>> predicates,
                         std::vector<std::map<Tuple, std::uint32_t>> functions)
    : sig_(std::move(sig)), carrier_(std::move(carrier)), preds_(std::move(predicates)), funs_(std::move(functions)) {
  if (carrier_.empty()) throw DomainError("model carrier must be nonempty");
  if (preds_.size() != sig_.predicates().size()) throw DomainError("one table per predicate symbol expected");
  if (funs_.size() != sig_.functions().size()) throw DomainError("one table per function symbol expected");
  auto in_carrier = [&](const Tuple& t) {
    return std::all_of(t.begin(), t.end(), [&](std::uint32_t x) { return carrier_.count(x) > 0; });
  };
  for (std::size_t p = 0; p < preds_.size(); ++p) {
    for (const auto& t : preds_[p]) {
      if (t.size() != static_cast<std::size_t>(sig_.predicates()[p].arity))
        throw DomainError("tuple arity mismatch in table " + sig_.predicates()[p].name);
      if (!in_carrier(t)) throw DomainError("table " + sig_.predicates()[p].name + " leaves the carrier");
    }
  }
  for (std::size_t f = 0; f < funs_.size(); ++f) {
    const auto& sym = sig_.functions()[f];
    std::size_t expected = 1;
    for (int i = 0; i < sym.arity; ++i) expected *= carrier_.size();
    if (funs_[f].size() != expected) throw DomainError("function table " + sym.name + " is not total");
    for (const auto& [args, val] : funs_[f]) {
      if (args.size() != static_cast<std::size_t>(sym.arity) || !in_carrier(args) || !carrier_.count(val))
        throw DomainError("function table " + sym.name + " is not closed over the carrier");
    }
  }
}

FiniteModel FiniteModel::with_constants(const std::map<std::uint32_t, std::uint32_t>& denotations) const {
  FiniteModel m = *this;
  for (const auto& [c, a] : denotations) {
    if (carrier_.count(c)) throw DomainError("constant c" + std::to_string(c) + " already denotes itself");
    if (!carrier_.count(a)) throw DomainError("denotation outside the carrier");
    m.extra_[c] = a;
  }
  return m;
}

bool FiniteModel::interprets(const Expr& e) const {
  for (auto c : e.constants())
    if (!interprets_constant(c)) return false;
  return true;
}

std::uint32_t FiniteModel::value(const Expr& t, const std::map<std::uint32_t, std::uint32_t>& env) const {
  switch (t.kind()) {
    case Kind::Var: {
      auto it = env.find(t.index());
      if (it == env.end()) throw DomainError("free variable v" + std::to_string(t.index()));
      return it->second;
    }
    case Kind::Const: {
      if (carrier_.count(t.index())) return t.index();
      auto it = extra_.find(t.index());
      if (it == extra_.end()) throw DomainError("constant c" + std::to_string(t.index()) + " outside the carrier");
      return it->second;
    }
    case Kind::App: {
      Tuple args;
      for (const auto& c : t.children()) args.push_back(value(c, env));
      return funs_.at(t.index()).at(args);
    }
    default:
      throw DomainError("not a term");
  }
}

int FiniteModel::eval(const Expr& f, std::map<std::uint32_t, std::uint32_t>& env) const {
  switch (f.kind()) {
    case Kind::Bot: return 0;
    case Kind::Top: return 1;
    case Kind::Atom: {
      Tuple args;
      for (const auto& c : f.children()) args.push_back(value(c, env));
      return preds_.at(f.index()).count(args) ? 1 : 0;
    }
    case Kind::Eq: return value(f.child(0), env) == value(f.child(1), env) ? 1 : 0;
    case Kind::Not: return 1 - eval(f.child(0), env);
    case Kind::And: return std::min(eval(f.child(0), env), eval(f.child(1), env));
    case Kind::Or: return std::max(eval(f.child(0), env), eval(f.child(1), env));
    case Kind::Imp: return std::max(1 - eval(f.child(0), env), eval(f.child(1), env));
    case Kind::Exists:
    case Kind::Forall: {
      const bool ex = f.kind() == Kind::Exists;
      auto saved = env.find(f.index()) != env.end() ? std::optional<std::uint32_t>(env[f.index()]) : std::nullopt;
      int acc = ex ? 0 : 1;
      for (auto a : carrier_) {
        env[f.index()] = a;
        int v = eval(f.child(0), env);
        acc = ex ? std::max(acc, v) : std::min(acc, v);
        if (acc == (ex ? 1 : 0)) break;
      }
      if (saved) env[f.index()] = *saved;
      else env.erase(f.index());
      return acc;
    }
    default:
      throw DomainError("not a formula");
  }
}

std::uint32_t FiniteModel::term_value(const Expr& t) const {
  std::map<std::uint32_t, std::uint32_t> env;
  return value(t, env);
}

int FiniteModel::evaluate(const Expr& sigma) const {
  if (!sigma.is_formula()) throw DomainError("evaluate: not a formula");
  if (!sigma.is_closed()) throw DomainError("evaluate: formula has free variables");
  sigma.check(sig_);
  std::map<std::uint32_t, std::uint32_t> env;
  return eval(sigma, env);
}

int FiniteModel::atomic_truth(const Expr& sigma) const {
  if (!sigma.is_formula() || !sigma.is_atomic()) throw std::invalid_argument("atomic_truth: not an atomic formula");
  if (!sigma.is_closed()) throw std::invalid_argument("atomic_truth: atom has variables");
  return evaluate(sigma);
}

namespace {

std::vector<Tuple> parse_tuples(const std::string& s, int lineno) {
  std::vector<Tuple> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    if (s[i] != '(') throw SyntaxError("expected '(' in table", lineno, static_cast<int>(i) + 1);
    auto close = s.find(')', i);
    if (close == std::string::npos) throw SyntaxError("unterminated tuple", lineno, static_cast<int>(i) + 1);
    std::istringstream ts(s.substr(i + 1, close - i - 1));
    Tuple t;
    std::string tok;
    while (ts >> tok) {
      if (!std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw SyntaxError("bad element '" + tok + "'", lineno, static_cast<int>(i) + 2);
      t.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    }
    out.push_back(std::move(t));
    i = close + 1;
  }
  return out;
}

}  // namespace

FiniteModel FiniteModel::parse(std::string_view text, const Signature& sig) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::optional<std::set<std::uint32_t>> carrier;
  std::vector<std::set<Tuple>> preds(sig.predicates().size());
  std::vector<std::map<Tuple, std::uint32_t>> funs(sig.functions().size());
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "carrier") {
      if (carrier) throw SyntaxError("duplicate carrier line", lineno, 1);
      carrier.emplace();
      std::string tok;
      while (ls >> tok) {
        if (!std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
          throw SyntaxError("bad carrier element '" + tok + "'", lineno, 1);
        carrier->insert(static_cast<std::uint32_t>(std::stoul(tok)));
      }
      continue;
    }
    if (kw != "table") throw SyntaxError("expected 'carrier' or 'table'", lineno, 1);
    auto colon = line.find(':');
    if (colon == std::string::npos) throw SyntaxError("expected ':' after table name", lineno, 1);
    std::string name;
    std::istringstream ns(line.substr(0, colon));
    ns >> kw >> name;
    if (!seen.insert(name).second) throw SyntaxError("duplicate table " + name, lineno, 1);
    auto tuples = parse_tuples(line.substr(colon + 1), lineno);
    if (auto p = sig.find_predicate(name)) {
      for (auto& t : tuples) {
        if (t.size() != static_cast<std::size_t>(sig.predicates()[*p].arity))
          throw SyntaxError("tuple arity mismatch for " + name, lineno, 1);
        preds[*p].insert(std::move(t));
      }
    } else if (auto f = sig.find_function(name)) {
      for (auto& t : tuples) {
        if (t.size() != static_cast<std::size_t>(sig.functions()[*f].arity) + 1)
          throw SyntaxError("graph tuple arity mismatch for " + name, lineno, 1);
        std::uint32_t v = t.back();
        t.pop_back();
        if (!funs[*f].emplace(std::move(t), v).second) throw SyntaxError("function " + name + " not single-valued", lineno, 1);
      }
    } else {
      throw SyntaxError("unknown symbol '" + name + "'", lineno, 1);
    }
  }
  if (!carrier) throw SyntaxError("missing carrier line");
  try {
    return FiniteModel(sig, std::move(*carrier), std::move(preds), std::move(funs));
  } catch (const DomainError& e) {
    throw SyntaxError(e.what());
  }
}

std::string FiniteModel::to_text() const {
  std::ostringstream out;
  out << "carrier";
  for (auto a : carrier_) out << ' ' << a;
  out << '\n';
  auto tuple = [&](const Tuple& t) {
    out << " (";
    for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t[i];
    out << ')';
  };
  for (std::size_t p = 0; p < preds_.size(); ++p) {
    out << "table " << sig_.predicates()[p].name << ':';
    for (const auto& t : preds_[p]) tuple(t);
    out << '\n';
  }
  for (std::size_t f = 0; f < funs_.size(); ++f) {
    out << "table " << sig_.functions()[f].name << ':';
    for (const auto& [args, v] : funs_[f]) {
      Tuple g = args;
      g.push_back(v);
      tuple(g);
    }
    out << '\n';
  }
  return out.str();
}

RecursiveType::RecursiveType(Generator gen, std::vector<std::uint32_t> params, std::uint32_t variable)
    : gen_(std::move(gen)), params_(std::move(params)), var_(variable) {
  if (!gen_) throw std::invalid_argument("recursive type needs a generator");
}

Expr RecursiveType::member(std::size_t n) const {
  Expr f = gen_(n, params_);
  for (auto v : f.free_vars())
    if (v != var_) throw std::invalid_argument("type member has a free variable other than v" + std::to_string(var_));
  return f;
}

std::optional<std::uint32_t> saturation_witness(const FiniteModel& m, const RecursiveType& t, std::size_t n_max) {
  std::vector<Expr> prefix;
  for (std::size_t n = 0; n <= n_max; ++n) prefix.push_back(t.member(n));
  for (auto a : m.carrier()) {
    const Expr ca = Expr::constant(a);
    bool all = std::all_of(prefix.begin(), prefix.end(),
                           [&](const Expr& phi) { return m.evaluate(substitute(phi, t.variable(), ca)) == 1; });
    if (all) return a;
  }
  return std::nullopt;
}

}  // namespace satclass
