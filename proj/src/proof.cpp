#include "satclass/proof.hpp"

#include "satclass/countermodel.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace satclass {

// ---------------------------------------------------------------------------
// Axiom schemas

std::string schema_name(Schema s) {
  switch (s) {
    case Schema::K: return "K";
    case Schema::S: return "S";
    case Schema::AndElimL: return "and-elim-l";
    case Schema::AndElimR: return "and-elim-r";
    case Schema::AndIntro: return "and-intro";
    case Schema::OrIntroL: return "or-intro-l";
    case Schema::OrIntroR: return "or-intro-r";
    case Schema::OrElim: return "or-elim";
    case Schema::NegElim: return "neg-elim";
    case Schema::NegIntro: return "neg-intro";
    case Schema::DoubleNeg: return "double-neg";
    case Schema::Verum: return "verum";
    case Schema::ExFalso: return "ex-falso";
    case Schema::ForallElim: return "forall-elim";
    case Schema::ExistsIntro: return "exists-intro";
    case Schema::ForallImp: return "forall-imp";
    case Schema::ExistsImp: return "exists-imp";
    case Schema::ForallNotExists: return "forall-not-exists";
    case Schema::ForallOrNotExists: return "forall-or-not-exists";
    case Schema::Identity: return "identity";
    case Schema::EqRefl: return "eq-refl";
    case Schema::EqSubst: return "eq-subst";
  }
  return "?";
}

namespace {

bool is(const Expr& e, Kind k) { return e.valid() && e.kind() == k; }

bool closed_term(const Expr& t) {
  if (!t.is_term()) return false;
  return t.free_vars().empty();
}

bool instance_walk(const Expr& p, const Expr& t, std::uint32_t v, std::multiset<std::uint32_t>& bound,
                   std::optional<Expr>& binding) {
  if (p.kind() == Kind::Var && p.index() == v && !bound.count(v)) {
    // Free occurrence: t must be the same closed term everywhere, or v itself.
    bool ok = closed_term(t) || (t.kind() == Kind::Var && t.index() == v);
    if (!ok) return false;
    if (!binding) {
      binding = t;
      return true;
    }
    return *binding == t;
  }
  if (p.kind() != t.kind() || p.index() != t.index() || p.children().size() != t.children().size()) return false;
  bool binder = p.kind() == Kind::Exists || p.kind() == Kind::Forall;
  std::multiset<std::uint32_t>::iterator it;
  if (binder) it = bound.insert(p.index());
  bool ok = true;
  for (std::size_t i = 0; ok && i < p.children().size(); ++i)
    ok = instance_walk(p.child(i), t.child(i), v, bound, binding);
  if (binder) bound.erase(it);
  return ok;
}

bool eq_subst_walk(const Expr& a, const Expr& b, const Expr& s, const Expr& t) {
  if (a == b) return true;
  if (a == s && b == t) return true;
  if (a.kind() != b.kind() || a.index() != b.index() || a.children().size() != b.children().size()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!eq_subst_walk(a.child(i), b.child(i), s, t)) return false;
  return true;
}

}  // namespace

bool is_instance_of(const Expr& pattern, std::uint32_t v, const Expr& target) {
  std::multiset<std::uint32_t> bound;
  std::optional<Expr> binding;
  return instance_walk(pattern, target, v, bound, binding);
}

std::optional<Schema> match_logical_axiom(const Expr& f) {
  if (is(f, Kind::Top)) return Schema::Verum;
  if (is(f, Kind::Eq) && f.child(0) == f.child(1)) return Schema::EqRefl;
  if (!is(f, Kind::Imp)) return std::nullopt;
  const Expr& a = f.child(0);
  const Expr& b = f.child(1);

  if (a == b) return Schema::Identity;
  if (is(b, Kind::Imp) && b.child(1) == a) return Schema::K;
  if (is(a, Kind::Imp) && is(a.child(1), Kind::Imp) && is(b, Kind::Imp) && is(b.child(0), Kind::Imp) &&
      is(b.child(1), Kind::Imp)) {
    const Expr &x = a.child(0), &y = a.child(1).child(0), &z = a.child(1).child(1);
    if (b.child(0).child(0) == x && b.child(0).child(1) == y && b.child(1).child(0) == x && b.child(1).child(1) == z)
      return Schema::S;
  }
  if (is(a, Kind::And) && a.child(0) == b) return Schema::AndElimL;
  if (is(a, Kind::And) && a.child(1) == b) return Schema::AndElimR;
  if (is(b, Kind::Imp) && is(b.child(1), Kind::And) && b.child(1).child(0) == a && b.child(1).child(1) == b.child(0))
    return Schema::AndIntro;
  if (is(b, Kind::Or) && b.child(0) == a) return Schema::OrIntroL;
  if (is(b, Kind::Or) && b.child(1) == a) return Schema::OrIntroR;
  if (is(a, Kind::Imp) && is(b, Kind::Imp) && is(b.child(0), Kind::Imp) && is(b.child(1), Kind::Imp) &&
      is(b.child(1).child(0), Kind::Or)) {
    const Expr &x = a.child(0), &z = a.child(1);
    const Expr& y = b.child(0).child(0);
    if (b.child(0).child(1) == z && b.child(1).child(0).child(0) == x && b.child(1).child(0).child(1) == y &&
        b.child(1).child(1) == z)
      return Schema::OrElim;
  }
  if (is(a, Kind::Not) && is(b, Kind::Imp) && b.child(0) == a.child(0)) return Schema::NegElim;
  if (is(a, Kind::Imp) && is(b, Kind::Imp) && is(b.child(0), Kind::Imp) && is(b.child(1), Kind::Not)) {
    const Expr &x = a.child(0), &y = a.child(1);
    const Expr& inner = b.child(0);
    if (inner.child(0) == x && is(inner.child(1), Kind::Not) && inner.child(1).child(0) == y &&
        b.child(1).child(0) == x)
      return Schema::NegIntro;
  }
  if (is(a, Kind::Not) && is(a.child(0), Kind::Not) && a.child(0).child(0) == b) return Schema::DoubleNeg;
  if (is(a, Kind::Bot)) return Schema::ExFalso;
  if (is(a, Kind::Forall) && is_instance_of(a.child(0), a.index(), b)) return Schema::ForallElim;
  if (is(b, Kind::Exists) && is_instance_of(b.child(0), b.index(), a)) return Schema::ExistsIntro;
  if (is(a, Kind::Forall)) {
    const std::uint32_t v = a.index();
    const Expr& body = a.child(0);
    if (is(body, Kind::Imp) && is(b, Kind::Imp) && is(b.child(1), Kind::Forall) && b.child(1).index() == v &&
        b.child(0) == body.child(0) && b.child(1).child(0) == body.child(1) && !body.child(0).free_vars().count(v))
      return Schema::ForallImp;
    if (is(body, Kind::Imp) && is(b, Kind::Imp) && is(b.child(0), Kind::Exists) && b.child(0).index() == v &&
        b.child(0).child(0) == body.child(0) && b.child(1) == body.child(1) && !body.child(1).free_vars().count(v))
      return Schema::ExistsImp;
    if (is(body, Kind::Not) && is(b, Kind::Not) && is(b.child(0), Kind::Exists) && b.child(0).index() == v &&
        b.child(0).child(0) == body.child(0))
      return Schema::ForallNotExists;
    if (is(body, Kind::Or) && is(body.child(1), Kind::Not) && is(b, Kind::Or) && b.child(0) == body.child(0) &&
        is(b.child(1), Kind::Not) && is(b.child(1).child(0), Kind::Exists) && b.child(1).child(0).index() == v &&
        b.child(1).child(0).child(0) == body.child(1).child(0) && !body.child(0).free_vars().count(v))
      return Schema::ForallOrNotExists;
  }
  if (is(a, Kind::Eq) && is(b, Kind::Imp) && b.child(0).is_atomic() && b.child(1).is_atomic() &&
      eq_subst_walk(b.child(0), b.child(1), a.child(0), a.child(1)))
    return Schema::EqSubst;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Theories

namespace {

struct SchemeDef {
  std::string name;
  std::function<bool(const Expr&)> member;
};

const std::vector<SchemeDef>& scheme_defs() {
  static const std::vector<SchemeDef> defs = {
      {"excluded_middle",
       [](const Expr& f) {
         return is(f, Kind::Or) && is(f.child(1), Kind::Not) && f.child(1).child(0) == f.child(0) && f.is_sentence();
       }},
      {"double_negation",
       [](const Expr& f) {
         return is(f, Kind::Imp) && is(f.child(0), Kind::Not) && is(f.child(0).child(0), Kind::Not) &&
                f.child(0).child(0).child(0) == f.child(1) && f.is_sentence();
       }},
  };
  return defs;
}

const SchemeDef& find_scheme(const std::string& name) {
  for (const auto& d : scheme_defs())
    if (d.name == name) return d;
  throw std::invalid_argument("unknown axiom scheme '" + name + "'");
}

}  // namespace

const std::vector<std::string>& TheoryHandle::registered_schemes() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& d : scheme_defs()) n.push_back(d.name);
    return n;
  }();
  return names;
}

TheoryHandle::TheoryHandle(std::string name, const Signature& sig, std::vector<Expr> axioms,
                           std::vector<SchemeRef> schemes)
    : name_(std::move(name)), alphabet_(sig), schemes_(std::move(schemes)) {
  for (auto& ax : axioms) {
    if (!ax.is_sentence()) throw SyntaxError("theory axiom is not a sentence");
    Word w = alphabet_.word(ax);
    if (std::find(axiom_words_.begin(), axiom_words_.end(), w) != axiom_words_.end()) continue;
    axiom_words_.push_back(w);
    axioms_.push_back(std::move(ax));
  }
  // Keep axioms in increasing code order.
  std::vector<std::size_t> order(axioms_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto &a = axiom_words_[x], &b = axiom_words_[y];
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<Expr> ax2;
  std::vector<Word> w2;
  for (auto i : order) {
    ax2.push_back(axioms_[i]);
    w2.push_back(axiom_words_[i]);
  }
  axioms_ = std::move(ax2);
  axiom_words_ = std::move(w2);
  for (const auto& s : schemes_) find_scheme(s.name);
}

bool TheoryHandle::is_axiom(const Expr& phi) const {
  if (!phi.is_formula()) return false;
  Word w = alphabet_.word(phi);
  if (std::find(axiom_words_.begin(), axiom_words_.end(), w) != axiom_words_.end()) return true;
  for (const auto& s : schemes_)
    if (find_scheme(s.name).member(phi) && alphabet_.code(w) < s.bound) return true;
  return false;
}

std::vector<Expr> TheoryHandle::axioms_below(const GodelCode& bound) const {
  std::vector<std::pair<GodelCode, Expr>> out;
  for (std::size_t i = 0; i < axioms_.size(); ++i) {
    auto c = alphabet_.code(axiom_words_[i]);
    if (c < bound) out.emplace_back(c, axioms_[i]);
  }
  for (const auto& s : schemes_) {
    GodelCode b = std::min(bound, s.bound);
    const auto& def = find_scheme(s.name);
    if (b <= GodelCode(1)) continue;
    WordCursor cur(alphabet_.size());
    if (!b.fits_u64() || b.to_u64() > 50'000'000) throw std::length_error("scheme enumeration bound too large");
    std::uint64_t lim = b.to_u64();
    for (cur.next(); cur.code() < lim; cur.next()) {
      auto e = alphabet_.parse_expr(cur.word());
      if (e && e->is_formula() && def.member(*e) &&
          std::find(axiom_words_.begin(), axiom_words_.end(), cur.word()) == axiom_words_.end())
        out.emplace_back(GodelCode(cur.code()), *e);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  out.erase(std::unique(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first == y.first; }),
            out.end());
  std::vector<Expr> res;
  for (auto& [c, e] : out) res.push_back(std::move(e));
  return res;
}

TheoryHandle TheoryHandle::with_axiom(const Expr& phi) const {
  auto ax = axioms_;
  ax.push_back(phi);
  return TheoryHandle(name_, signature(), std::move(ax), schemes_);
}

TheoryHandle TheoryHandle::parse(std::string_view text, const Signature& sig) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::optional<std::string> name;
  std::vector<Expr> axioms;
  std::vector<SchemeRef> schemes;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::string body = line.substr(first);
    while (!body.empty() && (body.back() == ' ' || body.back() == '\t' || body.back() == '\r')) body.pop_back();
    if (!name) {
      std::istringstream ls(body);
      std::string kw, n;
      if (!(ls >> kw >> n) || kw != "theory") throw SyntaxError("expected header 'theory NAME'", lineno, 1);
      name = n;
      continue;
    }
    if (body.rfind("scheme", 0) == 0 && (body.size() == 6 || body[6] == ' ')) {
      std::istringstream ls(body.substr(6));
      std::string sname, sbound;
      if (!(ls >> sname >> sbound)) throw SyntaxError("expected 'scheme NAME BOUND'", lineno, 1);
      try {
        find_scheme(sname);
        schemes.push_back({sname, GodelCode::parse(sbound)});
      } catch (const std::invalid_argument& e) {
        throw SyntaxError(e.what(), lineno, 1);
      }
      continue;
    }
    try {
      Expr ax = parse_formula(body, sig);
      if (!ax.is_sentence()) throw SyntaxError("axiom is not a sentence", 1, 1);
      axioms.push_back(ax);
    } catch (const SyntaxError& e) {
      throw SyntaxError(std::string(e.what()), lineno, static_cast<int>(first) + std::max(e.column(), 1));
    }
  }
  if (!name) throw SyntaxError("empty theory file: missing 'theory NAME' header");
  return TheoryHandle(*name, sig, std::move(axioms), std::move(schemes));
}

std::string TheoryHandle::to_text() const {
  std::ostringstream out;
  out << "theory " << name_ << '\n';
  for (const auto& ax : axioms_) out << satclass::to_text(ax, signature()) << '\n';
  for (const auto& s : schemes_) out << "scheme " << s.name << ' ' << s.bound.str() << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Derivations

std::vector<Expr> Derivation::formulas() const {
  std::vector<Expr> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.formula);
  return out;
}

CheckResult check_derivation(const Derivation& d, const TheoryHandle& s) {
  auto fail = [](std::size_t i, std::string why) {
    CheckResult r;
    r.ok = false;
    r.failing_step = i;
    r.reason = std::move(why);
    return r;
  };
  if (d.steps.empty()) return fail(0, "empty derivation");
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const Expr& f = d.steps[i].formula;
    if (!f.valid() || !f.is_formula()) return fail(i, "step is not a formula");
    try {
      f.check(s.signature());
    } catch (const SyntaxError& e) {
      return fail(i, e.what());
    }
    const auto& j = d.steps[i].justification;
    if (auto* la = std::get_if<LogicalAxiomStep>(&j)) {
      auto m = match_logical_axiom(f);
      if (!m || *m != la->schema) return fail(i, "not an instance of schema " + schema_name(la->schema));
    } else if (std::holds_alternative<TheoryAxiomStep>(j)) {
      if (!s.is_axiom(f)) return fail(i, "not an axiom of " + s.name());
    } else if (auto* mp = std::get_if<ModusPonens>(&j)) {
      if (mp->premise >= i || mp->implication >= i) return fail(i, "modus ponens cites a later step");
      const Expr& imp = d.steps[mp->implication].formula;
      if (!is(imp, Kind::Imp) || imp.child(0) != d.steps[mp->premise].formula || imp.child(1) != f)
        return fail(i, "modus ponens does not match");
    } else if (auto* g = std::get_if<Generalization>(&j)) {
      if (g->premise >= i) return fail(i, "generalization cites a later step");
      if (!is(f, Kind::Forall) || f.child(0) != d.steps[g->premise].formula)
        return fail(i, "generalization does not match");
    } else {
      return fail(i, "proper axioms are not allowed in a theory derivation");
    }
  }
  return {};
}

namespace {

// Rule justification of step i from steps [0, i).
std::optional<Justification> rule_justification(const std::vector<Expr>& steps, std::size_t i) {
  const Expr& f = steps[i];
  for (std::size_t a = 0; a < i; ++a) {
    for (std::size_t b = 0; b < i; ++b) {
      const Expr& imp = steps[b];
      if (is(imp, Kind::Imp) && imp.child(1) == f && imp.child(0) == steps[a]) return ModusPonens{a, b};
    }
  }
  if (is(f, Kind::Forall))
    for (std::size_t a = 0; a < i; ++a)
      if (steps[a] == f.child(0)) return Generalization{a};
  return std::nullopt;
}

}  // namespace

std::optional<Derivation> justify(const std::vector<Expr>& steps, const TheoryHandle& s) {
  if (steps.empty()) return std::nullopt;
  Derivation d;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!steps[i].is_formula()) return std::nullopt;
    if (auto m = match_logical_axiom(steps[i])) {
      d.steps.push_back({steps[i], LogicalAxiomStep{*m}});
    } else if (s.is_axiom(steps[i])) {
      d.steps.push_back({steps[i], TheoryAxiomStep{}});
    } else if (auto r = rule_justification(steps, i)) {
      d.steps.push_back({steps[i], *r});
    } else {
      return std::nullopt;
    }
  }
  return d;
}

Derivation justify_with_hypotheses(const std::vector<Expr>& steps) {
  Derivation d;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (auto m = match_logical_axiom(steps[i])) {
      d.steps.push_back({steps[i], LogicalAxiomStep{*m}});
    } else if (auto r = rule_justification(steps, i)) {
      d.steps.push_back({steps[i], *r});
    } else {
      d.steps.push_back({steps[i], Hypothesis{}});
    }
  }
  return d;
}

GodelCode encode(const Derivation& d, const Alphabet& a) { return encode_sequence(d.formulas(), a); }

// ---------------------------------------------------------------------------
// Bounded search

namespace {

struct WordLess {
  bool operator()(const Word& a, const Word& b) const { return a.size() != b.size() ? a.size() < b.size() : a < b; }
};

class Search {
 public:
  Search(const TheoryHandle& theory, const Expr& goal, std::size_t max_len, std::size_t max_expansions)
      : th_(theory), alpha_(theory.alphabet()), goal_(goal), max_len_(max_len), max_expansions_(max_expansions) {
    build_pool();
    saturate();
  }

  ProofResult run() {
    State st;
    add(st, goal_);
    dfs(st);
    ProofResult r;
    r.expansions = expansions_;
    if (best_) {
      r.status = SearchStatus::Found;
      r.derivation = justify(best_steps_, th_);
      r.code = alpha_.code(*best_);
      if (!r.derivation) throw std::logic_error("search produced an unjustified derivation");
    } else {
      r.status = exhausted_ ? SearchStatus::Exhausted : SearchStatus::NoneBelowBound;
    }
    return r;
  }

 private:
  struct Node {
    Expr f;
    Word w;
    std::vector<int> deps;
  };
  struct State {
    std::vector<Node> nodes;
    std::map<Word, int> index;
    std::vector<int> pending;
    std::size_t length = 0;
  };

  void pool_add(const Expr& f, std::vector<Expr>& frontier) {
    if (!f.is_formula()) return;
    Word w = alpha_.word(f);
    if (pool_.count(w)) return;
    pool_.emplace(w, f);
    frontier.push_back(f);
  }

  void build_pool() {
    std::set<std::uint32_t> consts = goal_.constants();
    for (const auto& ax : th_.axioms()) {
      auto cs = ax.constants();
      consts.insert(cs.begin(), cs.end());
    }
    if (consts.empty()) consts.insert(0);
    for (auto c : consts) consts_.push_back(Expr::constant(c));

    std::vector<Expr> frontier;
    pool_add(goal_, frontier);
    for (const auto& ax : th_.axioms()) pool_add(ax, frontier);
    while (!frontier.empty()) {
      Expr f = frontier.back();
      frontier.pop_back();
      for (const auto& c : f.children()) pool_add(c, frontier);
      if (is(f, Kind::Forall) || is(f, Kind::Exists))
        for (const auto& c : consts_) pool_add(substitute(f.child(0), f.index(), c), frontier);
    }
  }

  bool leaf(const Expr& f) const { return match_logical_axiom(f).has_value() || th_.is_axiom(f); }

  // Pool formulas derivable from pool formulas alone.
  void saturate() {
    std::set<Word, WordLess> r;
    bool changed = true;
    for (const auto& [w, f] : pool_)
      if (leaf(f)) r.insert(w);
    while (changed) {
      changed = false;
      for (const auto& [w, f] : pool_) {
        if (r.count(w)) continue;
        bool ok = false;
        if (is(f, Kind::Forall) && r.count(alpha_.word(f.child(0)))) ok = true;
        for (auto it = r.begin(); !ok && it != r.end(); ++it) {
          const Expr& a = pool_.at(*it);
          if (r.count(alpha_.word(Expr::imp(a, f)))) ok = true;
        }
        if (ok) {
          r.insert(w);
          changed = true;
        }
      }
    }
    for (const auto& w : r) derivable_.push_back(pool_.at(w));
  }

  std::vector<Expr> antecedents(const Expr& f) const {
    std::vector<Expr> out;
    for (const auto& [w, p] : pool_)
      if (is(p, Kind::Imp) && p.child(1) == f) out.push_back(p.child(0));
    for (const auto& ax : th_.axioms())
      if (is(ax, Kind::Imp) && ax.child(1) == f) out.push_back(ax.child(0));
    // Antecedents fixed by a schema whose consequent is f.
    if (is(f, Kind::Imp)) {
      const Expr &x = f.child(0), &y = f.child(1);
      out.push_back(y);             // K
      out.push_back(Expr::neg(x));  // neg-elim
      if (is(x, Kind::Imp) && is(y, Kind::Imp) && x.child(0) == y.child(0))
        out.push_back(Expr::imp(x.child(0), Expr::imp(x.child(1), y.child(1))));  // S
      if (is(y, Kind::And) && y.child(1) == x) out.push_back(y.child(0));          // and-intro
      if (is(x, Kind::Imp) && is(y, Kind::Imp) && is(y.child(0), Kind::Or) && y.child(0).child(1) == x.child(0) &&
          y.child(1) == x.child(1))
        out.push_back(Expr::imp(y.child(0).child(0), x.child(1)));  // or-elim
      if (is(x, Kind::Imp) && is(x.child(1), Kind::Not) && is(y, Kind::Not) && y.child(0) == x.child(0))
        out.push_back(Expr::imp(x.child(0), x.child(1).child(0)));  // neg-intro
      if (is(y, Kind::Forall) && !x.free_vars().count(y.index()))
        out.push_back(Expr::forall(y.index(), Expr::imp(x, y.child(0))));  // forall-imp
      if (is(x, Kind::Exists) && !y.free_vars().count(x.index()))
        out.push_back(Expr::forall(x.index(), Expr::imp(x.child(0), y)));  // exists-imp
    }
    if (is(f, Kind::Or)) {
      out.push_back(f.child(0));
      out.push_back(f.child(1));
      const Expr &b = f.child(0), &n = f.child(1);
      if (is(n, Kind::Not) && is(n.child(0), Kind::Exists) && !b.free_vars().count(n.child(0).index()))
        out.push_back(Expr::forall(n.child(0).index(), Expr::disj(b, Expr::neg(n.child(0).child(0)))));
    }
    if (is(f, Kind::Not) && is(f.child(0), Kind::Exists))
      out.push_back(Expr::forall(f.child(0).index(), Expr::neg(f.child(0).child(0))));
    if (is(f, Kind::Exists)) {
      out.push_back(f.child(0));
      for (const auto& c : consts_) out.push_back(substitute(f.child(0), f.index(), c));
    }
    out.push_back(Expr::neg(Expr::neg(f)));
    out.push_back(Expr::bot());
    for (const auto& [w, p] : pool_) {
      if (is(p, Kind::And) && (p.child(0) == f || p.child(1) == f)) out.push_back(p);
      if (is(p, Kind::Forall) && is_instance_of(p.child(0), p.index(), f)) out.push_back(p);
    }
    out.insert(out.end(), derivable_.begin(), derivable_.end());

    std::vector<std::pair<Word, Expr>> keyed;
    std::set<Word> seen;
    for (auto& a : out) {
      if (a == f) continue;
      Word w = alpha_.word(a);
      if (seen.insert(w).second) keyed.emplace_back(std::move(w), std::move(a));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& p, const auto& q) { return WordLess{}(p.first, q.first); });
    std::vector<Expr> res;
    for (auto& [w, a] : keyed) res.push_back(std::move(a));
    return res;
  }

  int add(State& st, const Expr& f) {
    Word w = alpha_.word(f);
    if (auto it = st.index.find(w); it != st.index.end()) return it->second;
    int id = static_cast<int>(st.nodes.size());
    st.length += w.size() + 1;
    st.index.emplace(w, id);
    st.nodes.push_back({f, std::move(w), {}});
    st.pending.push_back(id);
    return id;
  }

  static bool reaches(const State& st, int from, int target) {
    std::vector<int> stack{from};
    std::vector<char> seen(st.nodes.size(), 0);
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      if (n == target) return true;
      if (seen[n]) continue;
      seen[n] = 1;
      for (int d : st.nodes[n].deps) stack.push_back(d);
    }
    return false;
  }

  bool worse_than_best(std::size_t len) const { return len > max_len_ || (best_ && len > best_->size()); }

  void dfs(State& st) {
    if (worse_than_best(st.length)) return;
    if (++expansions_ > max_expansions_) {
      exhausted_ = true;
      return;
    }
    if (st.pending.empty()) {
      finish(st);
      return;
    }
    int cur = st.pending.front();
    st.pending.erase(st.pending.begin());
    const Expr f = st.nodes[cur].f;
    if (leaf(f)) {
      dfs(st);
      return;
    }
    auto try_deps = [&](const std::vector<Expr>& deps) {
      if (exhausted_) return;
      State next = st;
      std::vector<int> ids;
      for (const auto& d : deps) {
        int id = add(next, d);
        if (id == cur || reaches(next, id, cur)) return;
        ids.push_back(id);
      }
      next.nodes[cur].deps = ids;
      dfs(next);
    };
    if (is(f, Kind::Forall)) try_deps({f.child(0)});
    for (const auto& a : antecedents(f)) {
      if (exhausted_) return;
      // Cheap length check before copying state.
      std::size_t extra = 0;
      Word wa = alpha_.word(a);
      if (!st.index.count(wa)) extra += wa.size() + 1;
      Word wi = alpha_.word(Expr::imp(a, f));
      if (!st.index.count(wi)) extra += wi.size() + 1;
      if (worse_than_best(st.length + extra)) continue;
      try_deps({a, Expr::imp(a, f)});
    }
  }

  bool placeable(const Node& n, const std::vector<Expr>& placed) const {
    if (leaf(n.f)) return true;
    for (const auto& a : placed)
      for (const auto& b : placed)
        if (is(b, Kind::Imp) && b.child(1) == n.f && b.child(0) == a) return true;
    if (is(n.f, Kind::Forall))
      for (const auto& a : placed)
        if (a == n.f.child(0)) return true;
    return false;
  }

  void finish(const State& st) {
    std::vector<bool> used(st.nodes.size(), false);
    std::vector<Expr> placed;
    Word word;
    for (std::size_t k = 0; k < st.nodes.size(); ++k) {
      int pick = -1;
      for (std::size_t i = 1; i < st.nodes.size(); ++i) {
        if (used[i] || !placeable(st.nodes[i], placed)) continue;
        if (pick < 0 || st.nodes[i].w < st.nodes[pick].w) pick = static_cast<int>(i);
      }
      if (pick < 0) {
        if (k + 1 != st.nodes.size() || !placeable(st.nodes[0], placed)) return;
        pick = 0;
      }
      used[pick] = true;
      placed.push_back(st.nodes[pick].f);
      word += st.nodes[pick].w;
      word += letter::Sep;
    }
    if (!best_ || WordLess{}(word, *best_)) {
      best_ = word;
      best_steps_ = placed;
    }
  }

  const TheoryHandle& th_;
  const Alphabet& alpha_;
  Expr goal_;
  std::size_t max_len_;
  std::size_t max_expansions_;
  std::map<Word, Expr, WordLess> pool_;
  std::vector<Expr> consts_;
  std::vector<Expr> derivable_;
  std::size_t expansions_ = 0;
  bool exhausted_ = false;
  std::optional<Word> best_;
  std::vector<Expr> best_steps_;
};

std::size_t max_word_length(const GodelCode& bound, const Alphabet& a) {
  if (bound <= GodelCode(1)) return 0;
  return a.word(GodelCode(bound.value() - 1)).size();
}

}  // namespace

Prover::Prover(TheoryHandle theory, SearchLimits limits) : theory_(std::move(theory)), limits_(limits) {}

std::size_t Prover::cache_size() const {
  std::lock_guard<std::mutex> lk(mu_);
  return cache_.size();
}

// Iterative deepening on word length: the first length that admits a
// derivation also holds the least-coded one.
ProofResult Prover::search(const Expr& goal, std::size_t max_len) {
  const std::size_t start = std::min(max_len, theory_.alphabet().word(goal).size() + 1);
  std::size_t spent = 0;
  for (std::size_t len = start;; len = std::min(max_len, len + 4)) {
    ProofResult r = Search(theory_, goal, len, limits_.max_expansions - std::min(spent, limits_.max_expansions)).run();
    spent += r.expansions;
    r.expansions = spent;
    if (r.status != SearchStatus::NoneBelowBound || len == max_len) return r;
  }
}

ProofResult Prover::prove(const Expr& goal, const GodelCode& bound) {
  if (!goal.is_formula()) throw std::invalid_argument("prove: goal is not a formula");
  const std::size_t max_len = max_word_length(bound, theory_.alphabet());
  ProofResult res;
  Word key = theory_.alphabet().word(goal);
  bool cached = false;
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      const Entry& e = it->second;
      if (e.result.status == SearchStatus::Found || e.max_len >= max_len) {
        res = e.result;
        cached = true;
      }
    }
  }
  if (!cached) {
    // Registered schemes are valid, so a structure for the explicit axioms
    // refutes the goal at every bound.
    if (find_countermodel(theory_.axioms(), goal, theory_.signature())) {
      res.status = SearchStatus::NoneBelowBound;
      std::lock_guard<std::mutex> lk(mu_);
      cache_[key] = Entry{std::numeric_limits<std::size_t>::max(), res};
      return res;
    }
    res = search(goal, max_len);
    std::lock_guard<std::mutex> lk(mu_);
    auto& slot = cache_[key];
    // insert-if-absent, keeping the widest search
    if (slot.result.status != SearchStatus::Found && slot.max_len <= max_len) slot = Entry{max_len, res};
    res = slot.result;
  }
  if (res.status == SearchStatus::Found && !(*res.code < bound)) {
    ProofResult none;
    none.status = SearchStatus::NoneBelowBound;
    none.expansions = res.expansions;
    return none;
  }
  if (res.status != SearchStatus::Found && res.status != SearchStatus::Exhausted)
    res.status = SearchStatus::NoneBelowBound;
  return res;
}

ProofResult prove_bounded(const Expr& goal, const TheoryHandle& s, const GodelCode& code_bound) {
  Prover p(s);
  return p.prove(goal, code_bound);
}

// ---------------------------------------------------------------------------
// Consistency

namespace {

std::string shape_key(const Expr& e) {
  std::string k = std::to_string(static_cast<int>(e.kind())) + ":" + std::to_string(e.index()) + "(";
  for (const auto& c : e.children()) k += shape_key(c) + ",";
  return k + ")";
}

void collect_letters(const Expr& e, std::map<std::string, int>& letters) {
  switch (e.kind()) {
    case Kind::Bot:
    case Kind::Top:
      return;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
      for (const auto& c : e.children()) collect_letters(c, letters);
      return;
    default:
      letters.emplace(shape_key(e), static_cast<int>(letters.size()));
  }
}

// Three-valued evaluation: -1 unknown.
int eval3(const Expr& e, const std::map<std::string, int>& letters, const std::vector<int>& val) {
  switch (e.kind()) {
    case Kind::Bot: return 0;
    case Kind::Top: return 1;
    case Kind::Not: {
      int a = eval3(e.child(0), letters, val);
      return a < 0 ? -1 : 1 - a;
    }
    case Kind::And: {
      int a = eval3(e.child(0), letters, val), b = eval3(e.child(1), letters, val);
      if (a == 0 || b == 0) return 0;
      return (a < 0 || b < 0) ? -1 : 1;
    }
    case Kind::Or: {
      int a = eval3(e.child(0), letters, val), b = eval3(e.child(1), letters, val);
      if (a == 1 || b == 1) return 1;
      return (a < 0 || b < 0) ? -1 : 0;
    }
    case Kind::Imp: {
      int a = eval3(e.child(0), letters, val), b = eval3(e.child(1), letters, val);
      if (a == 0 || b == 1) return 1;
      return (a < 0 || b < 0) ? -1 : 0;
    }
    default:
      return val[letters.at(shape_key(e))];
  }
}

bool sat_search(const std::vector<Expr>& gamma, const std::map<std::string, int>& letters, std::vector<int>& val,
                std::size_t next) {
  for (const auto& g : gamma)
    if (eval3(g, letters, val) == 0) return false;
  if (next == val.size()) return true;
  for (int b : {1, 0}) {
    val[next] = b;
    if (sat_search(gamma, letters, val, next + 1)) return true;
  }
  val[next] = -1;
  return false;
}

}  // namespace

bool skeleton_satisfiable(const std::vector<Expr>& gamma) {
  std::map<std::string, int> letters;
  for (const auto& g : gamma) collect_letters(g, letters);
  std::vector<int> val(letters.size(), -1);
  return sat_search(gamma, letters, val, 0);
}

ConsistencyReport is_consistent_bounded(const std::vector<Expr>& gamma, const Signature& sig,
                                        const GodelCode& code_bound) {
  ConsistencyReport rep;
  rep.skeleton_satisfiable = skeleton_satisfiable(gamma);
  std::vector<Expr> sentences;
  for (const auto& g : gamma)
    if (g.is_sentence()) sentences.push_back(g);
  TheoryHandle th("gamma", sig, sentences);
  auto r = prove_bounded(Expr::bot(), th, code_bound);
  rep.bottom_search = r.status;
  rep.refutation = r.derivation;
  rep.consistent = rep.skeleton_satisfiable && !r;
  return rep;
}

}  // namespace satclass
