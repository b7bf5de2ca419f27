#include "satclass/omega.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace satclass {

namespace {

void subformulas(const Expr& e, std::vector<Expr>& out) {
  if (!e.is_formula()) return;
  out.push_back(e);
  for (const auto& c : e.children()) subformulas(c, out);
}

bool free_within(const Expr& psi, std::uint32_t y) {
  auto fv = psi.free_vars();
  return fv.empty() || (fv.size() == 1 && *fv.begin() == y);
}

Expr instance(const Witness& w, std::uint32_t c) { return substitute(w.psi, w.y, Expr::constant(c)); }

}  // namespace

Gamma::Gamma(OmegaContext ctx, SearchLimits limits) : ctx_(std::move(ctx)), prover_(ctx_.theory, limits) {
  if (ctx_.carrier.empty()) throw std::invalid_argument("omega context needs a nonempty carrier");
  if (ctx_.proof_bound <= GodelCode(0) || ctx_.witness_bound <= GodelCode(0))
    throw std::invalid_argument("omega bounds must be positive");
  GodelCode walk = std::min(ctx_.witness_bound, GodelCode(ctx_.witness_walk_cap));
  walk_ = enumerate_unary_formulas(ctx_.theory.alphabet(), ctx_.carrier, walk);
}

bool Gamma::box(const Expr& f) {
  auto r = prover_.prove(f, ctx_.proof_bound);
  if (r.status == SearchStatus::Exhausted) {
    std::lock_guard<std::mutex> lk(mu_);
    exhausted_ = true;
  }
  return static_cast<bool>(r);
}

bool Gamma::exhausted() const {
  std::lock_guard<std::mutex> lk(mu_);
  return exhausted_;
}

std::vector<Witness> Gamma::candidates(const Expr& alpha) {
  const Alphabet& a = ctx_.theory.alphabet();
  std::vector<Witness> out;
  for (const auto& p : walk_) {
    auto fv = p.free_vars();
    out.push_back({p, fv.empty() ? 0u : *fv.begin()});
  }
  auto add = [&](const Expr& psi, std::uint32_t y) {
    if (psi.is_formula() && free_within(psi, y)) out.push_back({psi, y});
  };
  add(alpha, 0);  // constant interpolant
  std::vector<Expr> pool;
  subformulas(alpha, pool);
  for (const auto& ax : ctx_.theory.axioms()) {
    subformulas(ax, pool);
    if (ax.kind() == Kind::Imp && ax.child(1) == alpha && ax.child(0).kind() == Kind::Forall)
      add(ax.child(0).child(0), ax.child(0).index());
  }
  for (const auto& f : pool)
    if (f.kind() == Kind::Forall) add(f.child(0), f.index());
  if (alpha.kind() == Kind::Not && alpha.child(0).kind() == Kind::Exists) {
    const Expr& ex = alpha.child(0);
    add(Expr::neg(ex.child(0)), ex.index());
  }
  if (alpha.kind() == Kind::Or && alpha.child(1).kind() == Kind::Not && alpha.child(1).child(0).kind() == Kind::Exists) {
    const Expr& ex = alpha.child(1).child(0);
    if (!alpha.child(0).free_vars().count(ex.index())) add(Expr::disj(alpha.child(0), Expr::neg(ex.child(0))), ex.index());
  }

  // code order, then variable; drop duplicates and anything at the bound
  std::vector<std::pair<Word, Witness>> keyed;
  for (auto& w : out) {
    Word word = a.word(w.psi);
    if (!(a.code(word) < ctx_.witness_bound)) continue;
    keyed.emplace_back(std::move(word), std::move(w));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& p, const auto& q) {
    if (p.first.size() != q.first.size()) return p.first.size() < q.first.size();
    if (p.first != q.first) return p.first < q.first;
    return p.second.y < q.second.y;
  });
  std::vector<Witness> res;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (i && keyed[i].first == keyed[i - 1].first && keyed[i].second.y == keyed[i - 1].second.y) continue;
    res.push_back(std::move(keyed[i].second));
  }
  return res;
}

Gamma::Entry Gamma::compute(std::size_t n, const Expr& alpha) {
  Entry e;
  if (n == 0) {
    e.holds = box(alpha);
    return e;
  }
  for (const auto& w : candidates(alpha)) {
    if (!box(Expr::imp(Expr::forall(w.y, w.psi), alpha))) continue;
    bool all = true;
    for (auto c : ctx_.carrier)
      if (!(all = holds(n - 1, instance(w, c)))) break;
    if (all) {
      e.holds = true;
      e.witness = w;
      return e;
    }
  }
  return e;
}

bool Gamma::holds(std::size_t n, const Expr& alpha) {
  if (!alpha.is_sentence()) throw std::invalid_argument("gamma: alpha must be a sentence");
  auto key = std::make_pair(n, ctx_.theory.alphabet().word(alpha));
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.holds;
  }
  Entry e = compute(n, alpha);
  std::lock_guard<std::mutex> lk(mu_);
  return memo_.emplace(std::move(key), std::move(e)).first->second.holds;
}

std::optional<Witness> Gamma::witness(std::size_t n, const Expr& alpha) {
  if (!holds(n, alpha)) return std::nullopt;
  std::lock_guard<std::mutex> lk(mu_);
  return memo_.at({n, ctx_.theory.alphabet().word(alpha)}).witness;
}

bool gamma_holds(const OmegaContext& ctx, std::size_t n, const Expr& alpha) {
  Gamma g(ctx);
  return g.holds(n, alpha);
}

namespace {

OmegaContext enlarged(const OmegaContext& ctx, unsigned step) {
  OmegaContext c = ctx;
  const BigInt k = ctx.theory.alphabet().size();
  BigInt pf = 1, wf = 1;
  for (unsigned i = 0; i < 8 * step; ++i) pf *= k;
  for (unsigned i = 0; i < 4 * step; ++i) wf *= k;
  c.proof_bound = GodelCode(ctx.proof_bound.value() * pf);
  c.witness_bound = GodelCode(ctx.witness_bound.value() * wf);
  return c;
}

std::string describe(const OmegaContext& c) {
  return "proof_bound=" + c.proof_bound.str() + " witness_bound=" + c.witness_bound.str();
}

std::vector<Expr> formulas_of(const Derivation& d) {
  std::vector<Expr> out;
  for (const auto& s : d.steps) out.push_back(s.formula);
  return out;
}

// x -> b from derivations of x -> a and x -> (a -> b), via S.
std::vector<Expr> compose_s(std::vector<Expr> xa, const std::vector<Expr>& xab, const Expr& x, const Expr& a,
                            const Expr& b) {
  xa.insert(xa.end(), xab.begin(), xab.end());
  const Expr xb = Expr::imp(x, b);
  const Expr s2 = Expr::imp(Expr::imp(x, a), xb);
  xa.push_back(Expr::imp(Expr::imp(x, Expr::imp(a, b)), s2));
  xa.push_back(s2);
  xa.push_back(xb);
  return xa;
}

// y -> (x -> y) and x -> y
void weaken(std::vector<Expr>& steps, const Expr& x, const Expr& y) {
  steps.push_back(Expr::imp(y, Expr::imp(x, y)));
  steps.push_back(Expr::imp(x, y));
}

}  // namespace

GammaLawReport check_gamma_laws(const OmegaContext& ctx, const std::vector<Expr>& samples, std::size_t n_max) {
  GammaLawReport rep;
  Gamma base(ctx);
  std::vector<std::unique_ptr<Gamma>> wider;
  for (unsigned s = 1; s <= 2; ++s) wider.push_back(std::make_unique<Gamma>(enlarged(ctx, s)));

  // The conclusion may need larger bounds than the premises.
  auto closes = [&](std::size_t n, const Expr& f, LawInstance& inst) {
    if (base.holds(n, f)) {
      inst.closed = true;
      inst.closed_at = describe(ctx);
      return;
    }
    for (auto& g : wider) {
      if (g->holds(n, f)) {
        inst.closed = true;
        inst.closed_at = describe(g->context());
        return;
      }
    }
  };

  for (const auto& phi : samples) {
    LawInstance l1{1, 0, {phi}, false, false, {}};
    l1.premise = static_cast<bool>(base.prover().prove(phi, ctx.proof_bound));
    if (l1.premise) closes(0, phi, l1);
    rep.instances.push_back(l1);
    for (std::size_t n = 0; n <= n_max; ++n) {
      LawInstance l2{2, n, {phi}, false, false, {}};
      l2.premise = base.holds(n, phi);
      if (l2.premise) closes(n + 1, phi, l2);
      rep.instances.push_back(l2);
    }
  }
  // Bounded search does not close under modus ponens: the glued derivation
  // is longer than either half. Build it and have the kernel check it.
  auto proof = [&](const Expr& f) -> std::optional<std::vector<Expr>> {
    auto r = base.prover().prove(f, ctx.proof_bound);
    if (!r) return std::nullopt;
    return formulas_of(*r.derivation);
  };
  auto certified = [&](const std::vector<Expr>& steps, LawInstance& inst, const char* how) {
    auto d = justify(steps, ctx.theory);
    if (!d || !check_derivation(*d, ctx.theory) || !(d->steps.back().formula == steps.back())) return;
    inst.closed = true;
    inst.closed_at = std::string(how) + ", " + std::to_string(d->steps.size()) + " steps";
  };
  auto compose = [&](std::size_t n, const Expr& a, const Expr& b, LawInstance& inst) {
    const Expr ab = Expr::imp(a, b);
    auto pa = proof(a), pab = proof(ab);
    if (n == 0) {
      if (pa && pab) {
        auto steps = *pa;
        steps.insert(steps.end(), pab->begin(), pab->end());
        steps.push_back(b);
        certified(steps, inst, "composed");
      }
      return;
    }
    auto wa = base.witness(n, a), wab = base.witness(n, ab);
    if (wa && pab) {  // forall psi_a -> a, then a -> b
      const Expr x = Expr::forall(wa->y, wa->psi);
      auto xa = proof(Expr::imp(x, a));
      if (!xa) return;
      std::vector<Expr> xab = *pab;
      weaken(xab, x, ab);
      certified(compose_s(*xa, xab, x, a, b), inst, "composed, witness of the antecedent");
    } else if (wab && pa) {  // forall psi_ab -> (a -> b), and a
      const Expr x = Expr::forall(wab->y, wab->psi);
      auto xab = proof(Expr::imp(x, ab));
      if (!xab) return;
      std::vector<Expr> xa = *pa;
      weaken(xa, x, a);
      certified(compose_s(xa, *xab, x, a, b), inst, "composed, witness of the implication");
    } else if (wa && wab && wa->y == wab->y && wa->psi == wab->psi) {
      const Expr x = Expr::forall(wa->y, wa->psi);
      auto xa = proof(Expr::imp(x, a)), xab = proof(Expr::imp(x, ab));
      if (xa && xab) certified(compose_s(*xa, *xab, x, a, b), inst, "composed, shared witness");
    }
  };

  for (const auto& a : samples) {
    for (const auto& b : samples) {
      const Expr ab = Expr::imp(a, b);
      for (std::size_t n = 0; n <= n_max; ++n) {
        LawInstance l3{3, n, {a, b}, false, false, {}};
        l3.premise = base.holds(n, a) && base.holds(n, ab);
        if (l3.premise) closes(n, b, l3);
        if (l3.premise && !l3.closed) compose(n, a, b, l3);
        rep.instances.push_back(l3);
      }
    }
  }
  for (const auto& i : rep.instances)
    if (i.premise && !i.closed) ++rep.counterexamples;
  return rep;
}

std::vector<std::pair<std::size_t, bool>> q_axioms(Gamma& g, std::size_t n_max) {
  std::vector<std::pair<std::size_t, bool>> out;
  for (std::size_t n = 0; n <= n_max; ++n) out.emplace_back(n, g.holds(n, Expr::bot()));
  return out;
}

EliminationResult eliminate_existential(Gamma& g, const FiniteModel& m, const Expr& theta, const Expr& psi,
                                        std::size_t n_max) {
  if (!theta.is_sentence()) throw std::invalid_argument("theta must be a sentence");
  auto fv = psi.free_vars();
  if (fv.size() != 1) throw std::invalid_argument("psi must have exactly one free variable");
  const std::uint32_t x = *fv.begin();
  if (theta.free_vars().count(x)) throw std::invalid_argument("x free in theta");

  EliminationResult res;
  for (auto z : m.carrier()) {
    const Expr inst = Expr::disj(theta, Expr::neg(substitute(psi, x, Expr::constant(z))));
    std::optional<std::size_t> found;
    for (std::size_t n = 0; n <= n_max && !found; ++n)
      if (g.holds(n, inst)) found = n;
    if (!found) {
      res.realizer = z;
      res.outcome = g.exhausted() ? EliminationOutcome::BoundsExhausted : EliminationOutcome::LocallySatisfiable;
      return res;
    }
    res.level[z] = *found;
  }
  std::size_t top = 0;
  for (const auto& [z, n] : res.level) top = std::max(top, n);
  res.m_prime = top + 1;
  res.outcome = EliminationOutcome::Eliminated;
  res.self_check = g.holds(*res.m_prime, Expr::disj(theta, Expr::neg(Expr::exists(x, psi))));
  return res;
}

}  // namespace satclass
