#include "satclass/satisfaction.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace satclass {

namespace {

constexpr std::size_t kKeepFailures = 20;

// fn(i) for i < count on `jobs` threads; results land by index.
template <class R, class F>
std::vector<R> parallel_map(std::size_t count, unsigned jobs, F fn) {
  std::vector<R> out(count);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) out[i] = fn(i);
    });
  for (auto& th : pool) th.join();
  return out;
}

nlohmann::json failures_json(const std::vector<Failure>& fs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : fs) out.push_back({{"codes", f.codes}, {"detail", f.detail}});
  return out;
}

Expr universal_closure(Expr f) {
  auto fv = f.free_vars();
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) f = Expr::forall(*it, f);
  return f;
}

std::uint32_t free_variable(const Expr& f) { return *f.free_vars().begin(); }

}  // namespace

std::optional<bool> ExpandedModel::T(const Expr& sigma) const {
  auto c = u_.code_of(sigma);
  if (!c) return std::nullopt;
  return T(*c);
}

void ConditionReport::fail(std::vector<std::uint64_t> codes, std::string detail) {
  ++failed;
  if (failures.size() < kKeepFailures) failures.push_back({std::move(codes), std::move(detail)});
}

nlohmann::json ConditionReport::to_json() const {
  return {{"checked", checked},
          {"failed", failed},
          {"skipped", skipped},
          {"failures", failures_json(failures)},
          {"witnesses", witnesses}};
}

bool TarskiReport::ok() const {
  return std::all_of(condition.begin(), condition.end(), [](const auto& c) { return c.failed == 0; });
}

nlohmann::json TarskiReport::to_json() const {
  nlohmann::json out;
  for (std::size_t i = 0; i < condition.size(); ++i) out[std::to_string(i + 1)] = condition[i].to_json();
  return out;
}

TarskiReport check_tarski(const ExpandedModel& n, const HenkinGrid* grid) {
  TarskiReport rep;
  const Universe& u = n.universe();
  const FiniteModel& m = n.base();
  const Signature& sig = m.signature();
  auto& c1 = rep.condition[0];
  auto& c2 = rep.condition[1];
  auto& c3 = rep.condition[2];
  auto& c4 = rep.condition[3];
  auto& c5 = rep.condition[4];

  for (auto c : n.truth()) {
    ++c1.checked;
    if (!u.is_sentence(c)) c1.fail({c}, "member is not a sentence");
  }

  // psi_n matching phi (free in v), if any grid row has it
  auto row_for = [&](const Expr& phi, std::uint32_t v) -> std::optional<std::size_t> {
    if (!grid) return std::nullopt;
    // compare with the free variable replaced by a constant neither uses
    const Expr probe = Expr::constant(0xfffffff0u);
    const Expr target = substitute(phi, v, probe);
    for (std::size_t i = 0; i < grid->rows(); ++i) {
      const Expr& p = grid->psi()[i];
      if (substitute(p, free_variable(p), probe) == target) return i;
    }
    return std::nullopt;
  };
  // the ~exists direction: some carrier instance of phi has the wanted bit
  auto log_witness = [&](ConditionReport& rep5, std::uint64_t code, const Expr& phi, std::uint32_t v,
                         std::uint32_t carrier_c) {
    nlohmann::json w{{"sentence", code}, {"formula", to_text(u.formula(code), sig)}, {"carrier_constant", carrier_c}};
    if (auto row = row_for(phi, v)) {
      const Expr& p = grid->psi()[*row];
      const Expr F = grid->F(*row);
      w["route"] = "F_n";
      w["n"] = *row;
      if (auto t = n.T(F)) w["F_in_T"] = *t;
      const auto& cs = grid->row(*row);
      for (std::size_t j = 0; j < cs.size(); ++j) {
        const Expr inst = substitute(p, free_variable(p), Expr::constant(cs[j]));
        if (m.evaluate(inst) != 1) continue;
        w["j"] = j;
        w["constant"] = cs[j];
        w["denotation"] = m.extra_constants().at(cs[j]);
        if (auto t = n.T(inst)) w["instance_in_T"] = *t;
        break;
      }
    } else {
      w["route"] = "carrier";
    }
    rep5.witnesses.push_back(std::move(w));
  };

  for (auto c : u.sentences()) {
    const Expr& f = u.formula(c);
    const bool in = n.T(c);
    auto sub = [&](std::size_t i) { return *u.code_of(f.child(i)); };
    switch (f.kind()) {
      case Kind::Atom:
      case Kind::Eq:
      case Kind::Bot:
      case Kind::Top: {
        ++c2.checked;
        const bool truth = f.kind() == Kind::Top || (f.kind() != Kind::Bot && m.atomic_truth(f) == 1);
        if (truth != in) c2.fail({c}, in ? "false atom in T" : "true atom outside T");
        break;
      }
      case Kind::Not: {
        ++c3.checked;
        const auto t = sub(0);
        if (in == n.T(t)) c3.fail({c, t}, "negation and its body on the same side");
        break;
      }
      case Kind::And:
      case Kind::Or:
      case Kind::Imp: {
        ++c4.checked;
        const auto a = sub(0), b = sub(1);
        const bool x = n.T(a), y = n.T(b);
        const bool want = f.kind() == Kind::And ? (x && y) : f.kind() == Kind::Or ? (x || y) : (!x || y);
        if (want != in) c4.fail({c, a, b}, "connective not compositional");
        break;
      }
      case Kind::Forall:
      case Kind::Exists: {
        ++c5.checked;
        const bool all = f.kind() == Kind::Forall;
        const std::uint32_t v = f.index();
        const Expr& body = f.child(0);
        std::size_t beyond = 0;
        std::optional<std::uint32_t> odd;  // an instance on the side that decides the quantifier
        std::vector<std::uint64_t> wrong;
        for (auto k : m.carrier()) {
          const Expr inst = substitute(body, v, Expr::constant(k));
          auto t = n.T(inst);
          if (!t) {
            ++beyond;
            continue;
          }
          // forall: an instance outside T; exists: an instance in T
          if (*t != all && !odd) odd = k;
          if (*t == all) continue;
          wrong.push_back(*u.code_of(inst));
        }
        const bool decided = all ? !in : in;  // T needs an odd instance
        if (!decided) {
          if (!wrong.empty()) {
            wrong.insert(wrong.begin(), c);
            c5.fail(wrong, all ? "forall in T with an instance outside T" : "exists outside T with an instance in T");
          }
          c5.skipped += beyond;
        } else if (odd) {
          log_witness(c5, c, all ? Expr::neg(body) : body, v, *odd);
          c5.skipped += beyond;
        } else if (beyond) {
          c5.skipped += beyond;
        } else {
          c5.fail({c}, all ? "forall outside T but every instance in T" : "exists in T but no instance in T");
        }
        break;
      }
      default:
        break;
    }
  }
  return rep;
}

bool ReflectionReport::ok() const {
  return failures.empty() && std::all_of(levels.begin(), levels.end(), [](const Level& l) { return l.failures.empty(); });
}

nlohmann::json ReflectionReport::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& l : levels)
    lv.push_back({{"n", l.n}, {"checked", l.checked}, {"failed", l.failures.size()}, {"failures", failures_json(l.failures)}});
  return {{"provable", provable}, {"failed", failures.size()}, {"failures", failures_json(failures)}, {"levels", lv}};
}

ReflectionReport check_reflection(const ExpandedModel& n, Gamma& g, std::size_t n_max, unsigned jobs) {
  ReflectionReport rep;
  const Universe& u = n.universe();
  const auto& sents = u.sentences();
  const GodelCode& bound = g.context().proof_bound;
  auto proofs = parallel_map<ProofResult>(sents.size(), jobs, [&](std::size_t i) {
    return g.prover().prove(u.formula(sents[i]), bound);
  });
  for (std::size_t i = 0; i < sents.size(); ++i) {
    if (!proofs[i]) continue;
    ++rep.provable;
    if (!n.T(sents[i]))
      rep.failures.push_back({{sents[i], proofs[i].code->value().convert_to<std::uint64_t>()},
                              "provable sentence outside T (codes: sentence, derivation)"});
  }
  std::vector<std::uint64_t> outside;
  for (auto c : sents)
    if (!n.T(c)) outside.push_back(c);
  for (std::size_t lvl = 1; lvl <= n_max; ++lvl) {
    ReflectionReport::Level l{lvl, outside.size(), {}};
    auto holds = parallel_map<char>(outside.size(), jobs, [&](std::size_t i) {
      return static_cast<char>(g.holds(lvl, u.formula(outside[i])));
    });
    for (std::size_t i = 0; i < outside.size(); ++i)
      if (holds[i]) l.failures.push_back({{outside[i]}, "Gamma_" + std::to_string(lvl) + " holds outside T"});
    rep.levels.push_back(std::move(l));
  }
  return rep;
}

bool QReport::ok() const {
  return !bot_in_T && std::none_of(levels.begin(), levels.end(), [](const auto& l) { return l.second; });
}

nlohmann::json QReport::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& [n, h] : levels) lv.push_back({{"n", n}, {"gamma_bot", h}});
  return {{"bot_in_T", bot_in_T}, {"levels", lv}, {"ok", ok()}};
}

QReport check_Q(const ExpandedModel& n, Gamma& g, std::size_t n_max) {
  QReport rep;
  rep.bot_in_T = n.T(Expr::bot()).value_or(false);
  rep.levels = q_axioms(g, n_max);
  return rep;
}

nlohmann::json AgreementReport::to_json() const {
  return {{"settled", settled},
          {"disagree_T", disagree_T},
          {"model_satisfies_S", model_satisfies_S},
          {"disagree_model", disagree_model},
          {"failures", failures_json(failures)}};
}

AgreementReport check_agreement(const ExpandedModel& n, Gamma& g, unsigned jobs) {
  AgreementReport rep;
  const Universe& u = n.universe();
  const FiniteModel& m = n.base();
  const auto& sents = u.sentences();
  const GodelCode& bound = g.context().proof_bound;
  rep.model_satisfies_S = true;
  for (const auto& ax : g.context().theory.axioms())
    if (m.evaluate(universal_closure(ax)) != 1) rep.model_satisfies_S = false;

  // 1: proves sigma, -1: proves ~sigma, 0: neither
  auto side = parallel_map<int>(sents.size(), jobs, [&](std::size_t i) {
    const Expr& f = u.formula(sents[i]);
    if (g.prover().prove(f, bound)) return 1;
    if (g.prover().prove(Expr::neg(f), bound)) return -1;
    return 0;
  });
  for (std::size_t i = 0; i < sents.size(); ++i) {
    if (!side[i]) continue;
    ++rep.settled;
    const bool want = side[i] > 0;
    const auto c = sents[i];
    if (n.T(c) != want) {
      ++rep.disagree_T;
      if (rep.failures.size() < kKeepFailures) rep.failures.push_back({{c}, "T disagrees with the settled side"});
    }
    if (rep.model_satisfies_S && (m.evaluate(u.formula(c)) == 1) != want) {
      ++rep.disagree_model;
      if (rep.failures.size() < kKeepFailures) rep.failures.push_back({{c}, "model disagrees with the settled side"});
    }
  }
  return rep;
}

}  // namespace satclass
