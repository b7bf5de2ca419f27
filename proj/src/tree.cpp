#include "satclass/tree.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace satclass {

namespace {

constexpr std::uint64_t kMaxUniverse = 1u << 22;

}  // namespace

Universe::Universe(const Alphabet& a, const GodelCode& K, std::function<bool(std::uint32_t)> constant_ok)
    : alpha_(a) {
  if (K > GodelCode(kMaxUniverse)) throw std::range_error("universe bound too large: " + K.str());
  size_ = K.value().convert_to<std::uint64_t>();
  sentence_.assign(size_, 0);
  if (size_ == 0) return;

  std::vector<std::pair<std::uint64_t, std::vector<Expr>>> seqs;
  WordCursor cur(a.size());
  for (std::uint64_t c = 1; c < size_; ++c) {
    cur.next();
    const Word& w = cur.word();
    if (w.back() == letter::Sep) {
      if (auto s = a.parse_sequence(w)) seqs.emplace_back(c, std::move(*s));
      continue;
    }
    auto e = a.parse_expr(w);
    if (!e || !e->is_sentence()) continue;
    auto cs = e->constants();
    if (!std::all_of(cs.begin(), cs.end(), constant_ok)) continue;
    sentence_[c] = 1;
    order_.push_back(c);
    formulas_.emplace(c, std::move(*e));
  }
  for (auto c : order_) {
    const Expr& f = formulas_.at(c);
    if (f.kind() != Kind::Not) continue;
    if (auto t = code_of(f.child(0))) {
      neg_[*t] = c;
      base_[c] = *t;
    }
  }
  for (auto& [c, steps] : seqs) {
    Derivation d = justify_with_hypotheses(steps);
    Deriv out{c, {}, {}, false};
    bool content = false;
    for (const auto& st : d.steps) {
      const bool hyp = std::holds_alternative<Hypothesis>(st.justification);
      auto code = st.formula.is_sentence() ? code_of(st.formula) : std::nullopt;
      if (hyp) {
        if (code)
          out.hypotheses.push_back(*code);
        else
          out.open_hypothesis = true;
      } else if (code) {
        out.sentences.push_back(*code);
        content = true;
      }
    }
    // a derivation made only of assumptions forces nothing
    if (!content || out.open_hypothesis) continue;
    std::sort(out.hypotheses.begin(), out.hypotheses.end());
    out.hypotheses.erase(std::unique(out.hypotheses.begin(), out.hypotheses.end()), out.hypotheses.end());
    derivs_.push_back(std::move(out));
  }
}

const Expr& Universe::formula(std::uint64_t c) const {
  auto it = formulas_.find(c);
  if (it == formulas_.end()) throw std::out_of_range("code " + std::to_string(c) + " is not a universe sentence");
  return it->second;
}

std::optional<std::uint64_t> Universe::code_of(const Expr& e) const {
  GodelCode c = encode(e, alpha_);
  if (!(c < GodelCode(size_))) return std::nullopt;
  auto v = c.value().convert_to<std::uint64_t>();
  if (!sentence_[v]) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> Universe::negation(std::uint64_t c) const {
  if (auto it = neg_.find(c); it != neg_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::uint64_t> Universe::negated(std::uint64_t c) const {
  if (auto it = base_.find(c); it != base_.end()) return it->second;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::vector<Expr> AxiomSetAM::formulas() const {
  std::vector<Expr> out;
  for (const auto& e : entries_) out.push_back(e.formula);
  return out;
}

nlohmann::json AxiomSetAM::to_json(const Signature& sig) const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : entries_) {
    nlohmann::json j{{"code", e.code.str()}, {"formula", to_text(e.formula, sig)}};
    if (e.source == AMEntry::Source::Provable) {
      j["source"] = "provable";
      if (e.derivation_code) j["derivation"] = e.derivation_code->str();
    } else {
      j["source"] = "witness_axiom";
      j["n"] = *e.n;
    }
    out.push_back(std::move(j));
  }
  return out;
}

AxiomSetAM build_AM(Gamma& gamma, const HenkinGrid& g, const Universe& u) {
  AxiomSetAM am;
  const GodelCode& bound = gamma.context().proof_bound;
  for (auto c : u.sentences()) {
    auto r = gamma.prover().prove(u.formula(c), bound);
    if (r.status == SearchStatus::Exhausted) ++am.exhausted_;
    if (!r) continue;
    am.entries_.push_back({u.formula(c), GodelCode(c), AMEntry::Source::Provable, std::nullopt, r.code});
    am.below_.insert(c);
  }
  for (std::size_t n = 0; n < g.rows(); ++n) {
    Expr f = g.F(n);
    GodelCode code = encode(f, u.alphabet());
    am.entries_.push_back({f, code, AMEntry::Source::WitnessAxiom, n, std::nullopt});
    if (auto c = u.code_of(f)) am.below_.insert(*c);
  }
  return am;
}

// ---------------------------------------------------------------------------

TruthAssignment TruthAssignment::prefix(std::uint64_t k) const {
  if (k > length()) throw std::out_of_range("prefix longer than assignment");
  TruthAssignment t(k);
  std::copy(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(k), t.bits_.begin());
  return t;
}

std::vector<std::uint64_t> TruthAssignment::ones() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 0; c < bits_.size(); ++c)
    if (bits_[c]) out.push_back(c);
  return out;
}

nlohmann::json TruthAssignment::rle() const {
  nlohmann::json out = nlohmann::json::array();
  std::uint64_t i = 0;
  while (i < bits_.size()) {
    std::uint64_t j = i;
    while (j < bits_.size() && bits_[j] == bits_[i]) ++j;
    out.push_back({bits_[i] ? 1 : 0, j - i});
    i = j;
  }
  return out;
}

TruthAssignment TruthAssignment::from_rle(const nlohmann::json& j) {
  std::vector<char> bits;
  for (const auto& run : j) {
    auto b = run.at(0).get<int>();
    auto n = run.at(1).get<std::uint64_t>();
    bits.insert(bits.end(), n, b ? 1 : 0);
  }
  TruthAssignment t;
  t.bits_ = std::move(bits);
  return t;
}

// ---------------------------------------------------------------------------

namespace {

// All violations of clauses (i)-(iv), at most `limit` of them.
std::vector<NodeCheck> violations(const TruthAssignment& t, const AxiomSetAM& am, const Universe& u,
                                  std::size_t limit) {
  std::vector<NodeCheck> out;
  const std::uint64_t l = t.length();
  if (l > u.size()) throw std::invalid_argument("assignment longer than the universe");
  auto fail = [&](int clause, std::uint64_t code, std::string why) {
    if (out.size() < limit) out.push_back({false, clause, code, std::move(why)});
  };
  for (std::uint64_t c = 0; c < l; ++c)
    if (t.bit(c) && !u.is_sentence(c)) fail(1, c, "1 on a non-sentence");
  for (auto c : am.codes_below())
    if (c < l && !t.bit(c)) fail(2, c, "A_M member carries 0");
  for (auto c : u.sentences()) {
    if (c >= l) break;
    if (auto n = u.negation(c); n && *n < l && t.bit(c) == t.bit(*n))
      fail(3, c, "sentence and negation " + std::to_string(*n) + " carry the same bit");
  }
  for (const auto& d : u.derivations()) {
    if (d.code >= l) break;
    if (!std::all_of(d.hypotheses.begin(), d.hypotheses.end(), [&](auto h) { return t.bit(h); })) continue;
    for (auto s : d.sentences)
      if (!t.bit(s)) fail(4, s, "derivation " + std::to_string(d.code) + " forces 1");
  }
  return out;
}

class Closure {
 public:
  Closure(std::uint64_t k, const Universe& u, const Guide& guide) : k_(k), u_(u), guide_(guide) {
    val_.assign(k, -1);
    why_.assign(k, {});
    watch_.assign(k, {});
    for (std::uint64_t c = 0; c < k; ++c)
      if (!u.is_sentence(c)) val_[c] = 0;
    for (std::size_t i = 0; i < u.derivations().size(); ++i) {
      const auto& d = u.derivations()[i];
      if (d.code >= k) break;
      if (d.hypotheses.empty()) free_.push_back(i);
      for (auto h : d.hypotheses) watch_[h].push_back(i);
    }
  }

  bool force(std::uint64_t c, bool v, const std::string& why) {
    queue_.clear();
    queue_.push_back({c, v, why});
    return drain();
  }

  bool fire_free() {
    queue_.clear();
    for (auto i : free_) enqueue_steps(i);
    return drain();
  }

  std::uint64_t conflict() const { return conflict_; }
  std::size_t backtracks() const { return backtracks_; }

  // Decide every open sentence in code order; false if no completion exists
  // within `budget` backtracks.
  bool complete(std::size_t budget) {
    struct Frame {
      std::size_t unit;
      std::size_t mark;
      bool first;
      bool second_tried;
    };
    const auto& units = u_.sentences();
    std::vector<Frame> stack;
    std::size_t i = 0;
    while (true) {
      while (i < units.size() && units[i] < k_ && val_[units[i]] != -1) ++i;
      if (i >= units.size() || units[i] >= k_) return true;
      const std::uint64_t c = units[i];
      const bool pref = preferred(c);
      const std::size_t mark = trail_.size();
      if (force(c, pref, guide_ ? "choice (model)" : "choice (default)")) {
        stack.push_back({i, mark, pref, false});
        continue;
      }
      undo(mark);
      if (force(c, !pref, "choice (flipped)")) {
        stack.push_back({i, mark, pref, true});
        continue;
      }
      undo(mark);
      // backtrack to the latest frame with an untried branch
      bool resumed = false;
      while (!stack.empty()) {
        if (++backtracks_ > budget) return false;
        Frame f = stack.back();
        stack.pop_back();
        undo(f.mark);
        if (f.second_tried) continue;
        if (force(units[f.unit], !f.first, "choice (flipped)")) {
          stack.push_back({f.unit, f.mark, f.first, true});
          i = f.unit;
          resumed = true;
          break;
        }
        undo(f.mark);
      }
      if (!resumed) return false;
    }
  }

  TruthAssignment result(std::map<std::uint64_t, std::string>& prov) const {
    TruthAssignment t(k_);
    for (std::uint64_t c = 0; c < k_; ++c) {
      if (val_[c] != 1) continue;
      t.set(c, true);
      prov[c] = why_[c];
    }
    return t;
  }

 private:
  struct Item {
    std::uint64_t code;
    bool value;
    std::string why;
  };

  bool preferred(std::uint64_t c) const {
    if (guide_)
      if (auto g = guide_(u_.formula(c))) return *g;
    // lower member of a pair first gets 1; a lone sentence stays 0
    auto n = u_.negation(c);
    auto b = u_.negated(c);
    return (n && *n < k_) || (b && *b < k_);
  }

  void enqueue_steps(std::size_t i) {
    const auto& d = u_.derivations()[i];
    for (auto s : d.sentences) queue_.push_back({s, true, "derivation " + std::to_string(d.code)});
  }

  bool drain() {
    while (!queue_.empty()) {
      Item it = std::move(queue_.front());
      queue_.pop_front();
      const std::uint64_t c = it.code;
      if (val_[c] == (it.value ? 1 : 0)) continue;
      if (val_[c] != -1) {
        conflict_ = c;
        queue_.clear();
        return false;
      }
      val_[c] = it.value ? 1 : 0;
      why_[c] = std::move(it.why);
      trail_.push_back(c);
      if (auto n = u_.negation(c); n && *n < k_) queue_.push_back({*n, !it.value, "complement of " + std::to_string(c)});
      if (auto b = u_.negated(c); b && *b < k_) queue_.push_back({*b, !it.value, "complement of " + std::to_string(c)});
      if (!it.value) continue;
      for (auto i : watch_[c]) {
        const auto& d = u_.derivations()[i];
        if (std::all_of(d.hypotheses.begin(), d.hypotheses.end(), [&](auto h) { return val_[h] == 1; }))
          enqueue_steps(i);
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      val_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  std::uint64_t k_;
  const Universe& u_;
  const Guide& guide_;
  std::vector<signed char> val_;
  std::vector<std::string> why_;
  std::vector<std::vector<std::size_t>> watch_;
  std::vector<std::size_t> free_;
  std::vector<std::uint64_t> trail_;
  std::deque<Item> queue_;
  std::uint64_t conflict_ = 0;
  std::size_t backtracks_ = 0;
};

constexpr std::size_t kBacktrackBudget = 1'000'000;

}  // namespace

NodeCheck is_node(const TruthAssignment& t, const AxiomSetAM& am, const Universe& u) {
  auto v = violations(t, am, u, 1);
  return v.empty() ? NodeCheck{} : v.front();
}

NodeCheck derivation_clause(const std::vector<Expr>& steps, const std::function<bool(const Expr&)>& bit) {
  Derivation d = justify_with_hypotheses(steps);
  for (const auto& st : d.steps)
    if (std::holds_alternative<Hypothesis>(st.justification) && !(st.formula.is_sentence() && bit(st.formula)))
      return {};
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const Expr& f = d.steps[i].formula;
    if (f.is_sentence() && !bit(f)) return {false, 4, i, "step " + std::to_string(i) + " is forced to 1"};
  }
  return {};
}

ClosureResult k_closure(std::uint64_t k, const std::map<std::uint64_t, bool>& seed, const AxiomSetAM& am,
                        const Universe& u, const Guide& guide) {
  if (k > u.size()) throw std::invalid_argument("k beyond the universe");
  for (const auto& [c, v] : seed) {
    if (c >= k) throw std::invalid_argument("seed code " + std::to_string(c) + " not below k");
    if (v && !u.is_sentence(c)) throw std::invalid_argument("seed puts 1 on non-sentence " + std::to_string(c));
    auto n = u.negation(c);
    if (n && seed.count(*n) && seed.at(*n) == v) throw std::invalid_argument("inconsistent seed at " + std::to_string(c));
  }

  ClosureResult res;
  Closure cl(k, u, guide);
  auto stuck = [&](const std::string& stage) {
    res.diagnostic = "no node of length " + std::to_string(k) + ": " + stage + " conflict at code " +
                     std::to_string(cl.conflict());
    return res;
  };
  for (auto c : am.codes_below())
    if (c < k && !cl.force(c, true, "A_M")) return stuck("A_M");
  if (!cl.fire_free()) return stuck("closure");
  for (const auto& [c, v] : seed)
    if (!cl.force(c, v, "seed")) return stuck("seed");
  const bool ok = cl.complete(kBacktrackBudget);
  res.backtracks = cl.backtracks();
  if (!ok) {
    res.diagnostic = res.backtracks > kBacktrackBudget
                         ? "no node of length " + std::to_string(k) + " found within the backtrack budget"
                         : "no node of length " + std::to_string(k) + ": every sign vector fails";
    return res;
  }
  TruthAssignment t = cl.result(res.provenance);
  if (auto chk = is_node(t, am, u); !chk)
    throw std::logic_error("closure produced a non-node: clause " + std::to_string(chk.clause) + " at " +
                           std::to_string(chk.code));
  res.node = std::move(t);
  return res;
}

Guide model_guide(const FiniteModel& m) {
  return [m](const Expr& e) -> std::optional<bool> {
    if (!m.interprets(e)) return std::nullopt;
    try {
      return m.evaluate(e) == 1;
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
}

PathResult find_path(const AxiomSetAM& am, const Universe& u, const Signature& sig, const GodelCode& proof_bound,
                     const Guide& guide, const FiniteModel* model) {
  PathResult out;
  const auto members = am.formulas();
  bool certified = false;
  if (model) {
    auto g = model_guide(*model);
    certified = std::all_of(members.begin(), members.end(), [&](const Expr& f) { return g(f) == true; });
  }
  if (certified) {
    out.consistency.model_certificate = true;
  } else {
    out.consistency = is_consistent_bounded(members, sig, proof_bound);
    if (!out.consistency.consistent) throw PathError("A_M is inconsistent at the proof bound");
  }
  auto r = k_closure(u.size(), {}, am, u, guide);
  if (!r.node) throw PathError(r.diagnostic);
  out.path = std::move(*r.node);
  out.provenance = std::move(r.provenance);
  out.backtracks = r.backtracks;
  return out;
}

TruthSet extract_T(const TruthAssignment& p, const AxiomSetAM& am, const Universe& u) {
  TruthSet ts;
  if (p.length() != u.size()) ts.violations.push_back("path length differs from the universe");
  for (auto c : p.ones()) ts.codes.insert(c);
  if (ts.codes.count(encode(Expr::bot(), u.alphabet()).value().convert_to<std::uint64_t>()))
    ts.violations.push_back("bot in T");
  for (const auto& v : violations(p, am, u, 50)) {
    static const char* names[] = {"", "non-sentence", "A_M", "complete/consistent", "closed"};
    ts.violations.push_back(std::string(names[v.clause]) + ": code " + std::to_string(v.code) + ", " + v.detail);
  }
  return ts;
}

nlohmann::json path_json(const PathResult& p, const Universe& u, const Signature& sig) {
  nlohmann::json prov = nlohmann::json::array();
  for (const auto& [c, why] : p.provenance)
    prov.push_back({{"code", c}, {"formula", to_text(u.formula(c), sig)}, {"why", why}});
  return {{"universe", u.size()},
          {"length", p.path.length()},
          {"bits", p.path.rle()},
          {"ones", p.path.ones().size()},
          {"backtracks", p.backtracks},
          {"consistency",
           {{"model_certificate", p.consistency.model_certificate},
            {"consistent", p.consistency.consistent},
            {"skeleton_satisfiable", p.consistency.skeleton_satisfiable}}},
          {"provenance", prov}};
}

}  // namespace satclass
