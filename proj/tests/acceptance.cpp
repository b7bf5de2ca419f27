// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "satclass/coding.hpp"
#include "satclass/henkin.hpp"
#include "satclass/omega.hpp"
#include "satclass/pipeline.hpp"
#include "satclass/proof.hpp"
#include "satclass/satisfaction.hpp"
#include "satclass/world.hpp"
#include "support/brute.hpp"
#include "support/gen.hpp"

using namespace satclass;
using namespace satclass::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kExamples = fs::path(SATCLASS_FIXTURES) / "examples";
// consistent bundled theories; with_bot is the inconsistent one
const std::vector<std::string> kConsistent{"forall_p", "modus_ponens", "omega_q", "forall_p3", "literals", "inclusion"};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Fixture {
  Signature sig;
  TheoryHandle theory;
  FiniteModel model;
  std::vector<Expr> samples;
};

Fixture load(const std::string& name) {
  const fs::path d = kExamples / name;
  auto sig = Signature::parse(slurp(d / "signature.txt"));
  auto th = TheoryHandle::parse(slurp(d / "theory.txt"), sig);
  auto m = FiniteModel::parse(slurp(d / "model.txt"), sig);
  std::vector<Expr> samples;
  std::istringstream in(slurp(d / "samples.txt"));
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) samples.push_back(parse_formula(line, sig));
  return {sig, th, m, samples};
}

RunConfig run_config(const std::string& name, const fs::path& out) {
  RunConfig c;
  c.signature_path = kExamples / name / "signature.txt";
  c.theory_path = kExamples / name / "theory.txt";
  c.model_path = kExamples / name / "model.txt";
  c.K = "20000";
  c.proof_bound = "len:12";
  c.witness_bound = "len:8";
  c.n_max = 2;
  c.output_dir = out;
  return c;
}

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double s) {
  std::ostringstream o;
  o.precision(2);
  o << std::fixed << s << " s";
  return o.str();
}

// 1 -------------------------------------------------------------------------
Verdict coding_monotonicity() {
  auto t0 = std::chrono::steady_clock::now();
  const Signature sig = mixed_signature(true);
  const Alphabet a(sig);
  ExprGen gen(sig, 20240611);
  std::size_t exprs = 0, seqs = 0, bad = 0;
  for (int i = 0; i < 10000; ++i) {
    Expr e = gen.formula(1 + i % 5);
    const GodelCode c = encode(e, a);
    std::vector<Expr> subs;
    proper_subexpressions(e, subs);
    for (const auto& s : subs)
      if (!(encode(s, a) < c)) ++bad;
    auto d = decode(c, a);
    if (!std::holds_alternative<Expr>(d) || !(std::get<Expr>(d) == e)) ++bad;
    ++exprs;
  }
  for (int i = 0; i < 2000; ++i) {
    auto s = gen.sequence(5, 3);
    const GodelCode c = encode_sequence(s, a);
    for (const auto& f : s)
      if (!(encode(f, a) < c)) ++bad;
    auto d = decode(c, a);
    if (!std::holds_alternative<std::vector<Expr>>(d) || std::get<std::vector<Expr>>(d) != s) ++bad;
    ++seqs;
  }
  const double t = seconds_since(t0);
  return {bad == 0 && exprs + seqs >= 10000 && t < 10.0,
          std::to_string(exprs) + " expressions, " + std::to_string(seqs) + " derivation sequences, " +
              std::to_string(bad) + " violations, " + fmt(t)};
}

// 2 -------------------------------------------------------------------------
Verdict henkin_identities() {
  std::size_t bad = 0;
  auto a = a_sequence(7);
  const std::vector<BigInt> prefix{1, 2, 6, 42, 1806};
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (a[i] != prefix[i]) ++bad;
  // recurrence recomputed here, then the product identity
  BigInt x = 1;
  for (std::size_t i = 0; i <= 7; ++i) {
    if (a[i] != x) ++bad;
    x = x * (x + 1);
  }
  for (std::size_t i = 0; i <= 6; ++i) {
    BigInt prod = 1;
    for (std::size_t k = 0; k <= i; ++k) prod *= a[k] + 1;
    if (prod != a[i + 1]) ++bad;
  }
  // odometer over (j_0..j_i), 0 <= j_k <= a_k, last component fastest
  std::size_t ranks = 0;
  for (std::size_t i = 0; i <= 3; ++i) {
    std::vector<std::uint64_t> t(i + 1, 0);
    std::uint64_t r = 0;
    while (true) {
      if (tuple_of_rank(i, r) != t || rank_of_tuple(t) != r) ++bad;
      ++r;
      std::size_t k = i + 1;
      while (k-- > 0) {
        if (t[k] < a[k].convert_to<std::uint64_t>()) {
          ++t[k];
          break;
        }
        t[k] = 0;
      }
      if (k == static_cast<std::size_t>(-1)) break;
    }
    if (r != a[i + 1].convert_to<std::uint64_t>()) ++bad;
    ranks += r;
  }
  return {bad == 0, "a_0..a_7 and products for i <= 6 exact; " + std::to_string(ranks) +
                        " ranks (2 + 6 + 42 + 1806) bijective; " + std::to_string(bad) + " violations"};
}

// 3 -------------------------------------------------------------------------
Verdict gamma_laws() {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t theories = 0, instances = 0, premises = 0, counter = 0, oracle_bad = 0, oracle_checked = 0;
  std::string notes;
  for (const auto& name : {"modus_ponens", "forall_p", "omega_q", "forall_p3", "literals", "inclusion"}) {
    Fixture fx = load(name);
    if (fx.theory.axioms().size() > 3 || fx.model.carrier().size() > 3) continue;
    const Alphabet& a = fx.theory.alphabet();
    OmegaContext ctx{fx.theory, fx.model.carrier(), length_bound(a, 24), length_bound(a, 10)};
    auto rep = check_gamma_laws(ctx, fx.samples, 2);
    ++theories;
    instances += rep.instances.size();
    counter += rep.counterexamples;
    for (const auto& i : rep.instances) premises += i.premise;
    if (rep.counterexamples) notes += std::string(" ") + name;

    // oracles for every positive verdict at the base bounds: derivations
    // re-checked by the kernel, the brute-force enumeration where it applies,
    // and truth in a model of S for n >= 1
    Gamma g(ctx);
    const bool nullary = fx.sig.predicates().size() == 2 && fx.sig.predicates()[0].arity == 0 &&
                         fx.sig.predicates()[1].arity == 0 && fx.sig.functions().empty();
    for (const auto& phi : fx.samples) {
      auto r = g.prover().prove(phi, ctx.proof_bound);
      if (r) {
        ++oracle_checked;
        if (!check_derivation(*r.derivation, fx.theory)) ++oracle_bad;
      }
      if (nullary) {
        ++oracle_checked;
        auto least = brute_force_least(phi, fx.theory.axioms(), a, 10);
        if (least && !(r && *r.code <= *least)) ++oracle_bad;
      }
      for (std::size_t n = 0; n <= 2; ++n)
        if (g.holds(n, phi)) {
          ++oracle_checked;
          if (fx.model.evaluate(phi) != 1) ++oracle_bad;
        }
    }
  }
  const double t = seconds_since(t0);
  return {theories >= 5 && counter == 0 && oracle_bad == 0 && t < 60.0,
          std::to_string(theories) + " theories, " + std::to_string(instances) + " law instances (" +
              std::to_string(premises) + " with premise), " + std::to_string(counter) + " counterexamples" +
              (notes.empty() ? "" : " in" + notes) + "; " + std::to_string(oracle_checked) + " oracle checks, " +
              std::to_string(oracle_bad) + " disagreements, " + fmt(t)};
}

// 4 -------------------------------------------------------------------------
Verdict type_elimination() {
  const Signature sig({{"p", 1}, {"r", 1}, {"q", 0}}, {}, false);
  auto f = [&](const char* s) { return parse_formula(s, sig); };
  const std::vector<Expr> thetas{f("bot"), f("q"), f("(not q)")};
  const std::vector<Expr> psis{f("(p v0)"), f("(r v0)")};
  std::size_t eliminated = 0, absent = 0, bad = 0, total = 0;
  for (int mask = 0; mask < 32; ++mask) {
    std::set<Tuple> p, r, q;
    for (std::uint32_t z = 0; z < 2; ++z) {
      if (mask >> z & 1) p.insert({z});
      if (mask >> (2 + z) & 1) r.insert({z});
    }
    if (mask >> 4 & 1) q.insert({});
    FiniteModel m(sig, {0, 1}, {p, r, q}, {});
    // S: the literal diagram of M
    std::vector<Expr> diag;
    for (std::uint32_t pr = 0; pr < 2; ++pr)
      for (std::uint32_t z = 0; z < 2; ++z) {
        Expr at = Expr::atom(pr, {Expr::constant(z)});
        diag.push_back(m.evaluate(at) ? at : Expr::neg(at));
      }
    diag.push_back(q.empty() ? f("(not q)") : f("q"));
    TheoryHandle s("diagram", sig, diag);
    const Alphabet& a = s.alphabet();
    Gamma g(OmegaContext{s, {0, 1}, length_bound(a, 24), length_bound(a, 12)});
    for (const auto& theta : thetas)
      for (const auto& psi : psis) {
        ++total;
        // oracle: some element satisfies ~theta & psi in M
        bool realized = false;
        for (std::uint32_t z = 0; z < 2; ++z)
          if (m.evaluate(theta) == 0 && m.evaluate(substitute(psi, 0, Expr::constant(z))) == 1) realized = true;
        auto res = eliminate_existential(g, m, theta, psi, 2);
        if (realized) {
          ++absent;
          if (res.m_prime || res.outcome == EliminationOutcome::Eliminated) ++bad;
        } else {
          ++eliminated;
          if (res.outcome != EliminationOutcome::Eliminated || !res.m_prime || !res.self_check ||
              !g.holds(*res.m_prime, Expr::disj(theta, Expr::neg(Expr::exists(0, psi)))))
            ++bad;
        }
      }
  }
  return {bad == 0, std::to_string(total) + " instances over all 32 models on {0,1} (" + std::to_string(eliminated) +
                        " eliminated with self-check, " + std::to_string(absent) + " absent), " +
                        std::to_string(bad) + " mismatches"};
}

// 5 -------------------------------------------------------------------------
Verdict tree_properties() {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t nodes = 0, prefixes = 0, bad = 0, runs = 0;
  for (const auto& name : kConsistent) {
    Fixture fx = load(name);
    const Alphabet& a = fx.theory.alphabet();
    for (std::uint64_t K : {512, 1024, 4096}) {
      World w(fx.theory, fx.model, Bounds{GodelCode(K), length_bound(a, 12), length_bound(a, 8), 2});
      w.build_universe();
      const Universe& u = *w.universe;
      Guide guide = model_guide(*w.expanded);
      ++runs;
      // (c)
      try {
        auto p = find_path(w.am, u, fx.sig, w.bounds.proof_bound, guide, &*w.expanded);
        auto T = extract_T(p.path, w.am, u);
        if (!T.violations.empty()) ++bad;
        for (auto c : w.am.codes_below())
          if (!T.codes.count(c)) ++bad;
        // (a) on the path: every prefix
        for (std::uint64_t l = 0; l <= K; ++l, ++prefixes)
          if (!is_node(p.path.prefix(l), w.am, u)) ++bad;
      } catch (const PathError&) {
        ++bad;
      }
      // (b) a node of every length, and (a) on each of them at a stride
      const std::uint64_t stride = K <= 1024 ? 1 : 97;
      for (std::uint64_t k = 0; k <= K; ++k) {
        auto r = k_closure(k, {}, w.am, u, guide);
        ++nodes;
        if (!r.node || r.node->length() != k || !is_node(*r.node, w.am, u)) {
          ++bad;
          continue;
        }
        for (std::uint64_t l = k % stride; l < k; l += stride, ++prefixes)
          if (!is_node(r.node->prefix(l), w.am, u)) ++bad;
      }
    }
  }
  return {bad == 0, std::to_string(runs) + " fixture/K runs, " + std::to_string(nodes) + " k-closure nodes, " +
                        std::to_string(prefixes) + " prefixes checked, " + std::to_string(bad) + " violations, " +
                        fmt(seconds_since(t0))};
}

// 6 and 8 share the pipeline runs -----------------------------------------
struct PipelineRuns {
  std::vector<std::pair<std::string, RunOutcome>> first;
  std::size_t differing = 0;
  std::size_t files = 0;
};

PipelineRuns pipeline_runs() {
  PipelineRuns out;
  const fs::path base = fs::temp_directory_path() / "satclass-acceptance";
  fs::remove_all(base);
  for (const auto& name : kConsistent) {
    auto r1 = run_pipeline(run_config(name, base / name / "a"));
    auto c2 = run_config(name, base / name / "b");
    c2.jobs = 4;
    run_pipeline(c2);
    for (const auto& f : fs::directory_iterator(base / name / "a")) {
      ++out.files;
      if (slurp(f.path()) != slurp(base / name / "b" / f.path().filename())) ++out.differing;
    }
    out.first.emplace_back(name, std::move(r1));
  }
  return out;
}

Verdict tarski_reflection(const PipelineRuns& runs) {
  std::size_t ok_runs = 0, bad = 0, checked = 0, skipped = 0, settled = 0;
  std::string failing;
  for (const auto& [name, r] : runs.first) {
    const auto& rep = r.report;
    if (r.exit_code != 0) {
      failing += " " + name + "(" + r.failed_stage + ")";
      ++bad;
      continue;
    }
    ++ok_runs;
    for (auto& [k, v] : rep["tarski"].items()) {
      checked += v["checked"].get<std::size_t>();
      skipped += v["skipped"].get<std::size_t>();
      bad += v["failed"].get<std::size_t>();
    }
    bad += rep["extract"]["violations"].size();
    bad += rep["reflection"]["failed"].get<std::size_t>();
    for (const auto& l : rep["reflection"]["levels"]) bad += l["failed"].get<std::size_t>();
    if (!rep["agreement"]["model_satisfies_S"].get<bool>()) ++bad;
    bad += rep["agreement"]["disagree_T"].get<std::size_t>() + rep["agreement"]["disagree_model"].get<std::size_t>();
    settled += rep["agreement"]["settled"].get<std::size_t>();
  }
  return {bad == 0, std::to_string(ok_runs) + " runs, " + std::to_string(checked) + " Tarski instances, " +
                        std::to_string(skipped) + " instances beyond K skipped, " + std::to_string(settled) +
                        " settled sentences agree, " + std::to_string(bad) + " exceptions" +
                        (failing.empty() ? "" : "; failed:" + failing)};
}

// 7 -------------------------------------------------------------------------
Verdict q_probes() {
  std::size_t bad = 0, probes = 0;
  for (const auto& name : kConsistent) {
    Fixture fx = load(name);
    const Alphabet& a = fx.theory.alphabet();
    Gamma g(OmegaContext{fx.theory, fx.model.carrier(), length_bound(a, 12), length_bound(a, 8)});
    for (const auto& [n, h] : q_axioms(g, 3)) {
      ++probes;
      if (h) ++bad;
    }
    Gamma gb(OmegaContext{fx.theory.with_axiom(Expr::bot()), fx.model.carrier(), length_bound(a, 12),
                          length_bound(a, 8)});
    ++probes;
    if (!q_axioms(gb, 0).at(0).second) ++bad;
  }
  return {bad == 0, std::to_string(kConsistent.size()) + " theories: not-box_n[bot] for n <= 3, bot injected flips n = 0; " +
                        std::to_string(probes) + " probes, " + std::to_string(bad) + " wrong"};
}

Verdict determinism(const PipelineRuns& runs) {
  return {runs.differing == 0 && runs.files > 0,
          std::to_string(runs.files) + " artifacts compared across two runs (jobs 1 and 4), " +
              std::to_string(runs.differing) + " differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> plain{
      {"coding monotonicity", coding_monotonicity},
      {"Henkin identities", henkin_identities},
      {"Gamma laws", gamma_laws},
      {"type elimination", type_elimination},
      {"tree properties", tree_properties},
  };
  bool all = true;
  int id = 0;
  auto report = [&](const std::string& name, const Verdict& v) {
    all = all && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << ++id << " " << name << ": " << v.detail << std::endl;
  };
  for (const auto& [name, fn] : plain) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    report(name, v);
  }
  PipelineRuns runs;
  std::string err;
  try {
    runs = pipeline_runs();
  } catch (const std::exception& e) {
    err = e.what();
  }
  report("Tarski and reflection", err.empty() ? tarski_reflection(runs) : Verdict{false, "exception: " + err});
  Verdict q;
  try {
    q = q_probes();
  } catch (const std::exception& e) {
    q = {false, std::string("exception: ") + e.what()};
  }
  report("Q probes", q);
  report("determinism", err.empty() ? determinism(runs) : Verdict{false, "exception: " + err});
  return all ? 0 : 1;
}
