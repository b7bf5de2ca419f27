#include <doctest.h>

#include "support/worlds.hpp"

using namespace satclass;

namespace {

using testing::make_world;


std::uint64_t code(const World& w, const std::string& src) {
  auto c = w.universe->code_of(parse_formula(src, w.theory.signature()));
  REQUIRE(c);
  return *c;
}

}  // namespace

TEST_CASE("S = {p}: p gets 1, its negation 0") {
  auto w = make_world("pred p 0\npred q 0", {"p"}, "carrier 0\ntable p: ()\n", 4096);
  auto r = find_path(w.am, *w.universe, w.theory.signature(), w.bounds.proof_bound, model_guide(*w.expanded),
                     &*w.expanded);
  CHECK(r.path.bit(code(w, "p")));
  CHECK_FALSE(r.path.bit(code(w, "(not p)")));
  CHECK(r.provenance.at(code(w, "p")) == "A_M");
  CHECK(extract_T(r.path, w.am, *w.universe).violations.empty());
}

TEST_CASE("S = {p -> q, p}: both p and q get 1, with or without a guide") {
  auto w = make_world("pred p 0\npred q 0", {"(imp p q)", "p"}, "carrier 0\ntable p: ()\ntable q: ()\n", 4096);
  for (bool guided : {true, false}) {
    Guide g = guided ? model_guide(*w.expanded) : Guide{};
    auto r = k_closure(w.universe->size(), {}, w.am, *w.universe, g);
    REQUIRE(r.node);
    CHECK(r.node->bit(code(w, "p")));
    CHECK(r.node->bit(code(w, "q")));
    CHECK(r.node->bit(code(w, "(imp p q)")));
    CHECK_FALSE(r.node->bit(code(w, "(not q)")));
  }
}

TEST_CASE("clause checks catch each kind of violation") {
  auto w = make_world("pred p 0\npred q 0", {"p"}, "carrier 0\ntable p: ()\n", 1024);
  const Universe& u = *w.universe;
  auto r = k_closure(u.size(), {}, w.am, u, model_guide(*w.expanded));
  REQUIRE(r.node);
  REQUIRE(is_node(*r.node, w.am, u));

  TruthAssignment t = *r.node;
  // (i) a 1 on a code that is not a sentence: letter Var alone
  t.set(letter::Var, true);
  CHECK(is_node(t, w.am, u).clause == 1);

  t = *r.node;
  t.set(code(w, "p"), false);
  t.set(code(w, "(not p)"), true);
  CHECK(is_node(t, w.am, u).clause == 2);

  t = *r.node;
  t.set(code(w, "(not q)"), !t.bit(code(w, "(not q)")));
  CHECK(is_node(t, w.am, u).clause == 3);

  // top is a one-step derivation (top, Sep) and must carry 1
  t = *r.node;
  const auto top = code(w, "top");
  t.set(top, false);
  t.set(code(w, "(not top)"), true);
  auto chk = is_node(t, w.am, u);
  CHECK_FALSE(chk);
  CHECK((chk.clause == 2 || chk.clause == 4));
}

TEST_CASE("seeds are honoured and bad seeds rejected") {
  auto w = make_world("pred p 0\npred q 0", {"p"}, "carrier 0\ntable p: ()\n", 1024);
  const Universe& u = *w.universe;
  const auto q = code(w, "q"), nq = code(w, "(not q)");
  for (bool v : {true, false}) {
    auto r = k_closure(u.size(), {{q, v}}, w.am, u, model_guide(*w.expanded));
    REQUIRE(r.node);
    CHECK(r.node->bit(q) == v);
    CHECK(r.node->bit(nq) == !v);
  }
  CHECK_THROWS_AS(k_closure(u.size(), {{q, true}, {nq, true}}, w.am, u), std::invalid_argument);
  CHECK_THROWS_AS(k_closure(u.size(), {{letter::Var, true}}, w.am, u), std::invalid_argument);
  // seeding against A_M leaves no node
  auto r = k_closure(u.size(), {{code(w, "p"), false}}, w.am, u);
  CHECK_FALSE(r.node);
  CHECK(r.diagnostic.find("seed") != std::string::npos);
}

TEST_CASE("nodes at every length, prefixes are nodes") {
  auto w = make_world("pred p 1", {"(forall v0 (p v0))"}, "carrier 0 1\ntable p: (0) (1)\n", 4096);
  const Universe& u = *w.universe;
  Guide g = model_guide(*w.expanded);
  auto full = k_closure(u.size(), {}, w.am, u, g);
  REQUIRE(full.node);
  std::size_t bad_prefix = 0, bad_length = 0;
  for (std::uint64_t k = 0; k <= u.size(); k += (k < 600 ? 1 : 37)) {
    if (!is_node(full.node->prefix(k), w.am, u)) ++bad_prefix;
    auto r = k_closure(k, {}, w.am, u, g);
    if (!r.node || r.node->length() != k || !is_node(*r.node, w.am, u)) ++bad_length;
  }
  CHECK(bad_prefix == 0);
  CHECK(bad_length == 0);
}

TEST_CASE("unguided closure also yields nodes") {
  auto w = make_world("pred p 1", {"(forall v0 (p v0))"}, "carrier 0 1\ntable p: (0) (1)\n", 2048);
  auto r = k_closure(w.universe->size(), {}, w.am, *w.universe);
  REQUIRE(r.node);
  CHECK(is_node(*r.node, w.am, *w.universe));
}

TEST_CASE("path for forall p over a two-element model") {
  auto w = make_world("pred p 1", {"(forall v0 (p v0))"}, "carrier 0 1\ntable p: (0) (1)\n", 4096);
  auto r = find_path(w.am, *w.universe, w.theory.signature(), w.bounds.proof_bound, model_guide(*w.expanded),
                     &*w.expanded);
  CHECK(r.consistency.model_certificate);
  auto T = extract_T(r.path, w.am, *w.universe);
  CHECK(T.violations.empty());
  // membership agrees with the model on the whole universe
  std::size_t disagree = 0;
  for (auto c : w.universe->sentences())
    if ((w.expanded->evaluate(w.universe->formula(c)) == 1) != (T.codes.count(c) > 0)) ++disagree;
  CHECK(disagree == 0);
  CHECK(T.codes.count(code(w, "(p c0)")));
  CHECK(T.codes.count(code(w, "(p c1)")));
  // forall v0 p(v0) itself codes above 4096
  CHECK_FALSE(w.universe->code_of(parse_formula("(forall v0 (p v0))", w.theory.signature())));

  auto j = path_json(r, *w.universe, w.theory.signature());
  CHECK(TruthAssignment::from_rle(j["bits"]) == r.path);
  CHECK(j["ones"].get<std::size_t>() == T.codes.size());
}

TEST_CASE("A_M entries carry provenance and F_n") {
  auto w = make_world("pred p 1", {"(forall v0 (p v0))"}, "carrier 0 1\ntable p: (0) (1)\n", 4096, 2);
  std::size_t witness = 0, provable = 0;
  for (const auto& e : w.am.entries()) {
    if (e.source == AMEntry::Source::WitnessAxiom) {
      ++witness;
      CHECK(e.code > GodelCode(static_cast<std::uint64_t>(*e.n)));
      CHECK(w.expanded->evaluate(e.formula) == 1);
    } else {
      ++provable;
      REQUIRE(e.derivation_code);
      CHECK(*e.derivation_code > e.code);
    }
  }
  CHECK(witness == 3);
  CHECK(provable >= 2);  // top, p(c0), ...
  auto j = w.am.to_json(w.theory.signature());
  CHECK(j.size() == w.am.entries().size());
}

TEST_CASE("universe indexes sentences, negations and derivations") {
  auto w = make_world("pred p 0\npred q 0", {"p"}, "carrier 0\ntable p: ()\n", 4096);
  const Universe& u = *w.universe;
  CHECK(u.is_sentence(1));  // bot
  CHECK(u.negation(code(w, "p")) == code(w, "(not p)"));
  CHECK(u.negated(code(w, "(not p)")) == code(w, "p"));
  bool top_derivation = false;
  for (const auto& d : u.derivations()) {
    for (auto s : d.sentences) CHECK(s < d.code);
    for (auto h : d.hypotheses) CHECK(h < d.code);
    if (d.hypotheses.empty() && d.sentences == std::vector<std::uint64_t>{code(w, "top")}) top_derivation = true;
  }
  CHECK(top_derivation);
  CHECK_THROWS_AS(Universe(u.alphabet(), GodelCode(1ull << 40), [](std::uint32_t) { return true; }), std::range_error);
}

TEST_CASE("closure under a three-step modus ponens derivation") {
  auto sig = Signature::parse("pred p 0\npred q 0");
  auto f = [&](const char* s) { return parse_formula(s, sig); };
  const std::vector<Expr> d{f("p"), f("(imp p q)"), f("q")};
  // its code is far above any dense universe
  Alphabet a(sig);
  CHECK(encode_sequence(d, a) > length_bound(a, 7));
  auto with = [&](std::set<std::string> ones) {
    return [ones, sig](const Expr& e) { return ones.count(to_text(e, sig)) > 0; };
  };
  CHECK(derivation_clause(d, with({"p", "(imp p q)", "q"})));
  auto bad = derivation_clause(d, with({"p", "(imp p q)"}));
  CHECK_FALSE(bad);
  CHECK(bad.clause == 4);
  CHECK(bad.code == 2);
  // a proper axiom with bit 0 switches the clause off
  CHECK(derivation_clause(d, with({"p"})));
}

TEST_CASE("below every sentence pair and A_M code the closure is all zero") {
  auto w = make_world("pred p 0\npred q 0", {"p"}, "carrier 0\ntable p: ()\n", 4096);
  for (std::uint64_t k : {0, 1, 2}) {
    auto r = k_closure(k, {}, w.am, *w.universe);
    REQUIRE(r.node);
    CHECK(r.node->ones().empty());
    CHECK(is_node(TruthAssignment(k), w.am, *w.universe));
  }
  // top (code 2) is the least A_M member
  CHECK(w.am.codes_below().front() == 2);
  auto r = k_closure(3, {}, w.am, *w.universe);
  REQUIRE(r.node);
  CHECK(r.node->ones() == std::vector<std::uint64_t>{2});
  CHECK_FALSE(is_node(TruthAssignment(3), w.am, *w.universe));
}
