#include <doctest.h>

#include <chrono>
#include <functional>

#include "satclass/model.hpp"
#include "satclass/proof.hpp"
#include "support/brute.hpp"

using namespace satclass;
using namespace satclass::testing;

namespace {

Signature pq() { return Signature({{"p", 0}, {"q", 0}}, {}, false); }

Expr f(const std::string& s, const Signature& sig) { return parse_formula(s, sig); }

GodelCode word_length_bound(const Alphabet& a, std::size_t len) {
  // least code of length len + 1
  Word w(len + 1, static_cast<char16_t>(1));
  return a.code(w);
}

}  // namespace

TEST_CASE("check_derivation on small derivations") {
  auto sig = pq();
  TheoryHandle s("s", sig, {f("p", sig), f("(imp p q)", sig)});
  Derivation k{{{f("(imp p (imp q p))", sig), LogicalAxiomStep{Schema::K}}}};
  CHECK(check_derivation(k, s));

  Derivation mp{{{f("p", sig), TheoryAxiomStep{}},
                 {f("(imp p q)", sig), TheoryAxiomStep{}},
                 {f("q", sig), ModusPonens{0, 1}}}};
  CHECK(check_derivation(mp, s));
  Derivation swapped = mp;
  swapped.steps[2].justification = ModusPonens{1, 0};
  auto r = check_derivation(swapped, s);
  CHECK_FALSE(r);
  CHECK(r.failing_step == std::optional<std::size_t>(2));

  Derivation wrong_schema{{{f("(imp p (imp q q))", sig), LogicalAxiomStep{Schema::K}}}};
  CHECK_FALSE(check_derivation(wrong_schema, s));
  Derivation not_axiom{{{f("q", sig), TheoryAxiomStep{}}}};
  CHECK_FALSE(check_derivation(not_axiom, s));
  Derivation forward{{{f("q", sig), ModusPonens{1, 2}}, {f("p", sig), TheoryAxiomStep{}}, {f("(imp p q)", sig), TheoryAxiomStep{}}}};
  CHECK_FALSE(check_derivation(forward, s));
}

TEST_CASE("quantifier schemas and generalization") {
  Signature sig({{"p", 1}}, {}, false);
  TheoryHandle s("s", sig, {f("(forall v0 (p v0))", sig)});
  Derivation d{{{f("(forall v0 (p v0))", sig), TheoryAxiomStep{}},
                {f("(imp (forall v0 (p v0)) (p c3))", sig), LogicalAxiomStep{Schema::ForallElim}},
                {f("(p c3)", sig), ModusPonens{0, 1}}}};
  CHECK(check_derivation(d, s));
  // generalization over a variable free in an axiom-free derivation
  Derivation g{{{f("(imp (p v0) (imp (p v1) (p v0)))", sig), LogicalAxiomStep{Schema::K}},
                {f("(forall v1 (imp (p v0) (imp (p v1) (p v0))))", sig), Generalization{0}}}};
  CHECK(check_derivation(g, s));
  // bad instance: different terms for the same variable
  CHECK_FALSE(match_logical_axiom(f("(imp (forall v0 (p v0)) (exists v1 (p v1)))", sig)).has_value());
  CHECK(match_logical_axiom(f("(imp (p c1) (exists v0 (p v0)))", sig)) == Schema::ExistsIntro);
}

TEST_CASE("axiom goal gives a one-step derivation") {
  auto sig = pq();
  TheoryHandle s("s", sig, {f("p", sig), f("(imp p q)", sig)});
  auto r = prove_bounded(f("(imp p q)", sig), s, GodelCode(1'000'000));
  REQUIRE(r);
  CHECK(r.derivation->steps.size() == 1);
  CHECK(std::holds_alternative<TheoryAxiomStep>(r.derivation->steps[0].justification));
}

TEST_CASE("modus ponens goal matches the brute-force least derivation") {
  auto sig = pq();
  Alphabet a(sig);
  std::vector<Expr> ax{f("p", sig), f("(imp p q)", sig)};
  TheoryHandle s("s", sig, ax);
  auto goal = f("q", sig);
  auto oracle = brute_force_least(goal, ax, a, 10);
  REQUIRE(oracle);
  auto r = prove_bounded(goal, s, word_length_bound(a, 10));
  REQUIRE(r);
  CHECK(*r.code == *oracle);
  CHECK(check_derivation(*r.derivation, s));
  // least: nothing strictly below it
  CHECK_FALSE(prove_bounded(goal, s, *oracle));
  CHECK(prove_bounded(goal, s, GodelCode(oracle->value() + 1)));
}

TEST_CASE("unprovable goal stays absent") {
  auto sig = pq();
  Alphabet a(sig);
  std::vector<Expr> ax{f("p", sig)};
  TheoryHandle s("s", sig, ax);
  auto goal = f("q", sig);
  // countermodel: p true, q false; the calculus is sound, so no bound helps
  FiniteModel m(sig, {0}, {{Tuple{}}, {}}, {});
  CHECK(m.evaluate(ax[0]) == 1);
  CHECK(m.evaluate(goal) == 0);
  CHECK_FALSE(brute_force_least(goal, ax, a, 10));
  for (std::size_t len : {4, 10, 20, 40}) {
    auto r = prove_bounded(goal, s, word_length_bound(a, len));
    CHECK(r.status == SearchStatus::NoneBelowBound);
  }
}

TEST_CASE("found derivations are sound and stable under larger bounds") {
  auto sig = pq();
  Alphabet a(sig);
  TheoryHandle s("s", sig, {f("p", sig), f("(imp p q)", sig)});
  std::vector<std::string> goals{"(imp p p)", "(or p q)", "(and p q)", "(or q bot)", "(imp q (imp p q))", "(and q p)"};
  for (const auto& g : goals) {
    CAPTURE(g);
    auto goal = f(g, sig);
    auto r1 = prove_bounded(goal, s, word_length_bound(a, 80));
    REQUIRE(r1);
    CHECK(check_derivation(*r1.derivation, s));
    auto r2 = prove_bounded(goal, s, word_length_bound(a, 120));
    REQUIRE(r2);
    CHECK(*r1.code == *r2.code);
  }
}

TEST_CASE("deduction compatibility") {
  auto sig = pq();
  Alphabet a(sig);
  TheoryHandle s("s", sig, {f("p", sig)});
  auto phi = f("(or p q)", sig);
  auto imp = f("(imp (or p q) (or q p))", sig);
  auto b = word_length_bound(a, 120);
  auto r1 = prove_bounded(phi, s, b);
  auto r2 = prove_bounded(imp, s, b);
  REQUIRE(r1);
  REQUIRE(r2);
  // concatenating both derivations and appending the conclusion is a derivation
  auto steps = r1.derivation->formulas();
  for (const auto& x : r2.derivation->formulas()) steps.push_back(x);
  steps.push_back(f("(or q p)", sig));
  auto bprime = GodelCode(encode_sequence(steps, a).value() + 1);
  auto r3 = prove_bounded(f("(or q p)", sig), s, bprime);
  REQUIRE(r3);
  CHECK(check_derivation(*r3.derivation, s));
}

TEST_CASE("first-order goals") {
  Signature sig({{"p", 1}}, {}, false);
  Alphabet a(sig);
  TheoryHandle s("s", sig, {f("(forall v0 (p v0))", sig)});
  auto b = word_length_bound(a, 80);
  auto r = prove_bounded(f("(p c1)", sig), s, b);
  REQUIRE(r);
  CHECK(check_derivation(*r.derivation, s));
  auto e = prove_bounded(f("(exists v0 (p v0))", sig), s, b);
  REQUIRE(e);
  CHECK(check_derivation(*e.derivation, s));
  CHECK_FALSE(prove_bounded(f("(not (p c0))", sig), s, b));
}

TEST_CASE("bounded consistency") {
  auto sig = pq();
  auto b = GodelCode(1'000'000);
  CHECK_FALSE(is_consistent_bounded({f("p", sig), f("(not p)", sig)}, sig, b).consistent);
  CHECK(is_consistent_bounded({f("p", sig), f("q", sig)}, sig, b).consistent);
  auto bot = is_consistent_bounded({f("bot", sig)}, sig, b);
  CHECK_FALSE(bot.consistent);
  REQUIRE(bot.refutation);
  CHECK(bot.refutation->steps.size() == 1);
  CHECK(skeleton_satisfiable({f("(or p q)", sig), f("(not p)", sig)}));
  CHECK_FALSE(skeleton_satisfiable({f("(and p (not p))", sig)}));
}

TEST_CASE("theory files") {
  Signature sig({{"p", 1}}, {}, false);
  auto s = TheoryHandle::parse("theory demo\n(forall v0 (p v0))\nscheme excluded_middle 2000\n", sig);
  CHECK(s.name() == "demo");
  CHECK(s.axioms().size() == 1);
  CHECK(s.is_axiom(f("(forall v0 (p v0))", sig)));
  auto again = TheoryHandle::parse(s.to_text(), sig);
  CHECK(again.axioms() == s.axioms());
  auto below = s.axioms_below(GodelCode(2000));
  for (std::size_t i = 1; i < below.size(); ++i)
    CHECK(encode(below[i - 1], s.alphabet()) < encode(below[i], s.alphabet()));
  CHECK_THROWS_AS(TheoryHandle::parse("(p c0)\n", sig), SyntaxError);
  CHECK_THROWS_AS(TheoryHandle::parse("theory t\n(p v0)\n", sig), SyntaxError);
  CHECK_THROWS_AS(TheoryHandle::parse("theory t\nscheme nosuch 10\n", sig), SyntaxError);
}
