#include <doctest.h>

#include <functional>

#include "satclass/henkin.hpp"

using namespace satclass;

namespace {

Signature unary_p() { return Signature({{"p", 1}}, {}, false); }

HenkinGrid tiny_grid(std::size_t rows) {
  Alphabet a(unary_p());
  std::set<std::uint32_t> carrier{0, 1};
  return HenkinGrid(a, carrier, first_one_free_variable_formulas(a, carrier, rows));
}

std::size_t disjuncts(const Expr& e) {
  if (e.kind() != Kind::Or) return 1;
  return disjuncts(e.child(0)) + disjuncts(e.child(1));
}

// all increasing sequences over {1..w}
std::vector<std::vector<std::size_t>> increasing(std::size_t w) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << w); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < w; ++i)
      if (mask & (1u << i)) s.push_back(i + 1);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("a-sequence prefix and product identity") {
  auto a = a_sequence(8);
  REQUIRE(a.size() == 9);
  CHECK(a[0] == 1);
  CHECK(a[1] == 2);
  CHECK(a[2] == 6);
  CHECK(a[3] == 42);
  CHECK(a[4] == 1806);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) CHECK(a[i + 1] == a[i] * (a[i] + 1));
  for (std::size_t i = 0; i <= 6; ++i) {
    BigInt prod = 1;
    for (std::size_t k = 0; k <= i; ++k) prod *= a[k] + 1;
    CHECK(prod == a[i + 1]);
  }
  CHECK_THROWS_AS(a_sequence(9), std::range_error);
}

TEST_CASE("tuple ranks are the lexicographic positions") {
  const std::vector<std::uint64_t> a{1, 2, 6, 42};
  for (std::size_t i = 0; i <= 3; ++i) {
    // odometer, last component fastest
    std::vector<std::uint64_t> t(i + 1, 0);
    std::uint64_t pos = 0;
    while (true) {
      CHECK(tuple_of_rank(i, pos) == t);
      CHECK(rank_of_tuple(t) == pos);
      ++pos;
      std::size_t k = i + 1;
      while (k > 0 && t[k - 1] == a[k - 1]) t[--k] = 0;
      if (k == 0) break;
      ++t[k - 1];
    }
    CHECK(pos == a_sequence(i + 1)[i + 1]);
    CHECK_THROWS_AS(tuple_of_rank(i, pos), std::range_error);
  }
  CHECK(tuple_of_rank(0, 0) == std::vector<std::uint64_t>{0});
  CHECK(tuple_of_rank(0, 1) == std::vector<std::uint64_t>{1});
  CHECK(tuple_of_rank(2, 0) == std::vector<std::uint64_t>{0, 0, 0});
}

TEST_CASE("grid rows") {
  auto g = tiny_grid(4);
  g.build(3);
  Alphabet a(unary_p());
  const auto& psi = g.psi();

  REQUIRE(g.row(0).size() == 2);
  CHECK(g.constant(0, 0) == g.constant(0, 1));
  CHECK(g.allocation(g.constant(0, 0)).formula == Expr::neg(psi[0]));
  CHECK(g.constant(0, 0) == 2);  // first index past the carrier

  REQUIRE(g.row(1).size() == 3);
  CHECK(g.allocation(g.constant(1, 0)).formula == Expr::neg(psi[1]));
  auto x0 = *psi[0].free_vars().begin();
  CHECK(g.allocation(g.constant(1, 1)).formula ==
        Expr::disj(Expr::neg(substitute(psi[0], x0, Expr::constant(g.constant(0, 0)))), Expr::neg(psi[1])));

  REQUIRE(g.row(2).size() == 7);
  std::set<std::uint32_t> row2(g.row(2).begin(), g.row(2).end());
  CHECK(row2.size() == 7);
  REQUIRE(g.row(3).size() == 43);

  std::set<std::uint32_t> all;
  for (const auto& al : g.allocations()) {
    CHECK(all.insert(al.constant).second);
    CHECK(al.constant > 1);
    CHECK(al.code == encode(al.formula, a));
  }
  CHECK_THROWS_AS(g.row(4), std::logic_error);
}

TEST_CASE("witness axioms") {
  auto g = tiny_grid(4);
  g.build(3);
  Alphabet a(unary_p());
  for (std::size_t n = 0; n <= 3; ++n) {
    Expr f = g.F(n);
    REQUIRE(f.kind() == Kind::Imp);
    CHECK(f.child(0).kind() == Kind::Exists);
    CHECK(disjuncts(f.child(1)) == a_sequence(n)[n] + 1);
    CHECK(encode(f, a) > GodelCode(n));
    CHECK(f.is_sentence());
  }
  CHECK(disjuncts(g.F(0).child(1)) == 2);
  CHECK(disjuncts(g.F(1).child(1)) == 3);
}

TEST_CASE("prec") {
  using V = std::vector<std::size_t>;
  CHECK(prec(V{1, 2, 3}, V{}) == std::strong_ordering::less);
  CHECK(prec(V{1, 3}, V{2, 3}) == std::strong_ordering::less);
  CHECK(prec(V{1, 2, 3}, V{1, 2}) == std::strong_ordering::less);
  CHECK(prec(V{2}, V{2}) == std::strong_ordering::equal);
  CHECK_THROWS_AS(prec(V{2, 1}, V{}), std::invalid_argument);

  for (std::size_t w = 1; w <= 5; ++w) {
    auto all = increasing(w);
    V full;
    for (std::size_t i = 1; i <= w; ++i) full.push_back(i);
    for (const auto& x : all) {
      CHECK(prec(x, x) == std::strong_ordering::equal);
      if (x != full) CHECK(prec(full, x) == std::strong_ordering::less);
      if (!x.empty()) CHECK(prec(x, V{}) == std::strong_ordering::less);
      for (const auto& y : all) {
        auto xy = prec(x, y);
        CHECK((xy < 0) == (prec(y, x) > 0));
        if (x != y) CHECK(xy != std::strong_ordering::equal);
        for (const auto& z : all)
          if (xy < 0 && prec(y, z) < 0) CHECK(prec(x, z) < 0);
      }
    }
    // sorting by prec gives a chain with no repeats; every descent stops
    auto sorted = all;
    std::sort(sorted.begin(), sorted.end(), [](const V& p, const V& q) { return prec(p, q) < 0; });
    CHECK(sorted.front() == full);
    CHECK(sorted.back().empty());
  }
}

TEST_CASE("star sequences") {
  Alphabet a(unary_p());
  std::set<std::uint32_t> carrier{0, 1};
  auto base = first_one_free_variable_formulas(a, carrier, 4);
  auto g = tiny_grid(1);
  CHECK(star_sequence(g, {}, base).empty());

  auto one = star_sequence(g, {2}, base);
  REQUIRE(one.size() == 1);
  auto x = *base[1].free_vars().begin();
  auto c = g.allocate(Expr::neg(base[1]));
  CHECK(one[0] == Expr::neg(substitute(base[1], x, Expr::constant(c))));

  // sequences agreeing on the first r-1 entries agree on the first r-1 formulas
  for (std::size_t w = 1; w <= 4; ++w) {
    auto all = increasing(w);
    for (const auto& ms : all)
      for (const auto& ls : all) {
        std::size_t r = 0;
        while (r < ms.size() && r < ls.size() && ms[r] == ls[r]) ++r;
        auto sm = star_sequence(g, ms, base);
        auto sl = star_sequence(g, ls, base);
        for (std::size_t i = 0; i < r; ++i) CHECK(sm[i] == sl[i]);
        for (const auto& s : sm) CHECK(s.is_sentence());
      }
  }
}

TEST_CASE("henkin denotations realize the defining types") {
  Signature sig = unary_p();
  FiniteModel m(sig, {0, 1}, {{Tuple{1}}}, {});
  auto g = tiny_grid(3);
  g.build(2);
  auto den = henkin_denotations(g, m);
  CHECK(den.size() == g.allocations().size());
  auto em = m.with_constants(den);
  for (const auto& al : g.allocations()) {
    auto x = *al.formula.free_vars().begin();
    bool realizable = false;
    for (auto e : m.carrier()) realizable |= em.evaluate(Expr::neg(substitute(al.formula, x, Expr::constant(e)))) == 1;
    if (realizable) CHECK(em.evaluate(Expr::neg(substitute(al.formula, x, Expr::constant(al.constant)))) == 1);
  }
  // F_n is true once constants denote their witnesses
  for (std::size_t n = 0; n <= 2; ++n) CHECK(em.evaluate(g.F(n)) == 1);
}

TEST_CASE("grid json dump") {
  auto g = tiny_grid(2);
  g.build(1);
  auto j = g.to_json(unary_p());
  CHECK(j["grid"].size() == 2);
  CHECK(j["grid"][1].size() == 3);
  CHECK(j["allocator"].size() == g.allocations().size());
  CHECK(j["grid"][0][0]["constant"] == g.constant(0, 0));
}
