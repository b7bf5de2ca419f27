#include "satclass/henkin.hpp"

#include <algorithm>
#include <stdexcept>

namespace satclass {

std::vector<BigInt> a_sequence(std::size_t i_max) {
  if (i_max > 8) throw std::range_error("a_sequence: i_max > 8");
  std::vector<BigInt> a{1};
  while (a.size() <= i_max) a.push_back(a.back() * (a.back() + 1));
  return a;
}

namespace {

std::vector<std::uint64_t> radices(std::size_t i) {
  if (i > 6) throw std::range_error("tuple index i > 6");
  auto a = a_sequence(i);
  std::vector<std::uint64_t> out;
  for (const auto& x : a) out.push_back(x.convert_to<std::uint64_t>() + 1);
  return out;
}

std::uint32_t only_free_variable(const Expr& f) {
  auto fv = f.free_vars();
  if (fv.size() != 1) throw std::invalid_argument("expected exactly one free variable");
  return *fv.begin();
}

}  // namespace

std::vector<std::uint64_t> tuple_of_rank(std::size_t i, std::uint64_t r) {
  auto rad = radices(i);
  std::uint64_t total = 1;
  for (auto x : rad) total *= x;
  if (r >= total) throw std::range_error("tuple rank out of range");
  std::vector<std::uint64_t> t(rad.size());
  for (std::size_t k = rad.size(); k-- > 0;) {
    t[k] = r % rad[k];
    r /= rad[k];
  }
  return t;
}

std::uint64_t rank_of_tuple(const std::vector<std::uint64_t>& components) {
  if (components.empty()) throw std::range_error("empty tuple");
  auto rad = radices(components.size() - 1);
  std::uint64_t r = 0;
  for (std::size_t k = 0; k < rad.size(); ++k) {
    if (components[k] >= rad[k]) throw std::range_error("tuple component out of range");
    r = r * rad[k] + components[k];
  }
  return r;
}

std::vector<Expr> first_one_free_variable_formulas(const Alphabet& a, const std::set<std::uint32_t>& carrier,
                                                   std::size_t count) {
  std::vector<Expr> out;
  const auto& sig = a.signature();
  const bool any = sig.has_equality() || std::any_of(sig.predicates().begin(), sig.predicates().end(),
                                                     [](const Symbol& p) { return p.arity > 0; });
  if (!any) {
    if (count) throw std::invalid_argument("signature has no formula with a free variable");
    return out;
  }
  WordCursor cur(a.size());
  while (out.size() < count) {
    cur.next();
    const Word& w = cur.word();
    if (w[0] == letter::Var || w[0] == letter::Const || w[0] == letter::Tick || w[0] == letter::Sep) continue;
    auto e = a.parse_expr(w);
    if (!e || !e->is_formula() || e->free_vars().size() != 1) continue;
    auto cs = e->constants();
    if (std::all_of(cs.begin(), cs.end(), [&](std::uint32_t c) { return carrier.count(c) > 0; }))
      out.push_back(std::move(*e));
  }
  return out;
}

HenkinGrid::HenkinGrid(Alphabet alphabet, std::set<std::uint32_t> carrier, std::vector<Expr> psi)
    : alpha_(std::move(alphabet)), carrier_(std::move(carrier)), psi_(std::move(psi)) {
  if (carrier_.empty()) throw std::invalid_argument("empty carrier");
  for (const auto& p : psi_) only_free_variable(p);
  next_ = *carrier_.rbegin() + 1;
}

std::uint32_t HenkinGrid::allocate(const Expr& u) {
  Word w = alpha_.word(u);
  if (auto it = by_word_.find(w); it != by_word_.end()) return it->second;
  std::uint32_t c = next_++;
  if (carrier_.count(c) || by_word_.size() != allocs_.size()) throw std::logic_error("allocator collision");
  allocs_.push_back({c, u, alpha_.code(w)});
  by_word_.emplace(std::move(w), c);
  return c;
}

bool HenkinGrid::is_henkin_constant(std::uint32_t c) const {
  return !allocs_.empty() && c >= allocs_.front().constant && c <= allocs_.back().constant;
}

const Allocation& HenkinGrid::allocation(std::uint32_t c) const {
  if (!is_henkin_constant(c)) throw std::out_of_range("not an allocated constant");
  return allocs_[c - allocs_.front().constant];
}

Expr HenkinGrid::defining_formula(std::size_t i, std::uint64_t j) const {
  if (i == 0) return Expr::neg(psi_[0]);
  // The last index a_i has no tuple of its own: it takes the all-zero tuple
  // with the ~top disjuncts kept, equivalent to ~psi_i but a different word.
  const std::uint64_t ntuples = a_sequence(i)[i].convert_to<std::uint64_t>();
  const bool extra = j == ntuples;
  auto t = tuple_of_rank(i - 1, extra ? 0 : j);
  std::vector<Expr> parts;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] == 0) {
      if (extra) parts.push_back(Expr::neg(Expr::top()));
      continue;
    }
    const Expr& pk = psi_[k];
    parts.push_back(Expr::neg(substitute(pk, only_free_variable(pk), Expr::constant(constant(k, t[k] - 1)))));
  }
  parts.push_back(Expr::neg(psi_[i]));
  return Expr::disj_all(parts);
}

void HenkinGrid::build(std::size_t i_max) {
  if (psi_.size() <= i_max) throw std::logic_error("grid needs psi_0..psi_i_max");
  auto a = a_sequence(i_max);
  for (std::size_t i = grid_.size(); i <= i_max; ++i) {
    const std::uint64_t n = a[i].convert_to<std::uint64_t>() + 1;
    std::vector<std::uint32_t> row;
    row.reserve(n);
    grid_.push_back({});
    for (std::uint64_t j = 0; j < n; ++j) row.push_back(allocate(defining_formula(i, j)));
    grid_.back() = std::move(row);
  }
}

std::uint32_t HenkinGrid::constant(std::size_t i, std::size_t j) const {
  if (i >= grid_.size()) throw std::logic_error("grid row " + std::to_string(i) + " not filled");
  return grid_[i].at(j);
}

const std::vector<std::uint32_t>& HenkinGrid::row(std::size_t i) const {
  if (i >= grid_.size()) throw std::logic_error("grid row " + std::to_string(i) + " not filled");
  return grid_[i];
}

Expr HenkinGrid::F(std::size_t n) const {
  const auto& r = row(n);
  const Expr& p = psi_[n];
  const std::uint32_t x = only_free_variable(p);
  std::vector<Expr> parts;
  for (auto c : r) parts.push_back(substitute(p, x, Expr::constant(c)));
  Expr f = Expr::imp(Expr::exists(x, p), Expr::disj_all(parts));
  if (!(encode(f, alpha_) > GodelCode(static_cast<std::uint64_t>(n))))
    throw std::logic_error("F_n code not above n");
  return f;
}

nlohmann::json HenkinGrid::to_json(const Signature& sig) const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < grid_[i].size(); ++j) {
      const auto& al = allocation(grid_[i][j]);
      row.push_back({{"i", i}, {"j", j}, {"constant", al.constant}, {"code", al.code.str()}});
    }
    rows.push_back(std::move(row));
  }
  nlohmann::json allocs = nlohmann::json::array();
  for (const auto& al : allocs_)
    allocs.push_back({{"constant", al.constant}, {"code", al.code.str()}, {"formula", to_text(al.formula, sig)}});
  nlohmann::json psi = nlohmann::json::array();
  for (const auto& p : psi_) psi.push_back(to_text(p, sig));
  return {{"psi", psi}, {"grid", rows}, {"allocator", allocs}};
}

std::vector<Expr> star_sequence(HenkinGrid& g, const std::vector<std::size_t>& ms, const std::vector<Expr>& base) {
  for (std::size_t s = 0; s < ms.size(); ++s) {
    if (ms[s] < 1 || ms[s] > base.size()) throw std::out_of_range("index outside 1..w");
    if (s && ms[s - 1] >= ms[s]) throw std::invalid_argument("indices must increase");
  }
  std::vector<Expr> out;  // ~phi*
  for (auto m : ms) {
    const Expr& phi = base[m - 1];
    const std::uint32_t x = only_free_variable(phi);
    std::vector<Expr> parts = out;
    parts.push_back(Expr::neg(phi));
    auto c = g.allocate(Expr::disj_all(parts));
    out.push_back(Expr::neg(substitute(phi, x, Expr::constant(c))));
  }
  return out;
}

std::strong_ordering prec(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  for (const auto* s : {&a, &b})
    for (std::size_t i = 1; i < s->size(); ++i)
      if ((*s)[i - 1] >= (*s)[i]) throw std::invalid_argument("prec: sequence not increasing");
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? std::strong_ordering::less : std::strong_ordering::greater;
  // one is a prefix of the other: the longer one comes first
  if (a.size() == b.size()) return std::strong_ordering::equal;
  return a.size() > b.size() ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::map<std::uint32_t, std::uint32_t> henkin_denotations(const HenkinGrid& g, const FiniteModel& m) {
  std::map<std::uint32_t, std::uint32_t> den;
  FiniteModel cur = m;
  for (const auto& al : g.allocations()) {
    const Expr neg = Expr::neg(al.formula);
    RecursiveType type([neg](std::size_t, const auto&) { return neg; }, {}, only_free_variable(al.formula));
    const std::uint32_t pick = saturation_witness(cur, type, 0).value_or(*m.carrier().begin());
    den[al.constant] = pick;
    cur = cur.with_constants({{al.constant, pick}});
  }
  return den;
}

}  // namespace satclass
