// satclass: batch front end. Every subcommand prints JSON except `run`,
// which prints the human summary.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "satclass/henkin.hpp"
#include "satclass/omega.hpp"
#include "satclass/pipeline.hpp"
#include "satclass/proof.hpp"
#include "satclass/world.hpp"

using namespace satclass;
using nlohmann::json;

namespace {

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Signature load_signature(const std::string& p) {
  return p.empty() ? Signature({{"p", 1}}, {}, false) : Signature::parse(slurp(p));
}

std::set<std::uint32_t> carrier_of(std::uint32_t k) {
  std::set<std::uint32_t> c;
  for (std::uint32_t i = 0; i < k; ++i) c.insert(i);
  return c;
}

std::string justification_text(const Justification& j) {
  struct V {
    std::string operator()(const LogicalAxiomStep& s) const { return "axiom " + schema_name(s.schema); }
    std::string operator()(const TheoryAxiomStep&) const { return "theory axiom"; }
    std::string operator()(const ModusPonens& m) const {
      return "mp " + std::to_string(m.premise) + " " + std::to_string(m.implication);
    }
    std::string operator()(const Generalization& g) const { return "gen " + std::to_string(g.premise); }
    std::string operator()(const Hypothesis&) const { return "hypothesis"; }
  };
  return std::visit(V{}, j);
}

json derivation_json(const Derivation& d, const Signature& sig) {
  json steps = json::array();
  for (const auto& s : d.steps)
    steps.push_back({{"formula", to_text(s.formula, sig)}, {"justification", justification_text(s.justification)}});
  return steps;
}

const char* status_text(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NoneBelowBound: return "none_below_bound";
    case SearchStatus::Exhausted: return "exhausted";
  }
  return "?";
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satclass: desk-scale satisfaction classes over finite models"};
  app.require_subcommand(1);

  std::string sig_path, theory_path, model_path, formula, goal, bound = "4096", witness = "1024", code;
  std::uint32_t carrier = 2;
  std::size_t n = 0, rows = 2;
  RunConfig cfg;

  auto* parse = app.add_subcommand("parse", "parse a formula, theory or model, or decode a code");
  parse->add_option("--signature", sig_path, "signature file (default: pred p 1)");
  parse->add_option("--formula", formula, "formula text");
  parse->add_option("--theory", theory_path, "theory file");
  parse->add_option("--model", model_path, "model file");
  parse->add_option("--code", code, "Goedel code to decode");

  auto* prove = app.add_subcommand("prove", "least-coded derivation below a bound");
  prove->add_option("--signature", sig_path)->required();
  prove->add_option("--theory", theory_path)->required();
  prove->add_option("--goal", goal)->required();
  prove->add_option("--bound", bound, "code bound or len:N")->capture_default_str();

  auto* gamma = app.add_subcommand("gamma", "Gamma_n verdict over carrier {0..k-1}");
  gamma->add_option("--signature", sig_path)->required();
  gamma->add_option("--theory", theory_path)->required();
  gamma->add_option("--carrier", carrier, "carrier size k")->capture_default_str();
  gamma->add_option("--n", n)->required();
  gamma->add_option("--formula", formula)->required();
  gamma->add_option("--proof-bound", bound)->capture_default_str();
  gamma->add_option("--witness-bound", witness)->capture_default_str();

  auto* grid = app.add_subcommand("grid", "Henkin constant grid rows 0..i");
  grid->add_option("--signature", sig_path, "signature file (default: pred p 1)");
  grid->add_option("--carrier", carrier)->capture_default_str();
  grid->add_option("--i", rows, "last row")->capture_default_str()->check(CLI::Range(0, 3));

  auto add_run_options = [&](CLI::App* c) {
    c->add_option("--signature", cfg.signature_path)->required();
    c->add_option("--theory", cfg.theory_path)->required();
    c->add_option("--model", cfg.model_path)->required();
    c->add_option("--K", cfg.K, "universe bound (code or len:N)")->capture_default_str();
    c->add_option("--proof-bound", cfg.proof_bound)->capture_default_str();
    c->add_option("--witness-bound", cfg.witness_bound)->capture_default_str();
    c->add_option("--n-max", cfg.n_max)->capture_default_str()->check(CLI::Range(0, 3));
    c->add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--out", cfg.output_dir, "output dir (SATCLASS_OUTPUT_DIR overrides)")->capture_default_str();
  };
  auto* tree = app.add_subcommand("tree", "A_M and the path through B_M");
  add_run_options(tree);
  auto* check = app.add_subcommand("check", "full pipeline, report JSON on stdout");
  add_run_options(check);
  auto* run = app.add_subcommand("run", "full pipeline, summary on stdout");
  add_run_options(run);

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse->parsed()) {
      auto sig = load_signature(sig_path);
      Alphabet a(sig);
      json out;
      if (!formula.empty()) {
        auto f = parse_formula(formula, sig);
        out = {{"formula", to_text(f, sig)}, {"code", encode(f, a).str()}, {"sentence", f.is_sentence()}};
      } else if (!theory_path.empty()) {
        auto th = TheoryHandle::parse(slurp(theory_path), sig);
        json ax = json::array();
        for (const auto& f : th.axioms()) ax.push_back({{"formula", to_text(f, sig)}, {"code", encode(f, a).str()}});
        out = {{"theory", th.name()}, {"axioms", ax}};
      } else if (!model_path.empty()) {
        auto m = FiniteModel::parse(slurp(model_path), sig);
        out = {{"model", m.to_text()}, {"carrier", m.carrier()}};
      } else if (!code.empty()) {
        auto d = decode(GodelCode::parse(code), a);
        if (auto* e = std::get_if<Expr>(&d))
          out = {{"kind", e->is_formula() ? "formula" : "term"}, {"text", to_text(*e, sig)}};
        else if (auto* s = std::get_if<std::vector<Expr>>(&d)) {
          json steps = json::array();
          for (const auto& f : *s) steps.push_back(to_text(f, sig));
          out = {{"kind", "sequence"}, {"steps", steps}};
        } else {
          out = {{"kind", "undecodable"}};
        }
      } else {
        out = {{"signature", sig.to_text()}, {"alphabet_size", a.size()}};
      }
      print(out);
      return 0;
    }
    if (prove->parsed()) {
      auto sig = load_signature(sig_path);
      auto th = TheoryHandle::parse(slurp(theory_path), sig);
      auto g = parse_formula(goal, sig);
      auto b = parse_bound(bound, th.alphabet());
      auto r = prove_bounded(g, th, b);
      json out{{"goal", to_text(g, sig)}, {"bound", b.str()}, {"status", status_text(r.status)}};
      if (r) {
        out["code"] = r.code->str();
        out["derivation"] = derivation_json(*r.derivation, sig);
      }
      print(out);
      return r ? 0 : 1;
    }
    if (gamma->parsed()) {
      auto sig = load_signature(sig_path);
      auto th = TheoryHandle::parse(slurp(theory_path), sig);
      OmegaContext ctx{th, carrier_of(carrier), parse_bound(bound, th.alphabet()), parse_bound(witness, th.alphabet())};
      Gamma g(ctx);
      auto f = parse_formula(formula, sig);
      const bool h = g.holds(n, f);
      json out{{"formula", to_text(f, sig)},
               {"n", n},
               {"holds", h},
               {"bounds", {{"proof_bound", ctx.proof_bound.str()}, {"witness_bound", ctx.witness_bound.str()}}},
               {"carrier", ctx.carrier},
               {"exhausted", g.exhausted()}};
      if (auto w = g.witness(n, f); w && n > 0)
        out["witness"] = {{"psi", to_text(w->psi, sig)}, {"variable", w->y}};
      print(out);
      return 0;
    }
    if (grid->parsed()) {
      auto sig = load_signature(sig_path);
      Alphabet a(sig);
      auto cs = carrier_of(carrier);
      HenkinGrid g(a, cs, first_one_free_variable_formulas(a, cs, rows + 1));
      g.build(rows);
      json out = g.to_json(sig);
      json sizes = json::array();
      for (std::size_t i = 0; i < g.rows(); ++i) sizes.push_back(g.row(i).size());
      out["row_sizes"] = sizes;
      print(out);
      return 0;
    }
    if (tree->parsed()) {
      auto sig = Signature::parse(slurp(cfg.signature_path));
      auto th = TheoryHandle::parse(slurp(cfg.theory_path), sig);
      const Alphabet& a = th.alphabet();
      World w(th, FiniteModel::parse(slurp(cfg.model_path), sig),
              Bounds{parse_bound(cfg.K, a), parse_bound(cfg.proof_bound, a), parse_bound(cfg.witness_bound, a), cfg.n_max});
      w.build_universe();
      auto p = find_path(w.am, *w.universe, sig, w.bounds.proof_bound, model_guide(*w.expanded), &*w.expanded);
      auto T = extract_T(p.path, w.am, *w.universe);
      print({{"am", w.am.to_json(sig)}, {"path", path_json(p, *w.universe, sig)}, {"violations", T.violations}});
      return T.violations.empty() ? 0 : 1;
    }
    if (check->parsed() || run->parsed()) {
      auto r = run_pipeline(cfg);
      if (check->parsed())
        print(r.report);
      else
        std::cout << slurp((effective_output_dir(cfg) / "summary.txt").string());
      if (r.exit_code) std::cerr << "satclass: stage " << r.failed_stage << " failed: " << r.message << "\n";
      return r.exit_code;
    }
  } catch (const SyntaxError& e) {
    print({{"error", e.what()}, {"line", e.line()}, {"column", e.column()}});
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "satclass: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
