#include "satclass/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "satclass/satisfaction.hpp"
#include "satclass/world.hpp"

namespace satclass {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

void spit_json(const fs::path& p, const nlohmann::json& j) { spit(p, j.dump(2) + "\n"); }

struct StageFailure : std::runtime_error {
  StageFailure(std::string stage, const std::string& msg) : std::runtime_error(msg), stage(std::move(stage)) {}
  std::string stage;
};

// runs f, turning any exception into a failure of `stage`
template <class F>
auto stage(const char* name, F f) {
  try {
    return f();
  } catch (const StageFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw StageFailure(name, e.what());
  }
}

std::string summary_text(const nlohmann::json& r) {
  std::ostringstream s;
  s << "universe K = " << r["universe"].get<std::string>() << "\n";
  for (const auto& st : r["stages"]) s << "stage " << st["name"].get<std::string>() << ": ok\n";
  if (r.contains("failed_stage")) s << "stage " << r["failed_stage"].get<std::string>() << ": FAILED\n";
  if (r.contains("tarski"))
    for (auto& [k, v] : r["tarski"].items())
      s << "tarski " << k << ": checked " << v["checked"] << ", failed " << v["failed"] << ", skipped "
        << v["skipped"] << "\n";
  if (r.contains("checks"))
    for (auto& [k, v] : r["checks"].items()) s << "check " << k << ": " << (v.get<bool>() ? "pass" : "FAIL") << "\n";
  s << "verdict: " << r["verdict"].get<std::string>() << "\n";
  return s.str();
}

}  // namespace

fs::path effective_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("SATCLASS_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

std::vector<std::uint64_t> read_truth_file(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::uint64_t> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(std::stoull(line.substr(0, line.find('\t'))));
  }
  return out;
}

RunOutcome run_pipeline(const RunConfig& cfg) {
  RunOutcome out;
  const fs::path dir = effective_output_dir(cfg);
  nlohmann::json& rep = out.report;
  rep["stages"] = nlohmann::json::array();
  rep["universe"] = cfg.K;
  auto done = [&](const char* name) { rep["stages"].push_back({{"name", name}}); };

  try {
    fs::create_directories(dir);
    if (cfg.n_max > 3) throw StageFailure("load", "n_max above 3 is not supported (row 4 has 1807 constants)");

    auto [sig, theory, model] = stage("load", [&] {
      auto sig = Signature::parse(slurp(cfg.signature_path));
      auto th = TheoryHandle::parse(slurp(cfg.theory_path), sig);
      auto m = FiniteModel::parse(slurp(cfg.model_path), sig);
      return std::make_tuple(sig, th, m);
    });
    const Alphabet& a = theory.alphabet();
    Bounds b = stage("load", [&] {
      Bounds b{parse_bound(cfg.K, a), parse_bound(cfg.proof_bound, a), parse_bound(cfg.witness_bound, a), cfg.n_max};
      if (b.K <= GodelCode(0) || b.proof_bound <= GodelCode(0) || b.witness_bound <= GodelCode(0))
        throw std::invalid_argument("bounds must be positive");
      return b;
    });
    rep["universe"] = b.K.str();
    rep["bounds"] = {{"K", b.K.str()},
                     {"proof_bound", b.proof_bound.str()},
                     {"witness_bound", b.witness_bound.str()},
                     {"n_max", b.n_max}};
    done("load");

    World w = stage("grid", [&] { return World(theory, model, b); });
    if (w.grid) spit_json(dir / "grid.json", w.grid->to_json(sig));
    else spit_json(dir / "grid.json", {{"psi", nlohmann::json::array()}, {"grid", nlohmann::json::array()},
                                       {"allocator", nlohmann::json::array()}});
    done("grid");

    stage("am", [&] {
      w.build_universe();
      return 0;
    });
    spit_json(dir / "am.json", {{"members", w.am.to_json(sig)}, {"exhausted", w.am.exhausted()}});
    rep["am"] = {{"members", w.am.entries().size()}, {"below_universe", w.am.codes_below().size()},
                 {"exhausted", w.am.exhausted()}};
    done("am");

    // consistency of S probed before the tree, so an inconsistent S stops here
    QReport probe;
    probe.levels = stage("q-check", [&] { return q_axioms(*w.gamma, cfg.n_max); });
    rep["q"] = probe.to_json();
    if (!probe.ok()) throw StageFailure("q-check", "Gamma_n[bot] holds: S is inconsistent at the bounds");
    done("q-check");

    auto path = stage("tree", [&] {
      return find_path(w.am, *w.universe, sig, b.proof_bound, model_guide(*w.expanded), &*w.expanded);
    });
    spit_json(dir / "path.json", path_json(path, *w.universe, sig));
    done("tree");

    TruthSet T = stage("extract", [&] { return extract_T(path.path, w.am, *w.universe); });
    {
      std::ostringstream s;
      for (auto c : T.codes) s << c << '\t' << to_text(w.universe->formula(c), sig) << '\n';
      spit(dir / "truth.txt", s.str());
    }
    rep["extract"] = {{"size", T.codes.size()}, {"violations", T.violations}};
    done("extract");

    stage("check", [&] {
      ExpandedModel N(*w.expanded, T.codes, *w.universe);
      auto tarski = check_tarski(N, w.grid.get());
      auto refl = check_reflection(N, *w.gamma, cfg.n_max, cfg.jobs);
      auto q = check_Q(N, *w.gamma, cfg.n_max);
      auto ag = check_agreement(N, *w.gamma, cfg.jobs);
      rep["tarski"] = tarski.to_json();
      rep["reflection"] = refl.to_json();
      rep["q"] = q.to_json();
      rep["agreement"] = ag.to_json();
      rep["checks"] = {{"extract", T.violations.empty()},
                       {"tarski", tarski.ok()},
                       {"reflection", refl.ok()},
                       {"q", q.ok()},
                       {"agreement", ag.ok()}};
      return 0;
    });
    done("check");

    bool all = true;
    for (auto& [k, v] : rep["checks"].items()) all = all && v.get<bool>();
    out.exit_code = all ? 0 : 1;
    if (!all) {
      out.failed_stage = "check";
      out.message = "some checks failed";
    }
  } catch (const StageFailure& f) {
    out.exit_code = 2;
    out.failed_stage = f.stage;
    out.message = f.what();
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.failed_stage = "io";
    out.message = e.what();
  }

  if (!out.failed_stage.empty()) {
    rep["failed_stage"] = out.failed_stage;
    rep["message"] = out.message;
  }
  rep["verdict"] = out.exit_code == 0 ? "pass" : "fail";
  try {
    spit_json(dir / "report.json", rep);
    spit(dir / "summary.txt", summary_text(rep));
  } catch (const std::exception& e) {
    if (out.exit_code == 0) out.exit_code = 2;
    out.failed_stage = "io";
    out.message = e.what();
  }
  return out;
}

}  // namespace satclass
