#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "satclass/pipeline.hpp"
#include "satclass/tree.hpp"

using namespace satclass;
namespace fs = std::filesystem;

namespace {

const fs::path kExamples = fs::path(SATCLASS_FIXTURES) / "examples";

RunConfig config(const std::string& example, const fs::path& out) {
  RunConfig c;
  c.signature_path = kExamples / example / "signature.txt";
  c.theory_path = kExamples / example / "theory.txt";
  c.model_path = kExamples / example / "model.txt";
  c.K = "20000";
  c.proof_bound = "len:12";
  c.witness_bound = "len:8";
  c.n_max = 2;
  c.output_dir = out;
  return c;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("satclass-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kArtifacts[] = {"grid.json", "am.json", "path.json", "truth.txt", "report.json", "summary.txt"};

}  // namespace

TEST_CASE("bundled example passes end to end") {
  auto dir = scratch("forall");
  auto r = run_pipeline(config("forall_p", dir));
  CHECK(r.exit_code == 0);
  CHECK(r.failed_stage.empty());
  for (auto a : kArtifacts) CHECK(fs::exists(dir / a));
  auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(rep["verdict"] == "pass");
  CHECK(rep["universe"] == "20000");
  for (auto& [k, v] : rep["tarski"].items()) CHECK(v["failed"] == 0);
  CHECK(rep["stages"].size() == 7);
}

TEST_CASE("bot in S fails at the q-check stage") {
  auto dir = scratch("bot");
  auto r = run_pipeline(config("with_bot", dir));
  CHECK(r.exit_code != 0);
  CHECK(r.failed_stage == "q-check");
  auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(rep["verdict"] == "fail");
  CHECK(rep["q"]["levels"][0]["gamma_bot"] == true);
  CHECK_FALSE(fs::exists(dir / "path.json"));
}

TEST_CASE("missing input names the load stage") {
  auto c = config("forall_p", scratch("missing"));
  c.model_path = kExamples / "no_such_model.txt";
  auto r = run_pipeline(c);
  CHECK(r.exit_code == 2);
  CHECK(r.failed_stage == "load");
}

TEST_CASE("reruns are byte-identical") {
  auto a = scratch("det-a"), b = scratch("det-b");
  auto ca = config("modus_ponens", a), cb = config("modus_ponens", b);
  cb.jobs = 3;
  REQUIRE(run_pipeline(ca).exit_code == 0);
  REQUIRE(run_pipeline(cb).exit_code == 0);
  for (auto f : kArtifacts) CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
}

TEST_CASE("artifacts read back") {
  auto dir = scratch("roundtrip");
  REQUIRE(run_pipeline(config("forall_p", dir)).exit_code == 0);
  auto path = nlohmann::json::parse(slurp(dir / "path.json"));
  auto bits = TruthAssignment::from_rle(path["bits"]);
  CHECK(bits.length() == 20000);
  CHECK(bits.rle() == path["bits"]);
  CHECK(read_truth_file(dir / "truth.txt") == bits.ones());
  auto grid = nlohmann::json::parse(slurp(dir / "grid.json"));
  CHECK(grid["grid"].size() == 3);
  auto am = nlohmann::json::parse(slurp(dir / "am.json"));
  CHECK(am["members"].size() == nlohmann::json::parse(slurp(dir / "report.json"))["am"]["members"]);
}

TEST_CASE("output dir comes from the environment when set") {
  auto env = scratch("env"), flag = scratch("flag");
  ::setenv("SATCLASS_OUTPUT_DIR", env.c_str(), 1);
  auto r = run_pipeline(config("modus_ponens", flag));
  ::unsetenv("SATCLASS_OUTPUT_DIR");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(env / "report.json"));
  CHECK_FALSE(fs::exists(flag));
}
