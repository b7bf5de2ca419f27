// End-to-end run: psi_n -> grid -> F_n -> A_M -> tree -> path -> T -> checks.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace satclass {

struct RunConfig {
  std::filesystem::path signature_path;
  std::filesystem::path theory_path;
  std::filesystem::path model_path;
  // decimal codes or "len:N"
  std::string K = "4096";
  std::string proof_bound = "4096";
  std::string witness_bound = "1024";
  std::size_t n_max = 3;
  unsigned jobs = 1;
  std::filesystem::path output_dir = "satclass-out";
};

// SATCLASS_OUTPUT_DIR, when set, replaces cfg.output_dir.
std::filesystem::path effective_output_dir(const RunConfig& cfg);

struct RunOutcome {
  int exit_code = 0;  // 0 iff every check passed
  std::string failed_stage;
  std::string message;
  nlohmann::json report;
};

// Artifacts in the output dir: grid.json, am.json, path.json, truth.txt,
// report.json, summary.txt. A failing stage still writes report.json.
RunOutcome run_pipeline(const RunConfig& cfg);

// truth.txt: one "code<TAB>formula" line per member of T.
std::vector<std::uint64_t> read_truth_file(const std::filesystem::path& p);

}  // namespace satclass
