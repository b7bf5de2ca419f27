// N = (M, T): Tarski conditions, reflection and the Q probes, all checked
// over the sentences of the code universe.
#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "satclass/henkin.hpp"
#include "satclass/model.hpp"
#include "satclass/omega.hpp"
#include "satclass/tree.hpp"

namespace satclass {

class ExpandedModel {
 public:
  // `base` must interpret every constant that occurs in a universe sentence.
  ExpandedModel(const FiniteModel& base, std::set<std::uint64_t> truth, const Universe& u)
      : base_(base), truth_(std::move(truth)), u_(u) {}

  const FiniteModel& base() const { return base_; }
  const Universe& universe() const { return u_; }
  const std::set<std::uint64_t>& truth() const { return truth_; }
  bool T(std::uint64_t code) const { return truth_.count(code) > 0; }
  // absent when the sentence codes at or above the universe
  std::optional<bool> T(const Expr& sigma) const;

 private:
  const FiniteModel& base_;
  std::set<std::uint64_t> truth_;
  const Universe& u_;
};

struct Failure {
  std::vector<std::uint64_t> codes;
  std::string detail;
};

struct ConditionReport {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;  // instances coded at or above the universe
  std::vector<Failure> failures;  // the first few
  nlohmann::json witnesses = nlohmann::json::array();

  void fail(std::vector<std::uint64_t> codes, std::string detail);
  nlohmann::json to_json() const;
};

struct TarskiReport {
  std::array<ConditionReport, 5> condition;  // conditions 1..5
  bool ok() const;
  nlohmann::json to_json() const;
};

// (1) members are sentences; (2) variable-free atoms agree with the model;
// (3) negation; (4) conjunction, and likewise disjunction and implication;
// (5) forall over carrier constants, and dually exists. The exists-direction
// of (5) is traced through F_n when psi_n matches; pass a null grid to skip.
TarskiReport check_tarski(const ExpandedModel& n, const HenkinGrid* grid);

struct ReflectionReport {
  std::size_t provable = 0;  // bounded-provable sentences below the universe
  std::vector<Failure> failures;
  struct Level {
    std::size_t n;
    std::size_t checked = 0;  // sentences outside T for which Gamma_n was decided
    std::vector<Failure> failures;  // Gamma_n holds outside T
  };
  std::vector<Level> levels;
  bool ok() const;
  nlohmann::json to_json() const;
};

// Every bounded-provable sentence is in T, and Gamma_n[phi] => phi in T for
// n <= n_max. Gamma_n only needs deciding outside T; `jobs` threads share it.
ReflectionReport check_reflection(const ExpandedModel& n, Gamma& g, std::size_t n_max, unsigned jobs = 1);

struct QReport {
  bool bot_in_T = false;
  std::vector<std::pair<std::size_t, bool>> levels;  // (n, Gamma_n[bot])
  bool ok() const;
  nlohmann::json to_json() const;
};

QReport check_Q(const ExpandedModel& n, Gamma& g, std::size_t n_max);

struct AgreementReport {
  std::size_t settled = 0;      // sentences where box proves the sentence or its negation
  std::size_t disagree_T = 0;   // T on the wrong side
  bool model_satisfies_S = false;
  std::size_t disagree_model = 0;  // only counted when the model satisfies S
  std::vector<Failure> failures;
  bool ok() const { return disagree_T == 0 && disagree_model == 0; }
  nlohmann::json to_json() const;
};

AgreementReport check_agreement(const ExpandedModel& n, Gamma& g, unsigned jobs = 1);

}  // namespace satclass
