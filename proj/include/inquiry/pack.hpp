#pragma once
// Scenario packs: scripts, goals, models, gold audits, and query points,
// plus the on-disk JSON / JSON-lines loaders and the pack linter.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inquiry/belief.hpp"
#include "inquiry/core.hpp"
#include "inquiry/emr.hpp"
#include "inquiry/extraction.hpp"
#include "inquiry/retrieval.hpp"
#include "inquiry/state_engine.hpp"

namespace inquiry {

struct UtilityWeights {
  // IG, RR, PS, EG, RP, CL, CB
  std::array<double, 7> lambda{1.0, 1.5, 0.5, 0.3, 1.0, 0.5, 0.4};
};

struct EngineConfig {
  StateEngineConfig state;
  RetrievalConfig retrieval;
  ProjectionConfig emr;
  UtilityWeights lambda;
  std::size_t n_max = 12;
  std::size_t k_action = 5;  // retrieval ranks searched for recommendation objects
  int rp_window = 3;
  double rp_weight = 0.7;
  int cl_run_cap = 5;
  int max_turns = 16;
};

// Injected as the next turn when the system's chosen action targets one of
// the listed slots. Each response fires at most once per session.
struct ScriptedResponse {
  std::vector<std::string> on;
  DialogueTurn turn;
};

struct Scenario {
  std::string scenario_id;
  std::string title;
  std::string family;
  std::string goal_template;
  std::vector<std::string> checklist;
  std::vector<DialogueTurn> script;
  std::vector<ScriptedResponse> responses;
};

struct BeliefModel {
  std::vector<Hypothesis> hypotheses;
  LikelihoodModel likelihoods;
  OutcomeModel outcomes;
};

struct GoldItem {
  std::string slot_id;
  std::string normalized_value;
  StateLabel status = StateLabel::observed_result;
  Temporality temporality = Temporality::present;
  Assertion assertion = Assertion::positive;
  std::string section;
  bool risk_flag = false;
  bool structural = false;
};

struct GoldAudit {
  std::string scenario_id;
  std::vector<GoldItem> items;
  // "verb:slot" pairs the protocol marks low-value whenever proposed.
  std::vector<std::string> low_value;

  std::size_t risk_count() const;
  std::size_t structural_count() const;
};

struct StateFact {
  std::string slot_id;
  std::string value;
  StateLabel state = StateLabel::observed_result;
};

struct QueryPoint {
  std::string query_id;
  std::string scenario_id;
  std::string query_type;
  std::string prompt;
  std::string target_slot;
  std::vector<StateFact> state;
  std::vector<std::string> relevant_objects;
  std::string primary_object;
  std::vector<std::vector<std::string>> gold_paths;
  bool risk_critical = false;
};

struct PackCounts {
  std::size_t scripts = 0;
  std::size_t gold_items = 0;
  std::size_t risk_items = 0;
  std::size_t structural_slots = 0;
  std::size_t query_points = 0;
  std::size_t risk_critical_queries = 0;
};

struct PackManifest {
  std::string pack_id;
  PackCounts counts;
  // Metric name -> minimum (or maximum, for names starting "max_") value
  // the evaluate command enforces.
  std::map<std::string, double> thresholds;
  std::map<std::string, std::string> unit_aliases;
  std::string notes;
};

struct ScenarioPack {
  std::filesystem::path root;
  PackManifest manifest;
  EngineConfig config;
  std::vector<Scenario> scenarios;
  std::map<std::string, GoalState> goals;
  std::map<std::string, BeliefModel> models;
  RecordSchema schema;
  std::vector<ExtractionRule> rules;
  std::map<std::string, GoldAudit> gold;
  std::vector<QueryPoint> queries;

  const Scenario& scenario(const std::string& id) const;  // UnknownScenario
  const Scenario* find_scenario(const std::string& id) const;
  GoalState goal_for(const Scenario& s) const;
  const BeliefModel& model_for(const Scenario& s) const;
};

// Pack-level cutoffs combined with the kb's alpha, beta and rho.
RetrievalConfig effective_retrieval(const EngineConfig& cfg, const KnowledgeBase& kb);

// Loaders throw Error(PackInvalid) with a file/line locator.
ScenarioPack load_pack(const std::filesystem::path& dir);
KnowledgeBase load_kb(const std::filesystem::path& dir);

// Cross-reference and count checks; empty result means the pack is clean.
std::vector<std::string> validate_pack(const ScenarioPack& pack, const KnowledgeBase* kb);

}  // namespace inquiry
