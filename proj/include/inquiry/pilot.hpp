#pragma once
// Benchmark runners: the four-policy dialogue pilot and the chunk vs hybrid
// retrieval comparison, with JSON and aligned-text renderings.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inquiry/json_io.hpp"
#include "inquiry/metrics.hpp"

namespace inquiry {

struct PolicyRow {
  PolicyKind policy = PolicyKind::full_framework;
  std::string label;
  std::vector<CaseCounts> cases;
  CaseCounts totals;
  // Pooled over scripts (equal to the per-script mean when denominators
  // are equal, which the bundled pack guarantees).
  double coverage = 0.0;
  double risk_recall = 0.0;
  double structural = 0.0;
  std::optional<double> redundancy;
  // Mean over scripts that reached the goal.
  std::optional<double> t_goal;
  std::size_t finished = 0;
  std::size_t dnf = 0;
  std::vector<std::string> trace_hashes;  // final trace hash per script
};

struct PilotReport {
  std::string pack_id;
  std::vector<PolicyRow> rows;
};

std::string_view policy_label(PolicyKind p);

PilotReport run_pilot(const ScenarioPack& pack, const KnowledgeBase& kb,
                      const std::vector<PolicyKind>& policies = {std::begin(kAllPolicies),
                                                                 std::end(kAllPolicies)});
json pilot_json(const PilotReport& r);
std::string pilot_table(const PilotReport& r);

struct RetrievalRow {
  std::string label;
  RetrievalMode mode = RetrievalMode::hybrid;
  std::size_t queries = 0;
  std::size_t recall_hits = 0;
  std::size_t object_hits = 0;
  std::size_t path_hits = 0;
  double recall = 0.0;
  double mrr = 0.0;
  double ndcg = 0.0;
  double object_hit_rate = 0.0;
  double path_hit_rate = 0.0;
};

struct RetrievalReport {
  std::size_t k = 5;
  std::size_t risk_critical = 0;
  std::vector<RetrievalRow> rows;  // chunk first, then hybrid
};

// Folds query facts into a state as if each arrived on turn 0.
CurrentState state_from_facts(const std::vector<StateFact>& facts,
                              const StateWeightConfig& weights = {});

// Throws EmptyInput when the pack has no query points.
RetrievalReport bench_retrieval(const ScenarioPack& pack, const KnowledgeBase& kb,
                                std::size_t k = 5);
json retrieval_json(const RetrievalReport& r);
std::string retrieval_table(const RetrievalReport& r);

// Flat "<row>.<metric>" view used for threshold checks.
std::map<std::string, double> flatten_metrics(const PilotReport* pilot,
                                              const RetrievalReport* retrieval);

// Thresholds are minimums unless the key starts with "max_". Keys absent
// from the metric map are reported as violations.
std::vector<std::string> check_thresholds(const std::map<std::string, double>& thresholds,
                                          const std::map<std::string, double>& metrics);

}  // namespace inquiry
