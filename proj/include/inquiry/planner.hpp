#pragma once
// One-step utility controller: candidate generation, seven-component
// scoring, argmax selection, the per-turn loop, and the baseline policies.

#include <optional>
#include <string>
#include <vector>

#include "inquiry/belief.hpp"
#include "inquiry/core.hpp"
#include "inquiry/emr.hpp"
#include "inquiry/extraction.hpp"
#include "inquiry/pack.hpp"
#include "inquiry/retrieval.hpp"
#include "inquiry/state_engine.hpp"

namespace inquiry {

enum class PolicyKind { direct_generation, chunk_rag, rule_template, full_framework };
std::string_view to_string(PolicyKind p);
PolicyKind parse_policy(std::string_view text);  // UnknownPolicy
inline constexpr PolicyKind kAllPolicies[] = {PolicyKind::direct_generation,
                                              PolicyKind::chunk_rag, PolicyKind::rule_template,
                                              PolicyKind::full_framework};

enum class SessionStatus { active, goal_reached, ended };
std::string_view to_string(SessionStatus s);

struct IssuedAction {
  int turn_index = 0;
  Verb verb = Verb::ask;
  std::optional<std::string> target_slot;
};

struct PlanningContext {
  const CurrentState& state;
  const GoalState& goal;
  const Belief& belief;
  const OutcomeModel& outcomes;
  const std::vector<GapSignal>& gaps;
  const RetrievalResult& retrieval;
  const std::vector<IssuedAction>& history;
  int turn_index = 0;
  const EngineConfig& config;
};

// Signs follow U = l1 IG + l2 RR + l3 PS + l4 EG - l5 RP - l6 CL + l7 CB.
double utility(const UtilityBreakdown& c, const UtilityWeights& w);

std::string make_action_id(int turn_index, std::size_t ordinal);

std::vector<ActionCandidate> generate_candidates(const CurrentState& cur,
                                                 const std::vector<GapSignal>& gaps,
                                                 const RetrievalResult& retrieval,
                                                 const GoalState& goal, const KnowledgeBase& kb,
                                                 int turn_index, std::size_t n_max = 12,
                                                 std::size_t k_action = 5);

UtilityBreakdown compute_components(const ActionCandidate& a, const PlanningContext& ctx);

// Fills components and utility on every candidate.
void score_candidates(std::vector<ActionCandidate>& candidates, const PlanningContext& ctx,
                      const UtilityWeights& w);

// Maximal stored utility; ties go to the smaller action id.
// Throws NoCandidates on an empty set.
const ActionCandidate& select_action(const std::vector<ActionCandidate>& candidates);
// Same, but recomputes utility from the stored components under w.
const ActionCandidate& select_action(const std::vector<ActionCandidate>& candidates,
                                     const UtilityWeights& w);

struct RankedSummary {
  std::string object_id;
  double vector_score = 0.0;
  double object_score = 0.0;
  double path_score = 0.0;
  double fused_score = 0.0;
};

struct TurnTrace {
  int turn_index = 0;
  Role speaker = Role::patient;
  std::string text;
  std::optional<std::vector<GoldAnnotation>> gold;
  std::vector<StatefulEvent> events;
  std::vector<std::string> diagnostics;
  CurrentState state;
  std::string state_hash;
  Belief belief;
  double entropy = 0.0;
  std::vector<GapSignal> gaps;
  std::vector<RankedSummary> retrieval;
  std::vector<std::vector<std::string>> paths;
  std::vector<ActionCandidate> candidates;
  std::optional<std::string> chosen_action_id;
  SessionStatus status = SessionStatus::active;
  bool goal_satisfied = false;
  std::string trace_hash;

  const ActionCandidate* chosen() const;
  DialogueTurn as_turn() const;
};

std::string state_hash(const CurrentState& cur);
std::string compute_trace_hash(const TurnTrace& t);

// One consultation. Turns are processed strictly in order; not thread-safe
// on its own (the service serializes access per session).
class Session {
 public:
  Session(std::string session_id, const ScenarioPack& pack, const Scenario& scenario,
          const KnowledgeBase& kb, PolicyKind policy);

  // Runs extract -> fold -> belief -> gaps -> retrieve -> candidates ->
  // score -> select. The turn index is assigned by the session.
  const TurnTrace& run_turn(DialogueTurn turn);

  const std::string& id() const { return id_; }
  const Scenario& scenario() const { return *scenario_; }
  PolicyKind policy() const { return policy_; }
  SessionStatus status() const { return status_; }
  const CurrentState& state() const { return state_; }
  const Belief& belief() const { return belief_; }
  const GoalState& goal() const { return goal_; }
  const EMRecord& record() const { return record_; }
  const std::vector<TurnTrace>& traces() const { return traces_; }
  const std::vector<IssuedAction>& history() const { return history_; }
  std::optional<int> goal_turn() const { return goal_turn_; }
  int next_turn_index() const { return static_cast<int>(traces_.size()); }

 private:
  std::vector<ActionCandidate> template_candidate(int turn_index) const;

  std::string id_;
  const ScenarioPack* pack_;
  const Scenario* scenario_;
  const KnowledgeBase* kb_;
  const BeliefModel* model_;
  PolicyKind policy_;
  GoalState goal_;
  AutoExtractor extractor_;
  CurrentState state_;
  Belief belief_;
  EMRecord record_;
  std::vector<ReasoningPath> last_paths_;
  std::vector<TurnTrace> traces_;
  std::vector<IssuedAction> history_;
  std::size_t checklist_cursor_ = 0;
  SessionStatus status_ = SessionStatus::active;
  std::optional<int> goal_turn_;
};

struct SessionResult {
  std::string scenario_id;
  PolicyKind policy = PolicyKind::full_framework;
  SessionStatus status = SessionStatus::active;
  std::vector<TurnTrace> traces;
  CurrentState final_state;
  EMRecord record;
  std::optional<int> goal_turn;
};

// Replays the scenario's script under a policy, injecting scripted
// responses to chosen actions, up to the configured turn budget.
SessionResult run_policy(const Scenario& scenario, const ScenarioPack& pack,
                         const KnowledgeBase& kb, PolicyKind policy);

}  // namespace inquiry
