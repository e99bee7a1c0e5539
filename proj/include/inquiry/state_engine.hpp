#pragma once
// State folding (C_t from C_{t-1} and the turn's events) and typed gap
// derivation against the goal.

#include <set>
#include <string>
#include <vector>

#include "inquiry/belief.hpp"
#include "inquiry/core.hpp"

namespace inquiry {

struct StateEngineConfig {
  StateWeightConfig weights;
  double w_min = 0.7;   // slot counts as satisfied at or above this weight
  double delta = 0.15;  // differential gap when top-two belief margin is below this
  double information_severity = 1.0;
  double path_blocking_severity = 0.5;
};

// Folds events in order. Precedence on a shared slot:
//   * a negated/not_done event against a weight-1.0 entry records a
//     contradiction and leaves the entry alone;
//   * a negated/not_done event otherwise replaces the entry (explicit
//     resolution of a weaker mention);
//   * a weight-1.0 event against a negated entry replaces it and records a
//     contradiction;
//   * otherwise the higher state weight wins, and on ties the later event.
// Events whose trace id is already folded are skipped, so re-applying a
// batch is a no-op. Superseded trace ids are kept.
CurrentState apply_events(const CurrentState& prev, const std::vector<StatefulEvent>& events,
                          int turn_index, const StateWeightConfig& weights = {});

std::set<std::string> known_trace_ids(const CurrentState& cur);

// weight >= w_min, or an explicit negated/not_done answer.
bool slot_satisfied(const StateEntry& entry, double w_min);
bool slot_satisfied(const CurrentState& cur, const std::string& slot, double w_min);

bool rule_fired(const RiskRule& rule, const CurrentState& cur);
// A fired rule is discharged when each unresolved slot reaches the rule's
// threshold or has been explicitly negated.
bool rule_discharged(const RiskRule& rule, const CurrentState& cur);
std::vector<std::string> outstanding_slots(const RiskRule& rule, const CurrentState& cur);
std::vector<const RiskRule*> open_risk_rules(const GoalState& goal, const CurrentState& cur);

std::vector<std::string> unmet_mandatory(const CurrentState& cur, const GoalState& goal,
                                         double w_min);
bool goal_satisfied(const CurrentState& cur, const GoalState& goal, double w_min);

// Deterministically ordered by (kind, slot_id, source).
std::vector<GapSignal> derive_gaps(const CurrentState& cur, const GoalState& goal,
                                   const Belief& belief, const std::vector<ReasoningPath>& paths,
                                   const StateEngineConfig& cfg = {});

// Tie-break priority among gap kinds: risk > evidence > information >
// differential > path_blocking. Lower is more urgent.
int gap_priority(GapKind kind);

}  // namespace inquiry
