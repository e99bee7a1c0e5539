#pragma once
// Shared domain types for the inquiry engine.
//
// Every other module depends only on these definitions. Types are plain
// values; nothing here owns threads or mutable global state.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace inquiry {

enum class ErrorCode {
  ParseError,
  MissingGold,
  DegenerateBelief,
  MissingOutcomeModel,
  EmptyInput,
  ZeroVector,
  NoCandidates,
  UnknownPolicy,
  UnmappedSlot,
  EmptyGold,
  PackInvalid,
  UnknownScenario,
  UnknownSession,
  SessionEnded,
  SessionBusy,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Evidential state of an extracted item. Closed set.
enum class StateLabel {
  observed_result,
  confirmed,
  verified,
  completed,
  historical_result,
  recommended,
  pending_verification,
  unconfirmed,
  not_done,
  negated,
  unknown,
};

inline constexpr StateLabel kAllStates[] = {
    StateLabel::observed_result,   StateLabel::confirmed,
    StateLabel::verified,          StateLabel::completed,
    StateLabel::historical_result, StateLabel::recommended,
    StateLabel::pending_verification, StateLabel::unconfirmed,
    StateLabel::not_done,          StateLabel::negated,
    StateLabel::unknown,
};

std::string_view to_string(StateLabel s);
// Throws Error(ParseError) for anything outside the closed set.
StateLabel parse_state(std::string_view text);

// True for the two explicit-polarity labels whose meaning is symbolic
// (exclusion / absence) rather than carried by weight.
inline bool is_negative(StateLabel s) {
  return s == StateLabel::negated || s == StateLabel::not_done;
}

enum class Temporality { present, recent_past, past, future };
std::string_view to_string(Temporality t);
Temporality parse_temporality(std::string_view text);

enum class Role { patient, physician, family, report };
std::string_view to_string(Role r);
Role parse_role(std::string_view text);

// Weights for not_done / negated are not part of the fixed table; they are
// configurable and default to zero.
struct StateWeightConfig {
  double not_done = 0.0;
  double negated = 0.0;
};

double state_weight(StateLabel s, const StateWeightConfig& cfg = {});

struct EvidenceSpan {
  int turn_index = 0;
  int char_start = 0;
  int char_end = 0;
  Role speaker = Role::patient;

  bool operator==(const EvidenceSpan&) const = default;
};

struct StatefulEvent {
  std::string field_id;
  std::string value;
  StateLabel state = StateLabel::unknown;
  Temporality temporality = Temporality::present;
  Role role = Role::patient;
  EvidenceSpan evidence;
  double confidence = 1.0;
  std::string trace_id;

  bool operator==(const StatefulEvent&) const = default;
};

struct StateEntry {
  std::string field_id;
  std::string value;
  StateLabel state = StateLabel::unknown;
  double weight = 0.0;
  Temporality temporality = Temporality::present;
  std::vector<std::string> supporting_trace_ids;
  std::vector<EvidenceSpan> evidence;
  int last_update_turn = 0;

  bool operator==(const StateEntry&) const = default;
};

struct Contradiction {
  std::string slot_id;
  std::vector<std::string> trace_ids;

  bool operator==(const Contradiction&) const = default;
};

struct CurrentState {
  std::map<std::string, StateEntry> entries;
  std::vector<Contradiction> contradictions;
  // -1 before the first turn has been folded.
  int turn_index = -1;

  const StateEntry* find(const std::string& slot) const {
    auto it = entries.find(slot);
    return it == entries.end() ? nullptr : &it->second;
  }
  bool operator==(const CurrentState&) const = default;
};

struct RiskCondition {
  std::string slot_id;
  std::optional<std::string> value;
  // Empty means any of observed_result / confirmed / verified.
  std::vector<StateLabel> states;
};

struct RiskRule {
  std::string rule_id;
  std::string label;
  std::vector<RiskCondition> antecedent;
  std::vector<std::string> unresolved_condition;
  double severity = 1.0;
  double threshold = 0.7;
};

struct GoalSlot {
  std::string slot_id;
  std::string section;
  bool mandatory = false;
  bool risk_flag = false;
};

struct GoalState {
  std::vector<GoalSlot> required_slots;
  std::vector<RiskRule> risk_rules;
  std::map<std::string, std::vector<std::string>> activation;

  const GoalSlot* find_slot(const std::string& slot) const;
  const RiskRule* find_rule(const std::string& rule_id) const;
  // Restricts required_slots to the scenario's activated subset, if any.
  GoalState for_scenario(const std::string& scenario_id) const;
};

enum class GapKind { information, evidence, risk, differential, path_blocking };
std::string_view to_string(GapKind k);
GapKind parse_gap_kind(std::string_view text);

struct GapSignal {
  GapKind kind = GapKind::information;
  std::optional<std::string> slot_id;
  double severity = 0.0;
  std::string rationale;
  std::string source;

  bool operator==(const GapSignal&) const = default;
};

enum class Verb { ask, verify, explain, recommend_exam, recommend_plan };
std::string_view to_string(Verb v);
Verb parse_verb(std::string_view text);

struct UtilityBreakdown {
  double ig = 0.0;
  double rr = 0.0;
  double ps = 0.0;
  double eg = 0.0;
  double rp = 0.0;
  double cl = 0.0;
  double cb = 0.0;

  bool operator==(const UtilityBreakdown&) const = default;
};

struct ActionCandidate {
  std::string action_id;
  Verb verb = Verb::ask;
  std::optional<std::string> target_slot;
  std::string prompt_text;
  // Knowledge object backing a recommendation, if any.
  std::optional<std::string> object_id;
  // Risk rules this action can discharge.
  std::vector<std::string> discharges;
  GapKind addresses = GapKind::information;
  UtilityBreakdown components;
  double utility = 0.0;

  bool operator==(const ActionCandidate&) const = default;
};

struct KnowledgeEdge {
  std::string src;
  std::string dst;
  std::string relation;
  double cost = 1.0;

  bool operator==(const KnowledgeEdge&) const = default;
};

// nodes.size() == edges.size() + 1; edges[i] joins nodes[i] -> nodes[i+1].
struct ReasoningPath {
  std::vector<std::string> nodes;
  std::vector<KnowledgeEdge> edges;
  double cost = 0.0;
  double score = 0.0;
  // Slots that must be satisfied before the path is actionable.
  std::vector<std::string> preconditions;

  std::size_t length() const { return edges.size(); }
  bool operator==(const ReasoningPath&) const = default;
};

}  // namespace inquiry
