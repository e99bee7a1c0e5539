#include "inquiry/core.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace inquiry {
namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view text,
             const std::array<std::pair<std::string_view, E>, N>& table,
             std::string_view what) {
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  throw Error(ErrorCode::ParseError,
              "unknown " + std::string(what) + ": '" + std::string(text) + "'");
}

template <typename E, std::size_t N>
std::string_view enum_name(E value,
                           const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<std::string_view, StateLabel>, 11> kStateNames{{
    {"observed_result", StateLabel::observed_result},
    {"confirmed", StateLabel::confirmed},
    {"verified", StateLabel::verified},
    {"completed", StateLabel::completed},
    {"historical_result", StateLabel::historical_result},
    {"recommended", StateLabel::recommended},
    {"pending_verification", StateLabel::pending_verification},
    {"unconfirmed", StateLabel::unconfirmed},
    {"not_done", StateLabel::not_done},
    {"negated", StateLabel::negated},
    {"unknown", StateLabel::unknown},
}};

constexpr std::array<std::pair<std::string_view, Temporality>, 4> kTemporalityNames{{
    {"present", Temporality::present},
    {"recent_past", Temporality::recent_past},
    {"past", Temporality::past},
    {"future", Temporality::future},
}};

constexpr std::array<std::pair<std::string_view, Role>, 4> kRoleNames{{
    {"patient", Role::patient},
    {"physician", Role::physician},
    {"family", Role::family},
    {"report", Role::report},
}};

constexpr std::array<std::pair<std::string_view, GapKind>, 5> kGapNames{{
    {"information", GapKind::information},
    {"evidence", GapKind::evidence},
    {"risk", GapKind::risk},
    {"differential", GapKind::differential},
    {"path_blocking", GapKind::path_blocking},
}};

constexpr std::array<std::pair<std::string_view, Verb>, 5> kVerbNames{{
    {"ask", Verb::ask},
    {"verify", Verb::verify},
    {"explain", Verb::explain},
    {"recommend_exam", Verb::recommend_exam},
    {"recommend_plan", Verb::recommend_plan},
}};

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingGold: return "MissingGold";
    case ErrorCode::DegenerateBelief: return "DegenerateBelief";
    case ErrorCode::MissingOutcomeModel: return "MissingOutcomeModel";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::UnknownPolicy: return "UnknownPolicy";
    case ErrorCode::UnmappedSlot: return "UnmappedSlot";
    case ErrorCode::EmptyGold: return "EmptyGold";
    case ErrorCode::PackInvalid: return "PackInvalid";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::SessionEnded: return "SessionEnded";
    case ErrorCode::SessionBusy: return "SessionBusy";
  }
  return "Unknown";
}

std::string_view to_string(StateLabel s) { return enum_name(s, kStateNames); }
StateLabel parse_state(std::string_view text) {
  return parse_enum(text, kStateNames, "state label");
}

std::string_view to_string(Temporality t) { return enum_name(t, kTemporalityNames); }
Temporality parse_temporality(std::string_view text) {
  return parse_enum(text, kTemporalityNames, "temporality");
}

std::string_view to_string(Role r) { return enum_name(r, kRoleNames); }
Role parse_role(std::string_view text) { return parse_enum(text, kRoleNames, "role"); }

std::string_view to_string(GapKind k) { return enum_name(k, kGapNames); }
GapKind parse_gap_kind(std::string_view text) {
  return parse_enum(text, kGapNames, "gap kind");
}

std::string_view to_string(Verb v) { return enum_name(v, kVerbNames); }
Verb parse_verb(std::string_view text) { return parse_enum(text, kVerbNames, "verb"); }

double state_weight(StateLabel s, const StateWeightConfig& cfg) {
  switch (s) {
    case StateLabel::observed_result:
    case StateLabel::confirmed:
    case StateLabel::verified:
      return 1.0;
    case StateLabel::completed:
      return 0.7;
    case StateLabel::historical_result:
      return 0.5;
    case StateLabel::recommended:
    case StateLabel::pending_verification:
    case StateLabel::unconfirmed:
      return 0.2;
    case StateLabel::unknown:
      return 0.0;
    case StateLabel::not_done:
      return cfg.not_done;
    case StateLabel::negated:
      return cfg.negated;
  }
  return 0.0;
}

const GoalSlot* GoalState::find_slot(const std::string& slot) const {
  auto it = std::find_if(required_slots.begin(), required_slots.end(),
                         [&](const GoalSlot& g) { return g.slot_id == slot; });
  return it == required_slots.end() ? nullptr : &*it;
}

const RiskRule* GoalState::find_rule(const std::string& rule_id) const {
  auto it = std::find_if(risk_rules.begin(), risk_rules.end(),
                         [&](const RiskRule& r) { return r.rule_id == rule_id; });
  return it == risk_rules.end() ? nullptr : &*it;
}

GoalState GoalState::for_scenario(const std::string& scenario_id) const {
  auto it = activation.find(scenario_id);
  if (it == activation.end()) return *this;
  GoalState out;
  out.risk_rules = risk_rules;
  out.activation = activation;
  for (const auto& slot : required_slots) {
    if (std::find(it->second.begin(), it->second.end(), slot.slot_id) != it->second.end()) {
      out.required_slots.push_back(slot);
    }
  }
  return out;
}

}  // namespace inquiry
