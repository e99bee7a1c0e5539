#pragma once
// JSON mappings for the domain types. Keys serialize in sorted order, which
// keeps every dump byte-stable for diffing and hashing.

#include "json.hpp"

#include "inquiry/core.hpp"
#include "inquiry/emr.hpp"
#include "inquiry/extraction.hpp"
#include "inquiry/pack.hpp"
#include "inquiry/planner.hpp"

namespace inquiry {

using json = nlohmann::json;

void to_json(json& j, StateLabel s);
void from_json(const json& j, StateLabel& s);
void to_json(json& j, Temporality t);
void from_json(const json& j, Temporality& t);
void to_json(json& j, Role r);
void from_json(const json& j, Role& r);

void to_json(json& j, const EvidenceSpan& s);
void from_json(const json& j, EvidenceSpan& s);
void to_json(json& j, const StatefulEvent& e);
void from_json(const json& j, StatefulEvent& e);
void to_json(json& j, const GoldAnnotation& g);
void from_json(const json& j, GoldAnnotation& g);
void to_json(json& j, const StateEntry& e);
void to_json(json& j, const CurrentState& c);
void to_json(json& j, const GapSignal& g);
void to_json(json& j, const UtilityBreakdown& u);
void to_json(json& j, const ActionCandidate& a);
void to_json(json& j, const Belief& b);
void to_json(json& j, const RecordSlot& r);
void to_json(json& j, const EMRecord& r);
void to_json(json& j, const TurnTrace& t);
void to_json(json& j, const RankedSummary& r);

// Body-level helpers used by the CLI and the service.
json trace_summary(const TurnTrace& t, const EMRecord& record, const EMRecord& previous);
json emr_diff(const EMRecord& before, const EMRecord& after);

// Parses one script/response line: {"speaker","text","gold":[...]}.
DialogueTurn parse_turn(const json& j);
json turn_to_json(const DialogueTurn& t);

}  // namespace inquiry
