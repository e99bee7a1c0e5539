#pragma once
// Structured record projected from CurrentState. Read-only view; never
// feeds back into control.

#include <map>
#include <string>
#include <vector>

#include "inquiry/core.hpp"

namespace inquiry {

enum class Assertion { positive, negative, proposed };
std::string_view to_string(Assertion a);
Assertion parse_assertion(std::string_view text);
Assertion assertion_for(StateLabel s);

struct RecordSchema {
  std::vector<std::string> sections{"HPI", "ROS", "Plan", "Risk"};
  std::map<std::string, std::string> slot_section;

  const std::string* section_of(const std::string& slot) const;
};

struct RecordSlot {
  std::string slot_id;
  std::string normalized_value;
  StateLabel status = StateLabel::unknown;
  Temporality temporality = Temporality::present;
  Assertion assertion = Assertion::positive;
  bool risk_flag = false;
  std::vector<EvidenceSpan> evidence;
  std::vector<std::string> trace_ids;

  bool operator==(const RecordSlot&) const = default;
};

struct RiskSummary {
  std::string rule_id;
  std::string label;
  bool discharged = false;
  std::vector<std::string> outstanding;

  bool operator==(const RiskSummary&) const = default;
};

struct EMRecord {
  // Section order follows the schema; slots within a section by slot id.
  std::vector<std::pair<std::string, std::vector<RecordSlot>>> sections;
  std::vector<RiskSummary> risk;
  int generated_at_turn = -1;

  const RecordSlot* find(const std::string& slot) const;
  std::size_t slot_count() const;
  bool operator==(const EMRecord&) const = default;
};

struct ProjectionConfig {
  double w_emr = 0.5;
};

// Emits entries at or above w_emr, every negated/not_done entry (negative)
// and every recommended entry (proposed). Throws UnmappedSlot when an
// emitted entry has no section in the schema.
EMRecord project_record(const CurrentState& cur, const GoalState& goal,
                        const RecordSchema& schema, const ProjectionConfig& cfg = {});

}  // namespace inquiry
