#include "inquiry/emr.hpp"

#include <algorithm>

#include "inquiry/state_engine.hpp"

namespace inquiry {

std::string_view to_string(Assertion a) {
  switch (a) {
    case Assertion::positive: return "positive";
    case Assertion::negative: return "negative";
    case Assertion::proposed: return "proposed";
  }
  return "?";
}

Assertion parse_assertion(std::string_view text) {
  if (text == "positive") return Assertion::positive;
  if (text == "negative") return Assertion::negative;
  if (text == "proposed") return Assertion::proposed;
  throw Error(ErrorCode::ParseError, "unknown assertion: '" + std::string(text) + "'");
}

Assertion assertion_for(StateLabel s) {
  if (is_negative(s)) return Assertion::negative;
  if (s == StateLabel::recommended) return Assertion::proposed;
  return Assertion::positive;
}

const std::string* RecordSchema::section_of(const std::string& slot) const {
  auto it = slot_section.find(slot);
  return it == slot_section.end() ? nullptr : &it->second;
}

const RecordSlot* EMRecord::find(const std::string& slot) const {
  for (const auto& [section, slots] : sections) {
    for (const auto& s : slots) {
      if (s.slot_id == slot) return &s;
    }
  }
  return nullptr;
}

std::size_t EMRecord::slot_count() const {
  std::size_t n = 0;
  for (const auto& [section, slots] : sections) n += slots.size();
  return n;
}

EMRecord project_record(const CurrentState& cur, const GoalState& goal,
                        const RecordSchema& schema, const ProjectionConfig& cfg) {
  EMRecord rec;
  rec.generated_at_turn = cur.turn_index;
  std::vector<std::string> order = schema.sections;
  for (const auto& [slot, section] : schema.slot_section) {
    if (std::find(order.begin(), order.end(), section) == order.end()) order.push_back(section);
  }
  for (const auto& s : order) rec.sections.emplace_back(s, std::vector<RecordSlot>{});

  // entries is an ordered map, so slots land in slot-id order.
  for (const auto& [slot, entry] : cur.entries) {
    const bool include = entry.state != StateLabel::unknown &&
                         (entry.weight >= cfg.w_emr || is_negative(entry.state) ||
                          entry.state == StateLabel::recommended);
    if (!include) continue;
    const auto* section = schema.section_of(slot);
    if (!section) throw Error(ErrorCode::UnmappedSlot, "slot '" + slot + "' has no record section");

    RecordSlot rs;
    rs.slot_id = slot;
    rs.normalized_value = entry.value;
    rs.status = entry.state;
    rs.temporality = entry.temporality;
    rs.assertion = assertion_for(entry.state);
    const auto* goal_slot = goal.find_slot(slot);
    rs.risk_flag = goal_slot && goal_slot->risk_flag;
    rs.evidence = entry.evidence;
    rs.trace_ids = entry.supporting_trace_ids;
    for (auto& [name, slots] : rec.sections) {
      if (name == *section) {
        slots.push_back(std::move(rs));
        break;
      }
    }
  }

  for (const auto& rule : goal.risk_rules) {
    if (!rule_fired(rule, cur)) continue;
    RiskSummary r;
    r.rule_id = rule.rule_id;
    r.label = rule.label;
    r.outstanding = outstanding_slots(rule, cur);
    r.discharged = r.outstanding.empty();
    rec.risk.push_back(std::move(r));
  }
  return rec;
}

}  // namespace inquiry
