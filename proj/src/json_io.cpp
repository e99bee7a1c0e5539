#include "inquiry/json_io.hpp"

#include <set>

namespace inquiry {
namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void to_json(json& j, StateLabel s) { j = std::string(to_string(s)); }
void from_json(const json& j, StateLabel& s) { s = parse_state(j.get<std::string>()); }
void to_json(json& j, Temporality t) { j = std::string(to_string(t)); }
void from_json(const json& j, Temporality& t) { t = parse_temporality(j.get<std::string>()); }
void to_json(json& j, Role r) { j = std::string(to_string(r)); }
void from_json(const json& j, Role& r) { r = parse_role(j.get<std::string>()); }

void to_json(json& j, const EvidenceSpan& s) {
  j = json{{"turn", s.turn_index}, {"start", s.char_start}, {"end", s.char_end},
           {"speaker", s.speaker}};
}

void from_json(const json& j, EvidenceSpan& s) {
  s.turn_index = j.at("turn").get<int>();
  s.char_start = j.at("start").get<int>();
  s.char_end = j.at("end").get<int>();
  s.speaker = j.at("speaker").get<Role>();
}

void to_json(json& j, const StatefulEvent& e) {
  j = json{{"field", e.field_id},   {"value", e.value},
           {"state", e.state},      {"temporality", e.temporality},
           {"role", e.role},        {"evidence", e.evidence},
           {"confidence", e.confidence}, {"trace_id", e.trace_id}};
}

void from_json(const json& j, StatefulEvent& e) {
  e.field_id = j.at("field").get<std::string>();
  e.value = j.at("value").get<std::string>();
  e.state = j.at("state").get<StateLabel>();
  e.temporality = j.value("temporality", json("present")).get<Temporality>();
  e.role = j.value("role", json("patient")).get<Role>();
  e.evidence = j.at("evidence").get<EvidenceSpan>();
  e.confidence = j.value("confidence", 1.0);
  e.trace_id = j.value("trace_id", std::string{});
}

void to_json(json& j, const GoldAnnotation& g) {
  j = json{{"field", g.field_id},
           {"value", g.value},
           {"state", g.state},
           {"temporality", g.temporality},
           {"span", json::array({g.char_start, g.char_end})},
           {"confidence", g.confidence}};
  if (g.role) j["role"] = *g.role;
}

void from_json(const json& j, GoldAnnotation& g) {
  g.field_id = j.at("field").get<std::string>();
  g.value = j.at("value").get<std::string>();
  g.state = j.at("state").get<StateLabel>();
  g.temporality = j.value("temporality", json("present")).get<Temporality>();
  if (j.contains("role")) g.role = j.at("role").get<Role>();
  const auto& span = j.at("span");
  g.char_start = span.at(0).get<int>();
  g.char_end = span.at(1).get<int>();
  g.confidence = j.value("confidence", 1.0);
}

void to_json(json& j, const StateEntry& e) {
  j = json{{"field", e.field_id},
           {"value", e.value},
           {"state", e.state},
           {"weight", e.weight},
           {"temporality", e.temporality},
           {"supporting_trace_ids", e.supporting_trace_ids},
           {"evidence", e.evidence},
           {"last_update_turn", e.last_update_turn}};
}

void to_json(json& j, const CurrentState& c) {
  json entries = json::array();
  for (const auto& [slot, entry] : c.entries) entries.push_back(entry);
  json contradictions = json::array();
  for (const auto& x : c.contradictions) {
    contradictions.push_back(json{{"slot", x.slot_id}, {"trace_ids", x.trace_ids}});
  }
  j = json{{"entries", entries}, {"contradictions", contradictions}, {"turn_index", c.turn_index}};
}

void to_json(json& j, const GapSignal& g) {
  j = json{{"kind", std::string(to_string(g.kind))},
           {"slot", optional_json(g.slot_id)},
           {"severity", g.severity},
           {"rationale", g.rationale},
           {"source", g.source}};
}

void to_json(json& j, const UtilityBreakdown& u) {
  j = json{{"IG", u.ig}, {"RR", u.rr}, {"PS", u.ps}, {"EG", u.eg},
           {"RP", u.rp}, {"CL", u.cl}, {"CB", u.cb}};
}

void to_json(json& j, const ActionCandidate& a) {
  j = json{{"action_id", a.action_id},
           {"verb", std::string(to_string(a.verb))},
           {"target_slot", optional_json(a.target_slot)},
           {"prompt", a.prompt_text},
           {"object_id", optional_json(a.object_id)},
           {"discharges", a.discharges},
           {"addresses", std::string(to_string(a.addresses))},
           {"components", a.components},
           {"utility", a.utility}};
}

void to_json(json& j, const Belief& b) {
  json probs = json::object();
  for (std::size_t i = 0; i < b.size(); ++i) probs[b.ids[i]] = b.probs[i];
  json history = json::array();
  for (const auto& [turn, h] : b.history) history.push_back(json::array({turn, h}));
  j = json{{"probs", probs}, {"history", history}};
}

void to_json(json& j, const RecordSlot& r) {
  j = json{{"slot", r.slot_id},
           {"normalized_value", r.normalized_value},
           {"status", r.status},
           {"temporality", r.temporality},
           {"assertion", std::string(to_string(r.assertion))},
           {"risk_flag", r.risk_flag},
           {"evidence", r.evidence},
           {"trace_ids", r.trace_ids}};
}

void to_json(json& j, const EMRecord& r) {
  json sections = json::array();
  for (const auto& [name, slots] : r.sections) {
    sections.push_back(json{{"section", name}, {"slots", slots}});
  }
  json risk = json::array();
  for (const auto& s : r.risk) {
    risk.push_back(json{{"rule_id", s.rule_id},
                        {"label", s.label},
                        {"discharged", s.discharged},
                        {"outstanding", s.outstanding}});
  }
  j = json{{"sections", sections}, {"risk", risk}, {"generated_at_turn", r.generated_at_turn}};
}

void to_json(json& j, const RankedSummary& r) {
  j = json{{"object_id", r.object_id},
           {"vector_score", r.vector_score},
           {"object_score", r.object_score},
           {"path_score", r.path_score},
           {"fused_score", r.fused_score}};
}

void to_json(json& j, const TurnTrace& t) {
  j = json{{"turn_index", t.turn_index},
           {"speaker", t.speaker},
           {"text", t.text},
           {"gold", t.gold ? json(*t.gold) : json(nullptr)},
           {"events", t.events},
           {"diagnostics", t.diagnostics},
           {"state", t.state},
           {"state_hash", t.state_hash},
           {"belief", t.belief},
           {"entropy", t.entropy},
           {"gaps", t.gaps},
           {"retrieval", t.retrieval},
           {"paths", t.paths},
           {"candidates", t.candidates},
           {"chosen_action_id", optional_json(t.chosen_action_id)},
           {"status", std::string(to_string(t.status))},
           {"goal_satisfied", t.goal_satisfied},
           {"trace_hash", t.trace_hash}};
}

json emr_diff(const EMRecord& before, const EMRecord& after) {
  json added = json::array();
  json changed = json::array();
  for (const auto& [section, slots] : after.sections) {
    for (const auto& s : slots) {
      const auto* prev = before.find(s.slot_id);
      if (!prev) {
        added.push_back(s);
      } else if (prev->normalized_value != s.normalized_value || prev->status != s.status) {
        changed.push_back(s);
      }
    }
  }
  json removed = json::array();
  for (const auto& [section, slots] : before.sections) {
    for (const auto& s : slots) {
      if (!after.find(s.slot_id)) removed.push_back(s.slot_id);
    }
  }
  return json{{"added", added}, {"changed", changed}, {"removed", removed}};
}

json trace_summary(const TurnTrace& t, const EMRecord& record, const EMRecord& previous) {
  const auto* chosen = t.chosen();
  return json{{"turn_index", t.turn_index},
              {"events", t.events},
              {"gaps", t.gaps},
              {"proposed_action", chosen ? json(*chosen) : json(nullptr)},
              {"status", std::string(to_string(t.status))},
              {"state_hash", t.state_hash},
              {"trace_hash", t.trace_hash},
              {"emr_diff", emr_diff(previous, record)}};
}

DialogueTurn parse_turn(const json& j) {
  DialogueTurn t;
  t.speaker = j.value("speaker", json("patient")).get<Role>();
  t.text = j.at("text").get<std::string>();
  if (j.contains("gold") && !j.at("gold").is_null()) {
    t.gold_events = j.at("gold").get<std::vector<GoldAnnotation>>();
  }
  return t;
}

json turn_to_json(const DialogueTurn& t) {
  json j{{"speaker", t.speaker}, {"text", t.text}};
  if (t.gold_events) j["gold"] = *t.gold_events;
  return j;
}

}  // namespace inquiry
