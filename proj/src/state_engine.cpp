#include "inquiry/state_engine.hpp"

#include <algorithm>
#include <tuple>

namespace inquiry {
namespace {

bool is_strong(StateLabel s, const StateWeightConfig& w) {
  return !is_negative(s) && state_weight(s, w) >= 1.0;
}

void overwrite(StateEntry& entry, const StatefulEvent& e, int turn_index,
               const StateWeightConfig& w) {
  entry.value = e.value;
  entry.state = e.state;
  entry.weight = state_weight(e.state, w);
  entry.temporality = e.temporality;
  entry.last_update_turn = turn_index;
}

void attach(StateEntry& entry, const StatefulEvent& e) {
  entry.supporting_trace_ids.push_back(e.trace_id);
  entry.evidence.push_back(e.evidence);
}

bool condition_holds(const RiskCondition& c, const CurrentState& cur) {
  const auto* entry = cur.find(c.slot_id);
  if (!entry) return false;
  if (c.value && *c.value != entry->value) return false;
  if (c.states.empty()) {
    return entry->state == StateLabel::observed_result ||
           entry->state == StateLabel::confirmed || entry->state == StateLabel::verified;
  }
  return std::find(c.states.begin(), c.states.end(), entry->state) != c.states.end();
}

}  // namespace

CurrentState apply_events(const CurrentState& prev, const std::vector<StatefulEvent>& events,
                          int turn_index, const StateWeightConfig& weights) {
  CurrentState cur = prev;
  cur.turn_index = std::max(prev.turn_index, turn_index);
  auto known = known_trace_ids(prev);

  for (const auto& e : events) {
    if (!known.insert(e.trace_id).second) continue;
    auto it = cur.entries.find(e.field_id);
    if (it == cur.entries.end()) {
      StateEntry entry;
      entry.field_id = e.field_id;
      overwrite(entry, e, turn_index, weights);
      attach(entry, e);
      cur.entries.emplace(e.field_id, std::move(entry));
      continue;
    }

    StateEntry& entry = it->second;
    if (is_negative(e.state)) {
      if (is_strong(entry.state, weights)) {
        if (e.state == StateLabel::negated) {
          Contradiction c{e.field_id, entry.supporting_trace_ids};
          c.trace_ids.push_back(e.trace_id);
          cur.contradictions.push_back(std::move(c));
        } else {
          attach(entry, e);
        }
        continue;
      }
      overwrite(entry, e, turn_index, weights);
      attach(entry, e);
      continue;
    }

    if (entry.state == StateLabel::negated && is_strong(e.state, weights)) {
      Contradiction c{e.field_id, entry.supporting_trace_ids};
      c.trace_ids.push_back(e.trace_id);
      cur.contradictions.push_back(std::move(c));
      overwrite(entry, e, turn_index, weights);
      attach(entry, e);
      continue;
    }

    const double incoming = state_weight(e.state, weights);
    // A bare "unknown" never displaces an explicit negative answer.
    const bool wins =
        incoming > entry.weight ||
        (incoming == entry.weight && !(is_negative(entry.state) && incoming == 0.0));
    if (wins) overwrite(entry, e, turn_index, weights);
    attach(entry, e);
  }
  return cur;
}

std::set<std::string> known_trace_ids(const CurrentState& cur) {
  std::set<std::string> ids;
  for (const auto& [slot, entry] : cur.entries) {
    ids.insert(entry.supporting_trace_ids.begin(), entry.supporting_trace_ids.end());
  }
  for (const auto& c : cur.contradictions) ids.insert(c.trace_ids.begin(), c.trace_ids.end());
  return ids;
}

bool slot_satisfied(const StateEntry& entry, double w_min) {
  return entry.weight >= w_min || is_negative(entry.state);
}

bool slot_satisfied(const CurrentState& cur, const std::string& slot, double w_min) {
  const auto* entry = cur.find(slot);
  return entry && slot_satisfied(*entry, w_min);
}

bool rule_fired(const RiskRule& rule, const CurrentState& cur) {
  if (rule.antecedent.empty()) return false;
  return std::all_of(rule.antecedent.begin(), rule.antecedent.end(),
                     [&](const RiskCondition& c) { return condition_holds(c, cur); });
}

std::vector<std::string> outstanding_slots(const RiskRule& rule, const CurrentState& cur) {
  std::vector<std::string> out;
  for (const auto& slot : rule.unresolved_condition) {
    const auto* entry = cur.find(slot);
    const bool resolved =
        entry && (entry->weight >= rule.threshold || entry->state == StateLabel::negated);
    if (!resolved) out.push_back(slot);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool rule_discharged(const RiskRule& rule, const CurrentState& cur) {
  return outstanding_slots(rule, cur).empty();
}

std::vector<const RiskRule*> open_risk_rules(const GoalState& goal, const CurrentState& cur) {
  std::vector<const RiskRule*> out;
  for (const auto& rule : goal.risk_rules) {
    if (rule_fired(rule, cur) && !rule_discharged(rule, cur)) out.push_back(&rule);
  }
  return out;
}

std::vector<std::string> unmet_mandatory(const CurrentState& cur, const GoalState& goal,
                                         double w_min) {
  std::vector<std::string> out;
  for (const auto& slot : goal.required_slots) {
    if (slot.mandatory && !slot_satisfied(cur, slot.slot_id, w_min)) out.push_back(slot.slot_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool goal_satisfied(const CurrentState& cur, const GoalState& goal, double w_min) {
  return unmet_mandatory(cur, goal, w_min).empty() && open_risk_rules(goal, cur).empty();
}

int gap_priority(GapKind kind) {
  switch (kind) {
    case GapKind::risk: return 0;
    case GapKind::evidence: return 1;
    case GapKind::information: return 2;
    case GapKind::differential: return 3;
    case GapKind::path_blocking: return 4;
  }
  return 5;
}

std::vector<GapSignal> derive_gaps(const CurrentState& cur, const GoalState& goal,
                                   const Belief& belief, const std::vector<ReasoningPath>& paths,
                                   const StateEngineConfig& cfg) {
  std::vector<GapSignal> gaps;

  for (const auto& slot : unmet_mandatory(cur, goal, cfg.w_min)) {
    const auto* entry = cur.find(slot);
    GapSignal g;
    g.kind = GapKind::information;
    g.slot_id = slot;
    g.severity = cfg.information_severity;
    g.rationale = entry ? "mandatory slot below w_min (state " +
                              std::string(to_string(entry->state)) + ")"
                        : "mandatory slot missing";
    g.source = "goal";
    gaps.push_back(std::move(g));
  }

  for (const auto& [slot, entry] : cur.entries) {
    if (entry.state != StateLabel::pending_verification &&
        entry.state != StateLabel::unconfirmed) {
      continue;
    }
    GapSignal g;
    g.kind = GapKind::evidence;
    g.slot_id = slot;
    g.severity = 1.0 - entry.weight;
    g.rationale = "evidence is " + std::string(to_string(entry.state));
    g.source = entry.supporting_trace_ids.back();
    gaps.push_back(std::move(g));
  }

  for (const auto* rule : open_risk_rules(goal, cur)) {
    const auto pending = outstanding_slots(*rule, cur);
    GapSignal g;
    g.kind = GapKind::risk;
    g.slot_id = pending.front();
    g.severity = rule->severity;
    g.rationale = "risk rule fired with unresolved " + pending.front();
    g.source = rule->rule_id;
    gaps.push_back(std::move(g));
  }

  if (belief.size() >= 2) {
    std::vector<double> sorted = belief.probs;
    std::partial_sort(sorted.begin(), sorted.begin() + 2, sorted.end(), std::greater<>());
    const double margin = sorted[0] - sorted[1];
    if (margin < cfg.delta) {
      GapSignal g;
      g.kind = GapKind::differential;
      g.severity = cfg.delta > 0.0 ? 1.0 - margin / cfg.delta : 0.0;
      g.rationale = "top-two hypotheses within delta";
      g.source = "belief";
      gaps.push_back(std::move(g));
    }
  }

  std::set<std::string> blocked;
  for (const auto& path : paths) {
    for (const auto& slot : path.preconditions) {
      if (!slot_satisfied(cur, slot, cfg.w_min)) blocked.insert(slot);
    }
  }
  for (const auto& slot : blocked) {
    GapSignal g;
    g.kind = GapKind::path_blocking;
    g.slot_id = slot;
    g.severity = cfg.path_blocking_severity;
    g.rationale = "retrieved path requires " + slot;
    g.source = "paths";
    gaps.push_back(std::move(g));
  }

  std::sort(gaps.begin(), gaps.end(), [](const GapSignal& a, const GapSignal& b) {
    return std::make_tuple(static_cast<int>(a.kind), a.slot_id.value_or(""), a.source) <
           std::make_tuple(static_cast<int>(b.kind), b.slot_id.value_or(""), b.source);
  });
  return gaps;
}

}  // namespace inquiry
