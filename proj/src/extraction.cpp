#include "inquiry/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace inquiry {
namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string make_trace_id(int turn_index, int ordinal) {
  return "t" + std::to_string(turn_index) + "e" + std::to_string(ordinal);
}

std::vector<StatefulEvent> extract_events(const DialogueTurn& turn, ExtractionMode mode,
                                          const std::vector<ExtractionRule>& rules) {
  std::vector<StatefulEvent> out;
  if (mode == ExtractionMode::gold) {
    if (!turn.gold_events) {
      throw Error(ErrorCode::MissingGold,
                  "turn " + std::to_string(turn.turn_index) + " has no gold annotations");
    }
    int ordinal = 0;
    for (const auto& g : *turn.gold_events) {
      StatefulEvent e;
      e.field_id = g.field_id;
      e.value = g.value;
      e.state = g.state;
      e.temporality = g.temporality;
      e.role = g.role.value_or(turn.speaker);
      e.evidence = {turn.turn_index, g.char_start, g.char_end, turn.speaker};
      e.confidence = g.confidence;
      e.trace_id = make_trace_id(turn.turn_index, ordinal++);
      out.push_back(std::move(e));
    }
    return out;
  }

  if (rules.empty()) throw Error(ErrorCode::EmptyInput, "rule mode needs a non-empty rule pack");
  std::vector<const ExtractionRule*> ordered;
  ordered.reserve(rules.size());
  for (const auto& r : rules) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return std::tie(a->priority, a->rule_id) < std::tie(b->priority, b->rule_id);
  });

  const std::string haystack = ascii_lower(turn.text);
  int ordinal = 0;
  for (const auto* rule : ordered) {
    if (rule->trigger.empty()) continue;
    const auto pos = haystack.find(ascii_lower(rule->trigger));
    if (pos == std::string::npos) continue;
    StatefulEvent e;
    e.field_id = rule->field_id;
    e.value = rule->value;
    e.state = rule->state;
    e.temporality = rule->temporality;
    e.role = turn.speaker;
    e.evidence = {turn.turn_index, static_cast<int>(pos),
                  static_cast<int>(pos + rule->trigger.size()), turn.speaker};
    e.confidence = rule->confidence;
    e.trace_id = make_trace_id(turn.turn_index, ordinal++);
    out.push_back(std::move(e));
  }
  return out;
}

ValidationResult validate_events(const std::vector<StatefulEvent>& events,
                                 const DialogueTurn& turn) {
  ValidationResult result;
  const int len = static_cast<int>(turn.text.size());
  for (const auto& e : events) {
    const auto& span = e.evidence;
    if (span.turn_index != turn.turn_index) {
      result.diagnostics.push_back(e.trace_id + ": span references turn " +
                                   std::to_string(span.turn_index));
      continue;
    }
    if (span.char_start < 0 || span.char_start >= span.char_end || span.char_end > len) {
      result.diagnostics.push_back(e.trace_id + ": span [" + std::to_string(span.char_start) +
                                   "," + std::to_string(span.char_end) +
                                   ") outside turn text of length " + std::to_string(len));
      continue;
    }
    if (!(e.confidence >= 0.0 && e.confidence <= 1.0)) {
      result.diagnostics.push_back(e.trace_id + ": confidence out of [0,1]");
      continue;
    }
    result.events.push_back(e);
  }
  return result;
}

std::vector<StatefulEvent> GoldExtractor::extract(const DialogueTurn& turn) const {
  return extract_events(turn, ExtractionMode::gold, {});
}

RuleExtractor::RuleExtractor(std::vector<ExtractionRule> rules) : rules_(std::move(rules)) {}

std::vector<StatefulEvent> RuleExtractor::extract(const DialogueTurn& turn) const {
  return extract_events(turn, ExtractionMode::rule, rules_);
}

std::vector<StatefulEvent> AutoExtractor::extract(const DialogueTurn& turn) const {
  if (turn.gold_events) return extract_events(turn, ExtractionMode::gold, {});
  try {
    return rules_.extract(turn);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyInput) return {};
    throw;
  }
}

}  // namespace inquiry
