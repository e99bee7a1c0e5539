#pragma once
// Turn-level evidence extraction: gold pass-through or literal rule packs.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inquiry/core.hpp"

namespace inquiry {

// Annotation as shipped with a script; trace ids are assigned on extraction.
struct GoldAnnotation {
  std::string field_id;
  std::string value;
  StateLabel state = StateLabel::unknown;
  Temporality temporality = Temporality::present;
  std::optional<Role> role;
  int char_start = 0;
  int char_end = 0;
  double confidence = 1.0;

  bool operator==(const GoldAnnotation&) const = default;
};

struct DialogueTurn {
  int turn_index = 0;
  Role speaker = Role::patient;
  std::string text;
  std::optional<std::vector<GoldAnnotation>> gold_events;
};

struct ExtractionRule {
  std::string rule_id;
  std::string trigger;  // literal phrase, matched case-insensitively
  std::string field_id;
  std::string value;
  StateLabel state = StateLabel::unknown;
  Temporality temporality = Temporality::present;
  int priority = 0;
  double confidence = 0.9;
};

enum class ExtractionMode { gold, rule };

std::string make_trace_id(int turn_index, int ordinal);

// Gold mode requires annotations (MissingGold otherwise); rule mode
// requires a non-empty rule pack (EmptyInput otherwise).
std::vector<StatefulEvent> extract_events(const DialogueTurn& turn, ExtractionMode mode,
                                          const std::vector<ExtractionRule>& rules);

struct ValidationResult {
  std::vector<StatefulEvent> events;
  std::vector<std::string> diagnostics;
};

ValidationResult validate_events(const std::vector<StatefulEvent>& events,
                                 const DialogueTurn& turn);

// Seam for swapping in a different extractor without touching the loop.
class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual std::vector<StatefulEvent> extract(const DialogueTurn& turn) const = 0;
};

class GoldExtractor final : public Extractor {
 public:
  std::vector<StatefulEvent> extract(const DialogueTurn& turn) const override;
};

class RuleExtractor final : public Extractor {
 public:
  explicit RuleExtractor(std::vector<ExtractionRule> rules);
  std::vector<StatefulEvent> extract(const DialogueTurn& turn) const override;

 private:
  std::vector<ExtractionRule> rules_;
};

// Gold when the turn carries annotations, rule mode otherwise.
class AutoExtractor final : public Extractor {
 public:
  explicit AutoExtractor(std::vector<ExtractionRule> rules) : rules_(std::move(rules)) {}
  std::vector<StatefulEvent> extract(const DialogueTurn& turn) const override;

 private:
  RuleExtractor rules_;
};

}  // namespace inquiry
