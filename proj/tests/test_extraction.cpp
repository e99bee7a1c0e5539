#include <gtest/gtest.h>

#include "inquiry/extraction.hpp"
#include "inquiry/json_io.hpp"

using namespace inquiry;

namespace {

DialogueTurn turn_with_gold(int idx, std::string text, std::vector<GoldAnnotation> gold) {
  DialogueTurn t;
  t.turn_index = idx;
  t.text = std::move(text);
  t.gold_events = std::move(gold);
  return t;
}

ExtractionRule rule(std::string id, std::string trigger, std::string field, std::string value,
                    StateLabel state, int priority = 0) {
  ExtractionRule r;
  r.rule_id = std::move(id);
  r.trigger = std::move(trigger);
  r.field_id = std::move(field);
  r.value = std::move(value);
  r.state = state;
  r.priority = priority;
  return r;
}

}  // namespace

TEST(GoldMode, PassesAnnotationsThrough) {
  GoldAnnotation g{"chest_pain", "present", StateLabel::observed_result, Temporality::present,
                   std::nullopt, 0, 15, 1.0};
  const auto turn = turn_with_gold(3, "chest tightness for three days", {g});
  const auto events = extract_events(turn, ExtractionMode::gold, {});
  ASSERT_EQ(events.size(), 1u);
  const auto& e = events[0];
  EXPECT_EQ(e.field_id, "chest_pain");
  EXPECT_EQ(e.value, "present");
  EXPECT_EQ(e.state, StateLabel::observed_result);
  EXPECT_EQ(e.trace_id, "t3e0");
  EXPECT_EQ(e.evidence.turn_index, 3);
  EXPECT_EQ(e.evidence.char_end, 15);
  EXPECT_EQ(e.confidence, 1.0);
}

TEST(GoldMode, MissingAnnotationsIsAnError) {
  DialogueTurn t;
  t.text = "hello";
  try {
    extract_events(t, ExtractionMode::gold, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingGold);
  }
}

TEST(GoldMode, JsonRoundTripIsIdentity) {
  GoldAnnotation a{"ecg", "st_depression", StateLabel::observed_result, Temporality::recent_past,
                   Role::report, 2, 9, 0.8};
  GoldAnnotation b{"allergy", "penicillin", StateLabel::negated, Temporality::present,
                   std::nullopt, 10, 20, 1.0};
  const auto turn = turn_with_gold(1, std::string(30, 'x'), {a, b});
  auto parsed = parse_turn(turn_to_json(turn));
  parsed.turn_index = turn.turn_index;  // the index is assigned by the session, not the line
  ASSERT_TRUE(parsed.gold_events);
  EXPECT_EQ(*parsed.gold_events, *turn.gold_events);
  EXPECT_EQ(extract_events(parsed, ExtractionMode::gold, {}),
            extract_events(turn, ExtractionMode::gold, {}));
}

TEST(RuleMode, NegatedPhraseSpansMatch) {
  DialogueTurn t;
  t.turn_index = 2;
  t.text = "I have not had a chest X-ray";
  const auto events = extract_events(
      t, ExtractionMode::rule,
      {rule("r1", "not had a chest x-ray", "chest_xray", "absent", StateLabel::not_done)});
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].state, StateLabel::not_done);
  EXPECT_EQ(events[0].evidence.char_start, 7);
  EXPECT_EQ(events[0].evidence.char_end, 28);
  EXPECT_EQ(t.text.substr(7, 21), "not had a chest X-ray");
  EXPECT_DOUBLE_EQ(events[0].confidence, 0.9);
}

TEST(RuleMode, EmptyTextYieldsNothing) {
  DialogueTurn t;
  EXPECT_TRUE(extract_events(t, ExtractionMode::rule,
                             {rule("r1", "cough", "cough", "present",
                                   StateLabel::observed_result)})
                  .empty());
}

TEST(RuleMode, EmptyRulePackIsAnError) {
  DialogueTurn t;
  t.text = "cough";
  EXPECT_THROW(extract_events(t, ExtractionMode::rule, {}), Error);
}

TEST(RuleMode, OrderedByPriorityThenIdAndOverlapsBothEmit) {
  DialogueTurn t;
  t.text = "Chest pain at rest, chest pain on exertion";
  const auto events = extract_events(
      t, ExtractionMode::rule,
      {rule("b", "chest pain", "chest_pain", "present", StateLabel::observed_result, 1),
       rule("a", "pain on exertion", "exertional_worsening", "present",
            StateLabel::observed_result, 1),
       rule("z", "chest", "region", "chest", StateLabel::observed_result, 0)});
  ASSERT_EQ(events.size(), 3u);
  EXPECT_EQ(events[0].field_id, "region");
  EXPECT_EQ(events[1].field_id, "exertional_worsening");
  EXPECT_EQ(events[2].field_id, "chest_pain");
  EXPECT_EQ(events[0].trace_id, "t0e0");
  EXPECT_EQ(events[2].trace_id, "t0e2");
}

TEST(RuleMode, DeterministicAndValid) {
  DialogueTurn t;
  t.turn_index = 4;
  t.text = "It gets worse when I climb the stairs and spreads to my left arm.";
  std::vector<ExtractionRule> rules{
      rule("x1", "climb the stairs", "exertional_worsening", "present",
           StateLabel::observed_result),
      rule("x2", "LEFT ARM", "radiation", "left_arm", StateLabel::observed_result)};
  const auto a = extract_events(t, ExtractionMode::rule, rules);
  const auto b = extract_events(t, ExtractionMode::rule, rules);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 2u);
  const auto v = validate_events(a, t);
  EXPECT_EQ(v.events.size(), 2u);
  EXPECT_TRUE(v.diagnostics.empty());
}

TEST(Validate, FiltersOutOfBoundsAndBadConfidence) {
  DialogueTurn t;
  t.turn_index = 0;
  t.text = "0123456789";
  StatefulEvent ok;
  ok.trace_id = "t0e0";
  ok.evidence = {0, 0, 10, Role::patient};
  ok.confidence = 1.0;
  StatefulEvent long_span = ok;
  long_span.trace_id = "t0e1";
  long_span.evidence.char_end = 11;
  StatefulEvent bad_conf = ok;
  bad_conf.trace_id = "t0e2";
  bad_conf.confidence = 1.5;
  StatefulEvent wrong_turn = ok;
  wrong_turn.trace_id = "t0e3";
  wrong_turn.evidence.turn_index = 1;
  const auto v = validate_events({ok, long_span, bad_conf, wrong_turn}, t);
  ASSERT_EQ(v.events.size(), 1u);
  EXPECT_EQ(v.events[0].trace_id, "t0e0");
  EXPECT_EQ(v.diagnostics.size(), 3u);
  EXPECT_TRUE(validate_events({}, t).events.empty());
}

TEST(AutoExtractor, PrefersGoldThenRules) {
  AutoExtractor x({rule("r", "cough", "cough", "dry", StateLabel::observed_result)});
  DialogueTurn t;
  t.text = "dry cough";
  EXPECT_EQ(x.extract(t).size(), 1u);
  t.gold_events = std::vector<GoldAnnotation>{};
  EXPECT_TRUE(x.extract(t).empty());
  AutoExtractor none({});
  t.gold_events.reset();
  EXPECT_TRUE(none.extract(t).empty());
}
