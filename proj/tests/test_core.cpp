#include <gtest/gtest.h>

#include "inquiry/core.hpp"
#include "inquiry/hash.hpp"

using namespace inquiry;

TEST(StateWeight, ListedStatesAreBitExact) {
  // Piecewise table: 1 / 0.7 / 0.5 / 0.2 / 0.
  EXPECT_EQ(state_weight(StateLabel::observed_result), 1.0);
  EXPECT_EQ(state_weight(StateLabel::confirmed), 1.0);
  EXPECT_EQ(state_weight(StateLabel::verified), 1.0);
  EXPECT_EQ(state_weight(StateLabel::completed), 0.7);
  EXPECT_EQ(state_weight(StateLabel::historical_result), 0.5);
  EXPECT_EQ(state_weight(StateLabel::recommended), 0.2);
  EXPECT_EQ(state_weight(StateLabel::pending_verification), 0.2);
  EXPECT_EQ(state_weight(StateLabel::unconfirmed), 0.2);
  EXPECT_EQ(state_weight(StateLabel::unknown), 0.0);
}

TEST(StateWeight, NegativeLabelsFollowConfig) {
  EXPECT_EQ(state_weight(StateLabel::negated), 0.0);
  EXPECT_EQ(state_weight(StateLabel::not_done), 0.0);
  StateWeightConfig cfg;
  cfg.negated = 0.3;
  cfg.not_done = 0.6;
  EXPECT_EQ(state_weight(StateLabel::negated, cfg), 0.3);
  EXPECT_EQ(state_weight(StateLabel::not_done, cfg), 0.6);
  // overrides never leak into the fixed rows
  EXPECT_EQ(state_weight(StateLabel::completed, cfg), 0.7);
}

TEST(StateWeight, TotalAndBounded) {
  for (auto s : kAllStates) {
    const double w = state_weight(s);
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
  }
}

TEST(Enums, StateLabelRoundTrip) {
  for (auto s : kAllStates) EXPECT_EQ(parse_state(to_string(s)), s);
  try {
    parse_state("probable");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

TEST(Enums, VerbGapRoleTemporalityRoundTrip) {
  for (auto v : {Verb::ask, Verb::verify, Verb::explain, Verb::recommend_exam,
                 Verb::recommend_plan}) {
    EXPECT_EQ(parse_verb(to_string(v)), v);
  }
  for (auto g : {GapKind::information, GapKind::evidence, GapKind::risk, GapKind::differential,
                 GapKind::path_blocking}) {
    EXPECT_EQ(parse_gap_kind(to_string(g)), g);
  }
  for (auto r : {Role::patient, Role::physician, Role::family, Role::report}) {
    EXPECT_EQ(parse_role(to_string(r)), r);
  }
  for (auto t : {Temporality::present, Temporality::recent_past, Temporality::past,
                 Temporality::future}) {
    EXPECT_EQ(parse_temporality(to_string(t)), t);
  }
  EXPECT_THROW(parse_verb("order"), Error);
}

TEST(Hash, KnownVectors) {
  // Published FNV-1a 64 test vectors.
  EXPECT_EQ(hash::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(hash::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hash::fnv1a64("foobar"), 0x85944171f73967e8ULL);
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(hash::splitmix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(hash::hex(0xabcULL), "0000000000000abc");
}

TEST(Hash, SeedChangesOutput) {
  EXPECT_NE(hash::seeded("ecg", 1), hash::seeded("ecg", 2));
  EXPECT_EQ(hash::seeded("ecg", 7), hash::seeded("ecg", 7));
}

TEST(GoalState, Lookup) {
  GoalState g;
  g.required_slots = {{"onset", "HPI", true, false}, {"ecg", "Plan", false, true}};
  RiskRule r;
  r.rule_id = "R1";
  g.risk_rules = {r};
  ASSERT_NE(g.find_slot("ecg"), nullptr);
  EXPECT_TRUE(g.find_slot("ecg")->risk_flag);
  EXPECT_EQ(g.find_slot("nope"), nullptr);
  EXPECT_NE(g.find_rule("R1"), nullptr);
  EXPECT_EQ(g.find_rule("R2"), nullptr);
}
