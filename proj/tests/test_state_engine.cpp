#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "inquiry/state_engine.hpp"
#include "support.hpp"

using namespace inquiry;
using testsupport::ev;

namespace {

CurrentState fold(std::initializer_list<std::pair<StateLabel, const char*>> seq) {
  CurrentState c;
  int turn = 0;
  for (const auto& [state, id] : seq) c = apply_events(c, {ev("ecg", "x", state, id, turn)}, turn), ++turn;
  return c;
}

GoalState small_goal() {
  GoalState g;
  g.required_slots = {{"onset", "HPI", true, false},
                      {"radiation", "HPI", true, false},
                      {"smoking", "Social", false, false},
                      {"ecg", "Plan", false, true}};
  RiskRule r;
  r.rule_id = "R_acs";
  r.label = "possible ACS";
  r.antecedent = {{"exertional_worsening", std::string("present"), {}}};
  r.unresolved_condition = {"ecg", "troponin"};
  r.severity = 1.0;
  r.threshold = 0.7;
  g.risk_rules = {r};
  return g;
}

}  // namespace

TEST(Precedence, StrongEntryIsContradictedNotReplaced) {
  const auto c = fold({{StateLabel::observed_result, "a"}, {StateLabel::negated, "b"}});
  const auto& e = c.entries.at("ecg");
  EXPECT_EQ(e.state, StateLabel::observed_result);
  ASSERT_EQ(c.contradictions.size(), 1u);
  EXPECT_EQ(c.contradictions[0].trace_ids, (std::vector<std::string>{"a", "b"}));
}

TEST(Precedence, NotDoneAgainstStrongIsAttachedOnly) {
  const auto c = fold({{StateLabel::verified, "a"}, {StateLabel::not_done, "b"}});
  EXPECT_EQ(c.entries.at("ecg").state, StateLabel::verified);
  EXPECT_TRUE(c.contradictions.empty());
  EXPECT_EQ(c.entries.at("ecg").supporting_trace_ids, (std::vector<std::string>{"a", "b"}));
}

TEST(Precedence, NegativeResolvesWeakMention) {
  const auto c = fold({{StateLabel::recommended, "a"}, {StateLabel::not_done, "b"}});
  EXPECT_EQ(c.entries.at("ecg").state, StateLabel::not_done);
  EXPECT_EQ(c.entries.at("ecg").weight, 0.0);
  EXPECT_TRUE(c.contradictions.empty());
}

TEST(Precedence, StrongOverNegatedRecordsContradiction) {
  const auto c = fold({{StateLabel::negated, "a"}, {StateLabel::confirmed, "b"}});
  EXPECT_EQ(c.entries.at("ecg").state, StateLabel::confirmed);
  EXPECT_EQ(c.contradictions.size(), 1u);
}

TEST(Precedence, HigherWeightWinsAndTiesGoToLater) {
  auto c = fold({{StateLabel::completed, "a"}, {StateLabel::historical_result, "b"}});
  EXPECT_EQ(c.entries.at("ecg").state, StateLabel::completed);
  EXPECT_EQ(c.entries.at("ecg").last_update_turn, 0);
  c = fold({{StateLabel::unconfirmed, "a"}, {StateLabel::recommended, "b"}});
  EXPECT_EQ(c.entries.at("ecg").state, StateLabel::recommended);
  EXPECT_EQ(c.entries.at("ecg").last_update_turn, 1);
  c = fold({{StateLabel::negated, "a"}, {StateLabel::unknown, "b"}});
  EXPECT_EQ(c.entries.at("ecg").state, StateLabel::negated);
}

TEST(Fold, ReapplyingABatchIsANoOp) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> slots{"a", "b", "c"};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = testsupport::random_session(rng, slots);
    std::vector<StatefulEvent> batch;
    for (int i = 0; i < 4; ++i) {
      batch.push_back(ev(slots[rng() % 3], "v", testsupport::random_state_label(rng),
                         make_trace_id(9, i), 9));
    }
    const auto once = apply_events(s.state, batch, 9);
    const auto twice = apply_events(once, batch, 9);
    ASSERT_EQ(once, twice);
  }
}

TEST(Fold, ProvenanceOnlyGrows) {
  std::mt19937_64 rng(6);
  const std::vector<std::string> slots{"a", "b", "c", "d"};
  for (int trial = 0; trial < 1000; ++trial) {
    CurrentState cur;
    for (int t = 0; t < 5; ++t) {
      std::vector<StatefulEvent> batch;
      const int k = static_cast<int>(rng() % 4);
      for (int i = 0; i < k; ++i) {
        batch.push_back(ev(slots[rng() % slots.size()], "v",
                           testsupport::random_state_label(rng), make_trace_id(t, i), t));
      }
      const auto next = apply_events(cur, batch, t);
      for (const auto& [slot, entry] : cur.entries) {
        const auto& after = next.entries.at(slot).supporting_trace_ids;
        ASSERT_TRUE(std::equal(entry.supporting_trace_ids.begin(),
                               entry.supporting_trace_ids.end(), after.begin()));
      }
      ASSERT_GE(next.contradictions.size(), cur.contradictions.size());
      for (const auto& e : batch) ASSERT_TRUE(known_trace_ids(next).count(e.trace_id));
      for (const auto& [slot, entry] : next.entries) {
        ASSERT_EQ(entry.weight, state_weight(entry.state));
        ASSERT_EQ(entry.supporting_trace_ids.size(), entry.evidence.size());
      }
      cur = next;
    }
  }
}

TEST(Satisfaction, NegativeAnswersCountAsSatisfied) {
  CurrentState c = apply_events({}, {ev("a", "v", StateLabel::negated, "1"),
                                     ev("b", "v", StateLabel::completed, "2"),
                                     ev("c", "v", StateLabel::historical_result, "3"),
                                     ev("d", "v", StateLabel::not_done, "4")},
                                 0);
  EXPECT_TRUE(slot_satisfied(c, "a", 0.7));
  EXPECT_TRUE(slot_satisfied(c, "b", 0.7));
  EXPECT_FALSE(slot_satisfied(c, "c", 0.7));
  EXPECT_TRUE(slot_satisfied(c, "d", 0.7));
  EXPECT_FALSE(slot_satisfied(c, "zzz", 0.7));
}

TEST(Gaps, InformationGapsAreExactlyUnmetMandatory) {
  std::mt19937_64 rng(17);
  const auto goal = small_goal();
  const std::vector<std::string> slots{"onset", "radiation", "smoking", "ecg"};
  const auto belief = Belief::uniform({"h0"});
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = testsupport::random_session(rng, slots);
    const auto gaps = derive_gaps(s.state, goal, belief, {});
    std::set<std::string> info;
    for (const auto& g : gaps) {
      if (g.kind == GapKind::information) info.insert(*g.slot_id);
      if (g.kind == GapKind::evidence) {
        const auto st = s.state.entries.at(*g.slot_id).state;
        ASSERT_TRUE(st == StateLabel::pending_verification || st == StateLabel::unconfirmed);
      }
    }
    std::set<std::string> expected;
    for (const auto& slot : goal.required_slots) {
      if (slot.mandatory && !slot_satisfied(s.state, slot.slot_id, 0.7)) {
        expected.insert(slot.slot_id);
      }
    }
    ASSERT_EQ(info, expected);
    ASSERT_TRUE(std::is_sorted(gaps.begin(), gaps.end(), [](const auto& a, const auto& b) {
      return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    }));
    ASSERT_EQ(goal_satisfied(s.state, goal, 0.7),
              expected.empty() && open_risk_rules(goal, s.state).empty());
  }
}

TEST(Gaps, DifferentialWhenTopTwoAreClose) {
  Belief b;
  b.ids = {"h0", "h1"};
  b.probs = {0.52, 0.48};
  const auto gaps = derive_gaps({}, GoalState{}, b, {});
  ASSERT_EQ(gaps.size(), 1u);
  EXPECT_EQ(gaps[0].kind, GapKind::differential);
  EXPECT_NEAR(gaps[0].severity, 1.0 - 0.04 / 0.15, 1e-12);
  b.probs = {0.6, 0.4};
  EXPECT_TRUE(derive_gaps({}, GoalState{}, b, {}).empty());
}

TEST(Gaps, RiskGapUntilDischarged) {
  const auto goal = small_goal();
  auto c = apply_events({}, {ev("exertional_worsening", "present", StateLabel::observed_result, "a")},
                         0);
  auto gaps = derive_gaps(c, goal, Belief::uniform({"h"}), {});
  auto risk = std::find_if(gaps.begin(), gaps.end(),
                           [](const auto& g) { return g.kind == GapKind::risk; });
  ASSERT_NE(risk, gaps.end());
  EXPECT_EQ(risk->slot_id, "ecg");
  EXPECT_EQ(risk->source, "R_acs");

  c = apply_events(c, {ev("ecg", "done", StateLabel::completed, "b", 1)}, 1);
  EXPECT_EQ(outstanding_slots(goal.risk_rules[0], c), std::vector<std::string>{"troponin"});
  c = apply_events(c, {ev("troponin", "x", StateLabel::negated, "c", 2)}, 2);
  EXPECT_TRUE(rule_discharged(goal.risk_rules[0], c));
  EXPECT_TRUE(open_risk_rules(goal, c).empty());

  // A recommendation alone (0.2) does not discharge.
  auto weak = apply_events({}, {ev("exertional_worsening", "present", StateLabel::confirmed, "a"),
                                ev("ecg", "x", StateLabel::recommended, "b"),
                                ev("troponin", "x", StateLabel::recommended, "c")},
                           0);
  EXPECT_EQ(open_risk_rules(goal, weak).size(), 1u);
}

TEST(Gaps, PathBlockingFromUnmetPreconditions) {
  ReasoningPath p;
  p.nodes = {"a", "b"};
  p.edges = {{"a", "b", "r", 1.0}};
  p.preconditions = {"onset", "age"};
  const auto c = apply_events({}, {ev("onset", "x", StateLabel::observed_result, "a")}, 0);
  const auto gaps = derive_gaps(c, GoalState{}, Belief::uniform({"h"}), {p});
  ASSERT_EQ(gaps.size(), 1u);
  EXPECT_EQ(gaps[0].kind, GapKind::path_blocking);
  EXPECT_EQ(gaps[0].slot_id, "age");
}

TEST(Gaps, PriorityOrder) {
  EXPECT_LT(gap_priority(GapKind::risk), gap_priority(GapKind::evidence));
  EXPECT_LT(gap_priority(GapKind::evidence), gap_priority(GapKind::information));
  EXPECT_LT(gap_priority(GapKind::information), gap_priority(GapKind::differential));
  EXPECT_LT(gap_priority(GapKind::differential), gap_priority(GapKind::path_blocking));
}
