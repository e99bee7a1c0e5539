#pragma once
// Shared fixtures: the bundled pack, event builders, random generators.

#include <random>
#include <string>
#include <vector>

#include "inquiry/pack.hpp"
#include "inquiry/planner.hpp"
#include "inquiry/retrieval.hpp"
#include "inquiry/state_engine.hpp"

namespace testsupport {

using namespace inquiry;

inline const std::string kData = INQUIRY_TEST_DATA;

inline const ScenarioPack& bundled_pack() {
  static const ScenarioPack pack = load_pack(kData + "/pack");
  return pack;
}

inline const KnowledgeBase& bundled_kb() {
  static const KnowledgeBase kb = load_kb(kData + "/kb");
  return kb;
}

inline StatefulEvent ev(std::string slot, std::string value, StateLabel state,
                        std::string trace_id, int turn = 0, int start = 0, int end = 1) {
  StatefulEvent e;
  e.field_id = std::move(slot);
  e.value = std::move(value);
  e.state = state;
  e.trace_id = std::move(trace_id);
  e.evidence = {turn, start, end, Role::patient};
  return e;
}

inline StateLabel random_state_label(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, std::size(kAllStates) - 1);
  return kAllStates[d(rng)];
}

// Random multi-turn fold over a small slot and value vocabulary.
struct RandomSession {
  CurrentState state;
  std::vector<DialogueTurn> turns;  // texts the spans point into
};

inline RandomSession random_session(std::mt19937_64& rng, const std::vector<std::string>& slots,
                                    int max_turns = 4, int max_events = 4) {
  static const std::vector<std::string> values{"present", "absent", "left_arm", "3 d", "normal"};
  std::uniform_int_distribution<int> n_turns(1, max_turns);
  std::uniform_int_distribution<int> n_events(0, max_events);
  std::uniform_int_distribution<std::size_t> pick_slot(0, slots.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_value(0, values.size() - 1);
  RandomSession out;
  const int turns = n_turns(rng);
  for (int t = 0; t < turns; ++t) {
    DialogueTurn turn;
    turn.turn_index = t;
    turn.text = std::string(40 + static_cast<std::size_t>(t) * 3, 'x');
    std::uniform_int_distribution<int> start(0, 30);
    std::vector<StatefulEvent> events;
    const int k = n_events(rng);
    for (int i = 0; i < k; ++i) {
      const int s = start(rng);
      events.push_back(ev(slots[pick_slot(rng)], values[pick_value(rng)], random_state_label(rng),
                          make_trace_id(t, i), t, s, s + 5));
    }
    out.state = apply_events(out.state, events, t);
    out.turns.push_back(std::move(turn));
  }
  return out;
}

}  // namespace testsupport
