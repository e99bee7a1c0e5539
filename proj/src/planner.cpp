#include "inquiry/planner.hpp"

#include <algorithm>
#include <deque>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "inquiry/hash.hpp"
#include "inquiry/json_io.hpp"

namespace inquiry {
namespace {

std::string words(const std::string& slot) {
  std::string out = slot;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string prompt_for(Verb verb, const std::optional<std::string>& slot,
                       const KnowledgeObject* obj) {
  const std::string what = slot ? words(*slot) : std::string("the findings so far");
  switch (verb) {
    case Verb::ask: return "Can you tell me about your " + what + "?";
    case Verb::verify: return "Can we confirm the " + what + "?";
    case Verb::explain: return "Let me explain which possibilities we are still weighing.";
    case Verb::recommend_exam:
      return "I recommend " + what + (obj ? " (" + obj->object_id + ")" : std::string()) + ".";
    case Verb::recommend_plan:
      return "I suggest we follow up on " + what +
             (obj ? " (" + obj->object_id + ")" : std::string()) + ".";
  }
  return what;
}

bool is_question(Verb v) { return v == Verb::ask || v == Verb::verify; }

Error with_turn(const Error& e, int turn) {
  return Error(e.code(), "turn " + std::to_string(turn) + ": " + e.what());
}

}  // namespace

std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::direct_generation: return "direct_generation";
    case PolicyKind::chunk_rag: return "chunk_rag";
    case PolicyKind::rule_template: return "rule_template";
    case PolicyKind::full_framework: return "full_framework";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view text) {
  for (auto p : kAllPolicies) {
    if (to_string(p) == text) return p;
  }
  throw Error(ErrorCode::UnknownPolicy, "unknown policy: '" + std::string(text) + "'");
}

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::active: return "active";
    case SessionStatus::goal_reached: return "goal_reached";
    case SessionStatus::ended: return "ended";
  }
  return "?";
}

double utility(const UtilityBreakdown& c, const UtilityWeights& w) {
  const auto& l = w.lambda;
  return l[0] * c.ig + l[1] * c.rr + l[2] * c.ps + l[3] * c.eg - l[4] * c.rp - l[5] * c.cl +
         l[6] * c.cb;
}

std::string make_action_id(int turn_index, std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "a%d-%02zu", turn_index, ordinal);
  return buf;
}

std::vector<ActionCandidate> generate_candidates(const CurrentState& cur,
                                                 const std::vector<GapSignal>& gaps,
                                                 const RetrievalResult& retrieval,
                                                 const GoalState& goal, const KnowledgeBase& kb,
                                                 int turn_index, std::size_t n_max,
                                                 std::size_t k_action) {
  std::vector<const GapSignal*> ordered;
  for (const auto& g : gaps) ordered.push_back(&g);
  std::stable_sort(ordered.begin(), ordered.end(), [](const GapSignal* a, const GapSignal* b) {
    if (a->severity != b->severity) return a->severity > b->severity;
    return gap_priority(a->kind) < gap_priority(b->kind);
  });

  std::vector<ActionCandidate> out;
  std::set<std::pair<Verb, std::string>> seen;
  auto add = [&](Verb verb, std::optional<std::string> slot, GapKind kind,
                 const KnowledgeObject* obj) {
    if (!seen.emplace(verb, slot.value_or("")).second) return;
    ActionCandidate a;
    a.verb = verb;
    a.target_slot = std::move(slot);
    a.addresses = kind;
    a.prompt_text = prompt_for(verb, a.target_slot, obj);
    if (obj) a.object_id = obj->object_id;
    out.push_back(std::move(a));
  };

  const auto top = retrieval.top_ids(k_action);
  for (const auto* g : ordered) {
    switch (g->kind) {
      case GapKind::information:
        add(Verb::ask, g->slot_id, g->kind, nullptr);
        break;
      case GapKind::evidence:
        add(Verb::verify, g->slot_id, g->kind, nullptr);
        break;
      case GapKind::risk: {
        const auto* rule = goal.find_rule(g->source);
        const auto pending =
            rule ? outstanding_slots(*rule, cur) : std::vector<std::string>{*g->slot_id};
        bool any = false;
        for (const auto& id : top) {
          const auto* obj = kb.find(id);
          if (!obj || std::find(obj->discharges.begin(), obj->discharges.end(), g->source) ==
                          obj->discharges.end()) {
            continue;
          }
          // aim at a slot the rule still waits on; objects covering only
          // settled slots have nothing left to offer
          auto hit = std::find_first_of(obj->addresses.begin(), obj->addresses.end(),
                                        pending.begin(), pending.end());
          if (hit == obj->addresses.end()) continue;
          const Verb verb =
              obj->kind == ObjectKind::exam_unit ? Verb::recommend_exam : Verb::recommend_plan;
          add(verb, *hit, g->kind, obj);
          any = true;
        }
        if (!any) add(Verb::verify, g->slot_id, g->kind, nullptr);
        break;
      }
      case GapKind::differential:
        add(Verb::explain, std::nullopt, g->kind, nullptr);
        break;
      case GapKind::path_blocking: {
        const bool targeted = std::any_of(out.begin(), out.end(), [&](const ActionCandidate& a) {
          return a.target_slot == g->slot_id;
        });
        if (!targeted) add(Verb::ask, g->slot_id, g->kind, nullptr);
        break;
      }
    }
    if (out.size() >= n_max) break;
  }
  if (out.size() > n_max) out.resize(n_max);

  const auto open = open_risk_rules(goal, cur);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& a = out[i];
    a.action_id = make_action_id(turn_index, i);
    const auto* obj = a.object_id ? kb.find(*a.object_id) : nullptr;
    for (const auto* rule : open) {
      const auto pending = outstanding_slots(*rule, cur);
      const bool by_slot =
          a.target_slot && std::find(pending.begin(), pending.end(), *a.target_slot) != pending.end();
      const bool by_object = obj && std::find(obj->discharges.begin(), obj->discharges.end(),
                                              rule->rule_id) != obj->discharges.end();
      if (by_slot || by_object) a.discharges.push_back(rule->rule_id);
    }
  }
  return out;
}

UtilityBreakdown compute_components(const ActionCandidate& a, const PlanningContext& ctx) {
  UtilityBreakdown c;

  const std::size_t n = ctx.belief.size();
  if (n >= 2) {
    if (const auto* outcomes = ctx.outcomes.find_for(a)) {
      c.ig = expected_information_gain(ctx.belief, *outcomes) / std::log(static_cast<double>(n));
    }
  }

  double outstanding = 0.0;
  double covered = 0.0;
  for (const auto* rule : open_risk_rules(ctx.goal, ctx.state)) {
    outstanding += rule->severity;
    if (std::find(a.discharges.begin(), a.discharges.end(), rule->rule_id) != a.discharges.end()) {
      covered += rule->severity;
    }
  }
  c.rr = outstanding > 0.0 ? covered / outstanding : 0.0;

  if (a.target_slot) {
    for (const auto& p : ctx.retrieval.paths) {
      if (std::find(p.preconditions.begin(), p.preconditions.end(), *a.target_slot) !=
          p.preconditions.end()) {
        c.ps = std::max(c.ps, p.score);
      }
    }
  }

  c.eg = (a.verb == Verb::explain && a.addresses == GapKind::differential) ? 1.0 : 0.0;

  {
    // slotless actions (explain) repeat-match on the verb alone
    const auto* entry = a.target_slot ? ctx.state.find(*a.target_slot) : nullptr;
    bool redundant = entry && entry->weight >= ctx.config.rp_weight;
    for (const auto& h : ctx.history) {
      if (h.turn_index >= ctx.turn_index - ctx.config.rp_window && h.turn_index < ctx.turn_index &&
          h.verb == a.verb && h.target_slot == a.target_slot) {
        redundant = true;
      }
    }
    c.rp = redundant ? 1.0 : 0.0;
  }

  if (is_question(a.verb)) {
    int run = 0;
    for (auto it = ctx.history.rbegin(); it != ctx.history.rend() && is_question(it->verb); ++it) {
      ++run;
    }
    c.cl = std::min(1.0, static_cast<double>(run) / static_cast<double>(ctx.config.cl_run_cap));
  }

  if ((a.verb == Verb::verify || a.verb == Verb::recommend_exam) && a.target_slot) {
    const auto* slot = ctx.goal.find_slot(*a.target_slot);
    c.cb = (slot && slot->risk_flag) ? 1.0 : 0.0;
  }
  return c;
}

void score_candidates(std::vector<ActionCandidate>& candidates, const PlanningContext& ctx,
                      const UtilityWeights& w) {
  for (auto& a : candidates) {
    a.components = compute_components(a, ctx);
    a.utility = utility(a.components, w);
  }
}

const ActionCandidate& select_action(const std::vector<ActionCandidate>& candidates) {
  if (candidates.empty()) throw Error(ErrorCode::NoCandidates, "no candidate actions");
  const ActionCandidate* best = &candidates.front();
  for (const auto& a : candidates) {
    if (a.utility > best->utility || (a.utility == best->utility && a.action_id < best->action_id)) {
      best = &a;
    }
  }
  return *best;
}

const ActionCandidate& select_action(const std::vector<ActionCandidate>& candidates,
                                     const UtilityWeights& w) {
  if (candidates.empty()) throw Error(ErrorCode::NoCandidates, "no candidate actions");
  const ActionCandidate* best = &candidates.front();
  double best_u = utility(best->components, w);
  for (const auto& a : candidates) {
    const double u = utility(a.components, w);
    if (u > best_u || (u == best_u && a.action_id < best->action_id)) {
      best = &a;
      best_u = u;
    }
  }
  return *best;
}

const ActionCandidate* TurnTrace::chosen() const {
  if (!chosen_action_id) return nullptr;
  for (const auto& a : candidates) {
    if (a.action_id == *chosen_action_id) return &a;
  }
  return nullptr;
}

DialogueTurn TurnTrace::as_turn() const {
  DialogueTurn t;
  t.turn_index = turn_index;
  t.speaker = speaker;
  t.text = text;
  t.gold_events = gold;
  return t;
}

std::string state_hash(const CurrentState& cur) { return hash::fingerprint(json(cur).dump()); }

std::string compute_trace_hash(const TurnTrace& t) {
  json j = t;
  j.erase("trace_hash");
  return hash::fingerprint(j.dump());
}

Session::Session(std::string session_id, const ScenarioPack& pack, const Scenario& scenario,
                 const KnowledgeBase& kb, PolicyKind policy)
    : id_(std::move(session_id)),
      pack_(&pack),
      scenario_(&scenario),
      kb_(&kb),
      model_(&pack.model_for(scenario)),
      policy_(policy),
      goal_(pack.goal_for(scenario)),
      extractor_(pack.rules),
      belief_(Belief::from_hypotheses(model_->hypotheses)) {
  belief_.history.emplace_back(-1, entropy(belief_));
  record_ = project_record(state_, goal_, pack.schema, pack.config.emr);
}

std::vector<ActionCandidate> Session::template_candidate(int turn_index) const {
  const auto& list = scenario_->checklist;
  if (checklist_cursor_ >= list.size()) return {};
  ActionCandidate a;
  a.action_id = make_action_id(turn_index, 0);
  a.verb = Verb::ask;
  a.target_slot = list[checklist_cursor_];
  a.prompt_text = prompt_for(Verb::ask, a.target_slot, nullptr);
  a.addresses = GapKind::information;
  return {a};
}

const TurnTrace& Session::run_turn(DialogueTurn turn) {
  if (status_ != SessionStatus::active) {
    throw Error(ErrorCode::SessionEnded,
                "session " + id_ + " is " + std::string(to_string(status_)));
  }
  const auto& cfg = pack_->config;
  const int t = next_turn_index();
  turn.turn_index = t;

  TurnTrace trace;
  trace.turn_index = t;
  trace.speaker = turn.speaker;
  trace.text = turn.text;
  trace.gold = turn.gold_events;

  try {
    auto raw = extractor_.extract(turn);
    auto validated = validate_events(raw, turn);
    trace.events = std::move(validated.events);
    trace.diagnostics = std::move(validated.diagnostics);

    state_ = apply_events(state_, trace.events, t, cfg.state.weights);
    belief_ = update_belief(belief_, trace.events, model_->likelihoods, cfg.state.weights);
    belief_.history.emplace_back(t, entropy(belief_));

    const bool satisfied = goal_satisfied(state_, goal_, cfg.state.w_min);
    if (satisfied && !goal_turn_) goal_turn_ = t;

    RetrievalResult retrieval;
    std::vector<ActionCandidate> candidates;
    switch (policy_) {
      case PolicyKind::direct_generation:
        break;
      case PolicyKind::rule_template:
        candidates = template_candidate(t);
        break;
      case PolicyKind::chunk_rag: {
        auto gaps = derive_gaps(state_, goal_, belief_, {}, cfg.state);
        std::erase_if(gaps, [](const GapSignal& g) { return g.kind != GapKind::information; });
        auto rcfg = effective_retrieval(cfg, *kb_);
        rcfg.mode = RetrievalMode::chunk;
        rcfg.beta = {1.0, 0.0, 0.0};
        retrieval = retrieve(state_, goal_, belief_, *kb_, rcfg);
        candidates = generate_candidates(state_, gaps, retrieval, goal_, *kb_, t, cfg.n_max,
                                         cfg.k_action);
        UtilityWeights ig_only;
        ig_only.lambda = {cfg.lambda.lambda[0], 0, 0, 0, 0, 0, 0};
        PlanningContext ctx{state_, goal_, belief_, model_->outcomes, gaps, retrieval,
                            history_, t, cfg};
        score_candidates(candidates, ctx, ig_only);
        trace.gaps = std::move(gaps);
        break;
      }
      case PolicyKind::full_framework: {
        auto gaps = derive_gaps(state_, goal_, belief_, last_paths_, cfg.state);
        retrieval = retrieve(state_, goal_, belief_, *kb_, effective_retrieval(cfg, *kb_));
        candidates = generate_candidates(state_, gaps, retrieval, goal_, *kb_, t, cfg.n_max,
                                         cfg.k_action);
        PlanningContext ctx{state_, goal_, belief_, model_->outcomes, gaps, retrieval,
                            history_, t, cfg};
        score_candidates(candidates, ctx, cfg.lambda);
        last_paths_ = retrieval.paths;
        trace.gaps = std::move(gaps);
        break;
      }
    }

    for (const auto& r : retrieval.ranked) {
      trace.retrieval.push_back(
          {r.object_id, r.vector_score, r.object_score, r.path_score, r.fused_score});
    }
    for (const auto& p : retrieval.paths) trace.paths.push_back(p.nodes);
    trace.candidates = std::move(candidates);

    if (policy_ != PolicyKind::direct_generation) {
      if (satisfied) {
        status_ = SessionStatus::goal_reached;
      } else if (trace.candidates.empty()) {
        status_ = SessionStatus::ended;
      } else {
        const auto& chosen = select_action(trace.candidates);
        trace.chosen_action_id = chosen.action_id;
        history_.push_back({t, chosen.verb, chosen.target_slot});
        if (policy_ == PolicyKind::rule_template) ++checklist_cursor_;
      }
    }
  } catch (const Error& e) {
    throw with_turn(e, t);
  }

  record_ = project_record(state_, goal_, pack_->schema, cfg.emr);
  trace.state = state_;
  trace.state_hash = state_hash(state_);
  trace.belief = belief_;
  trace.entropy = entropy(belief_);
  trace.goal_satisfied = goal_turn_.has_value() && *goal_turn_ <= t &&
                         goal_satisfied(state_, goal_, cfg.state.w_min);
  trace.status = status_;
  trace.trace_hash = compute_trace_hash(trace);
  traces_.push_back(std::move(trace));
  return traces_.back();
}

namespace {
constexpr const char* kNoAnswer = "I'm not sure.";
}

SessionResult run_policy(const Scenario& scenario, const ScenarioPack& pack,
                         const KnowledgeBase& kb, PolicyKind policy) {
  Session session(scenario.scenario_id + ":" + std::string(to_string(policy)), pack, scenario, kb,
                  policy);
  // Scripted turns and injected answers interleave: after an answer, the
  // next scripted turn plays before the following answer.
  std::size_t next_base = 0;
  std::deque<DialogueTurn> pending;
  std::vector<char> used(scenario.responses.size(), 0);
  bool asked = false;
  bool last_was_answer = false;

  while (session.status() == SessionStatus::active &&
         session.next_turn_index() < pack.config.max_turns) {
    DialogueTurn turn;
    const bool base_left = next_base < scenario.script.size();
    if (!pending.empty() && !(last_was_answer && base_left)) {
      turn = std::move(pending.front());
      pending.pop_front();
      last_was_answer = true;
    } else if (base_left) {
      turn = scenario.script[next_base++];
      last_was_answer = false;
    } else if (asked) {
      // script exhausted but the last prompt still wants an answer
      turn.speaker = Role::patient;
      turn.text = kNoAnswer;
      turn.gold_events = std::vector<GoldAnnotation>{};
      last_was_answer = false;
    } else {
      break;
    }
    const auto& trace = session.run_turn(std::move(turn));
    const auto* chosen = trace.chosen();
    asked = chosen != nullptr;
    if (!chosen || !chosen->target_slot) continue;
    for (std::size_t i = 0; i < scenario.responses.size(); ++i) {
      const auto& r = scenario.responses[i];
      if (used[i]) continue;
      if (std::find(r.on.begin(), r.on.end(), *chosen->target_slot) != r.on.end()) {
        used[i] = 1;
        pending.push_back(r.turn);
        break;
      }
    }
  }

  SessionResult out;
  out.scenario_id = scenario.scenario_id;
  out.policy = policy;
  out.status = session.status();
  out.traces = session.traces();
  out.final_state = session.state();
  out.record = session.record();
  out.goal_turn = session.goal_turn();
  return out;
}

}  // namespace inquiry
