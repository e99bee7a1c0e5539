#include "inquiry/pack.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "inquiry/hash.hpp"
#include "inquiry/json_io.hpp"

namespace inquiry {
namespace fs = std::filesystem;
namespace {

[[noreturn]] void invalid(const fs::path& file, const std::string& what, int line = 0) {
  std::string where = file.string();
  if (line > 0) where += ":" + std::to_string(line);
  throw Error(ErrorCode::PackInvalid, where + ": " + what);
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) invalid(file, "cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses the document and runs fn on it, rethrowing any failure as
// PackInvalid with the file name attached.
template <typename Fn>
void with_document(const fs::path& file, Fn&& fn) {
  json doc;
  try {
    doc = json::parse(read_file(file));
  } catch (const json::exception& e) {
    invalid(file, e.what());
  }
  try {
    fn(doc);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PackInvalid) throw;
    invalid(file, e.what());
  } catch (const json::exception& e) {
    invalid(file, e.what());
  }
}

template <typename Fn>
void with_lines(const fs::path& file, Fn&& fn) {
  std::istringstream in(read_file(file));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const Error& e) {
      invalid(file, e.what(), n);
    } catch (const json::exception& e) {
      invalid(file, e.what(), n);
    }
  }
}

std::vector<std::string> strings(const json& j, const char* key) {
  return j.contains(key) ? j.at(key).get<std::vector<std::string>>() : std::vector<std::string>{};
}

RiskRule parse_risk_rule(const json& j) {
  RiskRule r;
  r.rule_id = j.at("rule_id").get<std::string>();
  r.label = j.value("label", r.rule_id);
  for (const auto& c : j.at("antecedent")) {
    RiskCondition cond;
    cond.slot_id = c.at("slot").get<std::string>();
    if (c.contains("value")) cond.value = c.at("value").get<std::string>();
    if (c.contains("states")) cond.states = c.at("states").get<std::vector<StateLabel>>();
    r.antecedent.push_back(std::move(cond));
  }
  r.unresolved_condition = strings(j, "unresolved");
  r.severity = j.value("severity", 1.0);
  r.threshold = j.value("threshold", 0.7);
  return r;
}

GoalState parse_goal(const json& j) {
  GoalState g;
  for (const auto& s : j.at("slots")) {
    GoalSlot slot;
    slot.slot_id = s.at("slot").get<std::string>();
    slot.section = s.value("section", std::string("HPI"));
    slot.mandatory = s.value("mandatory", false);
    slot.risk_flag = s.value("risk_flag", false);
    g.required_slots.push_back(std::move(slot));
  }
  if (j.contains("risk_rules")) {
    for (const auto& r : j.at("risk_rules")) g.risk_rules.push_back(parse_risk_rule(r));
  }
  if (j.contains("activation")) {
    g.activation = j.at("activation").get<std::map<std::string, std::vector<std::string>>>();
  }
  return g;
}

BeliefModel parse_model(const json& j) {
  BeliefModel m{{}, LikelihoodModel(j.value("default_likelihood", 1.0)), {}};
  for (const auto& h : j.at("hypotheses")) {
    m.hypotheses.push_back(
        {h.at("id").get<std::string>(), h.value("label", std::string{}), h.at("prior").get<double>()});
  }
  if (j.contains("likelihoods")) {
    for (const auto& l : j.at("likelihoods")) {
      const auto state = l.value("state", std::string("*"));
      std::optional<StateLabel> label;
      if (state != "*") label = parse_state(state);
      m.likelihoods.set(l.at("h").get<std::string>(), l.at("slot").get<std::string>(),
                        l.at("value").get<std::string>(), label, l.at("p").get<double>());
    }
  }
  if (j.contains("outcomes")) {
    for (const auto& [key, list] : j.at("outcomes").items()) {
      std::vector<Outcome> outcomes;
      for (const auto& o : list) {
        outcomes.push_back(
            {o.at("id").get<std::string>(), o.at("p").get<std::map<std::string, double>>()});
      }
      m.outcomes.set(key, std::move(outcomes));
    }
  }
  return m;
}

ExtractionRule parse_extraction_rule(const json& j) {
  ExtractionRule r;
  r.rule_id = j.at("rule_id").get<std::string>();
  r.trigger = j.at("trigger").get<std::string>();
  r.field_id = j.at("field").get<std::string>();
  r.value = j.at("value").get<std::string>();
  r.state = j.at("state").get<StateLabel>();
  r.temporality = j.value("temporality", json("present")).get<Temporality>();
  r.priority = j.value("priority", 0);
  r.confidence = j.value("confidence", 0.9);
  return r;
}

GoldItem parse_gold_item(const json& j) {
  GoldItem g;
  g.slot_id = j.at("slot").get<std::string>();
  g.normalized_value = j.at("value").get<std::string>();
  g.status = j.at("status").get<StateLabel>();
  g.temporality = j.value("temporality", json("present")).get<Temporality>();
  g.assertion = j.contains("assertion") ? parse_assertion(j.at("assertion").get<std::string>())
                                        : assertion_for(g.status);
  g.section = j.value("section", std::string{});
  g.risk_flag = j.value("risk_flag", false);
  g.structural = j.value("structural", false);
  return g;
}

QueryPoint parse_query(const json& j) {
  QueryPoint q;
  q.query_id = j.at("query_id").get<std::string>();
  q.scenario_id = j.value("scenario_id", std::string{});
  q.query_type = j.value("type", std::string{});
  q.prompt = j.value("prompt", std::string{});
  q.target_slot = j.value("target_slot", std::string{});
  for (const auto& f : j.at("state")) {
    q.state.push_back({f.at("slot").get<std::string>(), f.at("value").get<std::string>(),
                       f.value("state", json("observed_result")).get<StateLabel>()});
  }
  q.relevant_objects = strings(j, "relevant");
  q.primary_object = j.value("primary", q.relevant_objects.empty() ? std::string{}
                                                                   : q.relevant_objects.front());
  if (j.contains("gold_paths")) {
    q.gold_paths = j.at("gold_paths").get<std::vector<std::vector<std::string>>>();
  }
  q.risk_critical = j.value("risk_critical", false);
  return q;
}

void parse_config(const json& j, EngineConfig& c) {
  c.state.w_min = j.value("w_min", c.state.w_min);
  c.state.delta = j.value("delta", c.state.delta);
  c.state.information_severity = j.value("information_severity", c.state.information_severity);
  c.state.path_blocking_severity =
      j.value("path_blocking_severity", c.state.path_blocking_severity);
  if (j.contains("state_weights")) {
    const auto& w = j.at("state_weights");
    c.state.weights.not_done = w.value("not_done", 0.0);
    c.state.weights.negated = w.value("negated", 0.0);
  }
  c.emr.w_emr = j.value("w_emr", c.emr.w_emr);
  if (j.contains("lambda")) c.lambda.lambda = j.at("lambda").get<std::array<double, 7>>();
  c.n_max = j.value("n_max", c.n_max);
  c.k_action = j.value("k_action", c.k_action);
  c.rp_window = j.value("rp_window", c.rp_window);
  c.rp_weight = j.value("rp_weight", c.rp_weight);
  c.cl_run_cap = j.value("cl_run_cap", c.cl_run_cap);
  c.max_turns = j.value("max_turns", c.max_turns);
  if (j.contains("retrieval")) {
    const auto& r = j.at("retrieval");
    c.retrieval.k_coarse = r.value("k_coarse", c.retrieval.k_coarse);
    c.retrieval.k_rerank = r.value("k_rerank", c.retrieval.k_rerank);
    c.retrieval.k_paths = r.value("k_paths", c.retrieval.k_paths);
    c.retrieval.paths_per_object = r.value("paths_per_object", c.retrieval.paths_per_object);
    c.retrieval.max_path_len = r.value("max_path_len", c.retrieval.max_path_len);
  }
  c.retrieval.w_min = c.state.w_min;
}

}  // namespace

std::size_t GoldAudit::risk_count() const {
  return std::count_if(items.begin(), items.end(), [](const GoldItem& g) { return g.risk_flag; });
}

std::size_t GoldAudit::structural_count() const {
  return std::count_if(items.begin(), items.end(), [](const GoldItem& g) { return g.structural; });
}

const Scenario* ScenarioPack::find_scenario(const std::string& id) const {
  for (const auto& s : scenarios) {
    if (s.scenario_id == id) return &s;
  }
  return nullptr;
}

const Scenario& ScenarioPack::scenario(const std::string& id) const {
  if (const auto* s = find_scenario(id)) return *s;
  throw Error(ErrorCode::UnknownScenario, "unknown scenario: '" + id + "'");
}

GoalState ScenarioPack::goal_for(const Scenario& s) const {
  auto it = goals.find(s.goal_template);
  if (it == goals.end()) {
    throw Error(ErrorCode::PackInvalid, "scenario " + s.scenario_id +
                                            " references missing goal template " + s.goal_template);
  }
  return it->second.for_scenario(s.scenario_id);
}

const BeliefModel& ScenarioPack::model_for(const Scenario& s) const {
  auto it = models.find(s.family);
  if (it == models.end()) {
    throw Error(ErrorCode::PackInvalid,
                "scenario " + s.scenario_id + " references missing model family " + s.family);
  }
  return it->second;
}

RetrievalConfig effective_retrieval(const EngineConfig& cfg, const KnowledgeBase& kb) {
  RetrievalConfig r = cfg.retrieval;
  r.alpha = kb.manifest().alpha;
  r.beta = kb.manifest().beta;
  r.rho = kb.manifest().rho;
  return r;
}

ScenarioPack load_pack(const fs::path& dir) {
  if (!fs::is_directory(dir)) invalid(dir, "pack directory not found");
  ScenarioPack pack;
  pack.root = dir;

  with_document(dir / "manifest.json", [&](const json& j) {
    auto& m = pack.manifest;
    m.pack_id = j.at("pack_id").get<std::string>();
    const auto& c = j.at("counts");
    m.counts.scripts = c.at("scripts").get<std::size_t>();
    m.counts.gold_items = c.at("gold_items").get<std::size_t>();
    m.counts.risk_items = c.at("risk_items").get<std::size_t>();
    m.counts.structural_slots = c.at("structural_slots").get<std::size_t>();
    m.counts.query_points = c.at("query_points").get<std::size_t>();
    m.counts.risk_critical_queries = c.value("risk_critical_queries", std::size_t{0});
    if (j.contains("thresholds")) m.thresholds = j.at("thresholds").get<std::map<std::string, double>>();
    if (j.contains("unit_aliases")) {
      m.unit_aliases = j.at("unit_aliases").get<std::map<std::string, std::string>>();
    }
    m.notes = j.value("notes", std::string{});
    if (j.contains("config")) parse_config(j.at("config"), pack.config);
  });

  with_document(dir / "goals.json", [&](const json& j) {
    for (const auto& [name, g] : j.items()) pack.goals.emplace(name, parse_goal(g));
  });

  with_document(dir / "models.json", [&](const json& j) {
    for (const auto& [family, m] : j.items()) pack.models.emplace(family, parse_model(m));
  });

  with_document(dir / "schema.json", [&](const json& j) {
    pack.schema.sections = j.at("sections").get<std::vector<std::string>>();
    pack.schema.slot_section = j.at("slots").get<std::map<std::string, std::string>>();
  });

  if (fs::exists(dir / "rules.json")) {
    with_document(dir / "rules.json", [&](const json& j) {
      for (const auto& r : j) pack.rules.push_back(parse_extraction_rule(r));
    });
  }

  with_document(dir / "scenarios.json", [&](const json& j) {
    for (const auto& s : j) {
      Scenario sc;
      sc.scenario_id = s.at("id").get<std::string>();
      sc.title = s.value("title", sc.scenario_id);
      sc.family = s.at("family").get<std::string>();
      sc.goal_template = s.at("goal_template").get<std::string>();
      sc.checklist = strings(s, "checklist");
      pack.scenarios.push_back(std::move(sc));
    }
  });

  for (auto& sc : pack.scenarios) {
    const auto script = dir / "scripts" / (sc.scenario_id + ".jsonl");
    if (!fs::exists(script)) invalid(script, "script missing for scenario " + sc.scenario_id);
    with_lines(script, [&](const json& j) {
      auto turn = parse_turn(j);
      turn.turn_index = static_cast<int>(sc.script.size());
      sc.script.push_back(std::move(turn));
    });
    const auto responses = dir / "scripts" / (sc.scenario_id + ".responses.jsonl");
    if (fs::exists(responses)) {
      with_lines(responses, [&](const json& j) {
        sc.responses.push_back({j.at("on").get<std::vector<std::string>>(), parse_turn(j)});
      });
    }
    const auto gold = dir / "gold" / (sc.scenario_id + ".json");
    if (fs::exists(gold)) {
      with_document(gold, [&](const json& j) {
        GoldAudit audit;
        audit.scenario_id = sc.scenario_id;
        for (const auto& item : j.at("items")) audit.items.push_back(parse_gold_item(item));
        audit.low_value = strings(j, "low_value");
        pack.gold.emplace(sc.scenario_id, std::move(audit));
      });
    }
  }

  if (fs::exists(dir / "queries.jsonl")) {
    with_lines(dir / "queries.jsonl", [&](const json& j) { pack.queries.push_back(parse_query(j)); });
  }
  return pack;
}

KnowledgeBase load_kb(const fs::path& dir) {
  if (!fs::is_directory(dir)) invalid(dir, "kb directory not found");
  KbManifest manifest;
  with_document(dir / "manifest.json", [&](const json& j) {
    manifest.embedding.dimension = j.value("dimension", manifest.embedding.dimension);
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      manifest.embedding.seed =
          s.is_string() ? std::stoull(s.get<std::string>(), nullptr, 0) : s.get<std::uint64_t>();
    }
    const auto hash_name = j.value("hash", std::string(hash::kHashName));
    if (hash_name != hash::kHashName) {
      throw Error(ErrorCode::PackInvalid, "unsupported hash family: " + hash_name);
    }
    if (j.contains("alpha")) manifest.alpha.alpha = j.at("alpha").get<std::array<double, 7>>();
    if (j.contains("beta")) {
      const auto b = j.at("beta").get<std::array<double, 3>>();
      manifest.beta = {b[0], b[1], b[2]};
    }
    manifest.rho = j.value("rho", manifest.rho);
  });

  std::vector<KnowledgeObject> objects;
  with_lines(dir / "objects.jsonl", [&](const json& j) {
    KnowledgeObject o;
    o.object_id = j.at("id").get<std::string>();
    o.kind = parse_object_kind(j.at("kind").get<std::string>());
    o.text = j.at("text").get<std::string>();
    if (j.contains("fields")) o.fields = j.at("fields").get<std::map<std::string, std::string>>();
    o.addresses = strings(j, "addresses");
    o.discharges = strings(j, "discharges");
    if (j.contains("requires")) {
      for (const auto& [slot, state] : j.at("requires").items()) {
        o.requires_states[slot] = state.get<StateLabel>();
      }
    }
    if (j.contains("precondition") && !j.at("precondition").is_null()) {
      o.precondition = j.at("precondition").get<std::string>();
    }
    objects.push_back(std::move(o));
  });

  std::vector<KnowledgeEdge> edges;
  if (fs::exists(dir / "edges.jsonl")) {
    with_lines(dir / "edges.jsonl", [&](const json& j) {
      edges.push_back({j.at("src").get<std::string>(), j.at("dst").get<std::string>(),
                       j.value("relation", std::string("related")), j.value("cost", 1.0)});
    });
  }
  try {
    return KnowledgeBase(std::move(objects), std::move(edges), manifest);
  } catch (const Error& e) {
    invalid(dir, e.what());
  }
}

std::vector<std::string> validate_pack(const ScenarioPack& pack, const KnowledgeBase* kb) {
  std::vector<std::string> issues;
  auto issue = [&](std::string s) { issues.push_back(std::move(s)); };
  const auto& want = pack.manifest.counts;

  std::size_t gold_items = 0;
  std::size_t risk_items = 0;
  std::size_t structural = 0;
  for (const auto& [id, audit] : pack.gold) {
    gold_items += audit.items.size();
    risk_items += audit.risk_count();
    structural += audit.structural_count();
  }
  const std::size_t risk_queries = std::count_if(
      pack.queries.begin(), pack.queries.end(), [](const QueryPoint& q) { return q.risk_critical; });
  auto count = [&](const char* name, std::size_t declared, std::size_t actual) {
    if (declared != actual) {
      issue(std::string("manifest count ") + name + " = " + std::to_string(declared) +
            " but pack contains " + std::to_string(actual));
    }
  };
  count("scripts", want.scripts, pack.scenarios.size());
  count("gold_items", want.gold_items, gold_items);
  count("risk_items", want.risk_items, risk_items);
  count("structural_slots", want.structural_slots, structural);
  count("query_points", want.query_points, pack.queries.size());
  count("risk_critical_queries", want.risk_critical_queries, risk_queries);

  std::set<std::string> rule_ids;
  for (const auto& [name, goal] : pack.goals) {
    for (const auto& r : goal.risk_rules) {
      rule_ids.insert(r.rule_id);
      for (const auto& slot : r.unresolved_condition) {
        if (!pack.schema.section_of(slot)) {
          issue("goal " + name + ": rule " + r.rule_id + " slot " + slot + " has no section");
        }
      }
    }
    for (const auto& s : goal.required_slots) {
      if (!pack.schema.section_of(s.slot_id)) {
        issue("goal " + name + ": slot " + s.slot_id + " has no section");
      }
    }
  }

  std::set<std::string> ids;
  for (const auto& sc : pack.scenarios) {
    if (!ids.insert(sc.scenario_id).second) issue("duplicate scenario id " + sc.scenario_id);
    if (!pack.goals.count(sc.goal_template)) {
      issue("scenario " + sc.scenario_id + ": unknown goal template " + sc.goal_template);
    }
    if (!pack.models.count(sc.family)) {
      issue("scenario " + sc.scenario_id + ": unknown model family " + sc.family);
    }
    if (sc.script.empty()) issue("scenario " + sc.scenario_id + ": empty script");
    if (!pack.gold.count(sc.scenario_id)) issue("scenario " + sc.scenario_id + ": no gold audit");
    auto check_turn = [&](const DialogueTurn& t, const std::string& where) {
      if (!t.gold_events) return;
      for (const auto& g : *t.gold_events) {
        if (g.char_start < 0 || g.char_end < g.char_start ||
            g.char_end > static_cast<int>(t.text.size())) {
          issue(where + ": span out of range for " + g.field_id);
        }
        if (!pack.schema.section_of(g.field_id)) issue(where + ": slot " + g.field_id + " has no section");
      }
    };
    for (std::size_t i = 0; i < sc.script.size(); ++i) {
      check_turn(sc.script[i], sc.scenario_id + " turn " + std::to_string(i));
    }
    for (std::size_t i = 0; i < sc.responses.size(); ++i) {
      check_turn(sc.responses[i].turn, sc.scenario_id + " response " + std::to_string(i));
    }
  }
  for (const auto& [family, model] : pack.models) {
    double mass = 0.0;
    for (const auto& h : model.hypotheses) mass += h.prior;
    if (model.hypotheses.empty() || mass <= 0.0) issue("model " + family + ": no prior mass");
  }
  for (const auto& [id, audit] : pack.gold) {
    if (!ids.count(id)) issue("gold audit for unknown scenario " + id);
    for (const auto& item : audit.items) {
      if (!pack.schema.section_of(item.slot_id)) {
        issue("gold " + id + ": slot " + item.slot_id + " has no section");
      }
    }
  }

  std::set<std::string> qids;
  for (const auto& q : pack.queries) {
    if (!qids.insert(q.query_id).second) issue("duplicate query id " + q.query_id);
    if (!q.scenario_id.empty() && !ids.count(q.scenario_id)) {
      issue("query " + q.query_id + ": unknown scenario " + q.scenario_id);
    }
    if (q.relevant_objects.empty()) issue("query " + q.query_id + ": no relevant objects");
    if (!kb) continue;
    for (const auto& o : q.relevant_objects) {
      if (!kb->find(o)) issue("query " + q.query_id + ": unknown object " + o);
    }
    for (const auto& path : q.gold_paths) {
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const bool has_edge = std::any_of(kb->edges().begin(), kb->edges().end(),
                                          [&](const KnowledgeEdge& e) {
                                            return e.src == path[i] && e.dst == path[i + 1];
                                          });
        if (!has_edge) {
          issue("query " + q.query_id + ": gold path edge " + path[i] + "->" + path[i + 1] +
                " not in kb");
        }
      }
    }
  }
  if (kb) {
    for (const auto& o : kb->objects()) {
      for (const auto& r : o.discharges) {
        if (!rule_ids.count(r)) issue("object " + o.object_id + ": unknown risk rule " + r);
      }
    }
  }
  return issues;
}

}  // namespace inquiry
