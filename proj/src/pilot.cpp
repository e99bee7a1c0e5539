#include "inquiry/pilot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace inquiry {
namespace {

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string render(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    std::string line;
    for (std::size_t i = 0; i < rows[n].size(); ++i) {
      line += i + 1 == rows[n].size() ? rows[n][i] : pad(rows[n][i], width[i] + 2);
    }
    out << line << '\n';
    if (n == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out << std::string(total - 2, '-') << '\n';
    }
  }
  return out.str();
}

json cell(std::size_t num, std::size_t den) {
  if (den == 0) return json{{"num", num}, {"den", den}, {"ratio", nullptr}, {"percent", nullptr}};
  return json{{"num", num}, {"den", den}, {"ratio", ratio(num, den)}, {"percent", percent_of(num, den)}};
}

}  // namespace

std::string_view policy_label(PolicyKind p) {
  switch (p) {
    case PolicyKind::direct_generation: return "Baseline A: Direct generation";
    case PolicyKind::chunk_rag: return "Baseline B: Chunk-only RAG";
    case PolicyKind::rule_template: return "Baseline C: Rule-template questioning";
    case PolicyKind::full_framework: return "Full framework";
  }
  return "?";
}

PilotReport run_pilot(const ScenarioPack& pack, const KnowledgeBase& kb,
                      const std::vector<PolicyKind>& policies) {
  PilotReport report;
  report.pack_id = pack.manifest.pack_id;
  for (auto policy : policies) {
    PolicyRow row;
    row.policy = policy;
    row.label = policy_label(policy);
    double t_sum = 0.0;
    for (const auto& sc : pack.scenarios) {
      auto gold = pack.gold.find(sc.scenario_id);
      if (gold == pack.gold.end()) {
        throw Error(ErrorCode::PackInvalid, "no gold audit for " + sc.scenario_id);
      }
      const auto session = run_policy(sc, pack, kb, policy);
      auto c = audit_session(session, gold->second, pack);
      auto& t = row.totals;
      t.covered += c.covered;
      t.gold_items += c.gold_items;
      t.risk_surfaced += c.risk_surfaced;
      t.risk_items += c.risk_items;
      t.structural_filled += c.structural_filled;
      t.structural_slots += c.structural_slots;
      t.redundant_actions += c.redundant_actions;
      t.actions += c.actions;
      if (c.t_goal) {
        ++row.finished;
        t_sum += *c.t_goal;
      } else {
        ++row.dnf;
      }
      row.trace_hashes.push_back(session.traces.empty() ? "" : session.traces.back().trace_hash);
      row.cases.push_back(std::move(c));
    }
    const auto& t = row.totals;
    row.coverage = ratio(t.covered, t.gold_items);
    row.risk_recall = ratio(t.risk_surfaced, t.risk_items);
    row.structural = ratio(t.structural_filled, t.structural_slots);
    if (t.actions > 0) row.redundancy = ratio(t.redundant_actions, t.actions);
    if (row.finished > 0) row.t_goal = t_sum / static_cast<double>(row.finished);
    report.rows.push_back(std::move(row));
  }
  return report;
}

json pilot_json(const PilotReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json cases = json::array();
    for (const auto& c : row.cases) {
      cases.push_back(json{{"scenario_id", c.scenario_id},
                           {"coverage", cell(c.covered, c.gold_items)},
                           {"risk_recall", cell(c.risk_surfaced, c.risk_items)},
                           {"structural_completeness", cell(c.structural_filled, c.structural_slots)},
                           {"redundancy", cell(c.redundant_actions, c.actions)},
                           {"t_goal", c.t_goal ? json(*c.t_goal) : json(nullptr)}});
    }
    const auto& t = row.totals;
    rows.push_back(json{
        {"policy", std::string(to_string(row.policy))},
        {"label", row.label},
        {"coverage", cell(t.covered, t.gold_items)},
        {"risk_recall", cell(t.risk_surfaced, t.risk_items)},
        {"structural_completeness", cell(t.structural_filled, t.structural_slots)},
        {"redundancy", row.redundancy ? cell(t.redundant_actions, t.actions) : json(nullptr)},
        {"t_goal", row.t_goal ? json(*row.t_goal) : json(nullptr)},
        {"t_goal_finished", row.finished},
        {"t_goal_dnf", row.dnf},
        {"cases", cases}});
  }
  return json{{"v", 1}, {"pack_id", r.pack_id}, {"report", "pilot"}, {"rows", rows}};
}

std::string pilot_table(const PilotReport& r) {
  std::vector<std::vector<std::string>> rows{{"Method", "Coverage (%)", "Risk Recall (%)",
                                              "Structural Completeness (%)", "Redundancy (%)",
                                              "T_goal"}};
  std::string notes;
  for (const auto& row : r.rows) {
    const auto& t = row.totals;
    const bool passive = row.policy == PolicyKind::direct_generation;
    std::string red = "N/A";
    std::string tg = "N/A";
    if (!passive) {
      if (row.redundancy) red = format_fixed(percent_of(t.redundant_actions, t.actions), 1);
      if (row.t_goal) {
        tg = format_fixed(*row.t_goal, 1);
        if (row.dnf > 0) tg += " (" + std::to_string(row.dnf) + " DNF)";
      } else {
        tg = "DNF";
      }
    }
    rows.push_back({row.label, format_fixed(percent_of(t.covered, t.gold_items), 1),
                    format_fixed(percent_of(t.risk_surfaced, t.risk_items), 1),
                    format_fixed(percent_of(t.structural_filled, t.structural_slots), 1), red, tg});
    notes += "  " + row.label + ": " + std::to_string(t.covered) + "/" +
             std::to_string(t.gold_items) + " items, " + std::to_string(t.risk_surfaced) + "/" +
             std::to_string(t.risk_items) + " risk, " + std::to_string(t.structural_filled) + "/" +
             std::to_string(t.structural_slots) + " slots, " +
             std::to_string(t.redundant_actions) + "/" + std::to_string(t.actions) +
             " redundant prompts\n";
  }
  return render(rows) + "\nRaw counts:\n" + notes;
}

CurrentState state_from_facts(const std::vector<StateFact>& facts,
                              const StateWeightConfig& weights) {
  std::vector<StatefulEvent> events;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    StatefulEvent e;
    e.field_id = facts[i].slot_id;
    e.value = facts[i].value;
    e.state = facts[i].state;
    e.role = Role::patient;
    e.trace_id = make_trace_id(0, static_cast<int>(i));
    events.push_back(std::move(e));
  }
  return apply_events({}, events, 0, weights);
}

RetrievalReport bench_retrieval(const ScenarioPack& pack, const KnowledgeBase& kb,
                                std::size_t k) {
  if (pack.queries.empty()) throw Error(ErrorCode::EmptyInput, "pack has no query points");
  if (k == 0) throw Error(ErrorCode::EmptyInput, "k must be at least 1");
  RetrievalReport report;
  report.k = k;

  auto hybrid = effective_retrieval(pack.config, kb);
  hybrid.k_rerank = std::max(hybrid.k_rerank, k);
  auto chunk = hybrid;
  chunk.mode = RetrievalMode::chunk;
  chunk.beta = {1.0, 0.0, 0.0};

  const std::pair<const char*, const RetrievalConfig*> configs[] = {{"Chunk-only RAG", &chunk},
                                                                    {"Hybrid Retrieval", &hybrid}};
  for (const auto& [label, cfg] : configs) {
    RetrievalRow row;
    row.label = label;
    row.mode = cfg->mode;
    std::vector<std::vector<std::string>> results;
    std::vector<std::vector<std::string>> relevant;
    for (const auto& q : pack.queries) {
      const auto cur = state_from_facts(q.state, pack.config.state.weights);
      GoalState goal;
      Belief belief;
      if (const auto* sc = pack.find_scenario(q.scenario_id)) {
        goal = pack.goal_for(*sc);
        belief = Belief::from_hypotheses(pack.model_for(*sc).hypotheses);
      }
      const auto res = retrieve(cur, goal, belief, kb, *cfg);
      auto ids = res.top_ids(res.ranked.size());
      row.object_hits += object_hit(ids, q.primary_object, k);
      std::vector<std::vector<std::string>> paths;
      for (const auto& p : res.paths) paths.push_back(p.nodes);
      row.path_hits += path_hit(paths, q.gold_paths);
      row.recall_hits += hit_at_k(ids, q.relevant_objects, k);
      results.push_back(std::move(ids));
      relevant.push_back(q.relevant_objects);
    }
    row.queries = pack.queries.size();
    row.recall = recall_at_k(results, relevant, k);
    row.mrr = mrr_at_k(results, relevant, k);
    row.ndcg = ndcg_at_k(results, relevant, k);
    row.object_hit_rate = ratio(row.object_hits, row.queries);
    row.path_hit_rate = ratio(row.path_hits, row.queries);
    report.rows.push_back(std::move(row));
  }
  report.risk_critical = std::count_if(pack.queries.begin(), pack.queries.end(),
                                       [](const QueryPoint& q) { return q.risk_critical; });
  return report;
}

json retrieval_json(const RetrievalReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"label", row.label},
                        {"mode", row.mode == RetrievalMode::chunk ? "chunk" : "hybrid"},
                        {"queries", row.queries},
                        {"recall_hits", row.recall_hits},
                        {"object_hits", row.object_hits},
                        {"path_hits", row.path_hits},
                        {"recall", row.recall},
                        {"mrr", row.mrr},
                        {"ndcg", row.ndcg},
                        {"object_hit_rate", row.object_hit_rate},
                        {"path_hit_rate", row.path_hit_rate}});
  }
  return json{{"v", 1},
              {"report", "retrieval"},
              {"k", r.k},
              {"risk_critical_queries", r.risk_critical},
              {"rows", rows}};
}

std::string retrieval_table(const RetrievalReport& r) {
  const std::string k = std::to_string(r.k);
  std::vector<std::vector<std::string>> rows{{"Metric"}};
  for (const auto& row : r.rows) rows[0].push_back(row.label);
  auto add = [&](const std::string& name, auto get, int decimals) {
    std::vector<std::string> line{name};
    for (const auto& row : r.rows) line.push_back(format_fixed(get(row), decimals));
    rows.push_back(std::move(line));
  };
  add("Recall@" + k, [](const RetrievalRow& x) { return x.recall; }, 3);
  add("MRR@" + k, [](const RetrievalRow& x) { return x.mrr; }, 3);
  add("nDCG@" + k, [](const RetrievalRow& x) { return x.ndcg; }, 3);
  add("Object hit rate", [](const RetrievalRow& x) { return x.object_hit_rate; }, 2);
  add("Path hit rate", [](const RetrievalRow& x) { return x.path_hit_rate; }, 2);
  std::string counts = "\nRaw counts:\n";
  for (const auto& row : r.rows) {
    counts += "  " + row.label + ": " + std::to_string(row.recall_hits) + "/" +
              std::to_string(row.queries) + " top-" + k + " recalls, " +
              std::to_string(row.object_hits) + " object hits, " +
              std::to_string(row.path_hits) + " path hits\n";
  }
  return render(rows) + counts;
}

std::map<std::string, double> flatten_metrics(const PilotReport* pilot,
                                              const RetrievalReport* retrieval) {
  std::map<std::string, double> out;
  if (pilot) {
    for (const auto& row : pilot->rows) {
      const std::string p(to_string(row.policy));
      out[p + ".coverage"] = row.coverage;
      out[p + ".risk_recall"] = row.risk_recall;
      out[p + ".structural_completeness"] = row.structural;
      if (row.redundancy) out[p + ".redundancy"] = *row.redundancy;
      if (row.t_goal) out[p + ".t_goal"] = *row.t_goal;
    }
  }
  if (retrieval) {
    for (const auto& row : retrieval->rows) {
      const std::string p =
          std::string("retrieval.") + (row.mode == RetrievalMode::chunk ? "chunk" : "hybrid");
      out[p + ".recall"] = row.recall;
      out[p + ".mrr"] = row.mrr;
      out[p + ".ndcg"] = row.ndcg;
      out[p + ".object_hit_rate"] = row.object_hit_rate;
      out[p + ".path_hit_rate"] = row.path_hit_rate;
    }
  }
  return out;
}

std::vector<std::string> check_thresholds(const std::map<std::string, double>& thresholds,
                                          const std::map<std::string, double>& metrics) {
  std::vector<std::string> out;
  for (const auto& [key, limit] : thresholds) {
    const bool is_max = key.rfind("max_", 0) == 0;
    const std::string name = is_max ? key.substr(4) : key;
    auto it = metrics.find(name);
    if (it == metrics.end()) {
      out.push_back(key + ": metric not available");
      continue;
    }
    const bool ok = is_max ? it->second <= limit + 1e-12 : it->second >= limit - 1e-12;
    if (!ok) {
      out.push_back(key + ": " + format_fixed(it->second, 4) + (is_max ? " > " : " < ") +
                    format_fixed(limit, 4));
    }
  }
  return out;
}

}  // namespace inquiry
