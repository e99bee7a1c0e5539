#include "inquiry/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

namespace inquiry {
namespace {

bool surfaces_risk(Verb v) {
  return v == Verb::verify || v == Verb::recommend_exam || v == Verb::recommend_plan;
}

bool in(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

}  // namespace

std::string canonical_value(std::string_view value,
                            const std::map<std::string, std::string>& unit_aliases) {
  std::string flat;
  bool space = false;
  for (char c : value) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !flat.empty();
      continue;
    }
    if (space) flat.push_back(' ');
    space = false;
    flat.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }

  std::string out;
  std::size_t i = 0;
  while (i < flat.size()) {
    if (!std::isdigit(static_cast<unsigned char>(flat[i]))) {
      out.push_back(flat[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < flat.size() &&
           (std::isdigit(static_cast<unsigned char>(flat[j])) || flat[j] == '.')) {
      ++j;
    }
    const std::string number = flat.substr(i, j - i);
    std::size_t u = j;
    if (u < flat.size() && flat[u] == ' ') ++u;
    std::size_t v = u;
    while (v < flat.size() && std::isalpha(static_cast<unsigned char>(flat[v]))) ++v;
    const std::string unit = flat.substr(u, v - u);
    auto alias = unit_aliases.find(unit);
    out += number;
    if (!unit.empty() && alias != unit_aliases.end()) {
      out += alias->second;
      i = v;
    } else {
      i = j;
    }
  }
  return out;
}

bool status_compatible(StateLabel gold, StateLabel system) {
  using S = StateLabel;
  auto any = [&](std::initializer_list<S> ok) {
    return std::find(ok.begin(), ok.end(), system) != ok.end();
  };
  switch (gold) {
    case S::observed_result: return any({S::observed_result, S::confirmed, S::verified});
    case S::confirmed: return any({S::confirmed, S::verified, S::observed_result});
    case S::verified: return any({S::verified, S::confirmed});
    case S::completed: return any({S::completed, S::verified});
    case S::pending_verification: return any({S::pending_verification, S::unconfirmed});
    case S::unconfirmed: return any({S::unconfirmed, S::pending_verification});
    default: return gold == system;
  }
}

bool item_matches(const GoldItem& gold, const std::string& slot, const std::string& value,
                  StateLabel status, Assertion assertion,
                  const std::map<std::string, std::string>& unit_aliases) {
  return gold.slot_id == slot && gold.assertion == assertion &&
         status_compatible(gold.status, status) &&
         canonical_value(gold.normalized_value, unit_aliases) ==
             canonical_value(value, unit_aliases);
}

bool item_in_record(const GoldItem& item, const EMRecord& record,
                    const std::map<std::string, std::string>& unit_aliases) {
  const auto* slot = record.find(item.slot_id);
  return slot && item_matches(item, slot->slot_id, slot->normalized_value, slot->status,
                              slot->assertion, unit_aliases);
}

bool item_covered(const GoldItem& item, const SessionResult& session,
                  const std::map<std::string, std::string>& unit_aliases) {
  if (item_in_record(item, session.record, unit_aliases)) return true;
  for (const auto& t : session.traces) {
    for (const auto& e : t.events) {
      if (item_matches(item, e.field_id, e.value, e.state, assertion_for(e.state),
                       unit_aliases)) {
        return true;
      }
    }
  }
  return false;
}

double ratio(std::size_t num, std::size_t den) {
  if (den == 0) throw Error(ErrorCode::EmptyGold, "empty denominator");
  return static_cast<double>(num) / static_cast<double>(den);
}

double coverage(const GoldAudit& gold, const SessionResult& session,
                const std::map<std::string, std::string>& unit_aliases) {
  std::size_t hit = 0;
  for (const auto& item : gold.items) hit += item_covered(item, session, unit_aliases);
  return ratio(hit, gold.items.size());
}

namespace {

bool risk_targeted(const GoldItem& item, const SessionResult& session) {
  for (const auto& t : session.traces) {
    const auto* a = t.chosen();
    if (a && surfaces_risk(a->verb) && a->target_slot == item.slot_id) return true;
  }
  return false;
}

}  // namespace

double risk_recall(const GoldAudit& gold, const SessionResult& session,
                   const std::map<std::string, std::string>& unit_aliases) {
  std::size_t hit = 0;
  std::size_t total = 0;
  for (const auto& item : gold.items) {
    if (!item.risk_flag) continue;
    ++total;
    hit += item_covered(item, session, unit_aliases) || risk_targeted(item, session);
  }
  return ratio(hit, total);
}

double structural_completeness(const GoldAudit& gold, const EMRecord& record,
                               const std::map<std::string, std::string>& unit_aliases) {
  std::size_t hit = 0;
  std::size_t total = 0;
  for (const auto& item : gold.items) {
    if (!item.structural) continue;
    ++total;
    hit += item_in_record(item, record, unit_aliases);
  }
  return ratio(hit, total);
}

std::vector<bool> redundant_flags(const SessionResult& session, const GoldAudit& gold,
                                  double w_min) {
  std::vector<bool> flags;
  std::set<std::pair<Verb, std::string>> seen;
  for (const auto& t : session.traces) {
    const auto* a = t.chosen();
    if (!a) continue;
    const std::string slot = a->target_slot.value_or("");
    bool low = !seen.emplace(a->verb, slot).second;
    if (a->target_slot && slot_satisfied(t.state, slot, w_min)) low = true;
    if (in(gold.low_value, std::string(to_string(a->verb)) + ":" + slot)) low = true;
    flags.push_back(low);
  }
  return flags;
}

std::optional<double> redundancy(const SessionResult& session, const GoldAudit& gold,
                                 double w_min) {
  const auto flags = redundant_flags(session, gold, w_min);
  if (flags.empty()) return std::nullopt;
  return ratio(std::count(flags.begin(), flags.end(), true), flags.size());
}

std::optional<int> t_goal(const SessionResult& session) {
  if (session.policy == PolicyKind::direct_generation || !session.goal_turn) return std::nullopt;
  return *session.goal_turn + 1;
}

CaseCounts audit_session(const SessionResult& session, const GoldAudit& gold,
                         const ScenarioPack& pack) {
  const auto& aliases = pack.manifest.unit_aliases;
  CaseCounts c;
  c.scenario_id = session.scenario_id;
  for (const auto& item : gold.items) {
    const bool covered = item_covered(item, session, aliases);
    ++c.gold_items;
    c.covered += covered;
    if (item.risk_flag) {
      ++c.risk_items;
      c.risk_surfaced += covered || risk_targeted(item, session);
    }
    if (item.structural) {
      ++c.structural_slots;
      c.structural_filled += item_in_record(item, session.record, aliases);
    }
  }
  const auto flags = redundant_flags(session, gold, pack.config.state.w_min);
  c.actions = flags.size();
  c.redundant_actions = std::count(flags.begin(), flags.end(), true);
  c.t_goal = t_goal(session);
  return c;
}

double percent_of(std::size_t num, std::size_t den) {
  if (den == 0) throw Error(ErrorCode::EmptyGold, "empty denominator");
  const std::size_t tenths = (2000 * num + den) / (2 * den);
  return static_cast<double>(tenths) / 10.0;
}

double percent(double r) { return std::floor(r * 1000.0 + 0.5 + 1e-9) / 10.0; }

std::string format_fixed(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = std::floor(value * scale + 0.5 + 1e-9);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, scaled / scale);
  return buf;
}

bool hit_at_k(const std::vector<std::string>& ranked, const std::vector<std::string>& relevant,
              std::size_t k) {
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    if (in(relevant, ranked[i])) return true;
  }
  return false;
}

double reciprocal_rank_at_k(const std::vector<std::string>& ranked,
                            const std::vector<std::string>& relevant, std::size_t k) {
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    if (in(relevant, ranked[i])) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

double ndcg_at_k(const std::vector<std::string>& ranked, const std::vector<std::string>& relevant,
                 std::size_t k) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    if (in(relevant, ranked[i])) dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  double ideal = 0.0;
  const std::size_t n = std::min(relevant.size(), k);
  for (std::size_t i = 0; i < n; ++i) ideal += 1.0 / std::log2(static_cast<double>(i + 2));
  return ideal > 0.0 ? dcg / ideal : 0.0;
}

namespace {

template <typename Fn>
double mean_over(const std::vector<std::vector<std::string>>& results,
                 const std::vector<std::vector<std::string>>& relevant, Fn&& fn) {
  if (results.size() != relevant.size()) {
    throw Error(ErrorCode::EmptyInput, "result and gold lists differ in length");
  }
  if (results.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) sum += fn(results[i], relevant[i]);
  return sum / static_cast<double>(results.size());
}

}  // namespace

double recall_at_k(const std::vector<std::vector<std::string>>& results,
                   const std::vector<std::vector<std::string>>& relevant, std::size_t k) {
  return mean_over(results, relevant,
                   [k](const auto& r, const auto& g) { return hit_at_k(r, g, k) ? 1.0 : 0.0; });
}

double mrr_at_k(const std::vector<std::vector<std::string>>& results,
                const std::vector<std::vector<std::string>>& relevant, std::size_t k) {
  return mean_over(results, relevant,
                   [k](const auto& r, const auto& g) { return reciprocal_rank_at_k(r, g, k); });
}

double ndcg_at_k(const std::vector<std::vector<std::string>>& results,
                 const std::vector<std::vector<std::string>>& relevant, std::size_t k) {
  return mean_over(results, relevant,
                   [k](const auto& r, const auto& g) { return ndcg_at_k(r, g, k); });
}

bool object_hit(const std::vector<std::string>& ranked, const std::string& primary,
                std::size_t k_hit) {
  return hit_at_k(ranked, {primary}, k_hit);
}

bool contains_contiguous(const std::vector<std::string>& path,
                         const std::vector<std::string>& gold) {
  if (gold.empty() || gold.size() > path.size()) return false;
  return std::search(path.begin(), path.end(), gold.begin(), gold.end()) != path.end();
}

bool path_hit(const std::vector<std::vector<std::string>>& returned,
              const std::vector<std::vector<std::string>>& gold_paths) {
  for (const auto& g : gold_paths) {
    for (const auto& p : returned) {
      if (contains_contiguous(p, g)) return true;
    }
  }
  return false;
}

}  // namespace inquiry
