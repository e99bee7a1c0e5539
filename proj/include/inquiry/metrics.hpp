#pragma once
// Pilot metrics: audit-item matching, the five dialogue indicators, and the
// ranked-retrieval measures. Everything here is read-only over traces.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inquiry/pack.hpp"
#include "inquiry/planner.hpp"

namespace inquiry {

// Lowercase, collapse whitespace, and rewrite "<number> <unit>" through the
// alias table ("3 days" -> "3d" given days->d).
std::string canonical_value(std::string_view value,
                            const std::map<std::string, std::string>& unit_aliases);

// Gold status -> accepted system statuses.
bool status_compatible(StateLabel gold, StateLabel system);

bool item_matches(const GoldItem& gold, const std::string& slot, const std::string& value,
                  StateLabel status, Assertion assertion,
                  const std::map<std::string, std::string>& unit_aliases);

// Raw numerators and denominators for one session.
struct CaseCounts {
  std::string scenario_id;
  std::size_t covered = 0;
  std::size_t gold_items = 0;
  std::size_t risk_surfaced = 0;
  std::size_t risk_items = 0;
  std::size_t structural_filled = 0;
  std::size_t structural_slots = 0;
  std::size_t redundant_actions = 0;
  std::size_t actions = 0;
  std::optional<int> t_goal;  // 1-based turn count; unset when never reached
};

bool item_covered(const GoldItem& item, const SessionResult& session,
                  const std::map<std::string, std::string>& unit_aliases);
bool item_in_record(const GoldItem& item, const EMRecord& record,
                    const std::map<std::string, std::string>& unit_aliases);

// Each throws EmptyGold when its denominator is zero.
double coverage(const GoldAudit& gold, const SessionResult& session,
                const std::map<std::string, std::string>& unit_aliases = {});
double risk_recall(const GoldAudit& gold, const SessionResult& session,
                   const std::map<std::string, std::string>& unit_aliases = {});
double structural_completeness(const GoldAudit& gold, const EMRecord& record,
                               const std::map<std::string, std::string>& unit_aliases = {});

// Chosen actions flagged low-value: target already satisfied when proposed,
// a repeated (verb, slot), or listed in the audit's low_value set.
std::vector<bool> redundant_flags(const SessionResult& session, const GoldAudit& gold,
                                  double w_min);
// Unset (N/A) when the session proposed no actions.
std::optional<double> redundancy(const SessionResult& session, const GoldAudit& gold,
                                 double w_min);
std::optional<int> t_goal(const SessionResult& session);

CaseCounts audit_session(const SessionResult& session, const GoldAudit& gold,
                         const ScenarioPack& pack);

// num/den; EmptyGold on a zero denominator.
double ratio(std::size_t num, std::size_t den);
// Half-up rounding of ratio*100 to one decimal, exact for integer counts.
double percent_of(std::size_t num, std::size_t den);
double percent(double ratio);
// Half-up rounding to a fixed number of decimals, returned as text.
std::string format_fixed(double value, int decimals);

// Ranked retrieval measures over a query set. results[i] is the ranked id
// list for query i, relevant[i] its gold object set.
double recall_at_k(const std::vector<std::vector<std::string>>& results,
                   const std::vector<std::vector<std::string>>& relevant, std::size_t k);
double mrr_at_k(const std::vector<std::vector<std::string>>& results,
                const std::vector<std::vector<std::string>>& relevant, std::size_t k);
double ndcg_at_k(const std::vector<std::vector<std::string>>& results,
                 const std::vector<std::vector<std::string>>& relevant, std::size_t k);
// Single-query forms.
bool hit_at_k(const std::vector<std::string>& ranked, const std::vector<std::string>& relevant,
              std::size_t k);
double reciprocal_rank_at_k(const std::vector<std::string>& ranked,
                            const std::vector<std::string>& relevant, std::size_t k);
double ndcg_at_k(const std::vector<std::string>& ranked, const std::vector<std::string>& relevant,
                 std::size_t k);

bool object_hit(const std::vector<std::string>& ranked, const std::string& primary,
                std::size_t k_hit = 5);
bool contains_contiguous(const std::vector<std::string>& path,
                         const std::vector<std::string>& gold);
bool path_hit(const std::vector<std::vector<std::string>>& returned,
              const std::vector<std::vector<std::string>>& gold_paths);

}  // namespace inquiry
