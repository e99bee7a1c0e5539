#pragma once
// Discrete belief over candidate hypotheses: tempered Bayes updates,
// entropy, and exact expected information gain. All logs are natural.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "inquiry/core.hpp"

namespace inquiry {

struct Hypothesis {
  std::string hypothesis_id;
  std::string label;
  double prior = 0.0;
};

struct Belief {
  std::vector<std::string> ids;
  std::vector<double> probs;
  std::vector<std::pair<int, double>> history;  // (turn_index, entropy)

  static Belief from_hypotheses(const std::vector<Hypothesis>& hs);
  static Belief uniform(std::vector<std::string> ids);
  std::size_t size() const { return ids.size(); }
  bool operator==(const Belief&) const = default;
};

// Keyed by (hypothesis, slot, value, state); state "*" matches any label.
class LikelihoodModel {
 public:
  explicit LikelihoodModel(double default_likelihood = 1.0);

  void set(const std::string& hypothesis, const std::string& slot, const std::string& value,
           std::optional<StateLabel> state, double likelihood);
  // Exact state first, then the wildcard entry, then default_likelihood.
  double lookup(const std::string& hypothesis, const std::string& slot,
                const std::string& value, StateLabel state) const;
  bool models(const std::string& slot, const std::string& value) const;
  double default_likelihood() const { return default_; }

 private:
  using Key = std::tuple<std::string, std::string, std::string, int>;
  static constexpr int kAnyState = -1;
  std::map<Key, double> table_;
  std::map<std::pair<std::string, std::string>, int> modeled_;
  double default_;
};

struct Outcome {
  std::string outcome_id;
  std::map<std::string, double> likelihood;  // hypothesis -> p(outcome | h)
};

// Outcome distributions per action key ("verb:slot", or "*:slot").
class OutcomeModel {
 public:
  void set(const std::string& action_key, std::vector<Outcome> outcomes);
  const std::vector<Outcome>* find(const std::string& action_key) const;
  const std::vector<Outcome>* find_for(const ActionCandidate& a) const;
  const std::map<std::string, std::vector<Outcome>>& entries() const { return models_; }

 private:
  std::map<std::string, std::vector<Outcome>> models_;
};

std::string outcome_key(const ActionCandidate& a);

Belief update_belief(const Belief& b, const std::vector<StatefulEvent>& events,
                     const LikelihoodModel& lm, const StateWeightConfig& weights = {});

double entropy(const std::vector<double>& probs);
inline double entropy(const Belief& b) { return entropy(b.probs); }

// Enumerates outcomes exactly. Throws MissingOutcomeModel when the action
// has no entry.
double expected_information_gain(const Belief& b, const ActionCandidate& action,
                                 const OutcomeModel& om);
double expected_information_gain(const Belief& b, const std::vector<Outcome>& outcomes);

}  // namespace inquiry
