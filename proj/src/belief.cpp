#include "inquiry/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace inquiry {
namespace {

constexpr double kLogUnderflow = -700.0;

std::vector<double> normalize_log_mass(const std::vector<double>& log_mass) {
  const double max_log = *std::max_element(log_mass.begin(), log_mass.end());
  if (!(max_log >= kLogUnderflow)) {
    throw Error(ErrorCode::DegenerateBelief,
                "posterior mass underflowed; likelihood table is inconsistent with the evidence");
  }
  std::vector<double> p(log_mass.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::isinf(log_mass[i]) ? 0.0 : std::exp(log_mass[i] - max_log);
    total += p[i];
  }
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace

Belief Belief::from_hypotheses(const std::vector<Hypothesis>& hs) {
  Belief b;
  double total = 0.0;
  for (const auto& h : hs) total += h.prior;
  if (hs.empty() || !(total > 0.0)) {
    throw Error(ErrorCode::PackInvalid, "hypothesis set is empty or has zero prior mass");
  }
  for (const auto& h : hs) {
    b.ids.push_back(h.hypothesis_id);
    b.probs.push_back(h.prior / total);
  }
  return b;
}

Belief Belief::uniform(std::vector<std::string> ids) {
  Belief b;
  b.probs.assign(ids.size(), ids.empty() ? 0.0 : 1.0 / static_cast<double>(ids.size()));
  b.ids = std::move(ids);
  return b;
}

LikelihoodModel::LikelihoodModel(double default_likelihood) : default_(default_likelihood) {
  if (!(default_likelihood > 0.0 && default_likelihood <= 1.0)) {
    throw Error(ErrorCode::PackInvalid, "default likelihood must lie in (0,1]");
  }
}

void LikelihoodModel::set(const std::string& hypothesis, const std::string& slot,
                          const std::string& value, std::optional<StateLabel> state,
                          double likelihood) {
  if (!(likelihood > 0.0 && likelihood <= 1.0)) {
    throw Error(ErrorCode::PackInvalid, "likelihood for " + hypothesis + "/" + slot + "=" +
                                            value + " must lie in (0,1]");
  }
  const int s = state ? static_cast<int>(*state) : kAnyState;
  table_[{hypothesis, slot, value, s}] = likelihood;
  ++modeled_[{slot, value}];
}

double LikelihoodModel::lookup(const std::string& hypothesis, const std::string& slot,
                               const std::string& value, StateLabel state) const {
  if (auto it = table_.find({hypothesis, slot, value, static_cast<int>(state)});
      it != table_.end()) {
    return it->second;
  }
  if (auto it = table_.find({hypothesis, slot, value, kAnyState}); it != table_.end()) {
    return it->second;
  }
  return default_;
}

bool LikelihoodModel::models(const std::string& slot, const std::string& value) const {
  return modeled_.count({slot, value}) > 0;
}

void OutcomeModel::set(const std::string& action_key, std::vector<Outcome> outcomes) {
  models_[action_key] = std::move(outcomes);
}

const std::vector<Outcome>* OutcomeModel::find(const std::string& action_key) const {
  auto it = models_.find(action_key);
  return it == models_.end() ? nullptr : &it->second;
}

std::string outcome_key(const ActionCandidate& a) {
  std::string key(to_string(a.verb));
  if (a.target_slot) key += ":" + *a.target_slot;
  return key;
}

const std::vector<Outcome>* OutcomeModel::find_for(const ActionCandidate& a) const {
  if (const auto* exact = find(outcome_key(a))) return exact;
  if (a.target_slot) {
    if (const auto* any_verb = find("*:" + *a.target_slot)) return any_verb;
  }
  return nullptr;
}

Belief update_belief(const Belief& b, const std::vector<StatefulEvent>& events,
                     const LikelihoodModel& lm, const StateWeightConfig& weights) {
  std::vector<double> log_mass(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    log_mass[i] = b.probs[i] > 0.0 ? std::log(b.probs[i])
                                   : -std::numeric_limits<double>::infinity();
  }
  bool touched = false;
  for (const auto& e : events) {
    const double w = state_weight(e.state, weights);
    if (w <= 0.0 || !lm.models(e.field_id, e.value)) continue;
    touched = true;
    for (std::size_t i = 0; i < b.size(); ++i) {
      log_mass[i] += w * std::log(lm.lookup(b.ids[i], e.field_id, e.value, e.state));
    }
  }
  Belief out = b;
  if (touched) out.probs = normalize_log_mass(log_mass);
  return out;
}

double entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double expected_information_gain(const Belief& b, const std::vector<Outcome>& outcomes) {
  const double prior_h = entropy(b.probs);
  double expected_posterior_h = 0.0;
  std::vector<double> joint(b.size());
  for (const auto& o : outcomes) {
    double p_o = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      auto it = o.likelihood.find(b.ids[i]);
      const double lik = it == o.likelihood.end() ? 0.0 : it->second;
      joint[i] = b.probs[i] * lik;
      p_o += joint[i];
    }
    if (p_o <= 0.0) continue;
    for (auto& x : joint) x /= p_o;
    expected_posterior_h += p_o * entropy(joint);
  }
  return prior_h - expected_posterior_h;
}

double expected_information_gain(const Belief& b, const ActionCandidate& action,
                                 const OutcomeModel& om) {
  const auto* outcomes = om.find_for(action);
  if (!outcomes) {
    throw Error(ErrorCode::MissingOutcomeModel,
                "no outcome model for action " + outcome_key(action));
  }
  return expected_information_gain(b, *outcomes);
}

}  // namespace inquiry
