#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "inquiry/belief.hpp"
#include "support.hpp"

using namespace inquiry;
using testsupport::ev;

namespace {

// Mutual information computed the other way round:
// sum_h sum_o p(h) p(o|h) log(p(o|h) / p(o)).
double mi_oracle(const std::vector<double>& prior, const std::vector<std::vector<double>>& lik) {
  const std::size_t n_out = lik.empty() ? 0 : lik[0].size();
  std::vector<double> p_o(n_out, 0.0);
  for (std::size_t h = 0; h < prior.size(); ++h) {
    for (std::size_t o = 0; o < n_out; ++o) p_o[o] += prior[h] * lik[h][o];
  }
  double mi = 0.0;
  for (std::size_t h = 0; h < prior.size(); ++h) {
    for (std::size_t o = 0; o < n_out; ++o) {
      const double j = prior[h] * lik[h][o];
      if (j > 0.0) mi += j * std::log(lik[h][o] / p_o[o]);
    }
  }
  return mi;
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n, bool allow_zero) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = (allow_zero && u(rng) < 0.15) ? 0.0 : u(rng) + 1e-3;
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (s == 0.0) v[0] = 1.0;
  for (auto& x : v) x /= (s == 0.0 ? 1.0 : s);
  return v;
}

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("h" + std::to_string(i));
  return out;
}

}  // namespace

TEST(Entropy, KnownValues) {
  EXPECT_DOUBLE_EQ(entropy(std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_NEAR(entropy(std::vector<double>{0.5, 0.5}), std::log(2.0), 1e-15);
  EXPECT_NEAR(entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}), std::log(4.0), 1e-15);
  EXPECT_NEAR(entropy(std::vector<double>{0.9, 0.1}), 0.325082973391448, 1e-12);
}

TEST(Entropy, BoundedByLogN) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng() % 8;
    const auto p = random_simplex(rng, n, true);
    const double h = entropy(p);
    EXPECT_GE(h, -1e-15);
    EXPECT_LE(h, std::log(static_cast<double>(n)) + 1e-12);
  }
}

TEST(Eig, BinaryExample) {
  // Uniform prior, symmetric 0.9/0.1 channel: ln2 - H(0.9, 0.1).
  const auto b = Belief::uniform({"h0", "h1"});
  const std::vector<Outcome> outcomes{{"yes", {{"h0", 0.9}, {"h1", 0.1}}},
                                      {"no", {{"h0", 0.1}, {"h1", 0.9}}}};
  EXPECT_NEAR(expected_information_gain(b, outcomes), 0.368064, 1e-6);
  EXPECT_NEAR(expected_information_gain(b, outcomes), mi_oracle({0.5, 0.5}, {{0.9, 0.1}, {0.1, 0.9}}),
              1e-12);
}

TEST(Eig, ThroughOutcomeModelLookup) {
  OutcomeModel om;
  om.set("ask:onset", {{"sudden", {{"h0", 1.0}, {"h1", 0.0}}},
                       {"gradual", {{"h0", 0.0}, {"h1", 1.0}}}});
  om.set("*:radiation", {{"x", {{"h0", 0.5}, {"h1", 0.5}}}, {"y", {{"h0", 0.5}, {"h1", 0.5}}}});
  const auto b = Belief::uniform({"h0", "h1"});
  ActionCandidate a;
  a.verb = Verb::ask;
  a.target_slot = "onset";
  EXPECT_NEAR(expected_information_gain(b, a, om), std::log(2.0), 1e-15);
  a.verb = Verb::verify;
  a.target_slot = "radiation";
  EXPECT_NEAR(expected_information_gain(b, a, om), 0.0, 1e-15);
  a.target_slot = "ecg";
  try {
    expected_information_gain(b, a, om);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingOutcomeModel);
  }
}

TEST(Eig, NonNegativeAndMatchesOracleOnRandomModels) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t nh = 2 + rng() % 5;
    const std::size_t no = 2 + rng() % 4;
    const auto prior = random_simplex(rng, nh, trial % 3 == 0);
    std::vector<std::vector<double>> lik(nh);
    for (auto& row : lik) row = random_simplex(rng, no, trial % 2 == 0);
    Belief b;
    b.ids = ids(nh);
    b.probs = prior;
    std::vector<Outcome> outcomes(no);
    for (std::size_t o = 0; o < no; ++o) {
      outcomes[o].outcome_id = "o" + std::to_string(o);
      for (std::size_t h = 0; h < nh; ++h) outcomes[o].likelihood[b.ids[h]] = lik[h][o];
    }
    const double eig = expected_information_gain(b, outcomes);
    EXPECT_GE(eig, -1e-12);
    EXPECT_LE(eig, entropy(prior) + 1e-12);
    EXPECT_NEAR(eig, mi_oracle(prior, lik), 1e-10);
  }
}

TEST(Eig, DegenerateBeliefHasZeroGain) {
  Belief b;
  b.ids = {"h0", "h1", "h2"};
  b.probs = {0.0, 1.0, 0.0};
  const std::vector<Outcome> outcomes{{"a", {{"h0", 0.3}, {"h1", 0.6}, {"h2", 0.9}}},
                                      {"b", {{"h0", 0.7}, {"h1", 0.4}, {"h2", 0.1}}}};
  EXPECT_NEAR(expected_information_gain(b, outcomes), 0.0, 1e-15);
}

TEST(Update, TemperedByStateWeight) {
  LikelihoodModel lm;
  lm.set("h0", "ecg", "st_depression", std::nullopt, 0.9);
  lm.set("h1", "ecg", "st_depression", std::nullopt, 0.1);
  const auto b = Belief::uniform({"h0", "h1"});

  // unconfirmed carries weight 0.2: posterior is proportional to 0.9^0.2 : 0.1^0.2.
  const auto weak = update_belief(
      b, {ev("ecg", "st_depression", StateLabel::unconfirmed, "t0e0")}, lm);
  const double a0 = std::pow(0.9, 0.2);
  const double a1 = std::pow(0.1, 0.2);
  EXPECT_NEAR(weak.probs[0], a0 / (a0 + a1), 1e-12);
  EXPECT_NEAR(weak.probs[1], a1 / (a0 + a1), 1e-12);

  const auto strong = update_belief(
      b, {ev("ecg", "st_depression", StateLabel::observed_result, "t0e0")}, lm);
  EXPECT_NEAR(strong.probs[0], 0.9, 1e-12);

  // Zero-weight labels leave the belief unchanged.
  for (auto s : {StateLabel::unknown, StateLabel::negated, StateLabel::not_done}) {
    EXPECT_EQ(update_belief(b, {ev("ecg", "st_depression", s, "t0e0")}, lm).probs, b.probs);
  }
  // Unmodelled (slot, value) pairs leave it unchanged too.
  EXPECT_EQ(update_belief(b, {ev("ecg", "normal", StateLabel::verified, "t0e0")}, lm).probs,
            b.probs);
}

TEST(Update, ExactStateBeatsWildcard) {
  LikelihoodModel lm(0.5);
  lm.set("h0", "cough", "dry", std::nullopt, 0.8);
  lm.set("h0", "cough", "dry", StateLabel::historical_result, 0.3);
  EXPECT_EQ(lm.lookup("h0", "cough", "dry", StateLabel::historical_result), 0.3);
  EXPECT_EQ(lm.lookup("h0", "cough", "dry", StateLabel::confirmed), 0.8);
  EXPECT_EQ(lm.lookup("h1", "cough", "dry", StateLabel::confirmed), 0.5);
  EXPECT_THROW(lm.set("h0", "cough", "dry", std::nullopt, 0.0), Error);
  EXPECT_THROW(LikelihoodModel(1.5), Error);
}

TEST(Update, StaysNormalizedOverLongSequences) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> slots{"a", "b", "c", "d"};
  const std::vector<std::string> values{"x", "y"};
  const auto hs = ids(5);
  LikelihoodModel lm;
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (const auto& h : hs)
    for (const auto& s : slots)
      for (const auto& v : values) lm.set(h, s, v, std::nullopt, u(rng));

  auto b = Belief::uniform(hs);
  for (int i = 0; i < 10000; ++i) {
    const auto& s = slots[rng() % slots.size()];
    const auto& v = values[rng() % values.size()];
    b = update_belief(b, {ev(s, v, testsupport::random_state_label(rng), "t" + std::to_string(i))},
                      lm);
    const double total = std::accumulate(b.probs.begin(), b.probs.end(), 0.0);
    ASSERT_NEAR(total, 1.0, 1e-12) << "step " << i;
    for (double p : b.probs) ASSERT_GE(p, 0.0);
  }
}

TEST(Update, EventOrderDoesNotMatter) {
  std::mt19937_64 rng(99);
  const auto hs = ids(4);
  LikelihoodModel lm;
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const std::vector<std::string> slots{"a", "b", "c"};
  for (const auto& h : hs)
    for (const auto& s : slots) lm.set(h, s, "v", std::nullopt, u(rng));
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<StatefulEvent> events;
    for (int i = 0; i < 6; ++i) {
      events.push_back(ev(slots[rng() % 3], "v", testsupport::random_state_label(rng),
                          "e" + std::to_string(i)));
    }
    const auto b = Belief::uniform(hs);
    const auto one = update_belief(b, events, lm);
    std::shuffle(events.begin(), events.end(), rng);
    const auto two = update_belief(b, events, lm);
    for (std::size_t i = 0; i < hs.size(); ++i) EXPECT_NEAR(one.probs[i], two.probs[i], 1e-12);
  }
}

TEST(Update, UnderflowIsReported) {
  LikelihoodModel lm;
  lm.set("h0", "a", "v", std::nullopt, 1e-300);
  lm.set("h1", "a", "v", std::nullopt, 1e-300);
  auto b = Belief::uniform({"h0", "h1"});
  std::vector<StatefulEvent> events;
  for (int i = 0; i < 5; ++i) events.push_back(ev("a", "v", StateLabel::verified, "e" + std::to_string(i)));
  try {
    update_belief(b, events, lm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateBelief);
  }
}

TEST(Belief, PriorsNormalize) {
  const auto b = Belief::from_hypotheses({{"h0", "A", 2.0}, {"h1", "B", 6.0}});
  EXPECT_DOUBLE_EQ(b.probs[0], 0.25);
  EXPECT_DOUBLE_EQ(b.probs[1], 0.75);
  EXPECT_THROW(Belief::from_hypotheses({}), Error);
}
