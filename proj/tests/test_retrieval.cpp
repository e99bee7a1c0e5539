#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "inquiry/retrieval.hpp"
#include "support.hpp"

using namespace inquiry;
using testsupport::ev;

namespace {

KnowledgeObject obj(std::string id, std::string text) {
  KnowledgeObject o;
  o.object_id = std::move(id);
  o.text = std::move(text);
  return o;
}

KnowledgeBase diamond() {
  return KnowledgeBase({obj("a", "alpha"), obj("b", "beta"), obj("c", "gamma"), obj("d", "delta")},
                       {{"a", "b", "r", 1.0}, {"a", "c", "r", 2.0}, {"b", "d", "r", 1.0},
                        {"c", "d", "r", 0.5}},
                       KbManifest{});
}

ReasoningPath path_with_costs(std::vector<double> costs) {
  ReasoningPath p;
  p.nodes.push_back("n0");
  for (std::size_t i = 0; i < costs.size(); ++i) {
    p.nodes.push_back("n" + std::to_string(i + 1));
    p.edges.push_back({p.nodes[i], p.nodes[i + 1], "r", costs[i]});
  }
  return p;
}

}  // namespace

TEST(Tokenize, LowercasesAndSplits) {
  EXPECT_EQ(tokenize("ST-depression, left_arm 3d"),
            (std::vector<std::string>{"st", "depression", "left", "arm", "3d"}));
  EXPECT_TRUE(tokenize("  ,. ").empty());
}

TEST(Embed, UnitNormAndDeterministic) {
  EmbeddingConfig cfg;
  const auto v = embed({"chest", "pain", "chest"}, cfg);
  ASSERT_EQ(v.size(), 256u);
  double n = 0.0;
  for (double x : v) n += x * x;
  EXPECT_NEAR(n, 1.0, 1e-12);
  EXPECT_EQ(v, embed({"chest", "pain", "chest"}, cfg));
  // The same bag in any order embeds identically.
  EXPECT_EQ(v, embed({"pain", "chest", "chest"}, cfg));
  EXPECT_NEAR(cosine(v, v), 1.0, 1e-12);
  try {
    embed({}, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
}

TEST(Cosine, ExamplesAndZeroVector) {
  EXPECT_NEAR(cosine({1, 0}, {0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(cosine({1, 1}, {2, 2}), 1.0, 1e-15);
  EXPECT_NEAR(cosine({1, 0}, {-3, 0}), -1.0, 1e-15);
  EXPECT_NEAR(cosine({3, 4}, {4, 3}), 24.0 / 25.0, 1e-15);
  try {
    cosine({0, 0}, {1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroVector);
  }
}

TEST(Coarse, MatchesBruteForceOnRandomCorpora) {
  std::mt19937_64 rng(31337);
  const std::vector<std::string> vocab{"chest", "pain", "ecg", "fever", "cough", "left",
                                       "arm",   "troponin", "stool", "blood", "nausea", "rest"};
  auto phrase = [&](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += vocab[rng() % vocab.size()] + " ";
    return s;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 5 + rng() % 30;
    std::vector<KnowledgeObject> objects;
    for (std::size_t i = 0; i < n; ++i) {
      objects.push_back(obj("o" + std::to_string(i), phrase(1 + rng() % 5)));
    }
    const KnowledgeBase kb(objects, {}, KbManifest{});
    const auto bag = tokenize(phrase(1 + rng() % 4));
    const std::size_t k = 1 + rng() % 10;
    const auto got = coarse_retrieve(bag, kb, k);

    const auto q = embed(bag, kb.manifest().embedding);
    std::vector<std::pair<double, std::string>> brute;
    for (const auto& o : kb.objects()) {
      double dot = 0.0;
      for (std::size_t d = 0; d < q.size(); ++d) dot += q[d] * o.embedding[d];
      brute.emplace_back(dot, o.object_id);
    }
    std::sort(brute.begin(), brute.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    ASSERT_EQ(got.size(), std::min(k, n));
    for (std::size_t i = 0; i < got.size(); ++i) {
      ASSERT_NEAR(got[i].score, brute[i].first, 1e-12);
      // Ids may only differ where scores tie within rounding.
      if (got[i].object_id != brute[i].second) {
        ASSERT_NEAR(got[i].score, brute[i].first, 1e-12);
        const auto it = std::find_if(brute.begin(), brute.end(),
                                     [&](const auto& b) { return b.second == got[i].object_id; });
        ASSERT_NEAR(it->first, got[i].score, 1e-12);
      }
    }
  }
}

TEST(Rerank, ScoreIsTheWeightedSum) {
  SubScores s{1.0, 0.5, 0.0, 0.25, 1.0, 0.0, 1.0};
  const RerankWeights w;
  EXPECT_NEAR(rerank_score(s, w), 0.2 + 0.05 + 0.0 + 0.05 + 0.2 + 0.0 + 0.1, 1e-15);
}

TEST(Rerank, MonotoneInEverySubScore) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    RerankWeights w;
    for (auto& a : w.alpha) a = u(rng);
    w = w.normalized();
    SubScores s{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const double base = rerank_score(s, w);
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 1.0 + 1e-12);
    auto arr = s.as_array();
    const std::size_t i = rng() % 7;
    arr[i] = std::min(1.0, arr[i] + u(rng));
    SubScores up{arr[0], arr[1], arr[2], arr[3], arr[4], arr[5], arr[6]};
    EXPECT_GE(rerank_score(up, w), base - 1e-15);

    FusionWeights beta{u(rng), u(rng), u(rng)};
    const double v = u(rng), o = u(rng), p = u(rng);
    const double f = fuse(v, o, p, beta);
    EXPECT_GE(fuse(v + 0.1, o, p, beta), f);
    EXPECT_GE(fuse(v, o + 0.1, p, beta), f);
    EXPECT_GE(fuse(v, o, p + 0.1, beta), f);
  }
}

TEST(Fuse, ProjectionsRecoverSingleStages) {
  EXPECT_DOUBLE_EQ(fuse(0.7, 0.2, 0.9, {1.0, 0.0, 0.0}), 0.7);
  EXPECT_DOUBLE_EQ(fuse(0.7, 0.2, 0.9, {0.0, 1.0, 0.0}), 0.2);
  EXPECT_DOUBLE_EQ(fuse(0.7, 0.2, 0.9, {0.0, 0.0, 1.0}), 0.9);
  EXPECT_NEAR(fuse(1.0, 1.0, 1.0, FusionWeights{}), 1.0, 1e-15);
  const auto n = FusionWeights{2.0, 2.0, 4.0}.normalized();
  EXPECT_DOUBLE_EQ(n.path, 0.5);
  EXPECT_THROW((FusionWeights{0.0, 0.0, 0.0}.normalized()), Error);
}

TEST(Paths, CostAndScores) {
  EXPECT_DOUBLE_EQ(path_cost(path_with_costs({1.0, 1.5}), 0.25), 3.0);
  EXPECT_DOUBLE_EQ(path_cost(path_with_costs({1.0, 1.0, 1.25}), 0.25), 4.0);
  // Costs 3, 4, 5 normalize to 1, 0.5, 0.
  const auto s = path_scores({path_with_costs({2.75}), path_with_costs({3.25, 0.25}),
                              path_with_costs({4.25, 0.25})},
                             0.25);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_DOUBLE_EQ(s[1], 0.5);
  EXPECT_DOUBLE_EQ(s[2], 0.0);
  EXPECT_EQ(path_scores({path_with_costs({1.0}), path_with_costs({1.0})}, 0.25),
            (std::vector<double>{1.0, 1.0}));
  EXPECT_TRUE(path_scores({}, 0.25).empty());
}

TEST(Paths, DiamondEnumeratesBothBranches) {
  const auto kb = diamond();
  const auto paths = enumerate_paths(kb, {"a"}, {"d"}, 4);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].nodes, (std::vector<std::string>{"a", "b", "d"}));
  EXPECT_EQ(paths[1].nodes, (std::vector<std::string>{"a", "c", "d"}));
  EXPECT_DOUBLE_EQ(path_cost(paths[0], 0.25), 2.5);
  EXPECT_DOUBLE_EQ(path_cost(paths[1], 0.25), 3.0);
  EXPECT_TRUE(enumerate_paths(kb, {"a"}, {"d"}, 1).empty());
  EXPECT_EQ(enumerate_paths(kb, {"a"}, {"b", "d"}, 4).size(), 3u);
  EXPECT_TRUE(enumerate_paths(kb, {"d"}, {"a"}, 4).empty());
  for (const auto& p : paths) {
    ASSERT_EQ(p.nodes.size(), p.edges.size() + 1);
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
      EXPECT_EQ(p.edges[i].src, p.nodes[i]);
      EXPECT_EQ(p.edges[i].dst, p.nodes[i + 1]);
    }
  }
}

TEST(Paths, CyclesAreNotRevisited) {
  const KnowledgeBase kb({obj("a", "x"), obj("b", "y")},
                         {{"a", "b", "r", 1.0}, {"b", "a", "r", 1.0}}, KbManifest{});
  const auto paths = enumerate_paths(kb, {"a"}, {"a", "b"}, 4);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].nodes, (std::vector<std::string>{"a", "b"}));
}

TEST(KnowledgeBase, RejectsBrokenGraphs) {
  EXPECT_THROW(KnowledgeBase({obj("a", "x"), obj("a", "y")}, {}, KbManifest{}), Error);
  EXPECT_THROW(KnowledgeBase({obj("a", "x")}, {{"a", "z", "r", 1.0}}, KbManifest{}), Error);
  EXPECT_THROW(KnowledgeBase({obj("a", "x"), obj("b", "y")}, {{"a", "b", "r", 0.0}}, KbManifest{}),
               Error);
}

TEST(Retrieve, HybridOnBundledKbIsDeterministicAndBounded) {
  const auto& pack = testsupport::bundled_pack();
  const auto& kb = testsupport::bundled_kb();
  const auto goal = pack.goal_for(pack.scenarios.front());
  const auto cur = apply_events({}, {ev("chest_pain", "present", StateLabel::observed_result, "a"),
                                     ev("exertional_worsening", "present",
                                        StateLabel::observed_result, "b")},
                                0);
  auto cfg = RetrievalConfig::from_manifest(kb.manifest());
  const auto belief = Belief::uniform({"h"});
  const auto one = retrieve(cur, goal, belief, kb, cfg);
  const auto two = retrieve(cur, goal, belief, kb, cfg);
  ASSERT_FALSE(one.ranked.empty());
  EXPECT_LE(one.ranked.size(), cfg.k_rerank);
  EXPECT_EQ(one.top_ids(20), two.top_ids(20));
  for (std::size_t i = 1; i < one.ranked.size(); ++i) {
    EXPECT_GE(one.ranked[i - 1].fused_score, one.ranked[i].fused_score);
  }
  for (const auto& r : one.ranked) {
    EXPECT_NEAR(r.fused_score, fuse(r.vector_score, r.object_score, r.path_score,
                                    cfg.beta.normalized()),
                1e-12);
  }

  cfg.mode = RetrievalMode::chunk;
  const auto chunk = retrieve(cur, goal, belief, kb, cfg);
  EXPECT_TRUE(chunk.paths.empty());
  for (std::size_t i = 1; i < chunk.ranked.size(); ++i) {
    EXPECT_GE(chunk.ranked[i - 1].vector_score, chunk.ranked[i].vector_score);
  }
}
