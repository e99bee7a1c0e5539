#pragma once
// Objectified knowledge base and hybrid retrieval:
// coarse cosine -> object-level rerank -> path reasoning -> linear fusion.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "inquiry/belief.hpp"
#include "inquiry/core.hpp"
#include "inquiry/state_engine.hpp"

namespace inquiry {

enum class ObjectKind { symptom_unit, diagnosis_unit, exam_unit, risk_rule_unit, case_summary };
std::string_view to_string(ObjectKind k);
ObjectKind parse_object_kind(std::string_view text);

struct EmbeddingConfig {
  int dimension = 256;
  std::uint64_t seed = 0x5EED5EEDULL;
};

// Lowercased ASCII alphanumeric runs; '_' and punctuation split tokens.
std::vector<std::string> tokenize(std::string_view text);

// Signed feature hashing followed by L2 normalization. Throws EmptyInput
// on an empty bag.
std::vector<double> embed(const std::vector<std::string>& bag, const EmbeddingConfig& cfg);
std::size_t hash_index(std::string_view token, const EmbeddingConfig& cfg);
double hash_sign(std::string_view token, const EmbeddingConfig& cfg);

// Throws ZeroVector if either input has zero norm.
double cosine(const std::vector<double>& q, const std::vector<double>& e);

struct KnowledgeObject {
  std::string object_id;
  ObjectKind kind = ObjectKind::symptom_unit;
  std::string text;
  std::map<std::string, std::string> fields;     // slot -> value ("*" matches any)
  std::vector<std::string> addresses;            // slots this object can resolve
  std::vector<std::string> discharges;           // risk rule ids
  std::map<std::string, StateLabel> requires_states;  // slot -> minimum evidence state
  std::optional<std::string> precondition;
  std::vector<double> embedding;
};

// Index weights in order: field, structural, graph, goal distance, risk,
// path, state compatibility.
struct RerankWeights {
  std::array<double, 7> alpha{0.20, 0.10, 0.10, 0.20, 0.20, 0.10, 0.10};
  RerankWeights normalized() const;
};

struct FusionWeights {
  double vector = 0.3;
  double object = 0.4;
  double path = 0.3;
  FusionWeights normalized() const;
};

struct KbManifest {
  EmbeddingConfig embedding;
  RerankWeights alpha;
  FusionWeights beta;
  double rho = 0.25;
};

// Immutable after construction; safe to share across sessions.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  KnowledgeBase(std::vector<KnowledgeObject> objects, std::vector<KnowledgeEdge> edges,
                KbManifest manifest);

  const std::vector<KnowledgeObject>& objects() const { return objects_; }
  const std::vector<KnowledgeEdge>& edges() const { return edges_; }
  const KbManifest& manifest() const { return manifest_; }
  const KnowledgeObject* find(const std::string& id) const;
  std::size_t index_of(const std::string& id) const;
  // Outgoing edges of a node, sorted by destination id.
  const std::vector<std::size_t>& out_edges(std::size_t node) const { return out_[node]; }
  const std::vector<std::size_t>& neighbors(std::size_t node) const { return undirected_[node]; }
  bool empty() const { return objects_.empty(); }
  std::size_t size() const { return objects_.size(); }

 private:
  std::vector<KnowledgeObject> objects_;
  std::vector<KnowledgeEdge> edges_;
  KbManifest manifest_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> undirected_;
};

struct ScoredObject {
  std::string object_id;
  double score = 0.0;
};

// Exact top-k by cosine; ties by object id ascending.
std::vector<ScoredObject> coarse_retrieve(const std::vector<std::string>& query_bag,
                                          const KnowledgeBase& kb, std::size_t k);

struct SubScores {
  double field = 0.0;
  double structural = 0.0;
  double graph = 0.0;
  double goal_distance = 0.0;
  double risk = 0.0;
  double path = 0.0;
  double state = 0.0;

  std::array<double, 7> as_array() const {
    return {field, structural, graph, goal_distance, risk, path, state};
  }
};

double rerank_score(const SubScores& s, const RerankWeights& w);

// Everything the seven sub-scores need, precomputed once per query.
class RerankContext {
 public:
  RerankContext(const CurrentState& cur, const GoalState& goal, const KnowledgeBase& kb,
                const std::vector<ReasoningPath>& paths, double w_min);
  SubScores score(const KnowledgeObject& obj) const;
  const std::vector<std::size_t>& anchors() const { return anchors_; }

 private:
  const CurrentState& cur_;
  const KnowledgeBase& kb_;
  std::vector<std::size_t> anchors_;
  std::vector<int> hops_;  // -1 when unreachable from any anchor
  std::vector<std::string> unmet_;
  std::vector<std::string> open_rules_;
  std::map<std::string, double> best_path_through_;
};

double rerank_score(const CurrentState& cur, const GoalState& goal, const KnowledgeBase& kb,
                    const KnowledgeObject& obj, const RerankWeights& w,
                    const std::vector<ReasoningPath>& paths = {}, double w_min = 0.7);

// Linear fusion of the three stage scores; beta is used as given.
double fuse(double vector_score, double object_score, double path_score,
            const FusionWeights& beta);

// Sum of edge costs plus rho * L.
double path_cost(const ReasoningPath& path, double rho);
// Min-max normalized, higher is better; all 1.0 when costs coincide.
std::vector<double> path_scores(const std::vector<ReasoningPath>& paths, double rho);

// All simple directed paths of length 1..max_len from any src to any dst,
// ordered lexicographically by node-id sequence.
std::vector<ReasoningPath> enumerate_paths(const KnowledgeBase& kb,
                                           const std::vector<std::string>& src,
                                           const std::vector<std::string>& dst,
                                           std::size_t max_len = 4);

enum class RetrievalMode { hybrid, chunk };

struct RetrievalConfig {
  RetrievalMode mode = RetrievalMode::hybrid;
  std::size_t k_coarse = 50;
  std::size_t k_rerank = 20;
  std::size_t k_paths = 5;  // ranked objects whose paths are returned
  std::size_t paths_per_object = 3;
  std::size_t max_path_len = 4;
  double rho = 0.25;
  double w_min = 0.7;
  RerankWeights alpha;
  FusionWeights beta;

  static RetrievalConfig from_manifest(const KbManifest& m);
};

struct RankedObject {
  std::string object_id;
  double vector_score = 0.0;
  double object_score = 0.0;
  double path_score = 0.0;
  double fused_score = 0.0;
  SubScores sub;
};

struct RetrievalResult {
  std::vector<RankedObject> ranked;
  std::vector<ReasoningPath> paths;

  std::vector<std::string> top_ids(std::size_t k) const;
};

std::vector<std::string> query_bag(const CurrentState& cur, const GoalState& goal, double w_min);

RetrievalResult retrieve(const CurrentState& cur, const GoalState& goal, const Belief& belief,
                         const KnowledgeBase& kb, const RetrievalConfig& cfg);

}  // namespace inquiry
