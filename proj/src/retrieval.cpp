#include "inquiry/retrieval.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>

#include "inquiry/hash.hpp"

namespace inquiry {
namespace {

constexpr std::array<std::pair<std::string_view, ObjectKind>, 5> kKindNames{{
    {"symptom_unit", ObjectKind::symptom_unit},
    {"diagnosis_unit", ObjectKind::diagnosis_unit},
    {"exam_unit", ObjectKind::exam_unit},
    {"risk_rule_unit", ObjectKind::risk_rule_unit},
    {"case_summary", ObjectKind::case_summary},
}};

bool by_score_then_id(double sa, const std::string& ia, double sb, const std::string& ib) {
  if (sa != sb) return sa > sb;
  return ia < ib;
}

std::vector<std::size_t> anchor_indices(const KnowledgeBase& kb, const CurrentState& cur) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kb.size(); ++i) {
    for (const auto& [slot, value] : kb.objects()[i].fields) {
      const auto* entry = cur.find(slot);
      if (entry && entry->weight >= 1.0) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(ObjectKind k) {
  for (const auto& [name, v] : kKindNames) {
    if (v == k) return name;
  }
  return "?";
}

ObjectKind parse_object_kind(std::string_view text) {
  for (const auto& [name, v] : kKindNames) {
    if (name == text) return v;
  }
  throw Error(ErrorCode::ParseError, "unknown object kind: '" + std::string(text) + "'");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::size_t hash_index(std::string_view token, const EmbeddingConfig& cfg) {
  return static_cast<std::size_t>(hash::seeded(token, cfg.seed) %
                                  static_cast<std::uint64_t>(cfg.dimension));
}

double hash_sign(std::string_view token, const EmbeddingConfig& cfg) {
  return (hash::seeded(token, cfg.seed) >> 63) ? -1.0 : 1.0;
}

std::vector<double> embed(const std::vector<std::string>& bag, const EmbeddingConfig& cfg) {
  if (bag.empty()) throw Error(ErrorCode::EmptyInput, "cannot embed an empty token bag");
  if (cfg.dimension <= 0) throw Error(ErrorCode::PackInvalid, "embedding dimension must be > 0");
  std::vector<double> v(static_cast<std::size_t>(cfg.dimension), 0.0);
  for (const auto& tok : bag) v[hash_index(tok, cfg)] += hash_sign(tok, cfg);
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  if (norm == 0.0) throw Error(ErrorCode::ZeroVector, "token bag hashes to the zero vector");
  for (auto& x : v) x /= norm;
  return v;
}

double cosine(const std::vector<double>& q, const std::vector<double>& e) {
  const double qq = std::inner_product(q.begin(), q.end(), q.begin(), 0.0);
  const double ee = std::inner_product(e.begin(), e.end(), e.begin(), 0.0);
  if (qq == 0.0 || ee == 0.0 || q.size() != e.size()) {
    throw Error(ErrorCode::ZeroVector, "cosine needs two non-zero vectors of equal dimension");
  }
  const double c = std::inner_product(q.begin(), q.end(), e.begin(), 0.0) /
                   (std::sqrt(qq) * std::sqrt(ee));
  return std::clamp(c, -1.0, 1.0);
}

RerankWeights RerankWeights::normalized() const {
  double total = 0.0;
  for (double a : alpha) {
    if (!(a >= 0.0)) throw Error(ErrorCode::PackInvalid, "rerank weights must be >= 0");
    total += a;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::PackInvalid, "rerank weights sum to zero");
  RerankWeights out = *this;
  for (auto& a : out.alpha) a /= total;
  return out;
}

FusionWeights FusionWeights::normalized() const {
  if (!(vector >= 0.0 && object >= 0.0 && path >= 0.0)) {
    throw Error(ErrorCode::PackInvalid, "fusion weights must be >= 0");
  }
  const double total = vector + object + path;
  if (!(total > 0.0)) throw Error(ErrorCode::PackInvalid, "fusion weights sum to zero");
  return {vector / total, object / total, path / total};
}

KnowledgeBase::KnowledgeBase(std::vector<KnowledgeObject> objects,
                             std::vector<KnowledgeEdge> edges, KbManifest manifest)
    : objects_(std::move(objects)), edges_(std::move(edges)), manifest_(std::move(manifest)) {
  manifest_.alpha = manifest_.alpha.normalized();
  manifest_.beta = manifest_.beta.normalized();
  std::sort(objects_.begin(), objects_.end(),
            [](const auto& a, const auto& b) { return a.object_id < b.object_id; });
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (!index_.emplace(objects_[i].object_id, i).second) {
      throw Error(ErrorCode::PackInvalid, "duplicate object id " + objects_[i].object_id);
    }
    if (objects_[i].embedding.empty()) {
      objects_[i].embedding = embed(tokenize(objects_[i].text), manifest_.embedding);
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  out_.resize(objects_.size());
  undirected_.resize(objects_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (!(e.cost > 0.0)) {
      throw Error(ErrorCode::PackInvalid, "edge " + e.src + "->" + e.dst + " has cost <= 0");
    }
    auto s = index_.find(e.src);
    auto d = index_.find(e.dst);
    if (s == index_.end() || d == index_.end()) {
      throw Error(ErrorCode::PackInvalid, "edge " + e.src + "->" + e.dst + " has unknown endpoint");
    }
    if (i > 0 && edges_[i - 1].src == e.src && edges_[i - 1].dst == e.dst) {
      throw Error(ErrorCode::PackInvalid, "duplicate edge " + e.src + "->" + e.dst);
    }
    out_[s->second].push_back(i);
    undirected_[s->second].push_back(d->second);
    undirected_[d->second].push_back(s->second);
  }
  for (auto& n : undirected_) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
}

const KnowledgeObject* KnowledgeBase::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &objects_[it->second];
}

std::size_t KnowledgeBase::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::PackInvalid, "unknown object " + id);
  return it->second;
}

std::vector<ScoredObject> coarse_retrieve(const std::vector<std::string>& query_bag,
                                          const KnowledgeBase& kb, std::size_t k) {
  if (query_bag.empty() || kb.empty() || k == 0) return {};
  std::vector<double> q;
  try {
    q = embed(query_bag, kb.manifest().embedding);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ZeroVector) return {};
    throw;
  }
  std::vector<ScoredObject> all;
  all.reserve(kb.size());
  for (const auto& obj : kb.objects()) all.push_back({obj.object_id, cosine(q, obj.embedding)});
  const auto cmp = [](const ScoredObject& a, const ScoredObject& b) {
    return by_score_then_id(a.score, a.object_id, b.score, b.object_id);
  };
  const std::size_t keep = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), cmp);
  all.resize(keep);
  return all;
}

double rerank_score(const SubScores& s, const RerankWeights& w) {
  const auto v = s.as_array();
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) total += w.alpha[i] * v[i];
  return total;
}

RerankContext::RerankContext(const CurrentState& cur, const GoalState& goal,
                             const KnowledgeBase& kb, const std::vector<ReasoningPath>& paths,
                             double w_min)
    : cur_(cur), kb_(kb), anchors_(anchor_indices(kb, cur)), hops_(kb.size(), -1),
      unmet_(unmet_mandatory(cur, goal, w_min)) {
  std::deque<std::size_t> frontier;
  for (auto a : anchors_) {
    hops_[a] = 0;
    frontier.push_back(a);
  }
  while (!frontier.empty()) {
    const auto n = frontier.front();
    frontier.pop_front();
    for (auto m : kb.neighbors(n)) {
      if (hops_[m] < 0) {
        hops_[m] = hops_[n] + 1;
        frontier.push_back(m);
      }
    }
  }
  for (const auto* rule : open_risk_rules(goal, cur)) open_rules_.push_back(rule->rule_id);
  for (const auto& p : paths) {
    for (const auto& node : p.nodes) {
      auto [it, inserted] = best_path_through_.emplace(node, p.score);
      if (!inserted) it->second = std::max(it->second, p.score);
    }
  }
}

SubScores RerankContext::score(const KnowledgeObject& obj) const {
  SubScores s;

  std::size_t strong_entries = 0;
  for (const auto& [slot, entry] : cur_.entries) {
    if (entry.weight >= 0.5) ++strong_entries;
  }
  std::size_t matched = 0;
  std::size_t present = 0;
  for (const auto& [slot, value] : obj.fields) {
    const auto* entry = cur_.find(slot);
    if (!entry) continue;
    ++present;
    if (entry->weight >= 0.5 && (value == "*" || value == entry->value)) ++matched;
  }
  const std::size_t uni = obj.fields.size() + strong_entries - matched;
  s.field = uni == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(uni);
  s.structural = obj.fields.empty()
                     ? 0.0
                     : static_cast<double>(present) / static_cast<double>(obj.fields.size());

  const int d = hops_[kb_.index_of(obj.object_id)];
  s.graph = d < 0 ? 0.0 : 1.0 / (1.0 + d);

  if (!obj.addresses.empty()) {
    std::size_t unmet = 0;
    for (const auto& slot : obj.addresses) {
      if (std::binary_search(unmet_.begin(), unmet_.end(), slot)) ++unmet;
    }
    s.goal_distance = static_cast<double>(unmet) / static_cast<double>(obj.addresses.size());
  }

  for (const auto& rule : obj.discharges) {
    if (std::find(open_rules_.begin(), open_rules_.end(), rule) != open_rules_.end()) {
      s.risk = 1.0;
      break;
    }
  }

  if (auto it = best_path_through_.find(obj.object_id); it != best_path_through_.end()) {
    s.path = it->second;
  }

  if (obj.requires_states.empty()) {
    s.state = 1.0;
  } else {
    double total = 0.0;
    for (const auto& [slot, needed] : obj.requires_states) {
      const auto* entry = cur_.find(slot);
      if (!entry) continue;
      const double need = state_weight(needed);
      total += need <= 0.0 ? 1.0 : std::min(1.0, entry->weight / need);
    }
    s.state = total / static_cast<double>(obj.requires_states.size());
  }
  return s;
}

double rerank_score(const CurrentState& cur, const GoalState& goal, const KnowledgeBase& kb,
                    const KnowledgeObject& obj, const RerankWeights& w,
                    const std::vector<ReasoningPath>& paths, double w_min) {
  RerankContext ctx(cur, goal, kb, paths, w_min);
  return rerank_score(ctx.score(obj), w);
}

double fuse(double vector_score, double object_score, double path_score,
            const FusionWeights& beta) {
  return beta.vector * vector_score + beta.object * object_score + beta.path * path_score;
}

double path_cost(const ReasoningPath& path, double rho) {
  double total = 0.0;
  for (const auto& e : path.edges) total += e.cost;
  return total + rho * static_cast<double>(path.length());
}

std::vector<double> path_scores(const std::vector<ReasoningPath>& paths, double rho) {
  std::vector<double> costs;
  costs.reserve(paths.size());
  for (const auto& p : paths) costs.push_back(path_cost(p, rho));
  if (costs.empty()) return {};
  const auto [lo, hi] = std::minmax_element(costs.begin(), costs.end());
  const double min = *lo;
  const double span = *hi - *lo;
  std::vector<double> out;
  out.reserve(costs.size());
  for (double c : costs) out.push_back(span > 0.0 ? 1.0 - (c - min) / span : 1.0);
  return out;
}

std::vector<ReasoningPath> enumerate_paths(const KnowledgeBase& kb,
                                           const std::vector<std::string>& src,
                                           const std::vector<std::string>& dst,
                                           std::size_t max_len) {
  std::vector<ReasoningPath> out;
  if (max_len == 0 || kb.empty()) return out;
  std::vector<char> is_dst(kb.size(), 0);
  for (const auto& d : dst) {
    if (kb.find(d)) is_dst[kb.index_of(d)] = 1;
  }
  std::set<std::string> sources(src.begin(), src.end());

  std::vector<std::size_t> node_stack;
  std::vector<std::size_t> edge_stack;
  std::vector<char> on_path(kb.size(), 0);

  auto emit = [&]() {
    ReasoningPath p;
    for (auto n : node_stack) {
      const auto& obj = kb.objects()[n];
      p.nodes.push_back(obj.object_id);
      if (obj.precondition) p.preconditions.push_back(*obj.precondition);
    }
    for (auto e : edge_stack) p.edges.push_back(kb.edges()[e]);
    std::sort(p.preconditions.begin(), p.preconditions.end());
    p.preconditions.erase(std::unique(p.preconditions.begin(), p.preconditions.end()),
                          p.preconditions.end());
    out.push_back(std::move(p));
  };

  auto dfs = [&](auto&& self, std::size_t node) -> void {
    if (edge_stack.size() >= max_len) return;
    for (auto ei : kb.out_edges(node)) {
      const auto next = kb.index_of(kb.edges()[ei].dst);
      if (on_path[next]) continue;
      on_path[next] = 1;
      node_stack.push_back(next);
      edge_stack.push_back(ei);
      if (is_dst[next]) emit();
      self(self, next);
      edge_stack.pop_back();
      node_stack.pop_back();
      on_path[next] = 0;
    }
  };

  for (const auto& s : sources) {
    if (!kb.find(s)) continue;
    const auto start = kb.index_of(s);
    on_path[start] = 1;
    node_stack.push_back(start);
    dfs(dfs, start);
    node_stack.pop_back();
    on_path[start] = 0;
  }
  std::sort(out.begin(), out.end(),
            [](const ReasoningPath& a, const ReasoningPath& b) { return a.nodes < b.nodes; });
  return out;
}

RetrievalConfig RetrievalConfig::from_manifest(const KbManifest& m) {
  RetrievalConfig cfg;
  cfg.alpha = m.alpha;
  cfg.beta = m.beta;
  cfg.rho = m.rho;
  return cfg;
}

std::vector<std::string> RetrievalResult::top_ids(std::size_t k) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(ranked[i].object_id);
  return out;
}

std::vector<std::string> query_bag(const CurrentState& cur, const GoalState& goal, double w_min) {
  std::vector<std::string> bag;
  auto add = [&](std::string_view text) {
    for (auto& t : tokenize(text)) bag.push_back(std::move(t));
  };
  for (const auto& [slot, entry] : cur.entries) {
    if (entry.state == StateLabel::unknown) continue;
    add(slot);
    add(entry.value);
  }
  for (const auto& slot : unmet_mandatory(cur, goal, w_min)) add(slot);
  for (const auto* rule : open_risk_rules(goal, cur)) {
    for (const auto& slot : outstanding_slots(*rule, cur)) add(slot);
  }
  return bag;
}

RetrievalResult retrieve(const CurrentState& cur, const GoalState& goal, const Belief& /*belief*/,
                         const KnowledgeBase& kb, const RetrievalConfig& cfg) {
  RetrievalResult result;
  const auto bag = query_bag(cur, goal, cfg.w_min);
  const auto coarse = coarse_retrieve(bag, kb, cfg.k_coarse);

  if (cfg.mode == RetrievalMode::chunk) {
    for (std::size_t i = 0; i < coarse.size() && i < cfg.k_rerank; ++i) {
      RankedObject r;
      r.object_id = coarse[i].object_id;
      r.vector_score = coarse[i].score;
      r.fused_score = coarse[i].score;
      result.ranked.push_back(std::move(r));
    }
    return result;
  }

  std::vector<std::string> anchors;
  for (auto i : anchor_indices(kb, cur)) anchors.push_back(kb.objects()[i].object_id);
  std::vector<std::string> candidates;
  for (const auto& c : coarse) candidates.push_back(c.object_id);
  auto paths = enumerate_paths(kb, anchors, candidates, cfg.max_path_len);
  const auto scores = path_scores(paths, cfg.rho);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    paths[i].cost = path_cost(paths[i], cfg.rho);
    paths[i].score = scores[i];
  }

  const auto alpha = cfg.alpha.normalized();
  RerankContext ctx(cur, goal, kb, paths, cfg.w_min);
  std::vector<RankedObject> reranked;
  for (const auto& c : coarse) {
    RankedObject r;
    r.object_id = c.object_id;
    r.vector_score = c.score;
    r.sub = ctx.score(*kb.find(c.object_id));
    r.object_score = rerank_score(r.sub, alpha);
    reranked.push_back(std::move(r));
  }
  std::sort(reranked.begin(), reranked.end(), [](const auto& a, const auto& b) {
    return by_score_then_id(a.object_score, a.object_id, b.object_score, b.object_id);
  });
  if (reranked.size() > cfg.k_rerank) reranked.resize(cfg.k_rerank);

  std::map<std::string, std::vector<std::size_t>> ending_at;
  for (std::size_t i = 0; i < paths.size(); ++i) ending_at[paths[i].nodes.back()].push_back(i);

  const auto beta = cfg.beta.normalized();
  for (auto& r : reranked) {
    if (auto it = ending_at.find(r.object_id); it != ending_at.end()) {
      for (auto i : it->second) r.path_score = std::max(r.path_score, paths[i].score);
    }
    r.fused_score = fuse(r.vector_score, r.object_score, r.path_score, beta);
  }
  std::sort(reranked.begin(), reranked.end(), [](const auto& a, const auto& b) {
    return by_score_then_id(a.fused_score, a.object_id, b.fused_score, b.object_id);
  });
  result.ranked = std::move(reranked);

  for (std::size_t rank = 0; rank < result.ranked.size() && rank < cfg.k_paths; ++rank) {
    auto it = ending_at.find(result.ranked[rank].object_id);
    if (it == ending_at.end()) continue;
    auto idx = it->second;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return paths[a].score > paths[b].score;
    });
    for (std::size_t j = 0; j < idx.size() && j < cfg.paths_per_object; ++j) {
      result.paths.push_back(paths[idx[j]]);
    }
  }
  return result;
}

}  // namespace inquiry
