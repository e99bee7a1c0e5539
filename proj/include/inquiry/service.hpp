#pragma once
// In-memory session registry and its HTTP binding. Bodies are JSON with a
// "v" version field; errors come back as {"v":1,"error":{"code","message"}}.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "inquiry/json_io.hpp"
#include "inquiry/pack.hpp"
#include "inquiry/planner.hpp"

namespace httplib {
class Server;
}

namespace inquiry {

inline constexpr int kApiVersion = 1;

struct ServiceConfig {
  // When set, a second post to a busy session fails with SessionBusy
  // instead of waiting its turn.
  bool reject_busy = false;
  // Append-only JSON-lines trace log per session, if set.
  std::optional<std::filesystem::path> trace_dir;
};

class SessionManager {
 public:
  SessionManager(const ScenarioPack& pack, const KnowledgeBase& kb, ServiceConfig cfg = {});

  // UnknownScenario.
  json create(const std::string& scenario_id, PolicyKind policy);
  // UnknownSession, SessionEnded, SessionBusy (reject mode only).
  json post_utterance(const std::string& session_id, const DialogueTurn& turn);
  json state(const std::string& session_id);
  json emr(const std::string& session_id);
  json trace(const std::string& session_id);
  json scenarios() const;
  std::size_t size() const;

 private:
  struct Entry {
    std::mutex mu;
    std::unique_ptr<Session> session;
    std::optional<std::filesystem::path> log;
  };
  std::shared_ptr<Entry> find(const std::string& session_id) const;
  std::unique_lock<std::mutex> lock(Entry& e) const;

  const ScenarioPack& pack_;
  const KnowledgeBase& kb_;
  ServiceConfig cfg_;
  mutable std::mutex registry_mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
};

int http_status(ErrorCode code);
json error_body(ErrorCode code, const std::string& message);

// Registers every endpoint on the server.
void install_routes(httplib::Server& server, SessionManager& manager);

}  // namespace inquiry
