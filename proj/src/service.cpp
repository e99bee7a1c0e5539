#include "inquiry/service.hpp"

#include <cstdio>
#include <fstream>

#include "httplib.h"

namespace inquiry {

SessionManager::SessionManager(const ScenarioPack& pack, const KnowledgeBase& kb,
                               ServiceConfig cfg)
    : pack_(pack), kb_(kb), cfg_(std::move(cfg)) {
  if (cfg_.trace_dir) std::filesystem::create_directories(*cfg_.trace_dir);
}

std::shared_ptr<SessionManager::Entry> SessionManager::find(const std::string& id) const {
  std::lock_guard<std::mutex> g(registry_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "unknown session: '" + id + "'");
  return it->second;
}

std::unique_lock<std::mutex> SessionManager::lock(Entry& e) const {
  if (!cfg_.reject_busy) return std::unique_lock<std::mutex>(e.mu);
  std::unique_lock<std::mutex> l(e.mu, std::try_to_lock);
  if (!l.owns_lock()) throw Error(ErrorCode::SessionBusy, "a turn is already in flight");
  return l;
}

json SessionManager::create(const std::string& scenario_id, PolicyKind policy) {
  const auto& sc = pack_.scenario(scenario_id);
  auto entry = std::make_shared<Entry>();
  std::string id;
  {
    std::lock_guard<std::mutex> g(registry_mu_);
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%04llu", static_cast<unsigned long long>(next_id_++));
    id = buf;
    entry->session = std::make_unique<Session>(id, pack_, sc, kb_, policy);
    if (cfg_.trace_dir) entry->log = *cfg_.trace_dir / (id + ".jsonl");
    sessions_.emplace(id, entry);
  }
  return json{{"v", kApiVersion},
              {"session_id", id},
              {"scenario_id", scenario_id},
              {"policy", std::string(to_string(policy))},
              {"status", "active"}};
}

json SessionManager::post_utterance(const std::string& id, const DialogueTurn& turn) {
  auto entry = find(id);
  auto l = lock(*entry);
  auto& s = *entry->session;
  const EMRecord before = s.record();
  const auto& t = s.run_turn(turn);
  if (entry->log) {
    std::ofstream out(*entry->log, std::ios::app);
    out << json(t).dump() << '\n';
  }
  json body = trace_summary(t, s.record(), before);
  body["v"] = kApiVersion;
  body["session_id"] = id;
  return body;
}

json SessionManager::state(const std::string& id) {
  auto entry = find(id);
  auto l = lock(*entry);
  const auto& s = *entry->session;
  return json{{"v", kApiVersion},
              {"session_id", id},
              {"status", std::string(to_string(s.status()))},
              {"turn_index", s.state().turn_index},
              {"state", s.state()},
              {"state_hash", state_hash(s.state())},
              {"belief", s.belief()},
              {"entropy", entropy(s.belief())}};
}

json SessionManager::emr(const std::string& id) {
  auto entry = find(id);
  auto l = lock(*entry);
  return json{{"v", kApiVersion}, {"session_id", id}, {"emr", entry->session->record()}};
}

json SessionManager::trace(const std::string& id) {
  auto entry = find(id);
  auto l = lock(*entry);
  return json{{"v", kApiVersion}, {"session_id", id}, {"traces", entry->session->traces()}};
}

json SessionManager::scenarios() const {
  json list = json::array();
  for (const auto& s : pack_.scenarios) {
    list.push_back(json{{"scenario_id", s.scenario_id},
                        {"title", s.title},
                        {"family", s.family},
                        {"turns", s.script.size()}});
  }
  return json{{"v", kApiVersion}, {"pack_id", pack_.manifest.pack_id}, {"scenarios", list}};
}

std::size_t SessionManager::size() const {
  std::lock_guard<std::mutex> g(registry_mu_);
  return sessions_.size();
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownScenario: return 404;
    case ErrorCode::SessionEnded:
    case ErrorCode::SessionBusy: return 409;
    case ErrorCode::ParseError:
    case ErrorCode::MissingGold:
    case ErrorCode::EmptyInput:
    case ErrorCode::UnknownPolicy: return 400;
    default: return 500;
  }
}

json error_body(ErrorCode code, const std::string& message) {
  return json{{"v", kApiVersion},
              {"error", {{"code", std::string(to_string(code))}, {"message", message}}}};
}

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      reply(res, http_status(e.code()), error_body(e.code(), e.what()));
    } catch (const json::exception& e) {
      reply(res, 400, error_body(ErrorCode::ParseError, e.what()));
    } catch (const std::exception& e) {
      reply(res, 500, error_body(ErrorCode::ParseError, e.what()));
    }
  };
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body.empty() ? std::string("{}") : req.body);
  if (!body.is_object()) throw Error(ErrorCode::ParseError, "body must be a JSON object");
  const int v = body.value("v", kApiVersion);
  if (v != kApiVersion) {
    throw Error(ErrorCode::ParseError, "unsupported body version " + std::to_string(v));
  }
  return body;
}

}  // namespace

void install_routes(httplib::Server& server, SessionManager& m) {
  server.Get("/scenarios", guarded([&m](const httplib::Request&, httplib::Response& res) {
               reply(res, 200, m.scenarios());
             }));
  server.Post("/sessions", guarded([&m](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req);
                const auto policy = parse_policy(body.value("policy", std::string("full_framework")));
                reply(res, 201, m.create(body.at("scenario_id").get<std::string>(), policy));
              }));
  server.Post(R"(/sessions/([^/]+)/utterances)",
              guarded([&m](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req);
                if (body.value("text", std::string{}).empty()) {
                  throw Error(ErrorCode::EmptyInput, "utterance text is empty");
                }
                reply(res, 200, m.post_utterance(req.matches[1], parse_turn(body)));
              }));
  server.Get(R"(/sessions/([^/]+)/state)",
             guarded([&m](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, m.state(req.matches[1]));
             }));
  server.Get(R"(/sessions/([^/]+)/emr)",
             guarded([&m](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, m.emr(req.matches[1]));
             }));
  server.Get(R"(/sessions/([^/]+)/trace)",
             guarded([&m](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, m.trace(req.matches[1]));
             }));
}

}  // namespace inquiry
