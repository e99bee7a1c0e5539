#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "httplib.h"
#include "inquiry/service.hpp"
#include "support.hpp"

using namespace inquiry;
using testsupport::bundled_kb;
using testsupport::bundled_pack;

namespace {

DialogueTurn plain(std::string text) {
  DialogueTurn t;
  t.text = std::move(text);
  t.gold_events = std::vector<GoldAnnotation>{};
  return t;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::ParseError;
}

}  // namespace

TEST(Manager, CreatePostAndRead) {
  SessionManager m(bundled_pack(), bundled_kb());
  const auto created = m.create("chest_01", PolicyKind::full_framework);
  EXPECT_EQ(created["v"], 1);
  EXPECT_EQ(created["status"], "active");
  const std::string id = created["session_id"];
  const auto& sc = bundled_pack().scenario("chest_01");

  const auto r = m.post_utterance(id, sc.script[0]);
  EXPECT_EQ(r["turn_index"], 0);
  EXPECT_FALSE(r["events"].empty());
  EXPECT_TRUE(r.contains("proposed_action"));
  EXPECT_TRUE(r.contains("emr_diff"));
  EXPECT_EQ(m.state(id)["turn_index"], 0);
  EXPECT_EQ(m.trace(id)["traces"].size(), 1u);
  EXPECT_TRUE(m.emr(id).contains("emr"));
  EXPECT_EQ(m.scenarios()["scenarios"].size(), 10u);

  EXPECT_EQ(code_of([&] { m.state("s9999"); }), ErrorCode::UnknownSession);
  EXPECT_EQ(code_of([&] { m.create("nope", PolicyKind::chunk_rag); }), ErrorCode::UnknownScenario);
}

TEST(Manager, ApiReplayReproducesBatchTraceHashes) {
  const auto& pack = bundled_pack();
  const auto& kb = bundled_kb();
  SessionManager m(pack, kb);
  for (const auto& sc : pack.scenarios) {
    for (auto policy : kAllPolicies) {
      const auto batch = run_policy(sc, pack, kb, policy);
      const std::string id = m.create(sc.scenario_id, policy)["session_id"];
      for (const auto& t : batch.traces) {
        const auto r = m.post_utterance(id, t.as_turn());
        ASSERT_EQ(r["trace_hash"], t.trace_hash)
            << sc.scenario_id << " " << to_string(policy) << " turn " << t.turn_index;
      }
      EXPECT_EQ(m.state(id)["status"], std::string(to_string(batch.status)));
    }
  }
}

TEST(Manager, TerminalSessionsRejectPosts) {
  SessionManager m(bundled_pack(), bundled_kb());
  const std::string id = m.create("chest_01", PolicyKind::rule_template)["session_id"];
  for (int i = 0; i < 64 && m.state(id)["status"] == "active"; ++i) m.post_utterance(id, plain("ok"));
  ASSERT_NE(m.state(id)["status"], "active");
  EXPECT_EQ(code_of([&] { m.post_utterance(id, plain("again")); }), ErrorCode::SessionEnded);
  EXPECT_EQ(http_status(ErrorCode::SessionEnded), 409);
  EXPECT_EQ(http_status(ErrorCode::SessionBusy), 409);
  EXPECT_EQ(http_status(ErrorCode::UnknownSession), 404);
  EXPECT_EQ(http_status(ErrorCode::EmptyInput), 400);
  EXPECT_EQ(error_body(ErrorCode::SessionBusy, "x")["error"]["code"], "SessionBusy");
}

TEST(Manager, ConcurrentPostsAreSerialized) {
  SessionManager m(bundled_pack(), bundled_kb());
  const std::string id = m.create("resp_01", PolicyKind::direct_generation)["session_id"];
  std::vector<std::thread> threads;
  std::mutex mu;
  std::set<int> turns;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      const auto r = m.post_utterance(id, plain("turn " + std::to_string(i)));
      std::lock_guard<std::mutex> g(mu);
      turns.insert(r["turn_index"].get<int>());
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(turns, (std::set<int>{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(m.trace(id)["traces"].size(), 8u);
}

TEST(Manager, RejectBusyNeverLosesOrDoublesTurns) {
  ServiceConfig cfg;
  cfg.reject_busy = true;
  SessionManager m(bundled_pack(), bundled_kb(), cfg);
  const std::string id = m.create("resp_01", PolicyKind::direct_generation)["session_id"];
  std::atomic<int> ok{0};
  std::atomic<int> busy{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 16; ++i) {
    threads.emplace_back([&] {
      try {
        m.post_utterance(id, plain("hello"));
        ++ok;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::SessionBusy) ++busy;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok + busy, 16);
  EXPECT_GE(ok.load(), 1);
  EXPECT_EQ(m.trace(id)["traces"].size(), static_cast<std::size_t>(ok.load()));
}

TEST(Manager, TraceLogIsAppendOnlyJsonLines) {
  ServiceConfig cfg;
  cfg.trace_dir = std::filesystem::temp_directory_path() / "inquiry_trace_logs";
  std::filesystem::remove_all(*cfg.trace_dir);
  SessionManager m(bundled_pack(), bundled_kb(), cfg);
  const std::string id = m.create("chest_01", PolicyKind::direct_generation)["session_id"];
  m.post_utterance(id, plain("one"));
  m.post_utterance(id, plain("two"));
  std::ifstream in(*cfg.trace_dir / (id + ".jsonl"));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(json::parse(line)["turn_index"], n);
    ++n;
  }
  EXPECT_EQ(n, 2);
  std::filesystem::remove_all(*cfg.trace_dir);
}

class Http : public ::testing::Test {
 protected:
  void SetUp() override {
    manager_ = std::make_unique<SessionManager>(bundled_pack(), bundled_kb());
    install_routes(server_, *manager_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  std::unique_ptr<SessionManager> manager_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(Http, ContractEndToEnd) {
  auto c = client();
  auto res = c.Get("/scenarios");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["scenarios"].size(), 10u);

  res = c.Post("/sessions", R"({"v":1,"scenario_id":"chest_01","policy":"full_framework"})",
               "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201);
  const std::string id = json::parse(res->body)["session_id"];

  const auto& sc = bundled_pack().scenario("chest_01");
  json body = turn_to_json(sc.script[0]);
  body["v"] = 1;
  res = c.Post("/sessions/" + id + "/utterances", body.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto turn = json::parse(res->body);
  EXPECT_EQ(turn["v"], 1);
  EXPECT_FALSE(turn["trace_hash"].get<std::string>().empty());

  for (const char* path : {"/state", "/emr", "/trace"}) {
    res = c.Get("/sessions/" + id + path);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200) << path;
  }
  EXPECT_EQ(json::parse(c.Get("/sessions/" + id + "/trace")->body)["traces"].size(), 1u);
}

TEST_F(Http, ErrorsCarryCodesAndStatuses) {
  auto c = client();
  auto res = c.Get("/sessions/s9999/state");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(json::parse(res->body)["error"]["code"], "UnknownSession");

  res = c.Post("/sessions", R"({"v":1,"scenario_id":"nope"})", "application/json");
  EXPECT_EQ(res->status, 404);
  res = c.Post("/sessions", R"({"v":2,"scenario_id":"chest_01"})", "application/json");
  EXPECT_EQ(res->status, 400);
  res = c.Post("/sessions", R"({"v":1,"scenario_id":"chest_01","policy":"oracle"})",
               "application/json");
  EXPECT_EQ(res->status, 400);
  res = c.Post("/sessions", "not json", "application/json");
  EXPECT_EQ(res->status, 400);

  res = c.Post("/sessions", R"({"v":1,"scenario_id":"chest_01","policy":"rule_template"})",
               "application/json");
  const std::string id = json::parse(res->body)["session_id"];
  res = c.Post("/sessions/" + id + "/utterances", R"({"v":1,"text":""})", "application/json");
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body)["error"]["code"], "EmptyInput");

  // Drive to a terminal status, then one more post is a conflict.
  const std::string ok = R"({"v":1,"text":"ok","gold":[]})";
  int status = 200;
  for (int i = 0; i < 64 && status == 200; ++i) {
    res = c.Post("/sessions/" + id + "/utterances", ok, "application/json");
    status = res->status;
  }
  EXPECT_EQ(status, 409);
  EXPECT_EQ(json::parse(res->body)["error"]["code"], "SessionEnded");
}
