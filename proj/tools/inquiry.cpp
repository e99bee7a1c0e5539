// inquiry: replay scripts, run the benchmarks, lint packs, serve the API.
//
// Exit codes: 0 ok, 1 usage, 2 validation failure, 3 runtime error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "inquiry/pilot.hpp"
#include "inquiry/service.hpp"

#ifndef INQUIRY_DEFAULT_DATA
#define INQUIRY_DEFAULT_DATA "data"
#endif

namespace fs = std::filesystem;
using namespace inquiry;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kRuntime = 3;

struct Common {
  std::string pack = std::string(INQUIRY_DEFAULT_DATA) + "/pack";
  std::string kb = std::string(INQUIRY_DEFAULT_DATA) + "/kb";
  std::string out;
  std::string format = "table";
  std::uint64_t seed = 0;  // accepted for interface stability; commands are deterministic
};

void add_common(CLI::App* cmd, Common& c, bool with_kb = true) {
  cmd->add_option("--pack", c.pack, "scenario pack directory")->capture_default_str();
  if (with_kb) cmd->add_option("--kb", c.kb, "knowledge base directory")->capture_default_str();
  cmd->add_option("--out", c.out, "output directory (reports) or file");
  cmd->add_option("--format", c.format, "stdout format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "unused by deterministic commands");
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::EmptyInput, "cannot write " + p.string());
  out << text;
}

int report_errors(const std::vector<std::string>& issues, const char* what) {
  for (const auto& i : issues) std::cerr << what << ": " << i << '\n';
  return issues.empty() ? kOk : kInvalid;
}

int cmd_replay(const Common& c, const std::string& scenario_id, const std::string& policy_name) {
  const auto policy = parse_policy(policy_name);
  const auto pack = load_pack(c.pack);
  const auto kb = load_kb(c.kb);
  const auto& sc = pack.scenario(scenario_id);
  const auto result = run_policy(sc, pack, kb, policy);

  std::string lines;
  for (const auto& t : result.traces) lines += json(t).dump() + '\n';
  const std::string record = json(result.record).dump(2) + '\n';
  if (!c.out.empty()) {
    const fs::path dir(c.out);
    const std::string stem = scenario_id + "." + policy_name;
    write_file(dir / (stem + ".trace.jsonl"), lines);
    write_file(dir / (stem + ".emr.json"), record);
  }
  if (c.format == "json") {
    json traces = json::array();
    for (const auto& t : result.traces) traces.push_back(trace_summary(t, result.record, {}));
    std::cout << json{{"v", 1},
                      {"scenario_id", scenario_id},
                      {"policy", policy_name},
                      {"status", std::string(to_string(result.status))},
                      {"turns", result.traces.size()},
                      {"goal_turn", result.goal_turn ? json(*result.goal_turn) : json(nullptr)},
                      {"trace_hash", result.traces.empty() ? "" : result.traces.back().trace_hash},
                      {"emr", result.record}}
                     .dump(2)
              << '\n';
    return kOk;
  }
  for (const auto& t : result.traces) {
    const auto* a = t.chosen();
    std::cout << "turn " << t.turn_index << "  events=" << t.events.size()
              << "  gaps=" << t.gaps.size() << "  action=";
    if (a) {
      std::cout << a->action_id << ' ' << to_string(a->verb) << ' '
                << a->target_slot.value_or("-") << "  U=" << format_fixed(a->utility, 3);
    } else {
      std::cout << "-";
    }
    std::cout << "  status=" << to_string(t.status) << '\n';
  }
  std::cout << "final trace hash " << (result.traces.empty() ? "" : result.traces.back().trace_hash)
            << '\n';
  return kOk;
}

int emit_and_check(const Common& c, const PilotReport* pilot, const RetrievalReport* retrieval,
                   const ScenarioPack& pack, bool retrieval_only) {
  json doc{{"v", 1}, {"pack_id", pack.manifest.pack_id}};
  std::string table;
  if (pilot) {
    doc["pilot"] = pilot_json(*pilot);
    table += pilot_table(*pilot) + '\n';
  }
  if (retrieval) {
    doc["retrieval"] = retrieval_json(*retrieval);
    table += retrieval_table(*retrieval);
  }
  auto thresholds = pack.manifest.thresholds;
  if (retrieval_only) {
    std::erase_if(thresholds, [](const auto& kv) {
      const std::string& k = kv.first;
      return k.rfind("retrieval.", 0) != 0 && k.rfind("max_retrieval.", 0) != 0;
    });
  }
  const auto violations = check_thresholds(thresholds, flatten_metrics(pilot, retrieval));
  doc["threshold_violations"] = violations;
  if (!c.out.empty()) {
    const fs::path dir(c.out);
    const std::string stem = retrieval_only ? "retrieval" : "pilot";
    write_file(dir / (stem + ".json"), doc.dump(2) + '\n');
    write_file(dir / (stem + ".txt"), table);
  }
  std::cout << (c.format == "json" ? doc.dump(2) + '\n' : table);
  return report_errors(violations, "threshold");
}

int cmd_bench(const Common& c, std::size_t k) {
  const auto pack = load_pack(c.pack);
  const auto kb = load_kb(c.kb);
  const auto report = bench_retrieval(pack, kb, k);
  return emit_and_check(c, nullptr, &report, pack, true);
}

int cmd_evaluate(const Common& c, std::size_t k) {
  const auto pack = load_pack(c.pack);
  const auto kb = load_kb(c.kb);
  if (int rc = report_errors(validate_pack(pack, &kb), "pack"); rc != kOk) return rc;
  const auto pilot = run_pilot(pack, kb);
  const auto retrieval = bench_retrieval(pack, kb, k);
  return emit_and_check(c, &pilot, &retrieval, pack, false);
}

int cmd_validate(const Common& c, bool with_kb) {
  const auto pack = load_pack(c.pack);
  std::optional<KnowledgeBase> kb;
  if (with_kb) kb = load_kb(c.kb);
  const auto issues = validate_pack(pack, kb ? &*kb : nullptr);
  if (issues.empty()) {
    std::cout << "pack " << pack.manifest.pack_id << " ok: " << pack.scenarios.size()
              << " scripts, " << pack.queries.size() << " query points\n";
  }
  return report_errors(issues, "pack");
}

int cmd_serve(const Common& c, std::string host, int port, bool reject_busy,
              const std::string& trace_dir) {
  const auto pack = load_pack(c.pack);
  const auto kb = load_kb(c.kb);
  ServiceConfig cfg;
  cfg.reject_busy = reject_busy;
  if (!trace_dir.empty()) cfg.trace_dir = trace_dir;
  SessionManager manager(pack, kb, cfg);
  httplib::Server server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  install_routes(server, manager);
  std::cerr << "serving " << pack.manifest.pack_id << " on " << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot bind " << host << ':' << port << '\n';
    return kRuntime;
  }
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownPolicy:
    case ErrorCode::UnknownScenario: return kUsage;
    case ErrorCode::PackInvalid: return kInvalid;
    default: return kRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic proactive-inquiry engine and benchmark harness"};
  app.require_subcommand(1);
  Common common;

  auto* replay = app.add_subcommand("replay", "run one scripted session under a policy");
  std::string scenario;
  std::string policy = "full_framework";
  add_common(replay, common);
  replay->add_option("--script,--scenario", scenario, "scenario id")->required();
  replay->add_option("--policy", policy, "direct_generation|chunk_rag|rule_template|full_framework")
      ->capture_default_str();

  auto* bench = app.add_subcommand("bench-retrieval", "chunk vs hybrid retrieval report");
  std::size_t k = 5;
  add_common(bench, common);
  bench->add_option("--k", k, "rank cutoff")->check(CLI::PositiveNumber)->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "four-policy pilot plus retrieval report");
  add_common(evaluate, common);
  evaluate->add_option("--k", k, "rank cutoff")->check(CLI::PositiveNumber)->capture_default_str();

  auto* validate = app.add_subcommand("validate-pack", "lint a scenario pack");
  add_common(validate, common);
  bool no_kb = false;
  validate->add_flag("--no-kb", no_kb, "skip knowledge-base cross-references");

  auto* serve = app.add_subcommand("serve", "start the session HTTP service");
  add_common(serve, common);
  std::string host = "127.0.0.1";
  int port = 8080;
  if (const char* env = std::getenv("INQUIRY_PORT")) port = std::atoi(env);
  bool reject_busy = false;
  std::string trace_dir;
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port, "listen port (env INQUIRY_PORT)")->capture_default_str();
  serve->add_flag("--reject-busy", reject_busy, "409 on concurrent posts instead of queueing");
  serve->add_option("--trace-dir", trace_dir, "append-only per-session trace logs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*replay) return cmd_replay(common, scenario, policy);
    if (*bench) return cmd_bench(common, k);
    if (*evaluate) return cmd_evaluate(common, k);
    if (*validate) return cmd_validate(common, !no_kb);
    if (*serve) return cmd_serve(common, host, port, reject_busy, trace_dir);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
