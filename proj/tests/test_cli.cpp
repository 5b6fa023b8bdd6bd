#include "sessionweave/cli.hpp"

#include "support.hpp"

#include <doctest.h>

#include <json.hpp>

#include <sstream>

using namespace sw;

namespace {

struct Run {
  int exit;
  std::string out;
  std::string err;
};

Run run(int (*cmd)(const cli::RunConfig&, std::ostream&, std::ostream&),
        cli::RunConfig cfg) {
  std::ostringstream out, err;
  int code = cmd(cfg, out, err);
  return {code, out.str(), err.str()};
}

cli::RunConfig file_cfg(const std::string& rel) {
  cli::RunConfig cfg;
  cfg.input = swt::fixture_path(rel);
  cfg.json = true;
  return cfg;
}

} // namespace

TEST_CASE("check exits 0 on a typable corpus file") {
  Run r = run(cli::run_check, file_cfg("corpus/typable/confluent_fanin.mps"));
  CHECK(r.exit == 0);
  CHECK(nlohmann::json::parse(r.out)["verdict"] == "typable");
}

TEST_CASE("check exits 1 with the inactivity reason on the dead-branch candidate") {
  Run r = run(cli::run_check, file_cfg("corpus/untypable/stale_input_inactivity.mps"));
  CHECK(r.exit == 1);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "untypable");
  CHECK(j["failure"]["reason"] == "InactivityViolation");
}

TEST_CASE("check exits 1 with the ready-set reason on the forward candidate") {
  Run r = run(cli::run_check, file_cfg("corpus/untypable/stale_input_forward.mps"));
  CHECK(r.exit == 1);
  CHECK(nlohmann::json::parse(r.out)["failure"]["reason"] == "ReadySetMismatch");
}

TEST_CASE("check exits 3 on an unbounded candidate type") {
  Run r = run(cli::run_check, file_cfg("corpus/analysis/unbounded_annotation.mps"));
  CHECK(r.exit == 3);
  CHECK(nlohmann::json::parse(r.out)["verdict"] == "unbounded-type");
}

TEST_CASE("check exits 3 on a parse error") {
  cli::RunConfig cfg;
  cfg.input = swt::fixture_path("README.md");
  cfg.json = true;
  std::ostringstream out, err;
  CHECK(cli::run_check(cfg, out, err) == 3);
}

TEST_CASE("check without a candidate type falls back to inference") {
  Run r = run(cli::run_check, file_cfg("corpus/untypable/four_party_deadlock.mps"));
  CHECK(r.exit == 1);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "untypable");
  CHECK(j["search"]["status"] == "untypable");
}

TEST_CASE("analyze reproduces the depth table") {
  Run r = run(cli::run_analyze, file_cfg("corpus/analysis/depth_example.mps"));
  CHECK(r.exit == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j["types"].size() == 2);
  nlohmann::json g, g2;
  for (const auto& item : j["types"]) {
    if (item["name"] == "G") g = item;
    if (item["name"] == "G2") g2 = item;
  }
  CHECK(g["depths"]["p"] == 3);
  CHECK(g["depths"]["q"] == 2);
  CHECK(g["depths"]["r"] == 1);
  CHECK(g2["depths"]["p"] == 1);
  CHECK(g2["depths"]["q"] == 2);
  CHECK(g2["depths"]["r"] == "inf");
  CHECK(g["boundedness"]["bounded"] == false);
}

TEST_CASE("simulate lists the reachable transition system") {
  cli::RunConfig cfg = file_cfg("corpus/typable/confluent_fanin.mps");
  Run r = run(cli::run_simulate, cfg);
  CHECK(r.exit == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  // 2 outputs x 2 orders, then the diamond closes: 9 distinct states.
  CHECK(j["states"].size() == 9);
  CHECK(j["truncated"] == false);
  bool has_final = false;
  for (const auto& st : j["states"])
    if (st["final"] == true) has_final = true;
  CHECK(has_final);
}

TEST_CASE("simulate surfaces the stuck derivative of the four-party network") {
  cli::RunConfig cfg = file_cfg("corpus/untypable/four_party_deadlock.mps");
  cfg.bound.max_depth = 10;
  Run r = run(cli::run_simulate, cfg);
  CHECK(r.exit == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  bool stuck_pd = false;
  for (const auto& st : j["states"]) {
    if (st["stuck"] != true) continue;
    std::string state = st["state"];
    if (state.find("r := p?d; end") != std::string::npos &&
        state.find("queue []") != std::string::npos)
      stuck_pd = true;
  }
  CHECK(stuck_pd);
}

TEST_CASE("simulate --one follows one maximal trace") {
  cli::RunConfig cfg = file_cfg("corpus/typable/confluent_fanin.mps");
  cfg.one = true;
  Run r = run(cli::run_simulate, cfg);
  CHECK(r.exit == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["stuck"] == false);
  CHECK(j["final"] == "queue []");
}

TEST_CASE("simulate --types lists type-configuration steps") {
  cli::RunConfig cfg = file_cfg("corpus/typable/confluent_fanin.mps");
  cfg.types = true;
  Run r = run(cli::run_simulate, cfg);
  CHECK(r.exit == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["steps"].size() == 2);
}

TEST_CASE("verify passes a typable file and fails a mutated one") {
  Run ok = run(cli::run_verify, file_cfg("corpus/typable/recursive_fanin.mps"));
  CHECK(ok.exit == 0);

  // The verifier needs the file to typecheck first.
  cli::RunConfig cfg;
  cfg.json = true;
  cfg.input = swt::fixture_path("corpus/untypable/stale_input_inactivity.mps");
  std::ostringstream out, err;
  CHECK(cli::run_verify(cfg, out, err) == 3);
}

TEST_CASE("verify reports zero races for the fake race") {
  cli::RunConfig cfg = file_cfg("corpus/typable/arrival_notify.mps");
  cfg.properties = {"races"};
  cfg.bound.max_depth = 12;
  Run r = run(cli::run_verify, cfg);
  CHECK(r.exit == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j["reports"].size() == 1);
  CHECK(j["reports"][0]["findings"].empty());
}

TEST_CASE("verify --corpus is green and byte-stable") {
  cli::RunConfig cfg;
  cfg.corpus = true;
  cfg.json = true;
  cfg.input = swt::fixture_path("corpus");
  Run a = run(cli::run_verify, cfg);
  CHECK(a.exit == 0);
  nlohmann::json j = nlohmann::json::parse(a.out);
  CHECK(j["summary"]["failed"] == 0);
  CHECK(j["summary"]["bound_exhausted"] == 0);

  Run b = run(cli::run_verify, cfg);
  CHECK(a.out == b.out);
  CHECK(a.exit == b.exit);
}
