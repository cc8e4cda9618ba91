// Runs the acts-cli binary end to end.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "acts_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run cli(const std::string& args) {
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = std::string(ACTS_CLI_PATH) + " " + args + " 2>" + err.string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = work_dir() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("simulate") {
  const auto cfg = write_config("sim.json", R"({"horizon": 40, "trials": 4, "master_seed": 3})");
  const auto out = work_dir() / "sim";
  const Run r = cli("simulate --config " + cfg.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  const auto summary = nlohmann::json::parse(r.out);
  CHECK(summary["command"] == "simulate");
  CHECK(summary["sumz_violations"] == 0);
  for (const char* f : {"trials.csv", "aggregate.csv", "summary.json"}) {
    CHECK(fs::exists(out / f));
  }
  const auto doc = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(doc.contains("config"));
  CHECK(doc["config"]["horizon"] == 40);
  CHECK(doc.contains("wall_seconds"));
  CHECK(doc["sumz"]["violations"] == 0);

  const auto again = work_dir() / "sim2";
  REQUIRE(cli("simulate --config " + cfg.string() + " --out " + again.string()).exit_code == 0);
  CHECK(slurp(out / "trials.csv") == slurp(again / "trials.csv"));
  CHECK(slurp(out / "aggregate.csv") == slurp(again / "aggregate.csv"));
}

TEST_CASE("gen-log, replay and diagnostics") {
  const auto cfg = write_config("rep.json", R"({"trials": 2, "master_seed": 8})");
  const auto log = work_dir() / "log.csv";
  Run r = cli("gen-log --config " + cfg.string() + " --pi 0.6 --horizon 300 --out " +
              log.string());
  REQUIRE(r.exit_code == 0);
  const std::string text = slurp(log);
  CHECK(text.rfind("index,ctx_0,ctx_1,ctx_2,ctx_3,ctx_4,ctx_5,ctx_6,action,logging_prob,reward\n",
                   0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 301);

  const auto out = work_dir() / "replay";
  r = cli("replay --log " + log.string() + " --config " + cfg.string() + " --out " +
          out.string());
  REQUIRE(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(slurp(out / "replay.json"));
  CHECK(rep["runs"].size() == 2);

  const auto sim = work_dir() / "diag_sim";
  const auto small = write_config("small.json", R"({"horizon": 30, "trials": 2})");
  REQUIRE(cli("simulate --config " + small.string() + " --out " + sim.string()).exit_code == 0);
  r = cli("diagnostics --trace " + (sim / "trials.csv").string());
  REQUIRE(r.exit_code == 0);
  const auto diag = nlohmann::json::parse(r.out);
  CHECK(diag["all_satisfied"] == true);
  CHECK(diag["trials"].size() == 2);
}

TEST_CASE("errors are one machine-parsable line with a nonzero exit") {
  Run r = cli("simulate --config " + (work_dir() / "nope.json").string() + " --out " +
              (work_dir() / "x").string());
  CHECK(r.exit_code == 3);
  CHECK(r.out.empty());
  CHECK(r.err.rfind("error io \"", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

  const auto bad = write_config("bad.json", R"({"algorithm": "greedy"})");
  r = cli("simulate --config " + bad.string() + " --out " + (work_dir() / "x").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.rfind("error parse ", 0) == 0);

  const auto badlog = write_config("bad.csv", "index,ctx_0,action,logging_prob,reward\n0,1,1,1.5,0\n");
  const auto cfg1 = write_config("one.json",
                                 R"({"environment": {"context_dim": 1, "selector": [0],
                                     "n_actions": 1, "theta": [0.5]}})");
  r = cli("replay --log " + badlog.string() + " --config " + cfg1.string() + " --out " +
          (work_dir() / "y").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);

  r = cli("gen-log --config " + cfg1.string() + " --pi 1.5 --horizon 3 --out " +
          (work_dir() / "z.csv").string());
  CHECK(r.exit_code != 0);
  CHECK(r.err.rfind("error ", 0) == 0);

  r = cli("simulate");
  CHECK(r.exit_code != 0);
  r = cli("frobnicate");
  CHECK(r.exit_code != 0);
}
