#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "acts/error.hpp"
#include "acts/experiment.hpp"
#include "oracles.hpp"

using namespace acts;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.horizon = 60;
  c.trials = 6;
  c.master_seed = 77;
  c.threads = 1;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("acts_test_" + name);
  fs::remove_all(p);
  return p;
}

// Plays the constrained oracle at every step.
class OracleStub final : public Bandit {
 public:
  OracleStub(const Environment& env, ProbabilityBounds bounds)
      : env_(env), bounds_(bounds), state_(1, 1.0) {}
  Decision decide(std::span<const double> ctx, RandomStream& rng) override {
    const auto o = env_.oracle_policy(ctx, bounds_);
    Decision d;
    d.candidate_action = o.best_nonzero;
    d.pi = o.pi_star;
    d.realized_action = rng.uniform() < d.pi ? d.candidate_action : 0;
    return d;
  }
  void observe(const Decision&, std::span<const double>, double) override {}
  double z_width(const Decision&) const override { return 0.0; }
  const PosteriorState& posterior() const override { return state_; }
  std::size_t n_actions() const override { return env_.feature_map().n_actions(); }

 private:
  const Environment& env_;
  ProbabilityBounds bounds_;
  PosteriorState state_;
};

}  // namespace

TEST_CASE("theory_v") {
  CHECK(theory_v(1, 0.5, 2, 0.1) == doctest::Approx(14.867688755).epsilon(1e-9));
  CHECK(theory_v(1, 0.5, 1, std::exp(-1.0 / 48.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(theory_v(1, 0.5, 2, 1.0 - 1e-12) < 1e-4);
  CHECK(theory_v(1, 0.5, 2, 1.0 - 1e-12) > 0.0);
  CHECK_THROWS_AS(theory_v(0, 0.5, 2, 0.1), Error);
  CHECK_THROWS_AS(theory_v(1, 1.0, 2, 0.1), Error);
  CHECK_THROWS_AS(theory_v(1, 0.5, 0, 0.1), Error);
  CHECK_THROWS_AS(theory_v(1, 0.5, 2, 1.0), Error);
}

TEST_CASE("theory_ell") {
  CHECK(theory_ell(1, std::exp(1.0), 1, std::exp(-1.0)) ==
        doctest::Approx(2.7320508075688772).epsilon(1e-12));
  CHECK(theory_ell(1, 1000, 8, 1.0 - 1e-15) == doctest::Approx(1.0).epsilon(1e-6));
  double prev = 0.0;
  for (double T = 2; T < 1e6; T *= 3) {
    const double v = theory_ell(1, T, 4, 0.05);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(theory_ell(1, 1.5, 1, 0.5), Error);
}

TEST_CASE("sumz diagnostic") {
  const std::vector<double> pi = {0.5}, z = {1.0};
  const auto r = sumz_diagnostic(pi, z, 1);
  CHECK(r.lhs == 0.5);
  CHECK(r.rhs == doctest::Approx(5.887050112577).epsilon(1e-12));
  CHECK(r.satisfied);

  const std::vector<double> pis(100, 0.3), zeros(100, 0.0);
  const auto r0 = sumz_diagnostic(pis, zeros, 8);
  CHECK(r0.lhs == 0.0);
  CHECK(r0.satisfied);

  const std::vector<double> big(100, 1e3);
  CHECK(!sumz_diagnostic(pis, big, 8).satisfied);
  CHECK_THROWS_AS(sumz_diagnostic(pis, z, 8), Error);
}

TEST_CASE("aggregate") {
  RegretTrace a, b, c;
  for (double x : {1.0, 1.0, 1.0}) a.push(x);
  for (double x : {3.0, 3.0, 3.0}) b.push(x);

  const std::vector<RegretTrace> one = {a};
  const auto single = aggregate(one);
  CHECK(single.median == a.cumulative);
  CHECK(single.q1 == a.cumulative);
  CHECK(single.q3 == a.cumulative);

  const std::vector<RegretTrace> two = {a, b};
  const auto pair = aggregate(two);
  CHECK(pair.median == std::vector<double>{2, 4, 6});
  CHECK(pair.q1 == std::vector<double>{1.5, 3, 4.5});

  c.push(1.0);
  const std::vector<RegretTrace> ragged = {a, c};
  CHECK_THROWS_AS(aggregate(ragged), Error);
  CHECK_THROWS_AS(aggregate(std::vector<RegretTrace>{}), Error);

  CHECK(a.cumulative == std::vector<double>{1, 2, 3});
}

TEST_CASE("aggregate matches the rank oracle") {
  RandomStream rng(88);
  const std::size_t n = 100, T = 40;
  std::vector<RegretTrace> traces(n);
  for (auto& tr : traces) {
    for (std::size_t t = 0; t < T; ++t) tr.push(std::floor(4 * rng.uniform()) + rng.normal());
  }
  const auto agg = aggregate(traces);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<double> col;
    for (const auto& tr : traces) col.push_back(tr.cumulative[t]);
    CHECK(agg.median[t] == acts::testing::quantile_by_rank(col, 0.5));
    CHECK(agg.q1[t] == acts::testing::quantile_by_rank(col, 0.25));
    CHECK(agg.q3[t] == acts::testing::quantile_by_rank(col, 0.75));
    CHECK(agg.q1[t] <= agg.median[t]);
    CHECK(agg.median[t] <= agg.q3[t]);
  }
}

TEST_CASE("oracle-matching policy has zero regret") {
  ExperimentConfig c = small_config();
  c.trials = 1;
  c.horizon = 1;
  const BanditFactory oracle = [](const ExperimentConfig& cfg, const Environment& env) {
    return std::unique_ptr<Bandit>(new OracleStub(env, cfg.bounds));
  };
  const auto r = run_experiment(c, oracle);
  REQUIRE(r.trials.size() == 1);
  CHECK(r.trials[0].regret.cumulative == std::vector<double>{0.0});

  c.horizon = 200;
  c.environment.baseline = BaselineKind::kNonstationary;
  const auto drifting = run_experiment(c, oracle);
  for (double x : drifting.trials[0].regret.per_step) CHECK(x == 0.0);
}

TEST_CASE("determinism and trial independence") {
  for (Algorithm alg : {Algorithm::kActionCentered, Algorithm::kBenchmark}) {
    ExperimentConfig c = small_config();
    c.algorithm = alg;
    c.environment.baseline = BaselineKind::kNonstationary;
    const auto serial = run_experiment(c);
    c.threads = 3;
    const auto parallel = run_experiment(c);
    for (std::size_t i = 0; i < c.trials; ++i) {
      CHECK(serial.trials[i].regret.per_step == parallel.trials[i].regret.per_step);
      CHECK(serial.trials[i].pi == parallel.trials[i].pi);
    }
    // Running trials out of order leaves each trace unchanged.
    for (std::size_t i = c.trials; i-- > 0;) {
      const auto alone = run_trial(c, i);
      CHECK(alone.regret.per_step == serial.trials[i].regret.per_step);
      CHECK(alone.z == serial.trials[i].z);
    }
    CHECK(serial.trials[0].regret.per_step != serial.trials[1].regret.per_step);
  }
}

TEST_CASE("output files are byte-identical across runs") {
  ExperimentConfig c = small_config();
  const fs::path d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
  write_outputs(c, run_experiment(c), d1, 0.5);
  c.threads = 2;
  write_outputs(c, run_experiment(c), d2, 0.7);
  for (const char* f : {"trials.csv", "aggregate.csv"}) {
    const std::string a = slurp(d1 / f);
    CHECK(!a.empty());
    CHECK(a == slurp(d2 / f));
  }
  const std::string trials = slurp(d1 / "trials.csv");
  CHECK(trials.rfind("trial,t,regret,cum_regret,pi_t,z_t\n", 0) == 0);
  CHECK(std::count(trials.begin(), trials.end(), '\n') == 1 + 6 * 60);
  const std::string agg = slurp(d1 / "aggregate.csv");
  CHECK(agg.rfind("t,median,q1,q3\n", 0) == 0);
  CHECK(std::count(agg.begin(), agg.end(), '\n') == 61);
  const std::string summary = slurp(d1 / "summary.json");
  CHECK(summary.find("\"sumz\"") != std::string::npos);
  CHECK(summary.find("\"wall_seconds\"") != std::string::npos);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("pi stays within bounds and sumz holds") {
  for (Algorithm alg : {Algorithm::kActionCentered, Algorithm::kBenchmark}) {
    for (BaselineKind b : {BaselineKind::kNonlinear, BaselineKind::kNonstationary}) {
      ExperimentConfig c = small_config();
      c.algorithm = alg;
      c.environment.baseline = b;
      c.horizon = 400;
      const auto result = run_experiment(c);
      for (const auto& tr : result.trials) {
        for (double p : tr.pi) REQUIRE((p >= 0.2 && p <= 0.8));
        for (double r : tr.regret.per_step) REQUIRE(r >= -1e-12);
        if (alg == Algorithm::kActionCentered) CHECK(tr.sumz.satisfied);
      }
    }
  }
}

TEST_CASE("config json") {
  const auto c = config_from_json(R"({
    "algorithm": "benchmark",
    "benchmark_baseline": "none",
    "environment": {"baseline": "nonstationary", "context_process": "gp", "gp_rho": 0.2},
    "bounds": {"pi_min": 0.1, "pi_max": 0.9},
    "v": 0.5, "horizon": 10, "trials": 3, "master_seed": 18446744073709551615
  })");
  CHECK(c.algorithm == Algorithm::kBenchmark);
  CHECK(c.benchmark_baseline == BenchmarkBaseline::kNone);
  CHECK(c.environment.baseline == BaselineKind::kNonstationary);
  CHECK(c.environment.context_process == ContextProcess::kGaussianProcess);
  CHECK(c.environment.gp_rho == 0.2);
  CHECK(c.bounds.pi_min == 0.1);
  CHECK(c.v == 0.5);
  CHECK(c.master_seed == 18446744073709551615ull);

  const auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));

  const auto defaults = config_from_json("{}");
  CHECK(defaults.horizon == 2000);
  CHECK(defaults.trials == 100);
  CHECK(defaults.bounds.pi_min == 0.2);
  CHECK(defaults.bounds.pi_max == 0.8);

  auto parse_code = [](const char* text) {
    try {
      config_from_json(text);
    } catch (const Error& e) {
      return static_cast<int>(e.code());
    }
    return 0;
  };
  CHECK(parse_code(R"({"horizn": 5})") == static_cast<int>(ErrorCode::kParse));
  CHECK(parse_code(R"({"environment": {"bogus": 1}})") == static_cast<int>(ErrorCode::kParse));
  CHECK(parse_code(R"({"algorithm": "ucb"})") == static_cast<int>(ErrorCode::kParse));
  CHECK(parse_code("{not json") == static_cast<int>(ErrorCode::kParse));
  CHECK(parse_code(R"({"v": "one"})") == static_cast<int>(ErrorCode::kParse));
  CHECK(parse_code(R"({"v": -1})") != 0);
  CHECK(parse_code(R"({"trials": 0})") != 0);

  try {
    load_config("/nonexistent/config.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
    CHECK(std::string(e.what()).find("/nonexistent/config.json") != std::string::npos);
  }
}

TEST_CASE("format_double round trips") {
  RandomStream rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal() * std::pow(10.0, static_cast<double>(rng.index(20)) - 10);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
}
