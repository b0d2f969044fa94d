#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "carlson/harness.hpp"
#include "carlson/io.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace carlson;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures(CARLSON_FIXTURES);

struct Scratch {
  fs::path dir = fs::temp_directory_path() / ("carlson_harness_" + std::to_string(::getpid()));
  Scratch() { fs::create_directories(dir); }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& text = {}) const {
    const fs::path p = dir / name;
    if (!text.empty()) write_atomically(p, [&](std::ostream& o) { o << text; });
    return p.string();
  }
};

struct Result {
  int status;
  nlohmann::json summary;
  std::string err;
};

Result run_config(const ExperimentConfig& c) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = run(c, out, err);
  nlohmann::json summary;
  if (!out.str().empty()) summary = nlohmann::json::parse(out.str());
  return {status, summary, err.str()};
}

Result run_args(std::vector<const char*> args) {
  args.insert(args.begin(), "carlson");
  std::ostringstream out;
  std::ostringstream err;
  const int status = run_cli(static_cast<int>(args.size()), args.data(), out, err);
  nlohmann::json summary;
  if (status != kUsageError && out.str().rfind("{", 0) == 0) summary = nlohmann::json::parse(out.str());
  return {status, summary, err.str()};
}

}  // namespace

TEST_CASE("list and pair parsing") {
  CHECK(parse_list("100,1000,1e4") == std::vector<double>{100, 1000, 10000});
  CHECK_THROWS_AS(parse_list("1,,2"), UsageError);
  CHECK_THROWS_AS(parse_list("1,x"), UsageError);
  const auto pairs = parse_pairs("1,0:0,0;2,1:0,1");
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[1].first == std::vector<std::uint32_t>{2, 1});
  CHECK(pairs[1].second == std::vector<std::uint32_t>{0, 1});
  CHECK_THROWS_AS(parse_pairs("1,0"), UsageError);
  CHECK_THROWS_AS(parse_pairs("-1:0"), UsageError);
  CHECK_THROWS_AS(parse_pairs(""), UsageError);
}

TEST_CASE("validation") {
  ExperimentConfig c;
  c.kind = "nonsense";
  CHECK_THROWS_AS(validate(c), UsageError);
  c.kind = "build-measure";
  CHECK_THROWS_AS(validate(c), UsageError);
  c.mu = "x.json";
  CHECK_NOTHROW(validate(c));
  c.levels = 9;
  CHECK_THROWS_AS(validate(c), UsageError);
  c.levels = 4;
  c.growth = "const:0";
  CHECK_THROWS_AS(validate(c), UsageError);
  c.growth = "default";
  c.budget = 10'000'000'001ULL;
  CHECK_THROWS_AS(validate(c), UsageError);

  ExperimentConfig k;
  k.kind = "kronecker";
  k.theta = {0.0};
  CHECK_NOTHROW(validate(k));
  k.eps = 1e-6;
  CHECK_THROWS_AS(validate(k), UsageError);
  k.eps = 0.1;
  k.solver = "lll";
  CHECK_THROWS_AS(validate(k), UsageError);
  k.solver = "reference";
  k.theta = {0.0, 1.0};
  CHECK_THROWS_AS(validate(k), UsageError);

  ExperimentConfig s;
  s.kind = "verify-sigma";
  s.poly = "p.json";
  s.t_grid = {10.0, 5.0};
  CHECK_THROWS_AS(validate(s), UsageError);

  ExperimentConfig m;
  m.kind = "moments";
  m.pairs = "1:0";
  CHECK_THROWS_AS(validate(m), UsageError);
  m.lebesgue = true;
  CHECK_NOTHROW(validate(m));
  m.atoms = "a.jsonl";
  CHECK_THROWS_AS(validate(m), UsageError);
}

TEST_CASE("each experiment kind runs and reports") {
  Scratch s;
  const std::string poly = (kFixtures / "poly_small.json").string();
  const std::string mu = (kFixtures / "mu_dirac.json").string();

  SUBCASE("verify-sigma") {
    ExperimentConfig c;
    c.kind = "verify-sigma";
    c.poly = poly;
    c.out = s.file("sigma.csv");
    c.mc_samples = 10000;
    c.seed = 3;
    const auto r = run_config(c);
    CHECK(r.status == kPass);
    CHECK(r.summary["kind"] == "verify-sigma");
    CHECK(r.summary["pass"] == true);
    CHECK(r.summary.contains("wall_time"));
    CHECK(read_file(c.out).rfind("T,time_mean,target,abs_error\n", 0) == 0);
    c.tol = 1e-30;
    CHECK(run_config(c).status == kToleranceFailure);
  }
  SUBCASE("build-measure, verify-boundary and moments") {
    ExperimentConfig b;
    b.kind = "build-measure";
    b.mu = mu;
    b.levels = 4;
    b.out = s.file("atoms.jsonl");
    const auto built = run_config(b);
    CHECK(built.status == kPass);
    CHECK(built.summary["key_metrics"]["masses"] == nlohmann::json({2.0, 10.0, 90.0, 1530.0}));
    CHECK(load_atoms_text(read_file(b.out)).atoms().size() == 1530);

    ExperimentConfig v;
    v.kind = "verify-boundary";
    v.poly = poly;
    v.mu = mu;
    v.atoms = b.out;
    v.out = s.file("boundary.csv");
    CHECK(run_config(v).status == kPass);

    ExperimentConfig m;
    m.kind = "moments";
    m.atoms = b.out;
    m.mu = mu;
    m.pairs = "1:0;0,1:0;1,1:0,2";
    m.out = s.file("moments.jsonl");
    const auto moments = run_config(m);
    CHECK(moments.status == kPass);
    CHECK(moments.summary["key_metrics"]["pairs"] == 3);
    std::istringstream lines(read_file(m.out));
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
      const auto j = nlohmann::json::parse(line);
      CHECK(j["abs_error"].get<double>() < 0.2);
      ++count;
    }
    CHECK(count == 3);
  }
  SUBCASE("Lebesgue moments") {
    ExperimentConfig m;
    m.kind = "moments";
    m.lebesgue = true;
    m.pairs = "1:0;1,1:1,1";
    m.tol = 0.01;
    CHECK(run_config(m).status == kPass);
  }
  SUBCASE("nested-build") {
    ExperimentConfig n;
    n.kind = "nested-build";
    n.plan = s.file("plan.json", R"({"mu_sequence": [{"dim": 1, "atoms": [{"theta": [1.0], "c": 1}]}],
                                     "test_polynomials": [{"terms": [{"alpha": [], "re": 1}, {"alpha": [1], "re": 1}]}]})");
    n.levels = 2;
    n.growth = "const:1";
    n.out = s.file("nested.jsonl");
    const auto r = run_config(n);
    CHECK(r.status == kPass);
    CHECK(load_atoms_text(read_file(n.out)).levels() == 2);
  }
  SUBCASE("kronecker") {
    ExperimentConfig k;
    k.kind = "kronecker";
    k.theta = {0.0};
    k.eps = 1e-5;
    k.t_min = 10.0;
    const auto r = run_config(k);
    CHECK(r.status == kPass);
    CHECK(r.summary["q"][0] == -2);
    CHECK(r.summary["t"].get<double>() == doctest::Approx(18.1294).epsilon(1e-5));
  }
}

TEST_CASE("failure statuses") {
  Scratch s;
  SUBCASE("budget exhaustion is a construction failure with a diagnostic") {
    ExperimentConfig k;
    k.kind = "kronecker";
    k.dim = 3;
    k.theta = {1.0, 2.0, 3.0};
    k.eps = 0.01;
    k.budget = 5;
    const auto r = run_config(k);
    CHECK(r.status == kConstructionFailure);
    CHECK(r.summary["error"] == "budget");
    CHECK(r.summary["best_residuals"].size() == 3);
  }
  SUBCASE("construction budget names its level") {
    ExperimentConfig b;
    b.kind = "build-measure";
    b.mu = (kFixtures / "mu_dirac.json").string();
    b.budget = 2;
    const auto r = run_config(b);
    CHECK(r.status == kConstructionFailure);
    CHECK(r.summary["error"] == "construction");
    CHECK(r.summary["level"].get<int>() >= 1);
  }
  SUBCASE("bad inputs are usage errors") {
    ExperimentConfig b;
    b.kind = "build-measure";
    b.mu = s.file("bad_mu.json", R"({"dim": 1, "atoms": [{"theta": [0], "c": 0.7}]})");
    const auto r = run_config(b);
    CHECK(r.status == kUsageError);
    CHECK(r.err.find("sum c_j = 1") != std::string::npos);
    b.mu = (s.dir / "missing.json").string();
    CHECK(run_config(b).status == kUsageError);
  }
}

TEST_CASE("command line") {
  Scratch s;
  CHECK(run_args({"kronecker", "--theta", "3.141592653589793", "--eps", "0.001"}).status == kPass);
  CHECK(run_args({"kronecker", "--theta", "0", "--bogus", "1"}).status == kUsageError);
  CHECK(run_args({}).status == kUsageError);
  CHECK(run_args({"--help"}).status == kPass);

  SUBCASE("flags override the config file") {
    const std::string config =
        s.file("config.json", R"({"kind": "kronecker", "theta": [0.0], "eps": 0.001, "t_min": 10, "budget": 5})");
    CHECK(run_args({"--config", config.c_str()}).status == kConstructionFailure);
    const auto r = run_args({"--config", config.c_str(), "--budget", "100000000"});
    CHECK(r.status == kPass);
    CHECK(r.summary["q"][0] == -2);
  }
  SUBCASE("repeated runs write identical artifacts") {
    const std::string mu = (kFixtures / "mu_dirac.json").string();
    const std::string a = s.file("a.jsonl");
    const std::string b = s.file("b.jsonl");
    CHECK(run_args({"build-measure", "--mu", mu.c_str(), "--levels", "3", "--out", a.c_str()}).status == kPass);
    CHECK(run_args({"build-measure", "--mu", mu.c_str(), "--levels", "3", "--threads", "3", "--out", b.c_str()})
              .status == kPass);
    CHECK(read_file(a) == read_file(b));
  }
  SUBCASE("the installed binary reports exit statuses") {
    const std::string cli = CARLSON_CLI;
    const auto status = [&](const std::string& args) {
      const int raw = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
      return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status("kronecker --theta 0 --eps 0.01") == 0);
    CHECK(status("kronecker --theta 0,1 --eps 0.01") == 2);
    CHECK(status("kronecker --dim 3 --theta 1,2,3 --eps 0.01 --budget 5") == 3);
    const std::string poly = (kFixtures / "poly_small.json").string();
    CHECK(status("verify-sigma --poly " + poly + " --tol 1e-30") == 1);
  }
}
