#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "carlson/errors.hpp"
#include "carlson/io.hpp"
#include "doctest.h"
#include "random_poly.hpp"

using namespace carlson;
namespace fs = std::filesystem;

namespace {

fs::path fixture(const char* name) { return fs::path(CARLSON_FIXTURES) / name; }

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("carlson_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::size_t parse_error_line(const std::string& text) {
  try {
    (void)load_atoms_text(text);
  } catch (const ParseError& e) {
    return e.line;
  }
  return 0;
}

}  // namespace

TEST_CASE("Dirichlet polynomial documents") {
  const auto f = parse_dirichlet(R"({"basis_dim": 2, "terms": [{"n": 12, "re": 0.0, "im": 1.0}, {"n": 1, "re": 2.5, "im": 0}]})");
  CHECK(f.basis_dim() == 2);
  CHECK(f.terms().at(12) == Complex(0.0, 1.0));
  CHECK(f.terms().at(1) == Complex(2.5, 0.0));
  CHECK(parse_dirichlet(to_json(f)) == f);

  std::mt19937_64 rng(41);
  for (int i = 0; i < 50; ++i) {
    const auto g = carlson::testing::random_dirichlet(rng, 4, 10, 5);
    CHECK(parse_dirichlet(to_json(g)) == g);
  }

  CHECK_THROWS_AS(parse_dirichlet(R"({"basis_dim": 1, "basis_dim": 2, "terms": []})"), ParseError);
  CHECK_THROWS_AS(parse_dirichlet(R"({"basis_dim": 1, "terms": [{"n": 2, "re": 0, "im": 0}]})"), ParseError);
  CHECK_THROWS_AS(parse_dirichlet(R"({"basis_dim": 1, "terms": [{"n": 2, "re": 1}, {"n": 2, "re": 1}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_dirichlet(R"({"basis_dim": 1, "terms": [], "sigma": 1})"), ParseError);
  CHECK_THROWS_AS(parse_dirichlet(R"({"basis_dim": 1, "terms": [{"n": 2, "re": 1, "x": 0}]})"), ParseError);
  CHECK_THROWS_AS(parse_dirichlet(R"({"basis_dim": 1, "terms": [{"n": -2, "re": 1}]})"), ParseError);
  CHECK_THROWS_AS(parse_dirichlet(R"({"basis_dim": 1, "terms": )"), ParseError);
  CHECK_THROWS_AS(parse_dirichlet(R"({"basis_dim": 1, "terms": [{"n": 3, "re": 1}]})"), DimensionError);
  CHECK_THROWS_AS(parse_dirichlet(R"({"basis_dim": 1, "terms": [{"n": 0, "re": 1}]})"), Error);
}

TEST_CASE("torus polynomial documents") {
  const auto F = parse_torus(R"({"terms": [{"alpha": [2, 1], "re": 1.0, "im": -1.0}, {"alpha": [], "re": 3}]})");
  CHECK(F.basis().dimension() == 2);
  CHECK(F.terms().at(MultiIndex{2, 1}) == Complex(1.0, -1.0));
  CHECK(parse_torus(to_json(F)) == F);
  CHECK(parse_torus(R"({"basis_dim": 4, "terms": [{"alpha": [1], "re": 1}]})").basis().dimension() == 4);
  CHECK_THROWS_AS(parse_torus(R"({"terms": [{"alpha": [1, 0], "re": 1}, {"alpha": [1], "re": 2}]})"), ParseError);
  CHECK_THROWS_AS(parse_torus(R"({"terms": [{"alpha": [-1], "re": 1}]})"), ParseError);
}

TEST_CASE("point-mass measure documents") {
  const auto mu = parse_mu(R"({"dim": 2, "atoms": [{"theta": [1.0, 2.5], "c": 0.25}, {"theta": [0, 0], "c": 0.75}]})");
  CHECK(mu.dimension() == 2);
  CHECK(mu.size() == 2);
  CHECK(parse_mu(to_json(mu)) == mu);
  CHECK_THROWS_AS(parse_mu(R"({"dim": 1, "atoms": [{"theta": [0], "c": 0.5}]})"), InvariantError);
  CHECK_THROWS_AS(parse_mu(R"({"dim": 1, "atoms": [{"theta": [0], "c": 1, "w": 1}]})"), ParseError);
  CHECK(parse_mu(read_file(fixture("mu_dirac.json"))).atoms()[0].omega.angle(1) == 2.5);
}

TEST_CASE("nested plan documents") {
  const auto plan = parse_nested_plan(
      R"({"mu_sequence": [{"dim": 1, "atoms": [{"theta": [0], "c": 1}]}],
          "test_polynomials": [{"terms": [{"alpha": [1], "re": 1}]}]})");
  CHECK(plan.mu_sequence.size() == 1);
  CHECK(plan.test_polynomials.size() == 1);
  CHECK_THROWS_AS(parse_nested_plan(R"({"mu_sequence": []})"), ParseError);
}

TEST_CASE("atom files") {
  SUBCASE("round trip of a constructed measure") {
    const TorusPointMassMeasure mu({{TorusPoint({1.0, 2.0}), 0.5}, {TorusPoint({3.0, 0.5}), 0.5}}, 2);
    const auto lambda = build_point_mass_lambda(mu, 3);
    const std::string text = save_atoms(lambda);
    CHECK(load_atoms_text(text) == lambda);
    CHECK(save_atoms(load_atoms_text(text)) == text);
    std::istringstream in(text);
    CHECK(load_atoms(in) == lambda);
  }
  SUBCASE("the empty measure is a header line") {
    const std::string text = save_atoms(AtomicLineMeasure());
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    const auto back = load_atoms_text(text);
    CHECK(back.empty());
    CHECK(back.levels() == 0);
  }
  SUBCASE("the two-atom fixture") {
    const auto lambda = load_atoms_text(read_file(fixture("two_atoms.jsonl")));
    CHECK(lambda.atoms().size() == 2);
    CHECK(lambda.mass_up_to(4.0) == 0.0);
    CHECK(lambda.mass_up_to(4.5) == 1.0);
    CHECK(lambda.mass_up_to(100.0) == 2.0);
    CHECK(lambda.level_boundaries() == std::vector<double>{14.0});
  }
  SUBCASE("errors carry line numbers") {
    const std::string header = R"({"format":"lambda-atoms","version":1,"growth":"2^k","levels":1})";
    const std::string a1 = R"({"t":4.5,"w":1.0,"k":1,"j":1,"m":1})";
    const std::string a2 = R"({"t":13.5,"w":1.0,"k":1,"j":1,"m":2})";
    const std::string trailer = R"({"boundaries":[14.0],"masses":[2.0]})";
    CHECK(parse_error_line(header + "\n" + a2 + "\n" + a1 + "\n" + trailer + "\n") == 3);
    CHECK(parse_error_line(header + "\n" + a1 + "\n" + a2 + "\n") == 4);
    CHECK(parse_error_line(header + "\n" + a1 + "\n" + a2 + "\n" + trailer + "\n" + a1 + "\n") == 5);
    CHECK(parse_error_line(header + "\n" + a1 + "\n" + a2 + "\n" + R"({"boundaries":[14.0],"masses":[3.0]})" + "\n") ==
          4);
    CHECK(parse_error_line(R"({"format":"other","version":1,"growth":"2^k","levels":1})") == 1);
    CHECK(parse_error_line(header + "\n" + R"({"t":4.5,"w":1.0,"k":1,"j":1,"m":1,"x":0})" + "\n" + trailer) == 2);
    CHECK(parse_error_line("") == 1);
  }
}

TEST_CASE("CSV output") {
  ConvergenceRecord record;
  record.rows = {{100.0, 0.1, 1.0 / 3.0, std::abs(0.1 - 1.0 / 3.0)}};
  std::ostringstream out;
  write_csv(record, out);
  const std::string text = out.str();
  CHECK(text.rfind("T,time_mean,target,abs_error\n", 0) == 0);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  char expected[128];
  std::snprintf(expected, sizeof expected, "%.17g,%.17g,%.17g,%.17g\n", 100.0, 0.1, 1.0 / 3.0,
                std::abs(0.1 - 1.0 / 3.0));
  CHECK(text.substr(text.find('\n') + 1) == expected);
}

TEST_CASE("atomic writes") {
  const fs::path dir = scratch_dir();
  const fs::path target = dir / "artifact.txt";
  write_atomically(target, [](std::ostream& o) { o << "first\n"; });
  CHECK(read_file(target) == "first\n");

  SUBCASE("a failure before the rename leaves the old file and no temporary") {
    CHECK_THROWS_AS(write_atomically(
                        target, [](std::ostream& o) { o << "second\n"; },
                        [](const fs::path& tmp) {
                          CHECK(fs::exists(tmp));
                          throw IoError("injected");
                        }),
                    IoError);
    CHECK(read_file(target) == "first\n");
  }
  SUBCASE("a failing writer leaves nothing new behind") {
    const fs::path fresh = dir / "fresh.txt";
    CHECK_THROWS(write_atomically(fresh, [](std::ostream&) { throw std::runtime_error("writer"); }));
    CHECK_FALSE(fs::exists(fresh));
  }
  std::size_t entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++entries;
    CHECK(e.path().filename() == "artifact.txt");
  }
  CHECK(entries == 1);
  CHECK_THROWS_AS(read_file(dir / "missing.json"), IoError);
  CHECK_THROWS_AS(write_atomically(dir / "no" / "such" / "dir.txt", [](std::ostream&) {}), IoError);
  fs::remove_all(dir);
}
