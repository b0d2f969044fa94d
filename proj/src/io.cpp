#include "carlson/io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "carlson/errors.hpp"
#include "json.hpp"

namespace carlson {
namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

json parse_strict(std::string_view text, std::size_t line = 0) {
  std::vector<std::set<std::string>> keys;
  const json::parser_callback_t reject_duplicates = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        keys.emplace_back();
        break;
      case json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!keys.back().insert(key).second) throw ParseError("duplicate key \"" + key + "\"", line);
        break;
      }
      case json::parse_event_t::object_end:
        keys.pop_back();
        break;
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(text.begin(), text.end(), reject_duplicates);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), line);
  }
}

void expect_object(const json& j, const char* what, std::initializer_list<std::string_view> allowed,
                   std::size_t line = 0) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object", line);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ParseError(std::string("unknown field \"") + key + "\" in " + what, line);
  }
}

const json& field(const json& j, const char* key, const char* what, std::size_t line = 0) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string(what) + " lacks \"" + key + "\"", line);
  return *it;
}

double number(const json& j, const char* what, std::size_t line = 0) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number", line);
  return j.get<double>();
}

double optional_number(const json& obj, const char* key, const char* what, std::size_t line = 0) {
  const auto it = obj.find(key);
  return it == obj.end() ? 0.0 : number(*it, what, line);
}

std::uint64_t unsigned_integer(const json& j, const char* what, std::size_t line = 0) {
  if (!j.is_number_unsigned()) {
    if (j.is_number_integer()) throw ParseError(std::string(what) + " must be non-negative", line);
    if (j.is_number_float()) {
      const double v = j.get<double>();
      if (v >= 0.0 && v == std::floor(v) && v < 9007199254740992.0) return static_cast<std::uint64_t>(v);
    }
    throw ParseError(std::string(what) + " must be a non-negative integer", line);
  }
  return j.get<std::uint64_t>();
}

std::int64_t signed_integer(const json& j, const char* what, std::size_t line = 0) {
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw ParseError(std::string(what) + " out of range", line);
    }
    return static_cast<std::int64_t>(v);
  }
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer", line);
  return j.get<std::int64_t>();
}

const json& array_field(const json& j, const char* key, const char* what, std::size_t line = 0) {
  const json& a = field(j, key, what, line);
  if (!a.is_array()) throw ParseError(std::string(what) + " \"" + key + "\" must be an array", line);
  return a;
}

Complex coefficient(const json& term, const char* what) {
  const Complex a{optional_number(term, "re", what), optional_number(term, "im", what)};
  if (a == Complex{}) throw ParseError(std::string(what) + " has a zero coefficient");
  return a;
}

DirichletPolynomial dirichlet_from(const json& j) {
  expect_object(j, "Dirichlet polynomial", {"basis_dim", "terms"});
  const auto dim = unsigned_integer(field(j, "basis_dim", "Dirichlet polynomial"), "basis_dim");
  DirichletPolynomial::Terms terms;
  for (const json& term : array_field(j, "terms", "Dirichlet polynomial")) {
    expect_object(term, "Dirichlet term", {"n", "re", "im"});
    const auto n = unsigned_integer(field(term, "n", "Dirichlet term"), "frequency n");
    if (!terms.emplace(n, coefficient(term, "Dirichlet term")).second) {
      throw ParseError("duplicate frequency n = " + std::to_string(n));
    }
  }
  return DirichletPolynomial(std::move(terms), static_cast<std::size_t>(dim));
}

TorusPolynomial torus_from(const json& j) {
  expect_object(j, "torus polynomial", {"basis_dim", "terms"});
  TorusPolynomial::Terms terms;
  std::size_t longest = 1;
  for (const json& term : array_field(j, "terms", "torus polynomial")) {
    expect_object(term, "torus term", {"alpha", "re", "im"});
    std::vector<std::uint32_t> exponents;
    for (const json& e : array_field(term, "alpha", "torus term")) {
      const auto v = unsigned_integer(e, "exponent");
      if (v > std::numeric_limits<std::uint32_t>::max()) throw ParseError("exponent out of range");
      exponents.push_back(static_cast<std::uint32_t>(v));
    }
    MultiIndex alpha(std::move(exponents));
    longest = std::max(longest, alpha.length());
    if (!terms.emplace(alpha, coefficient(term, "torus term")).second) {
      throw ParseError("duplicate multi-index in torus polynomial");
    }
  }
  std::size_t dim = longest;
  if (const auto it = j.find("basis_dim"); it != j.end()) dim = unsigned_integer(*it, "basis_dim");
  if (dim == 0) throw ParseError("basis_dim must be >= 1");
  return TorusPolynomial(std::move(terms), PrimeBasis(dim));
}

TorusPointMassMeasure mu_from(const json& j) {
  expect_object(j, "point-mass measure", {"dim", "atoms"});
  const auto dim = unsigned_integer(field(j, "dim", "point-mass measure"), "dim");
  std::vector<TorusAtom> atoms;
  for (const json& a : array_field(j, "atoms", "point-mass measure")) {
    expect_object(a, "measure atom", {"theta", "c"});
    std::vector<double> theta;
    for (const json& x : array_field(a, "theta", "measure atom")) theta.push_back(number(x, "angle"));
    atoms.push_back({TorusPoint(std::move(theta)), number(field(a, "c", "measure atom"), "weight c")});
  }
  return TorusPointMassMeasure(std::move(atoms), static_cast<std::size_t>(dim));
}

}  // namespace

DirichletPolynomial parse_dirichlet(std::string_view text) { return dirichlet_from(parse_strict(text)); }

std::string to_json(const DirichletPolynomial& f) {
  ordered j;
  j["basis_dim"] = f.basis_dim();
  j["terms"] = ordered::array();
  for (const auto& [n, a] : f.terms()) j["terms"].push_back({{"n", n}, {"re", a.real()}, {"im", a.imag()}});
  return j.dump();
}

TorusPolynomial parse_torus(std::string_view text) { return torus_from(parse_strict(text)); }

std::string to_json(const TorusPolynomial& F) {
  ordered j;
  j["basis_dim"] = F.basis().dimension();
  j["terms"] = ordered::array();
  for (const auto& [alpha, a] : F.terms()) {
    const auto e = alpha.exponents();
    j["terms"].push_back({{"alpha", std::vector<std::uint32_t>(e.begin(), e.end())}, {"re", a.real()}, {"im", a.imag()}});
  }
  return j.dump();
}

TorusPointMassMeasure parse_mu(std::string_view text) { return mu_from(parse_strict(text)); }

std::string to_json(const TorusPointMassMeasure& mu) {
  ordered j;
  j["dim"] = mu.dimension();
  j["atoms"] = ordered::array();
  for (const TorusAtom& a : mu.atoms()) {
    const auto theta = a.omega.angles();
    j["atoms"].push_back({{"theta", std::vector<double>(theta.begin(), theta.end())}, {"c", a.c}});
  }
  return j.dump();
}

NestedConstructionPlan parse_nested_plan(std::string_view text) {
  const json j = parse_strict(text);
  expect_object(j, "nested plan", {"mu_sequence", "test_polynomials"});
  NestedConstructionPlan plan;
  for (const json& mu : array_field(j, "mu_sequence", "nested plan")) plan.mu_sequence.push_back(mu_from(mu));
  for (const json& F : array_field(j, "test_polynomials", "nested plan")) plan.test_polynomials.push_back(torus_from(F));
  return plan;
}

void save_atoms(const AtomicLineMeasure& lambda, std::ostream& out) {
  ordered header;
  header["format"] = "lambda-atoms";
  header["version"] = 1;
  header["growth"] = lambda.growth().name();
  header["levels"] = lambda.levels();
  out << header.dump() << '\n';
  for (const LineAtom& a : lambda.atoms()) {
    ordered line;
    line["t"] = a.t;
    line["w"] = a.w;
    line["k"] = a.level;
    line["j"] = a.source;
    line["m"] = a.repetition;
    out << line.dump() << '\n';
  }
  if (lambda.levels() > 0) {
    ordered trailer;
    trailer["boundaries"] = lambda.level_boundaries();
    trailer["masses"] = lambda.total_mass_by_level();
    out << trailer.dump() << '\n';
  }
}

std::string save_atoms(const AtomicLineMeasure& lambda) {
  std::ostringstream out;
  save_atoms(lambda, out);
  return out.str();
}

AtomicLineMeasure load_atoms(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;

  if (!std::getline(in, text)) throw ParseError("missing header", 1);
  line_no = 1;
  const json header = parse_strict(text, line_no);
  expect_object(header, "header", {"format", "version", "growth", "levels"}, line_no);
  if (field(header, "format", "header", line_no) != "lambda-atoms") throw ParseError("not a lambda-atoms file", line_no);
  if (field(header, "version", "header", line_no) != 1) throw ParseError("unsupported version", line_no);
  const json& growth_field = field(header, "growth", "header", line_no);
  if (!growth_field.is_string()) throw ParseError("growth must be a string", line_no);
  GrowthSchedule growth = GrowthSchedule::powers_of_two();
  try {
    growth = GrowthSchedule::parse(growth_field.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(e.what(), line_no);
  }
  const auto levels = unsigned_integer(field(header, "levels", "header", line_no), "levels", line_no);

  std::vector<LineAtom> atoms;
  std::vector<double> boundaries;
  std::vector<double> masses;
  bool have_trailer = false;
  std::size_t trailer_line = 0;

  while (std::getline(in, text)) {
    ++line_no;
    if (have_trailer) throw ParseError("content after the trailer", line_no);
    const json j = parse_strict(text, line_no);
    if (!j.is_object()) throw ParseError("expected a JSON object", line_no);
    if (j.contains("boundaries")) {
      expect_object(j, "trailer", {"boundaries", "masses"}, line_no);
      for (const json& b : array_field(j, "boundaries", "trailer", line_no)) boundaries.push_back(number(b, "boundary", line_no));
      for (const json& m : array_field(j, "masses", "trailer", line_no)) masses.push_back(number(m, "mass", line_no));
      have_trailer = true;
      trailer_line = line_no;
      continue;
    }
    expect_object(j, "atom", {"t", "w", "k", "j", "m"}, line_no);
    LineAtom a{};
    a.t = number(field(j, "t", "atom", line_no), "t", line_no);
    a.w = number(field(j, "w", "atom", line_no), "w", line_no);
    a.level = static_cast<int>(signed_integer(field(j, "k", "atom", line_no), "k", line_no));
    a.source = static_cast<int>(signed_integer(field(j, "j", "atom", line_no), "j", line_no));
    a.repetition = signed_integer(field(j, "m", "atom", line_no), "m", line_no);
    if (!atoms.empty() && !(a.t > atoms.back().t)) throw ParseError("atom times must strictly increase", line_no);
    atoms.push_back(a);
  }

  if (!have_trailer) {
    if (levels > 0 || !atoms.empty()) throw ParseError("missing trailer with boundaries and masses", line_no + 1);
    return AtomicLineMeasure({}, {}, {}, growth);
  }
  if (boundaries.size() != levels) throw ParseError("trailer lists a different number of levels than the header", trailer_line);
  try {
    return AtomicLineMeasure(std::move(atoms), std::move(boundaries), std::move(masses), growth);
  } catch (const InvariantError& e) {
    throw ParseError(e.what(), trailer_line);
  }
}

AtomicLineMeasure load_atoms_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_atoms(in);
}

void write_csv(const ConvergenceRecord& record, std::ostream& out) {
  out << "T,time_mean,target,abs_error\n";
  char buf[128];
  for (const ConvergenceRow& r : record.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.T, r.time_mean, r.target, r.abs_error);
    out << buf;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer,
                      const std::function<void(const std::filesystem::path&)>& before_rename) {
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot create " + tmp.string());
      writer(out);
      out.flush();
      if (!out) throw IoError("write to " + tmp.string() + " failed");
    }
    if (before_rename) before_rename(tmp);
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw;
  }
}

}  // namespace carlson
