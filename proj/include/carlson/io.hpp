#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include "carlson/ergodic.hpp"
#include "carlson/measure.hpp"
#include "carlson/polynomial.hpp"

namespace carlson {

// Polynomial and measure documents. Parsing is strict: duplicate object keys,
// duplicate frequencies or multi-indices, zero coefficients and unknown
// fields are all ParseErrors. Type invariants raise the type's own error.

/// {"basis_dim": d, "terms": [{"n": 12, "re": 0.0, "im": 1.0}, ...]}
DirichletPolynomial parse_dirichlet(std::string_view json_text);
std::string to_json(const DirichletPolynomial& f);

/// {"terms": [{"alpha": [2, 1], "re": ..., "im": ...}], "basis_dim": d (optional)}
TorusPolynomial parse_torus(std::string_view json_text);
std::string to_json(const TorusPolynomial& F);

/// {"dim": d, "atoms": [{"theta": [...], "c": 0.5}, ...]}
TorusPointMassMeasure parse_mu(std::string_view json_text);
std::string to_json(const TorusPointMassMeasure& mu);

/// {"mu_sequence": [<mu>, ...], "test_polynomials": [<torus polynomial>, ...]}
NestedConstructionPlan parse_nested_plan(std::string_view json_text);

/// JSON Lines: a header, one line per atom, then a trailer holding the level
/// boundaries and cumulative masses. An empty measure is the header alone.
void save_atoms(const AtomicLineMeasure& lambda, std::ostream& out);
std::string save_atoms(const AtomicLineMeasure& lambda);
AtomicLineMeasure load_atoms(std::istream& in);
AtomicLineMeasure load_atoms_text(std::string_view text);

/// T,time_mean,target,abs_error with round-trip (%.17g) formatting.
void write_csv(const ConvergenceRecord& record, std::ostream& out);

std::string read_file(const std::filesystem::path& path);

/// Write through `writer` into a sibling temporary file, then rename it over
/// `path`. `before_rename` runs between the two steps; if anything throws,
/// the temporary is removed and `path` is left untouched.
void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer,
                      const std::function<void(const std::filesystem::path&)>& before_rename = {});

}  // namespace carlson
