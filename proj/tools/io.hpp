#pragma once

// JSON encodings of spaces, invariants, ideals and lattices.

#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qflat/lattice.hpp"

namespace qflat::io {

using json = nlohmann::json;

/// Malformed input; the CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses JSON text, reporting the line and column of a syntax error.
json parse_json(const std::string& text, const std::string& origin);
/// Reads `source` as inline JSON if it starts with '{', otherwise as a file path.
json load_json(const std::string& source);

Rational rational_from_json(const json& j);
json to_json(const Rational& x);
json to_json(const FractionalIdeal& a);

/// {"n": int, "gram": [[rational strings]]}
QuadraticSpace space_from_json(const json& j);
json to_json(const QuadraticSpace& space);

/// n, d, ram (ascending, "inf" last), s_inf, and t_p when core dimensions are given.
json to_json(const Invariants& inv, const std::map<Integer, int>* core_dims = nullptr);
Invariants invariants_from_json(const json& j);

/// {"ambient": space, "basis": [[rational strings]]}
ZLattice lattice_from_json(const json& j);
json to_json(const ZLattice& l);

json to_json(const IntegerVector& v);
/// "a,b,c" with rational entries.
RationalVector parse_vector(const std::string& text);

}  // namespace qflat::io
