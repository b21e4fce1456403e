#include "io.hpp"

#include <fstream>
#include <sstream>

namespace qflat::io {

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << origin << ":" << line << ":" << col << ": malformed JSON (" << e.what() << ")";
    throw InputError(msg.str());
  }
}

json load_json(const std::string& source) {
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (source[first] == '{' || source[first] == '[')) {
    return parse_json(source, "<inline>");
  }
  std::ifstream in(source);
  if (!in) throw InputError(source + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), source);
}

Rational rational_from_json(const json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(Integer(j.dump()));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid rational: ") + e.what());
  }
  throw InputError("expected a rational string such as \"3/2\", got " + j.dump());
}

json to_json(const Rational& x) { return to_string(x); }
json to_json(const FractionalIdeal& a) { return a.to_string(); }

namespace {

RationalMatrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + ": expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw InputError(std::string(what) + ": rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InputError(std::string(what) + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = rational_from_json(j[i][c]);
  }
  return m;
}

json matrix_to_json(const RationalMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(i, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

QuadraticSpace space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("gram")) throw InputError("space: expected an object with \"gram\"");
  const RationalMatrix g = matrix_from_json(j.at("gram"), "gram");
  if (j.contains("n")) {
    if (!j.at("n").is_number_integer() || j.at("n").get<long long>() != static_cast<long long>(g.rows())) {
      throw InputError("space: \"n\" does not match the Gram matrix");
    }
  }
  try {
    return QuadraticSpace(g);
  } catch (const QuadraticSpaceError& e) {
    throw InputError(e.what());
  }
}

json to_json(const QuadraticSpace& space) {
  return json{{"n", space.dim()}, {"gram", matrix_to_json(space.gram())}};
}

json to_json(const Invariants& inv, const std::map<Integer, int>* core_dims) {
  json ram = json::array();
  for (const Place& v : inv.ram) ram.push_back(v.to_string());  // Place ordering puts inf last
  json out{{"n", inv.n}, {"d", to_string(inv.d)}, {"ram", ram}, {"s_inf", inv.s_inf}};
  if (core_dims) {
    json t = json::object();
    for (const auto& [p, dim] : *core_dims) t[p.get_str()] = dim;
    out["t_p"] = t;
  }
  return out;
}

Invariants invariants_from_json(const json& j) {
  try {
    Invariants inv;
    inv.n = j.at("n").get<int>();
    inv.d = squarefree_part(rational_from_json(j.at("d")));
    inv.s_inf = j.at("s_inf").get<int>();
    for (const json& v : j.at("ram")) {
      const std::string s = v.get<std::string>();
      inv.ram.insert(s == "inf" ? Place::infinity() : Place::prime(Integer(s)));
    }
    return inv;
  } catch (const json::exception& e) {
    throw InputError(std::string("invariants: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invariants: ") + e.what());
  }
}

ZLattice lattice_from_json(const json& j) {
  if (!j.is_object() || !j.contains("ambient") || !j.contains("basis")) {
    throw InputError("lattice: expected an object with \"ambient\" and \"basis\"");
  }
  try {
    return ZLattice(space_from_json(j.at("ambient")), matrix_from_json(j.at("basis"), "basis"));
  } catch (const LatticeError& e) {
    throw InputError(e.what());
  }
}

json to_json(const ZLattice& l) { return json{{"ambient", to_json(l.ambient())}, {"basis", matrix_to_json(l.basis())}}; }

json to_json(const IntegerVector& v) {
  json out = json::array();
  for (const Integer& x : v) out.push_back(x.get_si());
  return out;
}

RationalVector parse_vector(const std::string& text) {
  RationalVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t[]");
    const auto e = item.find_last_not_of(" \t[]");
    if (b == std::string::npos) throw InputError("vector: empty entry in \"" + text + "\"");
    try {
      out.push_back(parse_rational(item.substr(b, e - b + 1)));
    } catch (const std::invalid_argument& ex) {
      throw InputError(std::string("vector: ") + ex.what());
    }
  }
  if (out.empty()) throw InputError("vector: no entries");
  return out;
}

}  // namespace qflat::io
