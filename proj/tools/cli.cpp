#include "cli.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace qflat::cli {

using io::json;

namespace {

struct Options {
  std::string format = "json";
  std::string space;
  std::string invariants;
  std::string lattice;
  std::string q;
  std::string h;
  std::string two_phi;
  std::string file;
  std::string kind = "primes";
  int sweep = 0;
  std::size_t samples = 2;
  bool all_h = false;
  bool per_h = false;
  bool list = false;
  bool constructive = false;
  bool standard = false;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

QuadraticSpace need_space(const Options& o) {
  if (o.space.empty()) throw io::InputError("--space is required");
  return io::space_from_json(io::load_json(o.space));
}

Invariants need_invariants(const Options& o) {
  if (!o.invariants.empty()) return io::invariants_from_json(io::load_json(o.invariants));
  return invariants(need_space(o));
}

Rational need_rational(const std::string& text, const char* flag) {
  if (text.empty()) throw io::InputError(std::string(flag) + " is required");
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw io::InputError(std::string(flag) + ": " + e.what());
  }
}

RationalVector need_vector(const Options& o, std::size_t n) {
  RationalVector h = io::parse_vector(o.h);
  if (h.size() != n) throw io::InputError("--h: expected " + std::to_string(n) + " entries");
  return h;
}

json vector_json(const RationalVector& v) {
  json a = json::array();
  for (const Rational& x : v) a.push_back(to_string(x));
  return a;
}

// ---------------------------------------------------------------------------

int cmd_invariants(const Options& o, json& out) {
  const QuadraticSpace space = need_space(o);
  const std::map<Integer, int> dims = core_dimensions(space);
  out = io::to_json(invariants(space), &dims);
  return kOk;
}

int cmd_complement(const Options& o, json& out) {
  if (o.q.empty() == o.h.empty()) throw io::InputError("complement: give exactly one of --q and --h");
  if (!o.q.empty()) {
    const Rational q = need_rational(o.q, "--q");
    if (q == 0) throw DomainError("complement: q must be nonzero");
    const ComplementInvariants ci = complement_invariants(need_invariants(o), q);
    out = json{{"q", to_string(q)}, {"formal", ci.formal}, {"invariants", io::to_json(ci.inv)}};
    return kOk;
  }
  const QuadraticSpace space = need_space(o);
  const RationalVector h = need_vector(o, space.dim());
  const Rational q = space.value(h);
  if (q == 0) throw DomainError("complement: h is isotropic");
  const Invariants formula = complement_invariants(invariants(space), q).inv;
  const Invariants direct = invariants(complement_space(space, h));
  const bool match = formula == direct;
  out = json{{"q", to_string(q)},
             {"h", vector_json(h)},
             {"formula", io::to_json(formula)},
             {"direct", io::to_json(direct)},
             {"match", match}};
  return match ? kOk : kCheckFailed;
}

int cmd_disc_ideal(const Options& o, json& out) {
  const Invariants inv = need_invariants(o);
  const FractionalIdeal formula = discriminant_ideal(inv);
  out = json{{"invariants", io::to_json(inv)}, {"disc", io::to_json(formula)}};
  if (!o.constructive) return kOk;
  const ZLattice l = maximal_lattice(need_space(o));
  const FractionalIdeal built(l.disc());
  out["constructive"] = io::to_json(built);
  out["match"] = built == formula;
  return built == formula ? kOk : kCheckFailed;
}

int cmd_bq(const Options& o, json& out) {
  const Rational q = need_rational(o.q, "--q");
  if (q == 0) throw DomainError("bq: q must be nonzero");
  const DiscriminantData d = discriminant_data(need_invariants(o), q);
  out = json{{"q", to_string(q)},
             {"disc_v", io::to_json(d.disc_v)},
             {"disc_w", io::to_json(d.disc_w)},
             {"square", io::to_json(FractionalIdeal(Rational(2 * q)) * d.disc_v / d.disc_w)},
             {"b_q", io::to_json(d.b_q)},
             {"complement", io::to_json(d.inv_w)}};
  return kOk;
}

int cmd_section(const Options& o, json& out) {
  if (!o.h.empty()) {
    const QuadraticSpace space = need_space(o);
    const RationalVector h = need_vector(o, space.dim());
    if (space.value(h) == 0) throw DomainError("section: h is isotropic");
    const SectionVerification v = verify_section_formula(space, h);
    out = json{{"q", to_string(v.q)},
               {"h", vector_json(h)},
               {"two_phi", io::to_json(v.two_phi_hl)},
               {"formula", io::to_json(v.formula)},
               {"oracle", io::to_json(v.oracle)},
               {"disc_l", io::to_json(v.disc_l)},
               {"disc_m", io::to_json(v.disc_m)},
               {"maximal", v.oracle.is_unit()},
               {"match", v.match}};
    return v.match ? kOk : kCheckFailed;
  }
  const Rational q = need_rational(o.q, "--q");
  const Rational two_phi = need_rational(o.two_phi, "--two-phi");
  if (q == 0 || two_phi == 0) throw DomainError("section: q and 2φ(h,L) must be nonzero");
  const SectionReport r = section_ideal(need_invariants(o), q, FractionalIdeal(two_phi));
  out = json{{"q", to_string(q)},
             {"two_phi", io::to_json(r.two_phi_hl)},
             {"b_q", io::to_json(r.data.b_q)},
             {"disc_v", io::to_json(r.data.disc_v)},
             {"disc_w", io::to_json(r.data.disc_w)},
             {"index", io::to_json(r.index_ideal)},
             {"maximal", r.maximal},
             {"maximal_by_discriminants", r.maximal_by_discriminants}};
  return kOk;
}

int cmd_maximal(const Options& o, json& out) {
  const QuadraticSpace space = need_space(o);
  const ZLattice l = maximal_lattice(space);
  const FractionalIdeal formula = discriminant_ideal(invariants(space));
  const FractionalIdeal built(l.disc());
  json primes = json::array();
  for (const Integer& p : non_maximal_primes(l)) primes.push_back(p.get_str());
  const bool ok = l.is_integral() && primes.empty() && built == formula;
  out = json{{"lattice", io::to_json(l)},
             {"disc", io::to_json(built)},
             {"formula", io::to_json(formula)},
             {"certificate",
              {{"integral", l.is_integral()}, {"non_maximal_primes", primes}, {"disc_matches_formula", built == formula}}}};
  return ok ? kOk : kCheckFailed;
}

ZLattice lattice_for(const Options& o) {
  if (!o.lattice.empty()) return io::lattice_from_json(io::load_json(o.lattice));
  const QuadraticSpace space = need_space(o);
  return o.standard ? ZLattice::standard(space) : maximal_lattice(space);
}

int cmd_enumerate(const Options& o, json& out) {
  const Rational q = need_rational(o.q, "--q");
  if (q <= 0) throw DomainError("enumerate: q must be positive");
  const ZLattice l = lattice_for(o);
  const std::vector<IntegerVector> vs = enumerate_vectors(l, q);
  json list = json::array();
  for (const IntegerVector& v : vs) list.push_back(io::to_json(v));
  out = json{{"q", to_string(q)}, {"count", vs.size()}, {"lattice", io::to_json(l)}, {"vectors", list}};
  return kOk;
}

bool squarefree(long q) {
  for (long d = 2; d * d <= q; ++d)
    if (q % (d * d) == 0) return false;
  return true;
}

std::vector<Rational> sweep_values(const Options& o) {
  std::vector<Rational> qs;
  if (o.kind != "primes" && o.kind != "squarefree") throw io::InputError("--kind must be primes or squarefree");
  for (long q = 1; q <= o.sweep; ++q) {
    if (o.kind == "primes" ? is_prime(Integer(q)) : squarefree(q)) qs.emplace_back(q);
  }
  return qs;
}

json class_row(const Rational& q, const FractionalIdeal& two_phi, const FractionalIdeal& formula,
               const FractionalIdeal& oracle, std::uint64_t count, bool match) {
  return json{{"q", to_string(q)},
              {"two_phi", io::to_json(two_phi)},
              {"formula", io::to_json(formula)},
              {"oracle", io::to_json(oracle)},
              {"count", count},
              {"match", match}};
}

int cmd_verify(const Options& o, json& out) {
  const ZLattice l = lattice_for(o);
  if (!o.q.empty() && o.sweep > 0) throw io::InputError("verify: give at most one of --q and --sweep");
  json rows = json::array();
  bool all = true;
  std::uint64_t vectors = 0, full = 0;
  if (!o.q.empty() && !o.all_h) {
    const Rational q = need_rational(o.q, "--q");
    if (q <= 0) throw DomainError("verify: q must be positive");
    const std::vector<IntegerVector> vs = enumerate_vectors(l, q);
    if (vs.empty()) throw DomainError("verify: the lattice has no vector of norm " + to_string(q));
    const RationalVector h = l.vector(vs.front());
    const SectionVerification v = verify_section_formula(l, h);
    json row = class_row(v.q, v.two_phi_hl, v.formula, v.oracle, 1, v.match);
    row["h"] = vector_json(h);
    rows.push_back(row);
    all = v.match;
    vectors = full = 1;
  } else {
    SweepOptions so;
    so.per_h_full = o.per_h;
    so.full_checks_per_class = o.samples;
    so.threads = configured_threads();
    std::vector<Rational> qs;
    if (!o.q.empty()) {
      qs.push_back(need_rational(o.q, "--q"));
      if (qs.front() <= 0) throw DomainError("verify: q must be positive");
    } else {
      Options with_default = o;
      if (with_default.sweep <= 0) with_default.sweep = 30;
      qs = sweep_values(with_default);
    }
    const SweepSummary s = sweep_sections(l, qs, so);
    for (const SweepClass& c : s.classes) rows.push_back(class_row(c.q, c.two_phi_hl, c.formula, c.oracle, c.count, c.match));
    all = s.all_match;
    vectors = s.vectors;
    full = s.full_route_checks;
  }
  out = json{{"lattice_disc", io::to_json(FractionalIdeal(l.disc()))},
             {"rows", rows},
             {"vectors", vectors},
             {"full_route_checks", full},
             {"all_match", all}};
  return all ? kOk : kCheckFailed;
}

int cmd_fixtures(const Options& o, json& out) {
  const json doc = o.file.empty() ? io::parse_json(embedded_fixtures(), "<embedded fixtures>") : io::load_json(o.file);
  if (!doc.is_object() || !doc.contains("fixtures") || !doc.at("fixtures").is_array()) {
    throw io::InputError("fixtures: expected an object with a \"fixtures\" array");
  }
  if (o.list) {
    json names = json::array();
    for (const json& f : doc.at("fixtures")) names.push_back({{"name", f.value("name", "")}, {"anchor", f.value("anchor", "")}});
    out = json{{"fixtures", names}};
    return kOk;
  }
  const std::vector<FixtureResult> results = run_fixtures(doc);
  json list = json::array();
  std::size_t passed = 0;
  for (const FixtureResult& r : results) {
    passed += r.pass;
    json item{{"name", r.name}, {"pass", r.pass}};
    if (!r.detail.empty()) item["detail"] = r.detail;
    list.push_back(item);
  }
  std::ostringstream summary;
  summary << passed << "/" << results.size() << " fixtures pass";
  out = json{{"results", list}, {"summary", summary.str()}};
  return passed == results.size() ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// Table rendering

std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render_table(const std::string& command, const json& j, std::ostream& out) {
  if (command == "fixtures" && j.contains("results")) {
    for (const json& r : j.at("results")) {
      out << (r.at("pass").get<bool>() ? "PASS " : "FAIL ") << r.at("name").get<std::string>();
      if (r.contains("detail")) out << "  (" << r.at("detail").get<std::string>() << ")";
      out << "\n";
    }
    out << j.at("summary").get<std::string>() << "\n";
    return;
  }
  if (command == "fixtures" && j.contains("fixtures")) {
    for (const json& f : j.at("fixtures"))
      out << f.at("name").get<std::string>() << "  [" << f.at("anchor").get<std::string>() << "]\n";
    return;
  }
  if (command == "verify") {
    out << std::left << std::setw(8) << "q" << std::setw(10) << "2phi" << std::setw(10) << "formula" << std::setw(10)
        << "oracle" << std::setw(12) << "count"
        << "match\n";
    for (const json& r : j.at("rows")) {
      out << std::setw(8) << scalar(r.at("q")) << std::setw(10) << scalar(r.at("two_phi")) << std::setw(10)
          << scalar(r.at("formula")) << std::setw(10) << scalar(r.at("oracle")) << std::setw(12)
          << scalar(r.at("count")) << (r.at("match").get<bool>() ? "yes" : "NO") << "\n";
    }
    out << "vectors " << scalar(j.at("vectors")) << ", full-route checks " << scalar(j.at("full_route_checks"))
        << ", all match: " << (j.at("all_match").get<bool>() ? "yes" : "no") << "\n";
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) out << it.key() << ": " << scalar(it.value()) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact invariants, discriminant ideals and section indices of rational quadratic spaces", "qflat"};
  app.set_help_flag("--help", "Print help");  // -h is taken by the vector option
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "table"}));

  auto add_space = [&](CLI::App* s) { s->add_option("--space", o.space, "Space JSON file or inline JSON"); };
  auto add_inv = [&](CLI::App* s) {
    s->add_option("--invariants", o.invariants, "Invariants JSON file or inline JSON (instead of --space)");
  };

  CLI::App* inv = app.add_subcommand("invariants", "Invariant tuple and local core dimensions");
  add_space(inv);
  CLI::App* comp = app.add_subcommand("complement", "Invariants of the orthogonal complement");
  add_space(comp);
  add_inv(comp);
  comp->add_option("--q", o.q, "Value q = φ[h]");
  comp->add_option("--h", o.h, "Vector h, comma separated; compares with direct restriction");
  CLI::App* disc = app.add_subcommand("disc-ideal", "Discriminant ideal of a maximal lattice");
  add_space(disc);
  add_inv(disc);
  disc->add_flag("--constructive", o.constructive, "Also build a maximal lattice and compare");
  CLI::App* bq = app.add_subcommand("bq", "The ideal b(q)");
  add_space(bq);
  add_inv(bq);
  bq->add_option("--q", o.q, "Value q")->required();
  CLI::App* sec = app.add_subcommand("section", "Index ideal [M/L∩W]");
  add_space(sec);
  add_inv(sec);
  sec->add_option("--q", o.q, "Value q");
  sec->add_option("--two-phi", o.two_phi, "Generator of 2φ(h,L)");
  sec->add_option("--h", o.h, "Vector h; runs the constructive oracle on a maximal lattice");
  CLI::App* mx = app.add_subcommand("maximal", "A maximal lattice with its certificate");
  add_space(mx);
  CLI::App* en = app.add_subcommand("enumerate", "Vectors of norm q in a definite lattice");
  add_space(en);
  en->add_option("--lattice", o.lattice, "Lattice JSON {ambient, basis}");
  en->add_flag("--standard", o.standard, "Use Z^n instead of a maximal lattice");
  en->add_option("--q", o.q, "Norm q")->required();
  CLI::App* ver = app.add_subcommand("verify", "Check the section formula against the lattice oracle");
  add_space(ver);
  ver->add_option("--lattice", o.lattice, "Maximal lattice JSON {ambient, basis}");
  ver->add_option("--q", o.q, "Single norm q");
  ver->add_flag("--all-h", o.all_h, "With --q: every h of norm q");
  ver->add_option("--sweep", o.sweep, "Sweep q up to this bound (default 30)");
  ver->add_option("--kind", o.kind, "primes or squarefree");
  ver->add_flag("--per-h", o.per_h, "Run the full enlargement for every h");
  ver->add_option("--samples", o.samples, "Full enlargement checks per (q, 2φ) class");
  CLI::App* fix = app.add_subcommand("fixtures", "Reproduce the shipped reference values");
  fix->add_flag("--list", o.list, "List fixture names");
  fix->add_option("--file", o.file, "Fixture file (default: the embedded copy)");

  std::vector<const char*> argv{"qflat"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qflat: " << e.what() << "\n";
    return kBadInput;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  json result;
  int code = kOk;
  try {
    if (command == "invariants") code = cmd_invariants(o, result);
    else if (command == "complement") code = cmd_complement(o, result);
    else if (command == "disc-ideal") code = cmd_disc_ideal(o, result);
    else if (command == "bq") code = cmd_bq(o, result);
    else if (command == "section") code = cmd_section(o, result);
    else if (command == "maximal") code = cmd_maximal(o, result);
    else if (command == "enumerate") code = cmd_enumerate(o, result);
    else if (command == "verify") code = cmd_verify(o, result);
    else code = cmd_fixtures(o, result);
  } catch (const io::InputError& e) {
    err << "qflat " << command << ": " << e.what() << "\n";
    return kBadInput;
  } catch (const ImplementationFault& e) {
    err << "qflat " << command << ": internal error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    err << "qflat " << command << ": " << e.what() << "\n";
    return kDomainError;
  }
  if (o.format == "table") {
    render_table(command, result, out);
  } else {
    out << result.dump(2) << "\n";
  }
  return code;
}

namespace {

std::string ideal_string(const json& v) { return FractionalIdeal(io::rational_from_json(v)).to_string(); }

FixtureResult evaluate(const json& f, const json& spaces) {
  FixtureResult r;
  r.name = f.value("name", "<unnamed>");
  r.anchor = f.value("anchor", "");
  try {
    const std::string kind = f.at("kind").get<std::string>();
    const json& expect = f.at("expect");
    const QuadraticSpace space = io::space_from_json(spaces.at(f.at("space").get<std::string>()));
    const Invariants inv = invariants(space);
    auto q = [&] { return io::rational_from_json(f.at("q")); };
    auto compare = [&](const std::string& got, const std::string& want) {
      r.pass = got == want;
      if (!r.pass) r.detail = "expected " + want + ", got " + got;
    };
    if (kind == "invariants") {
      compare(io::to_json(inv).dump(), io::to_json(io::invariants_from_json(expect)).dump());
    } else if (kind == "complement") {
      compare(io::to_json(complement_invariants(inv, q()).inv).dump(),
              io::to_json(io::invariants_from_json(expect)).dump());
    } else if (kind == "disc-ideal") {
      compare(discriminant_ideal(inv).to_string(), ideal_string(expect.at("disc")));
    } else if (kind == "disc-w") {
      compare(discriminant_data(inv, q()).disc_w.to_string(), ideal_string(expect.at("disc_w")));
    } else if (kind == "bq") {
      compare(b_of_q(inv, q()).to_string(), ideal_string(expect.at("b_q")));
    } else if (kind == "section") {
      const SectionReport s = section_ideal(inv, q(), FractionalIdeal(io::rational_from_json(f.at("two_phi"))));
      const std::string got = s.index_ideal.to_string() + (s.maximal ? " maximal" : " not maximal");
      const std::string want =
          ideal_string(expect.at("index")) + (expect.at("maximal").get<bool>() ? " maximal" : " not maximal");
      compare(got, want);
      if (r.pass && s.maximal != s.maximal_by_discriminants) {
        r.pass = false;
        r.detail = "the two maximality criteria disagree";
      }
    } else {
      r.detail = "unknown fixture kind \"" + kind + "\"";
    }
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = e.what();
  }
  return r;
}

}  // namespace

std::vector<FixtureResult> run_fixtures(const json& doc) {
  const json spaces = doc.value("spaces", json::object());
  std::vector<FixtureResult> out;
  for (const json& f : doc.at("fixtures")) out.push_back(evaluate(f, spaces));
  return out;
}

}  // namespace qflat::cli
