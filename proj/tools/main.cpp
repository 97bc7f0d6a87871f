// superdelta: build the named superalgebras, check their structure, and
// solve for delta-(super)derivation spaces with exact arithmetic.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "superdelta/analysis.hpp"
#include "superdelta/constructions.hpp"
#include "superdelta/io.hpp"

using namespace superdelta;

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point start = Clock::now();
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
        .count();
  }
};

void write_report(const std::string& path, const std::string& command,
                  const Json& inputs, const Json& results, std::int64_t ms) {
  if (path.empty()) return;
  Json rep;
  rep["command"] = command;
  rep["inputs"] = inputs;
  rep["results"] = results;
  rep["timing_ms"] = ms;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << rep.dump(2) << "\n";
}

FieldDesc parse_field(const std::string& text) {
  if (text == "Q" || text == "q") return FieldDesc::rationals();
  if (text.size() > 1 && (text[0] == 'F' || text[0] == 'f'))
    return FieldDesc::prime_field(std::stoull(text.substr(1)));
  throw std::runtime_error("bad field '" + text + "' (expected Q or F<p>)");
}

std::string sibling_path(const std::string& out, const std::string& tag) {
  std::filesystem::path p(out);
  std::filesystem::path q = p.parent_path() / (p.stem().string() + "." + tag +
                                               p.extension().string());
  return q.string();
}

Json dims_json(const TrivialityReport& rep) {
  return Json{{"space", rep.space_dim},
              {"trivial", rep.trivial_dim},
              {"nontrivial", rep.nontrivial_dim}};
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m.at(r, c).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<std::uint8_t> parse_parity(const std::string& text) {
  if (text == "even") return std::uint8_t{0};
  if (text == "odd") return std::uint8_t{1};
  if (text == "any") return std::nullopt;
  throw std::runtime_error("bad parity '" + text + "' (expected even, odd or any)");
}

int cmd_build(const std::string& name, std::size_t m, std::size_t n, std::uint64_t p,
              const std::string& field_text, const std::string& gamma_path,
              const std::string& bracket_path, const std::string& algebra_path,
              const std::string& out) {
  auto write_double = [&](const SuperAlgebra& gamma, const Bracket& br) {
    SuperAlgebra dbl = kantor_double(gamma, br);
    std::string gpath = sibling_path(out, "gamma");
    std::string bpath = sibling_path(out, "bracket");
    save_algebra(gamma, gpath);
    save_bracket(br, bpath, std::filesystem::path(gpath).filename().string());
    save_algebra(dbl, out);
    std::printf("wrote %s (dim %zu), %s, %s\n", out.c_str(), dbl.dim, gpath.c_str(),
                bpath.c_str());
  };

  if (name == "grassmann") {
    SuperAlgebra g = grassmann(n, parse_field(field_text));
    save_algebra(g, out);
    std::printf("wrote %s (dim %zu)\n", out.c_str(), g.dim);
  } else if (name == "bmn") {
    SuperAlgebra b = b_mn(m, n, p);
    save_algebra(b, out);
    std::printf("wrote %s (dim %zu)\n", out.c_str(), b.dim);
  } else if (name == "kantor-double") {
    SuperAlgebra gamma = load_algebra(gamma_path);
    BracketBundle bundle = load_bracket(bracket_path);
    if (bundle.gamma->dim != gamma.dim || !(bundle.gamma->field == gamma.field))
      throw std::runtime_error("bracket file does not match the gamma file");
    Bracket br(gamma);
    br.table = bundle.bracket.table;
    SuperAlgebra dbl = kantor_double(gamma, br);
    save_algebra(dbl, out);
    std::printf("wrote %s (dim %zu)\n", out.c_str(), dbl.dim);
  } else if (name == "vector-type") {
    TruncatedPoly b = truncated_poly(m, p);
    Derivation d = partial_derivative(b, 0);
    Bracket br = vector_bracket(b.algebra, d);
    write_double(b.algebra, br);
  } else if (name == "poisson-double") {
    SuperAlgebra g = grassmann(n, parse_field(field_text));
    Bracket br = poisson_grassmann(g);
    write_double(g, br);
  } else if (name == "cheng-kac") {
    TruncatedPoly b = truncated_poly(m, p);
    Derivation d = partial_derivative(b, 0);
    SuperAlgebra ck = cheng_kac(b.algebra, d);
    save_algebra(ck, out);
    std::printf("wrote %s (dim %zu)\n", out.c_str(), ck.dim);
  } else if (name == "b12" || name == "b42") {
    StarAlgebra sa = name == "b12" ? b12(FieldDesc::prime_field(p))
                                   : b42(FieldDesc::prime_field(p));
    save_algebra(sa.algebra, out);
    std::printf("wrote %s (dim %zu)\n", out.c_str(), sa.algebra.dim);
  } else if (name == "h3-b12" || name == "h3-b42") {
    StarAlgebra sa = name == "h3-b12" ? b12(FieldDesc::prime_field(p))
                                      : b42(FieldDesc::prime_field(p));
    SuperAlgebra h = h3(sa);
    save_algebra(h, out);
    std::printf("wrote %s (dim %zu)\n", out.c_str(), h.dim);
  } else if (name == "plus") {
    SuperAlgebra a = load_algebra(algebra_path);
    save_algebra(plus(a), out);
    std::printf("wrote %s (dim %zu)\n", out.c_str(), a.dim);
  } else if (name == "envelope") {
    SuperAlgebra a = load_algebra(algebra_path);
    SuperAlgebra env = envelope(a, n);
    save_algebra(env, out);
    std::printf("wrote %s (dim %zu)\n", out.c_str(), env.dim);
  } else {
    throw std::runtime_error("unknown construction '" + name + "'");
  }
  return 0;
}

int cmd_check(const std::string& kind, const std::string& algebra_path,
              const std::string& gamma_path, const std::string& bracket_path,
              std::uint64_t seed, const std::string& report_path) {
  Timer timer;
  Json inputs;
  Json results;
  results["dims"] = Json::object();
  results["verdicts"] = Json::object();
  results["witnesses"] = Json::array();
  bool pass = false;

  auto need_algebra = [&]() {
    if (algebra_path.empty()) throw std::runtime_error("check " + kind + " needs --algebra");
    inputs["algebra"] = algebra_path;
    return load_algebra(algebra_path);
  };
  struct GammaBracket {
    SuperAlgebra gamma;
    Bracket bracket;
    GammaBracket(SuperAlgebra g) : gamma(std::move(g)), bracket(gamma) {}
  };
  auto need_bracket = [&]() {
    if (gamma_path.empty() || bracket_path.empty())
      throw std::runtime_error("check " + kind + " needs --gamma and --bracket");
    inputs["gamma"] = gamma_path;
    inputs["bracket"] = bracket_path;
    SuperAlgebra gamma = load_algebra(gamma_path);
    BracketBundle bundle = load_bracket(bracket_path);
    if (bundle.gamma->dim != gamma.dim || !(bundle.gamma->field == gamma.field))
      throw std::runtime_error("bracket file does not match the gamma file");
    auto gb = std::make_unique<GammaBracket>(std::move(gamma));
    gb->bracket.table = bundle.bracket.table;
    return gb;
  };

  if (kind == "supercomm") {
    SuperAlgebra a = need_algebra();
    pass = check_supercommutative(a);
    if (!pass) results["witnesses"].push_back("supercommutativity fails");
  } else if (kind == "assoc" || kind == "jordan" || kind == "alternative") {
    SuperAlgebra a = need_algebra();
    IdentityKind k = kind == "assoc" ? IdentityKind::Associative
                     : kind == "jordan" ? IdentityKind::Jordan
                                        : IdentityKind::Alternative;
    IdentityReport rep = verify_superidentity(a, k);
    pass = rep.ok;
    if (!rep.ok) results["witnesses"].push_back(rep.witness);
  } else if (kind == "bracket-jordan") {
    auto gb = need_bracket();
    BracketCheck rep = is_jordan_bracket(gb->gamma, gb->bracket);
    pass = rep.ok;
    if (!rep.ok) results["witnesses"].push_back(rep.witness);
  } else if (kind == "poisson") {
    auto gb = need_bracket();
    BracketCheck rep = is_poisson_bracket(gb->gamma, gb->bracket);
    pass = rep.ok;
    if (!rep.ok) results["witnesses"].push_back(rep.witness);
  } else if (kind == "simple") {
    auto gb = need_bracket();
    SimplicityCertificate cert = bracket_simple_certificate(gb->gamma, gb->bracket, seed);
    results["dims"]["closure"] = cert.closure_dim;
    switch (cert.verdict) {
      case SimplicityCertificate::Verdict::Simple:
        pass = true;
        results["verdicts"]["simple"] = "pass";
        break;
      case SimplicityCertificate::Verdict::NotSimple: {
        results["verdicts"]["simple"] = "fail";
        Json w = Json::array();
        for (const auto& v : cert.witness.vectors) {
          Element e{&gb->gamma, v};
          w.push_back(e.str());
        }
        results["witnesses"].push_back(
            Json{{"invariant_subspace", std::move(w)}});
        break;
      }
      case SimplicityCertificate::Verdict::Unknown:
        results["verdicts"]["simple"] = "unknown";
        break;
    }
  } else if (kind == "lemmas") {
    auto gb = need_bracket();
    LemmaSuiteReport rep = lemma_suite(gb->gamma, gb->bracket);
    results["verdicts"]["product_span_full"] = rep.product_span_full ? "pass" : "fail";
    results["verdicts"]["phi_d_stable"] = rep.phi_d_stable ? "pass" : "fail";
    results["verdicts"]["dk_bracket_identity"] = rep.dk_bracket_identity ? "pass" : "fail";
    results["verdicts"]["d_bracket_compatible"] = rep.d_bracket_compatible ? "pass" : "fail";
    pass = rep.all();
    if (!rep.witness.empty()) results["witnesses"].push_back(rep.witness);
  } else {
    throw std::runtime_error("unknown check '" + kind + "'");
  }

  if (results["verdicts"].empty())
    results["verdicts"][kind] = pass ? "pass" : "fail";
  write_report(report_path, "check " + kind, inputs, results, timer.ms());
  std::printf("%s: %s\n", kind.c_str(), pass ? "pass" : "fail");
  return pass ? 0 : 1;
}

int cmd_derive(const std::string& algebra_path, const std::string& delta_text,
               const std::string& parity_text, const std::string& report_path) {
  Timer timer;
  SuperAlgebra a = load_algebra(algebra_path);
  Scalar delta = parse_scalar(delta_text, a.field);
  std::optional<std::uint8_t> parity = parse_parity(parity_text);
  TrivialityReport rep = classify(a, delta, parity);

  Json results;
  results["dims"] = dims_json(rep);
  results["verdicts"]["nontrivial_found"] = rep.nontrivial_dim > 0 ? "pass" : "fail";
  Json gens = Json::array();
  for (const auto& g : rep.nontrivial_generators) gens.push_back(matrix_json(g));
  results["witnesses"] = std::move(gens);
  write_report(report_path, "derive",
               Json{{"algebra", algebra_path}, {"delta", delta.str()},
                    {"parity", parity_text}},
               results, timer.ms());
  std::printf("delta=%s parity=%s: space %zu, trivial %zu, nontrivial %zu\n",
              delta.str().c_str(), parity_text.c_str(), rep.space_dim, rep.trivial_dim,
              rep.nontrivial_dim);
  return 0;
}

int cmd_scan(const std::string& algebra_path, const std::string& deltas_text,
             const std::string& report_path) {
  Timer timer;
  SuperAlgebra a = load_algebra(algebra_path);
  std::vector<std::string> delta_texts;
  std::string cur;
  for (char ch : deltas_text) {
    if (ch == ',') {
      if (!cur.empty()) delta_texts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (!cur.empty()) delta_texts.push_back(cur);
  if (delta_texts.empty()) throw std::runtime_error("scan needs at least one delta");

  Json rows = Json::array();
  static const char* parity_names[] = {"any", "even", "odd"};
  for (const auto& dt : delta_texts) {
    Scalar delta = parse_scalar(dt, a.field);
    for (int pi = 0; pi < 3; ++pi) {
      std::optional<std::uint8_t> parity;
      if (pi == 1) parity = 0;
      if (pi == 2) parity = 1;
      TrivialityReport rep = classify(a, delta, parity);
      Json row = dims_json(rep);
      row["delta"] = delta.str();
      row["parity"] = parity_names[pi];
      row["flagged"] = rep.nontrivial_dim > 0;
      std::printf("delta=%-6s parity=%-5s space %3zu  trivial %3zu  nontrivial %3zu%s\n",
                  delta.str().c_str(), parity_names[pi], rep.space_dim, rep.trivial_dim,
                  rep.nontrivial_dim, rep.nontrivial_dim > 0 ? "  *" : "");
      rows.push_back(std::move(row));
    }
  }
  Json results;
  results["dims"] = Json{{"rows", std::move(rows)}};
  results["verdicts"] = Json::object();
  results["witnesses"] = Json::array();
  write_report(report_path, "scan",
               Json{{"algebra", algebra_path}, {"deltas", deltas_text}}, results,
               timer.ms());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact delta-(super)derivation computations for structure-constant superalgebras"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "construct a named algebra and write it to JSON");
  std::string build_name, build_field = "Q", build_out;
  std::string build_gamma, build_bracket, build_algebra;
  std::size_t build_m = 1, build_n = 0;
  std::uint64_t build_p = 3;
  build->add_option("name", build_name,
                    "grassmann | bmn | kantor-double | vector-type | poisson-double | "
                    "cheng-kac | b12 | b42 | h3-b12 | h3-b42 | plus | envelope")
      ->required();
  build->add_option("--m", build_m, "number of even truncated variables");
  build->add_option("--n", build_n, "number of Grassmann generators");
  build->add_option("--p", build_p, "odd prime characteristic");
  build->add_option("--field", build_field, "Q or F<p>");
  build->add_option("--gamma", build_gamma, "base algebra file (kantor-double)");
  build->add_option("--bracket", build_bracket, "bracket file (kantor-double)");
  build->add_option("--algebra", build_algebra, "input algebra file (plus, envelope)");
  build->add_option("-o,--out", build_out, "output file")->required();

  // check
  auto* check = app.add_subcommand("check", "run a structure check; exit 0 pass, 1 fail");
  std::string check_kind, check_algebra, check_gamma, check_bracket, check_report;
  std::uint64_t check_seed = 0;
  check->add_option("kind", check_kind,
                    "supercomm | assoc | jordan | alternative | bracket-jordan | "
                    "poisson | simple | lemmas")
      ->required();
  check->add_option("--algebra", check_algebra, "algebra file");
  check->add_option("--gamma", check_gamma, "base algebra file");
  check->add_option("--bracket", check_bracket, "bracket file");
  check->add_option("--seed", check_seed, "seed for the NotSimple witness search");
  check->add_option("-o,--out", check_report, "report file");

  // derive
  auto* derive = app.add_subcommand("derive", "solve a delta-(super)derivation space");
  std::string derive_algebra, derive_delta, derive_parity = "any", derive_report;
  derive->add_option("--algebra", derive_algebra, "algebra file")->required();
  derive->add_option("--delta", derive_delta, "delta as a scalar literal")->required();
  derive->add_option("--parity", derive_parity, "even | odd | any (default any)");
  derive->add_option("-o,--out", derive_report, "report file");

  // scan
  auto* scan = app.add_subcommand("scan", "tabulate dimensions over a list of deltas");
  std::string scan_algebra, scan_deltas, scan_report;
  scan->add_option("--algebra", scan_algebra, "algebra file")->required();
  scan->add_option("--deltas", scan_deltas, "comma-separated scalar literals")->required();
  scan->add_option("-o,--out", scan_report, "report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed())
      return cmd_build(build_name, build_m, build_n, build_p, build_field, build_gamma,
                       build_bracket, build_algebra, build_out);
    if (check->parsed())
      return cmd_check(check_kind, check_algebra, check_gamma, check_bracket, check_seed,
                       check_report);
    if (derive->parsed())
      return cmd_derive(derive_algebra, derive_delta, derive_parity, derive_report);
    if (scan->parsed()) return cmd_scan(scan_algebra, scan_deltas, scan_report);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
