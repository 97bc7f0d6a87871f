#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "superdelta/constructions.hpp"
#include "superdelta/io.hpp"

using namespace superdelta;

namespace {
const FieldDesc Q = FieldDesc::rationals();

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

bool same_structure(const SuperAlgebra& a, const SuperAlgebra& b) {
  return a.field == b.field && a.dim == b.dim && a.parity == b.parity &&
         a.names == b.names && a.table == b.table;
}
}  // namespace

TEST_CASE("algebra file round-trip") {
  TruncatedPoly b15 = truncated_poly(1, 5);
  Bracket br = vector_bracket(b15.algebra, partial_derivative(b15, 0));
  std::vector<SuperAlgebra> algebras;
  algebras.push_back(grassmann(2, Q));
  algebras.push_back(kantor_double(b15.algebra, br));
  algebras.push_back(b42(FieldDesc::prime_field(3)).algebra);

  for (const auto& a : algebras) {
    SuperAlgebra back = algebra_from_json(algebra_to_json(a));
    CHECK(same_structure(a, back));
  }

  std::string path = temp_path("superdelta_roundtrip.json");
  save_algebra(algebras[1], path);
  SuperAlgebra loaded = load_algebra(path);
  CHECK(same_structure(algebras[1], loaded));
  std::remove(path.c_str());
}

TEST_CASE("scalars serialize as canonical strings") {
  SuperAlgebra a(Q, 2);
  a.set_product(0, 0, {{0, parse_scalar("2/4", Q)}});
  Json j = algebra_to_json(a);
  CHECK(j["table"][0]["terms"][0]["c"] == "1/2");
}

TEST_CASE("grading is enforced on load") {
  Json j;
  j["field"] = Json{{"kind", "Q"}};
  j["dim"] = 2;
  j["parity"] = {0, 1};
  j["table"] = Json::array({Json{{"i", 0}, {"j", 0},
                                 {"terms", Json::array({Json{{"k", 1}, {"c", "1"}}})}}});
  CHECK_THROWS(algebra_from_json(j));  // even*even landing on an odd vector
  j["parity"] = {0, 0};
  CHECK_NOTHROW(algebra_from_json(j));
}

TEST_CASE("bracket file round-trip, inline and by path") {
  SuperAlgebra g2 = grassmann(2, Q);
  Bracket br = poisson_grassmann(g2);

  std::string apath = temp_path("superdelta_gamma.json");
  std::string bpath = temp_path("superdelta_bracket.json");
  save_algebra(g2, apath);
  save_bracket(br, bpath, std::filesystem::path(apath).filename().string());
  BracketBundle bundle = load_bracket(bpath);
  CHECK(bundle.gamma->dim == g2.dim);
  CHECK(bundle.bracket.table == br.table);

  save_bracket(br, bpath, "");  // inline form
  BracketBundle inline_bundle = load_bracket(bpath);
  CHECK(inline_bundle.gamma->dim == g2.dim);
  CHECK(inline_bundle.bracket.table == br.table);

  std::remove(apath.c_str());
  std::remove(bpath.c_str());
}

TEST_CASE("load failures") {
  CHECK_THROWS(load_algebra("/nonexistent/path.json"));
  Json j;
  j["field"] = Json{{"kind", "F?"}};
  CHECK_THROWS(algebra_from_json(j));
  Json k;
  k["field"] = Json{{"kind", "Fp"}, {"p", 4}};  // not prime
  k["dim"] = 1;
  k["parity"] = {0};
  k["table"] = Json::array();
  CHECK_THROWS(algebra_from_json(k));
}
