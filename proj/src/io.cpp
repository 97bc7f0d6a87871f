#include "superdelta/io.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

namespace superdelta {

namespace {

Json field_to_json(const FieldDesc& f) {
  if (f.is_rational()) return Json{{"kind", "Q"}};
  return Json{{"kind", "Fp"}, {"p", f.p}};
}

FieldDesc field_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "Q") return FieldDesc::rationals();
  if (kind == "Fp") return FieldDesc::prime_field(j.at("p").get<std::uint64_t>());
  throw std::runtime_error("unknown field kind '" + kind + "'");
}

Json table_to_json(const SuperAlgebra::Table& table) {
  Json rows = Json::array();
  for (const auto& [key, terms] : table) {
    Json row;
    row["i"] = key.first;
    row["j"] = key.second;
    Json jterms = Json::array();
    for (const auto& [k, c] : terms) jterms.push_back(Json{{"k", k}, {"c", c.str()}});
    row["terms"] = std::move(jterms);
    rows.push_back(std::move(row));
  }
  return rows;
}

void table_from_json(const Json& rows, const FieldDesc& field, std::size_t dim,
                     const std::function<void(std::uint32_t, std::uint32_t,
                                              SuperAlgebra::Terms)>& sink) {
  if (!rows.is_array()) throw std::runtime_error("table must be an array");
  for (const auto& row : rows) {
    std::uint32_t i = row.at("i").get<std::uint32_t>();
    std::uint32_t j = row.at("j").get<std::uint32_t>();
    if (i >= dim || j >= dim) throw std::runtime_error("table index out of range");
    SuperAlgebra::Terms terms;
    for (const auto& t : row.at("terms")) {
      std::uint32_t k = t.at("k").get<std::uint32_t>();
      if (k >= dim) throw std::runtime_error("table target index out of range");
      terms.emplace_back(k, parse_scalar(t.at("c").get<std::string>(), field));
    }
    sink(i, j, std::move(terms));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Json j;
  in >> j;
  return j;
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace

Json algebra_to_json(const SuperAlgebra& a) {
  Json j;
  j["field"] = field_to_json(a.field);
  j["dim"] = a.dim;
  j["parity"] = a.parity;
  if (!a.names.empty()) j["names"] = a.names;
  j["table"] = table_to_json(a.table);
  return j;
}

SuperAlgebra algebra_from_json(const Json& j) {
  FieldDesc field = field_from_json(j.at("field"));
  std::size_t dim = j.at("dim").get<std::size_t>();
  if (dim < 1) throw std::runtime_error("dim must be at least 1");
  SuperAlgebra a(field, dim);
  auto parity = j.at("parity").get<std::vector<std::uint8_t>>();
  if (parity.size() != dim) throw std::runtime_error("parity length mismatch");
  for (auto p : parity)
    if (p > 1) throw std::runtime_error("parity entries must be 0 or 1");
  a.parity = std::move(parity);
  if (j.contains("names")) {
    auto names = j.at("names").get<std::vector<std::string>>();
    if (names.size() != dim) throw std::runtime_error("names length mismatch");
    a.names = std::move(names);
  }
  // set_product enforces the grading invariant on load
  table_from_json(j.at("table"), field, dim,
                  [&](std::uint32_t i, std::uint32_t jj, SuperAlgebra::Terms terms) {
                    a.set_product(i, jj, std::move(terms));
                  });
  return a;
}

void save_algebra(const SuperAlgebra& a, const std::string& path) {
  write_json_file(algebra_to_json(a), path);
}

SuperAlgebra load_algebra(const std::string& path) {
  return algebra_from_json(read_json_file(path));
}

Json bracket_to_json(const Bracket& br, const std::string& over_path) {
  Json j;
  j["bracket"] = true;
  j["over"] = over_path;
  j["table"] = table_to_json(br.table);
  return j;
}

Json bracket_to_json_inline(const Bracket& br) {
  Json j;
  j["bracket"] = true;
  j["over"] = algebra_to_json(*br.gamma);
  j["table"] = table_to_json(br.table);
  return j;
}

BracketBundle load_bracket(const std::string& path) {
  Json j = read_json_file(path);
  if (!j.contains("bracket") || !j.at("bracket").get<bool>())
    throw std::runtime_error("'" + path + "' is not a bracket file");
  const Json& over = j.at("over");
  std::shared_ptr<SuperAlgebra> gamma;
  if (over.is_string()) {
    std::filesystem::path p(path);
    std::filesystem::path ref(over.get<std::string>());
    if (ref.is_relative()) ref = p.parent_path() / ref;
    gamma = std::make_shared<SuperAlgebra>(load_algebra(ref.string()));
  } else {
    gamma = std::make_shared<SuperAlgebra>(algebra_from_json(over));
  }
  Bracket br(*gamma);
  table_from_json(j.at("table"), gamma->field, gamma->dim,
                  [&](std::uint32_t i, std::uint32_t jj, SuperAlgebra::Terms terms) {
                    br.set_bracket(i, jj, std::move(terms));
                  });
  return BracketBundle{std::move(gamma), std::move(br)};
}

void save_bracket(const Bracket& br, const std::string& path,
                  const std::string& over_path) {
  write_json_file(over_path.empty() ? bracket_to_json_inline(br)
                                    : bracket_to_json(br, over_path),
                  path);
}

}  // namespace superdelta
