#include "motiveforge/fixtures.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "motiveforge/error.hpp"

namespace mforge {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string data_dir() {
  if (const char* d = std::getenv("MOTIVEFORGE_DATA")) return d;
  return MOTIVEFORGE_DATA_DIR;
}

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open fixture " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

Table1Row row_from_json(const json& r, const std::string& beta) {
  Table1Row row;
  row.id = r.at("id").is_number() ? std::to_string(r.at("id").get<int>()) : r.at("id").get<std::string>();
  row.alpha = r.at("alpha").get<std::string>();
  row.beta = r.value("beta", beta);
  if (r.contains("z") && !r.at("z").is_null()) row.z = parse_rational(r.at("z").get<std::string>());
  row.zDisplay = r.value("z_display", r.contains("z") && !r.at("z").is_null() ? r.at("z").get<std::string>() : "");
  row.reference = r.value("reference", r.value("note", ""));
  return row;
}

}  // namespace

std::vector<Table1Row> load_table1(const std::string& dir) {
  json j = read_json(dir + "/table1_rows.json");
  std::string beta = j.at("beta").get<std::string>();
  std::vector<Table1Row> out;
  for (auto& r : j.at("rows")) out.push_back(row_from_json(r, beta));
  if (j.contains("extra"))
    for (auto& r : j.at("extra")) out.push_back(row_from_json(r, beta));
  return out;
}

Table1Row table1_row(const std::string& id, const std::string& dir) {
  for (auto& r : load_table1(dir))
    if (r.id == id) return r;
  throw Error(ErrorCode::NotFound, "no Table 1 row '" + id + "'");
}

MatchRow load_match_row(int id, const std::string& dir) {
  Table1Row t1 = table1_row(std::to_string(id), dir);
  if (!t1.z) throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(id) + " has no rational specialization");
  MatchRow row;
  row.id = id;
  row.data = parse_hypergeometric(t1.alpha, t1.beta);
  row.z = *t1.z;

  json t2 = read_json(dir + "/table2_forms.json");
  bool found = false;
  for (auto& r : t2.at("rows")) {
    if (r.at("row").get<int>() != id) continue;
    found = true;
    row.chi = character_from_label(r.at("chi").get<std::string>());
    row.fieldDisc = r.at("field_disc").get<long>();
    row.levelLabel = r.at("level").get<std::string>();
    row.levelKnown = row.levelLabel != "?";
    row.levelNorm = r.at("level_norm").is_null() ? 0 : r.at("level_norm").get<long>();
    std::string psi = r.at("psi").get<std::string>();
    row.psi = psi == "?" ? QuadCharacter{1, true} : character_from_label(psi);
    row.eps = character_from_label(r.at("eps").get<std::string>());
    if (!r.at("form").is_null()) row.formId = r.at("form").get<std::string>();
  }
  if (!found) throw Error(ErrorCode::NotFound, "row " + std::to_string(id) + " missing from Table 2");

  json t3 = read_json(dir + "/table3_badfactors.json");
  for (auto& r : t3.at("rows")) {
    if (r.at("row").get<int>() != id) continue;
    row.conductor = r.at("N").get<long>();
    for (auto& f : r.at("factors")) {
      LocalEulerFactor lf;
      lf.p = f.at("p").get<u64>();
      lf.coeffs = parse_poly_expr(f.at("factor").get<std::string>(), static_cast<long>(lf.p));
      lf.weight = 4;
      lf.provenance = Provenance::fixture;
      row.badFactors[lf.p] = lf;
    }
  }
  return row;
}

std::optional<HilbertEigenform> load_row_form(int id, const std::string& dir) {
  MatchRow row = load_match_row(id, dir);
  if (row.formId.empty()) return std::nullopt;
  return load_eigenform(dir + "/eigenforms/" + row.formId + ".json");
}

}  // namespace mforge
