#pragma once

// Loading the bundled table fixtures under the data directory.

#include <optional>
#include <string>
#include <vector>

#include "motiveforge/hilbert_asai.hpp"
#include "motiveforge/matcher.hpp"

namespace mforge {

// $MOTIVEFORGE_DATA, else the source tree's data/ directory.
std::string data_dir();

struct Table1Row {
  std::string id;  // "1".."16", or "k3", "sextic"
  std::string alpha, beta;
  std::optional<mpq_class> z;  // absent for the quadratic-irrational row
  std::string zDisplay;
  std::string reference;
};
std::vector<Table1Row> load_table1(const std::string& dir = data_dir());
Table1Row table1_row(const std::string& id, const std::string& dir = data_dir());

MatchRow load_match_row(int id, const std::string& dir = data_dir());
std::optional<HilbertEigenform> load_row_form(int id, const std::string& dir = data_dir());

}  // namespace mforge
