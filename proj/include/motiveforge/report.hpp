#pragma once

// Report envelope shared by the command-line tools: resolved configuration,
// result body, status and an optional timestamp kept in the header only.

#include <string>

#include <json.hpp>

namespace mforge {

using ojson = nlohmann::ordered_json;

enum class OutputFormat { json, table };

struct Report {
  std::string command;
  ojson config = ojson::object();
  ojson result = ojson::object();
  std::string table;         // human-readable body
  bool pass = true;          // all non-provisional checks passed
  bool provisional = false;  // some verdicts rest on provisional data
};

// Exit status: 0 iff every non-provisional check passed.
int exit_code(const Report& r);

std::string render(const Report& r, OutputFormat fmt, bool timestamp);

// Machine-readable diagnostic for a computation failure (exit 1).
std::string render_error(const std::string& command, const std::string& code, const std::string& message,
                         OutputFormat fmt);

}  // namespace mforge
