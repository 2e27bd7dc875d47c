#include "motiveforge/report.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

namespace mforge {

namespace {

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int exit_code(const Report& r) { return r.pass ? 0 : 1; }

std::string render(const Report& r, OutputFormat fmt, bool timestamp) {
  if (fmt == OutputFormat::json) {
    ojson out;
    out["schema"] = 1;
    ojson header;
    header["tool"] = "motiveforge";
    if (timestamp) header["generated"] = utc_now();
    out["header"] = header;
    out["command"] = r.command;
    out["config"] = r.config;
    out["result"] = r.result;
    out["status"] = r.pass ? "pass" : "fail";
    if (r.provisional) out["provisional"] = true;
    return out.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# motiveforge " << r.command;
  if (timestamp) os << "  " << utc_now();
  os << "\n# config " << r.config.dump() << "\n";
  os << r.table;
  if (!r.table.empty() && r.table.back() != '\n') os << "\n";
  os << "status: " << (r.pass ? "pass" : "fail") << (r.provisional ? " (provisional items present)" : "") << "\n";
  return os.str();
}

std::string render_error(const std::string& command, const std::string& code, const std::string& message,
                         OutputFormat fmt) {
  if (fmt == OutputFormat::json) {
    ojson out;
    out["schema"] = 1;
    out["command"] = command;
    out["status"] = "error";
    out["error"] = {{"code", code}, {"message", message}};
    return out.dump(2) + "\n";
  }
  return "error [" + code + "]: " + message + "\n";
}

}  // namespace mforge
