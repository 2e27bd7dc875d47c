#include "motiveforge/lmfdb.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "motiveforge/error.hpp"

namespace mforge {

namespace fs = std::filesystem;
using json = nlohmann::json;

LmfdbConfig lmfdb_config_from_env() {
  LmfdbConfig cfg;
  if (const char* url = std::getenv("MOTIVEFORGE_LMFDB_URL")) cfg.baseUrl = url;
  if (const char* dir = std::getenv("MOTIVEFORGE_CACHE")) cfg.cacheDir = dir;
  return cfg;
}

std::string resolved_cache_dir(const LmfdbConfig& cfg) {
  if (!cfg.cacheDir.empty()) return cfg.cacheDir;
  if (const char* dir = std::getenv("MOTIVEFORGE_CACHE")) return dir;
  const char* home = std::getenv("HOME");
  return std::string(home ? home : ".") + "/.cache/motiveforge";
}

std::string cache_key(const std::string& url) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(url.data(), url.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

namespace {

// Exclusive advisory lock on <dir>/.lock for the lifetime of the object.
class CacheLock {
 public:
  explicit CacheLock(const std::string& dir) {
    fd_ = ::open((dir + "/.lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ >= 0) ::flock(fd_, LOCK_EX);
  }
  ~CacheLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  CacheLock(const CacheLock&) = delete;
  CacheLock& operator=(const CacheLock&) = delete;

 private:
  int fd_ = -1;
};

bool read_file(const fs::path& path, std::string& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

std::string lmfdb_get(const LmfdbConfig& cfg, const std::string& path) {
  const std::string url = cfg.baseUrl + path;
  const std::string dir = resolved_cache_dir(cfg);
  const fs::path file = fs::path(dir) / (cache_key(url) + ".json");
  std::string body;
  std::error_code ec;
  fs::create_directories(dir, ec);
  CacheLock lock(dir);
  if (read_file(file, body)) return body;
  if (cfg.offline) throw Error(ErrorCode::NetworkError, "offline and not cached: " + url);

  httplib::Client client(cfg.baseUrl);
  client.set_connection_timeout(cfg.timeoutSeconds);
  client.set_read_timeout(cfg.timeoutSeconds);
  client.set_follow_location(true);
  auto res = client.Get(path);
  if (!res) throw Error(ErrorCode::NetworkError, "request failed: " + url + " (" + httplib::to_string(res.error()) + ")");
  if (res->status == 404) throw Error(ErrorCode::NotFound, "not found: " + url);
  if (res->status != 200) throw Error(ErrorCode::NetworkError, "HTTP " + std::to_string(res->status) + " for " + url);
  if (ec) throw Error(ErrorCode::NetworkError, "cache directory unavailable: " + dir);
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream outFile(tmp);
    outFile << res->body;
  }
  fs::rename(tmp, file);
  return res->body;
}

namespace {

json first_record(const std::string& text, const std::string& what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, what + ": " + e.what());
  }
  if (!j.contains("data") || !j["data"].is_array() || j["data"].empty())
    throw Error(ErrorCode::NotFound, what + ": no matching record");
  return j["data"][0];
}

// Integer coefficients of a polynomial string in one variable, e.g. "x^2 - 3*x - 1".
std::vector<long> parse_univariate(const std::string& text, char var) {
  std::vector<long> c(8, 0);
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  std::regex term(R"(([+-]?)(\d*)\*?()" + std::string(1, var) + R"()?(?:\^(\d+))?)");
  size_t pos = 0;
  while (pos < s.size()) {
    std::smatch m;
    std::string rest = s.substr(pos);
    if (!std::regex_search(rest, m, term, std::regex_constants::match_continuous) || m.length(0) == 0)
      throw Error(ErrorCode::ParseError, "bad polynomial '" + text + "'");
    long coef = m[2].length() ? std::stol(m[2]) : 1;
    if (m[1] == "-") coef = -coef;
    int deg = m[3].length() ? (m[4].length() ? std::stoi(m[4]) : 1) : 0;
    if (deg >= 8) throw Error(ErrorCode::ParseError, "degree too large in '" + text + "'");
    c[deg] += coef;
    pos += m.length(0);
  }
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  return c;
}

// Linear expression a + b*e in the Hecke-field generator e.
std::pair<mpq_class, mpq_class> parse_linear_e(const std::string& text) {
  std::vector<long> c = parse_univariate(text, 'e');
  if (c.size() > 2) throw Error(ErrorCode::ParseError, "eigenvalue '" + text + "' is not linear in e");
  return {mpq_class(c[0]), mpq_class(c.size() > 1 ? c[1] : 0)};
}

}  // namespace

HilbertEigenform eigenform_from_lmfdb(const std::string& formJson, const std::string& fieldJson) {
  json form = first_record(formJson, "hmf_forms");
  json field = first_record(fieldJson, "hmf_fields");
  HilbertEigenform f;
  try {
    f.id = form.at("label").get<std::string>();
    f.field.disc = form.value("disc", 0L);
    if (f.field.disc == 0) {
      // field label d.r.D.i
      std::string fl = form.at("field_label").get<std::string>();
      f.field.disc = std::stol(fl.substr(4, fl.find('.', 4) - 4));
    }
    f.levelNorm = form.at("level_norm").get<long>();
    f.levelLabel = form.value("level_ideal", "");
    auto wt = form.at("weight");
    if (wt.is_string()) wt = json::parse(wt.get<std::string>());
    f.k1 = wt.at(0).get<int>();
    f.k2 = wt.at(1).get<int>();
    f.w0 = std::max(f.k1, f.k2) - 1;
    f.source = "lmfdb";

    // e generates the Hecke field; quadratic fields only: e = (-b + sqrt(b^2 - 4c))/2.
    std::vector<long> hp = parse_univariate(form.at("hecke_polynomial").get<std::string>(), 'x');
    mpq_class ea, eb;
    if (hp.size() == 2) {
      f.coeffDisc = 1;
      ea = mpq_class(-hp[0], hp[1]);
      eb = 0;
    } else if (hp.size() == 3 && hp[2] == 1) {
      long disc = hp[1] * hp[1] - 4 * hp[0];
      long sq = squarefree_part(disc).get_si();
      // sqrt(disc) = m sqrt(sq) with m^2 = disc/sq
      long m2 = disc / sq;
      long m = static_cast<long>(std::llround(std::sqrt(static_cast<double>(m2))));
      if (m * m != m2) throw Error(ErrorCode::ParseError, "unexpected Hecke field discriminant");
      f.coeffDisc = sq;
      ea = mpq_class(-hp[1], 2);
      eb = mpq_class(m, 2);
    } else {
      throw Error(ErrorCode::ParseError, "Hecke field of degree > 2 is not supported");
    }

    const auto& primes = field.at("primes");
    const auto& evs = form.at("hecke_eigenvalues");
    std::map<u64, int> seen;
    for (size_t i = 0; i < evs.size() && i < primes.size(); ++i) {
      std::string pr = primes[i].get<std::string>();  // "[norm, index, generator]"
      long norm = std::stol(pr.substr(1, pr.find(',') - 1));
      u64 p = 0;
      for (auto [q, e] : factor(static_cast<u64>(norm))) {
        p = q;
        (void)e;
      }
      auto [a0, a1] = parse_linear_e(evs[i].get<std::string>());
      QuadElement x{a0 + a1 * ea, a1 * eb, f.coeffDisc};
      f.eigenvalues[PrimeLabel{p, seen[p]++}] = x;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("LMFDB record: ") + e.what());
  }
  return f;
}

HilbertEigenform fetch_lmfdb(const LmfdbConfig& cfg, const std::string& label) {
  static const std::regex labelRe(R"((\d+\.\d+\.\d+\.\d+)-[0-9.]+-[a-z]+)");
  std::smatch m;
  if (!std::regex_match(label, m, labelRe)) throw Error(ErrorCode::NotFound, "malformed LMFDB label '" + label + "'");
  std::string formText = lmfdb_get(cfg, "/api/hmf_forms/?label=" + label + "&_format=json");
  first_record(formText, "hmf_forms " + label);
  std::string fieldText = lmfdb_get(cfg, "/api/hmf_fields/?label=" + m[1].str() + "&_format=json");
  return eigenform_from_lmfdb(formText, fieldText);
}

}  // namespace mforge
