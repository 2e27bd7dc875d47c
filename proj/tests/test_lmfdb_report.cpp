#include <doctest.h>

#include <filesystem>
#include <thread>

#include <httplib.h>

#include "motiveforge/error.hpp"
#include "motiveforge/lmfdb.hpp"
#include "motiveforge/report.hpp"

using namespace mforge;
namespace fs = std::filesystem;

namespace {

const char* kForm = R"({"data": [{"label": "2.2.5.1-16.1-a", "field_label": "2.2.5.1", "level_norm": 16,
  "level_ideal": "[16, 4, 4]", "weight": "[2, 4]", "hecke_polynomial": "x^2 - 5",
  "hecke_eigenvalues": ["0", "-30", "-10", "-8*e+12", "8*e+12"]}]})";
const char* kField = R"({"data": [{"label": "2.2.5.1",
  "primes": ["[4,1,2]", "[9,1,3]", "[5,1,w-3]", "[11,1,w+2]", "[11,2,w-3]"]}]})";

fs::path temp_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("motiveforge-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_SUITE("lmfdb") {
  TEST_CASE("cache keys are SHA-256 hex digests") {
    std::string k = cache_key("https://example.org/x");
    CHECK(k.size() == 64);
    CHECK(k != cache_key("https://example.org/y"));
    CHECK(cache_key("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  }

  TEST_CASE("offline cache miss is a network error") {
    LmfdbConfig cfg;
    cfg.offline = true;
    cfg.cacheDir = temp_dir("offline").string();
    CHECK_THROWS_AS(fetch_lmfdb(cfg, "2.2.5.1-16.1-a"), Error);
    CHECK_THROWS_AS(fetch_lmfdb(cfg, "not a label"), Error);
  }

  TEST_CASE("record conversion") {
    HilbertEigenform f = eigenform_from_lmfdb(kForm, kField);
    CHECK(f.field.disc == 5);
    CHECK(f.levelNorm == 16);
    CHECK(f.k1 == 2);
    CHECK(f.k2 == 4);
    CHECK(f.coeffDisc == 5);
    CHECK(f.eigenvalue(3) == QuadElement{-30, 0, 5});
    CHECK(f.eigenvalue(11, 0) == QuadElement{12, -8, 5});
    CHECK(f.eigenvalue(11, 1) == QuadElement{12, 8, 5});
  }

  TEST_CASE("fetch through a local server, then replay offline from the cache") {
    httplib::Server srv;
    int hits = 0;
    srv.Get("/api/hmf_forms/", [&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.set_content(kForm, "application/json");
    });
    srv.Get("/api/hmf_fields/", [&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.set_content(kField, "application/json");
    });
    int port = srv.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread th([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();

    LmfdbConfig cfg;
    cfg.baseUrl = "http://127.0.0.1:" + std::to_string(port);
    cfg.cacheDir = temp_dir("fetch").string();
    HilbertEigenform f = fetch_lmfdb(cfg, "2.2.5.1-16.1-a");
    CHECK(f.eigenvalue(11, 1) == QuadElement{12, 8, 5});
    CHECK(hits == 2);
    srv.stop();
    th.join();

    cfg.offline = true;
    HilbertEigenform again = fetch_lmfdb(cfg, "2.2.5.1-16.1-a");
    CHECK(again.eigenvalues.size() == f.eigenvalues.size());
    fs::remove_all(cfg.cacheDir);
  }
}

TEST_SUITE("report") {
  TEST_CASE("JSON envelope") {
    Report r;
    r.command = "series check";
    r.config["digits"] = 40;
    r.result["x"] = 1;
    auto j = ojson::parse(render(r, OutputFormat::json, false));
    CHECK(j["command"] == "series check");
    CHECK(j["config"]["digits"] == 40);
    CHECK(j["status"] == "pass");
    CHECK_FALSE(j["header"].contains("generated"));
    CHECK(ojson::parse(render(r, OutputFormat::json, true))["header"].contains("generated"));
  }

  TEST_CASE("exit codes and provisional results") {
    Report r;
    CHECK(exit_code(r) == 0);
    r.pass = false;
    CHECK(exit_code(r) == 1);
    r.pass = true;
    r.provisional = true;
    CHECK(exit_code(r) == 0);
    CHECK(render(r, OutputFormat::table, false).find("provisional") != std::string::npos);
  }

  TEST_CASE("error rendering") {
    auto j = ojson::parse(render_error("lfunc check", "MissingFactor", "no factor at 7", OutputFormat::json));
    CHECK(j["status"] == "error");
    CHECK(j["error"]["code"] == "MissingFactor");
  }
}
