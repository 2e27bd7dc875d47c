#pragma once

// Minimal LMFDB REST client with an on-disk response cache. Responses are
// stored verbatim under <cacheDir>/<sha256(url)>.json so later runs (and
// offline runs) never need the network.

#include <string>

#include "motiveforge/hilbert_asai.hpp"

namespace mforge {

struct LmfdbConfig {
  std::string baseUrl = "https://www.lmfdb.org";
  std::string cacheDir;  // empty: $MOTIVEFORGE_CACHE or ~/.cache/motiveforge
  bool offline = false;
  int timeoutSeconds = 30;
};

// Defaults overridden by MOTIVEFORGE_LMFDB_URL and MOTIVEFORGE_CACHE.
LmfdbConfig lmfdb_config_from_env();

std::string cache_key(const std::string& url);
std::string resolved_cache_dir(const LmfdbConfig& cfg);

// GET baseUrl + path; cached. Offline cache misses raise NetworkError.
std::string lmfdb_get(const LmfdbConfig& cfg, const std::string& path);

// Hilbert newform by LMFDB label, e.g. "2.2.5.1-16.1-a". Unknown labels raise NotFound.
HilbertEigenform fetch_lmfdb(const LmfdbConfig& cfg, const std::string& label);

// Convert LMFDB API records (form and field JSON) into an eigenform. Exposed for tests.
HilbertEigenform eigenform_from_lmfdb(const std::string& formJson, const std::string& fieldJson);

}  // namespace mforge
