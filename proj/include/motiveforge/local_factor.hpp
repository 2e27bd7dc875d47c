#pragma once

#include <string>

#include "motiveforge/arith.hpp"
#include "motiveforge/poly.hpp"

namespace mforge {

enum class Provenance { direct, selfdual_completed, fixture, asai };
const char* to_string(Provenance p);

struct LocalEulerFactor {
  u64 p = 0;
  Poly coeffs;  // c_0 = 1
  int weight = 0;
  Provenance provenance = Provenance::direct;
  bool degenerate = false;
  bool provisional = false;

  int degree() const { return mforge::degree(coeffs); }
};

struct WeilReport {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

// Integrality, binomial coefficient bounds and |root| = p^{w/2}.
WeilReport weil_integrality_check(const LocalEulerFactor& factor);

}  // namespace mforge
