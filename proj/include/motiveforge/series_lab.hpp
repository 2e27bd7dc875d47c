#pragma once

// High-precision evaluation of Ramanujan-type series, their closed-form
// targets, the eta-quotient parametrization and the CM supercongruence.

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "motiveforge/hgm_core.hpp"
#include "motiveforge/mp.hpp"

namespace mforge {

// Expression tree over rationals, pi, sqrt, gamma, + - * / and ^.
class ClosedForm {
 public:
  struct Node;
  static ClosedForm parse(const std::string& text);
  mp::Real evaluate(mp::Precision prec) const;
  // Exact value when the expression is built from rationals and + - * / ^integer only.
  std::optional<mpq_class> exact() const;
  bool uses_gamma() const;
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

struct RamanujanSeries {
  std::string id;
  std::vector<mpq_class> numParams;
  std::vector<mpq_class> denParams;
  std::vector<long> poly;  // constant term first
  std::string zText;
  ClosedForm z;
  ClosedForm target;
  bool proven = true;
  std::string source;
};

std::vector<RamanujanSeries> load_series_registry(const std::string& path);
const RamanujanSeries& find_series(const std::vector<RamanujanSeries>& reg, const std::string& id);

struct SeriesValue {
  mp::Real value;
  long terms = 0;
  mp::Real tailBound;
};
SeriesValue evaluate_series(const RamanujanSeries& s, int digits);
mp::Real evaluate_target(const RamanujanSeries& s, int digits);

struct IdentityCheck {
  std::string id;
  bool pass = false;
  bool proven = true;
  int digits = 0;
  std::string series, target;
  double log10Residual = 0;  // log10 |series - target|
  long terms = 0;
  std::string label;  // "proven identity" or a numerical-confirmation note
  std::string method;
};
IdentityCheck check_identity(const RamanujanSeries& s, int digits);

mp::Complex eta(const mp::Complex& tau, int digits);
mp::Complex rho_modular(const mp::Complex& tau, int digits);

struct Can0TauCheck {
  bool pass = false;
  std::string rho, lhs, rhs;
  double log10Residual = 0;
};
// 3F2(1/2,1/4,3/4; 1,1 | rho(tau)) against the eta-quotient square root.
Can0TauCheck check_can0tau(const mp::Complex& tau, int digits);

// b_p of the CM form attached to the K3 point z = -1/48.
long bp_cm(long p);

struct TruncatedSum {
  u64 p = 0;
  int e = 0;
  mpq_class exact;   // sum_{n<p} A_n z^n
  mpz_class residue; // exact reduced mod p^e
};
TruncatedSum truncated_hyp_mod(const HypergeometricData& data, const mpq_class& z, u64 p, int e);

struct CongruenceRow {
  u64 p = 0;
  mpz_class residue;
  long bp = 0;
  bool holds = false;
  bool pathsAgree = true;
};
struct CongruenceReport {
  std::vector<CongruenceRow> rows;
  bool allHold() const;
  bool arithmeticError() const;
};
CongruenceReport supercongruence_scan(u64 pmax);

}  // namespace mforge
