#pragma once

// Matching hypergeometric L-factors against Asai factors of Hilbert eigenforms.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "motiveforge/hgm_core.hpp"
#include "motiveforge/hgm_trace.hpp"
#include "motiveforge/hilbert_asai.hpp"
#include "motiveforge/local_factor.hpp"

namespace mforge {

struct MatchRow {
  int id = 0;
  HypergeometricData data;
  mpq_class z;
  QuadCharacter chi;
  long fieldDisc = 0;
  long levelNorm = 0;  // 0 when unknown
  std::string levelLabel;
  QuadCharacter psi, eps;
  bool levelKnown = false;
  std::map<u64, LocalEulerFactor> badFactors;  // Asai-side entries as tabulated
  long conductor = 0;
  std::string formId;  // empty when no eigenform is attached

  // N = d_F Nm(level) whenever the two are coprime.
  bool conductor_consistent() const;
};

// Linear-factor sign character; see the implementation notes for the tie rule.
QuadCharacter infer_chi(const std::vector<LocalEulerFactor>& factors, int k);

struct DiscCandidate {
  long disc = 0;
  int agree = 0;
  int total = 0;
  std::string origin;  // which of z, 1-z produced it
};
// Ranked by inert-signature agreement over the supplied quartics.
std::vector<DiscCandidate> infer_disc(const mpq_class& z, const std::vector<LocalEulerFactor>& quartics);

LocalEulerFactor strip_linear(const LocalEulerFactor& factor, const QuadCharacter& chi, int k);

enum class VerifyMode { trace, full };
const char* to_string(VerifyMode m);

struct PrimeVerdict {
  u64 p = 0;
  VerifyMode mode = VerifyMode::trace;
  std::string splitting;
  bool pass = false;
  bool degenerate = false;
  std::string expected;
  std::string computed;
  std::string detail;
};

struct MatchReport {
  int rowId = 0;
  std::string formId;
  VerifyMode mode = VerifyMode::trace;
  QuadCharacter chi;
  long fieldDisc = 0;
  long epsDisc = 1;
  int sigma = 0;  // inert trace sign; 0 while undetermined
  std::string sigmaNote;
  std::vector<PrimeVerdict> verdicts;
  std::vector<std::string> skipped;

  bool pass() const;
  std::string to_json() const;
  std::string to_table() const;
};

struct VerifyOptions {
  u64 pmax = 200;
  VerifyMode mode = VerifyMode::trace;
  std::vector<u64> primes;  // explicit list; missing eigenvalues then count as failures
  std::optional<long> epsDisc;  // overrides the row's epsilon
  TraceOptions trace;
};

MatchReport verify_row(const MatchRow& row, const HilbertEigenform& form, const VerifyOptions& opts);

// Full degree-5 HGM factor at p, completing degenerate primes.
LocalEulerFactor hgm_factor(const MatchRow& row, u64 p, const TraceOptions& opts = {});

struct ConductorPrediction {
  std::vector<u64> n1Primes;  // primes of lcmDen, num z, den z
  mpz_class n2;               // squarefree part of numer(1-z)
  long observed = 0;          // Table 3 N, 0 when absent
  bool consistent = false;    // N2 | N and N/N2 supported on the N1 primes
  std::vector<std::string> notes;
  std::string to_string() const;
};
ConductorPrediction conductor_heuristic(const MatchRow& row);

}  // namespace mforge
