#pragma once

// Dirichlet coefficients from Euler factors and a numerical functional-equation
// test for completed L-functions.

#include <gmpxx.h>

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "motiveforge/local_factor.hpp"
#include "motiveforge/poly.hpp"

namespace mforge {

using cplx = std::complex<double>;

struct LFunctionConfig {
  int degree = 1;
  long conductor = 1;
  std::vector<double> gammaShifts;  // Gamma_R(s + mu_j)
  double reflection = 1;            // Lambda(s) = eps conj Lambda(w - conj s)
  std::optional<int> sign;          // empty: fit from {+1, -1}
  long cutoff = 100;
  // Poles of Lambda (point, residue), needed for zeta-like cases.
  std::vector<std::pair<cplx, cplx>> poles;
  // Simple poles at rho (and w - rho, residue -eps r) with unknown real residue r,
  // fitted at the first test point together with the sign.
  std::vector<double> fittedPoles;
  std::string gammaLabel;
};

struct DirichletCoefficients {
  std::vector<mpz_class> a;  // a[0] unused, a[1] = 1
  long size() const { return static_cast<long>(a.size()) - 1; }
  std::vector<double> as_double() const;
};

// factors[p] = L_p(T) for every prime p <= B.
DirichletCoefficients dirichlet_series(const std::map<u64, Poly>& factors, long B);

LFunctionConfig zeta_config(long cutoff = 60);

// Lambda(s) by the smoothed contour formula with weight t^z; `t` only moves the split.
cplx lambda_value(const LFunctionConfig& cfg, const std::vector<double>& a, cplx s, double t = 1.0);
// Explicit bound on the part of both sums beyond the cutoff.
double truncation_bound(const LFunctionConfig& cfg, cplx s, double t = 1.0);

struct FePoint {
  cplx s;
  cplx lambda;
  double residual = 0;
  double tailBound = 0;
};

struct FeReport {
  int sign = 1;
  bool signFitted = false;
  double residual = 0;  // max over the test points
  std::vector<double> residues;  // one per fitted pole
  std::vector<FePoint> points;
};

// Residual |Lambda(s) - eps conj Lambda(w - conj s)| / |Lambda(s)|, the two sides
// computed with different splits so the test is not an identity of the formula.
FeReport fe_residual(const LFunctionConfig& cfg, const DirichletCoefficients& coeffs,
                     const std::vector<cplx>& testPoints);

// Points w/2 + i t_j on the critical line.
std::vector<cplx> critical_points(double reflection, const std::vector<double>& heights);

struct GammaCandidate {
  std::string label;
  std::vector<double> shifts;
};

struct RowLConfig {
  int row = 0;
  std::vector<int> rows;
  long conductor = 0;
  int degree = 0;
  std::vector<GammaCandidate> gammas;
  std::vector<double> reflections;
  std::vector<double> heights;
  std::string note;
};
RowLConfig load_row_lconfig(int row, const std::string& dir);

struct LFuncCandidateResult {
  std::string gamma;
  double reflection = 0;
  int degree = 0;
  FeReport report;
};

struct LFuncCheck {
  int row = 0;
  long conductor = 0;
  long cutoff = 0;
  int digits = 0;
  bool pass = false;
  LFuncCandidateResult best;
  std::vector<LFuncCandidateResult> candidates;
  // Same test on the quartic part L_p(H) / (1 - chi(p) p^2 T); entire, no fitted poles.
  LFuncCandidateResult quartic;
  std::map<u64, std::string> badFactors;  // degree-5 factors used at bad primes
  double seconds = 0;
};

// Full pipeline for a Table 1 row: HGM factors at good primes, fixture factors at bad ones.
LFuncCheck lfunc_check_row(int row, int digits, long cutoff, const std::string& dataDir);

}  // namespace mforge
