#pragma once

#include <gmpxx.h>

#include <vector>

#include "motiveforge/ffield.hpp"
#include "motiveforge/hgm_core.hpp"
#include "motiveforge/local_factor.hpp"

namespace mforge {

struct TraceOptions {
  bool allowDegenerate = false;
  mp::Precision precisionBits = 0;  // 0 selects the default rule
  u64 seed = 0;                     // field construction seed
  // Kronecker discriminant of the determinant character, used to restore the
  // missing linear factor at degenerate primes; 0 fits it from good primes.
  long detCharacter = 0;
};

struct HqResult {
  mpq_class value;
  double gap = 0;  // distance of the accepted candidate from the computed value
  mp::Precision precisionBits = 0;
  int retries = 0;
};

struct TraceSequence {
  HypergeometricData data;
  mpq_class t;
  u64 p = 0;
  std::vector<mpq_class> values;  // H_{p^r}, r = 1..rmax
};

mp::Precision default_precision(const HypergeometricData& data, u64 q);

// Raw complex values at a fixed precision (no rounding), for diagnostics and tests.
mp::Complex hq_basic_raw(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx,
                         const GaussTable& table);
mp::Complex hq_general_raw(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx,
                           const GaussTable& table);

HqResult hq_basic_detail(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx,
                         mp::Precision prec = 0);
HqResult hq_general_detail(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx,
                           mp::Precision prec = 0);
mpq_class hq_basic(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx);
mpq_class hq_general(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx);

TraceSequence trace_sequence(const HypergeometricData& data, const mpq_class& t, u64 p, int rmax,
                             const TraceOptions& opts = {});

LocalEulerFactor local_factor_direct(const HypergeometricData& data, const mpq_class& t, u64 p,
                                     const TraceOptions& opts = {});
LocalEulerFactor local_factor_selfdual(const HypergeometricData& data, const mpq_class& t, u64 p, int rmax,
                                       const TraceOptions& opts = {});
// Odd degree, even weight: traces up to r = (d-1)/2 plus the determinant character
// fix the whole factor (the self-dual sign is -chi_det(p) in odd degree).
LocalEulerFactor local_factor_det(const HypergeometricData& data, const mpq_class& t, u64 p,
                                  const TraceOptions& opts = {});

// Determinant character of the motive: det Frob_p = chi_D(p) p^{wd/2}, fitted over
// discriminants supported on the excluded primes, using `nprimes` good primes.
long fit_det_character(const HypergeometricData& data, const mpq_class& t, int nprimes = 10, u64 seed = 0);

// Factor from an explicit trace list (Newton's identities), rejecting non-integral output.
Poly factor_from_traces(const std::vector<mpq_class>& traces, int degree);

}  // namespace mforge
