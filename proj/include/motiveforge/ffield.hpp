#pragma once

// Finite fields F_q, q = p^f, stored as integers 0..q-1 whose base-p digits are
// coefficients in F_p[X]/(modulus). The class of X generates F_q^x whenever f > 1.

#include <cstdint>
#include <memory>
#include <vector>

#include "motiveforge/arith.hpp"
#include "motiveforge/mp.hpp"

namespace mforge {

inline constexpr u64 kDefaultFieldCap = u64{1} << 23;

struct FieldContext {
  u64 p = 0;
  int f = 0;
  u64 q = 0;
  u64 seed = 0;
  std::vector<u64> modulus;  // monic, low degree first; empty when f == 1
  std::uint32_t generator = 0;
  std::vector<std::uint32_t> logTable;  // size q, entry 0 unused
  std::vector<std::uint32_t> expTable;  // size q-1
  std::vector<std::uint32_t> traceTable;  // size q

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  // Element represented by an integer n (reduced mod p, i.e. the prime-field image).
  std::uint32_t from_integer(const mpz_class& n) const;
  std::uint32_t log(std::uint32_t x) const { return logTable[x]; }
};

FieldContext build_field(u64 p, int f, u64 seed = 0, u64 cap = kDefaultFieldCap);

enum class GaussMethod { naive, dft };

struct GaussTable {
  u64 q = 0;
  u64 p = 0;
  int f = 0;
  u64 seed = 0;
  mp::Precision precisionBits = 0;
  std::vector<mp::Complex> values;  // g(m), m = 0..q-2

  const mp::Complex& at(long long m) const {
    long long n = static_cast<long long>(values.size());
    long long r = m % n;
    return values[static_cast<size_t>(r < 0 ? r + n : r)];
  }
};

GaussTable gauss_table(const FieldContext& ctx, mp::Precision precisionBits, GaussMethod method = GaussMethod::dft);

// Shared, immutable tables keyed by (p, f, seed, precision).
std::shared_ptr<const FieldContext> cached_field(u64 p, int f, u64 seed = 0);
std::shared_ptr<const GaussTable> cached_gauss_table(const FieldContext& ctx, mp::Precision precisionBits);
void clear_field_caches();

// e^{2 pi i j / n}, j = 0..n-1, by multiplication chains with periodic exact resync.
std::vector<mp::Complex> unit_root_table(u64 n, mp::Precision prec);
// In-place radix-2 transform, sign -1 forward (e^{-2 pi i jk/L}) and +1 inverse (unscaled).
void fft_inplace(std::vector<mp::Complex>& a, int sign, mp::Precision prec);

}  // namespace mforge
