#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "motiveforge/arith.hpp"
#include "motiveforge/local_factor.hpp"

namespace mforge {

struct QuadField {
  long disc = 5;  // fundamental discriminant of F = Q(sqrt(disc))
};

enum class Splitting { split, inert, ramified };
const char* to_string(Splitting s);
Splitting splitting_type(const QuadField& field, u64 p);

// Kronecker character (D | .) of a fundamental discriminant; D = 1 is trivial.
struct QuadCharacter {
  long disc = 1;
  bool provisional = false;

  int operator()(u64 p) const { return kronecker(disc, static_cast<long>(p)); }
  bool operator==(const QuadCharacter& o) const { return disc == o.disc; }
};

// Table labels are conductor-style: "-4", "3", "5", "12?". "3" is the character of conductor 3.
QuadCharacter character_from_label(const std::string& label);
std::string character_label(const QuadCharacter& chi);

// a + b sqrt(D) with rational a, b.
struct QuadElement {
  mpq_class a;
  mpq_class b;
  long D = 1;

  bool is_rational() const { return b == 0; }
  QuadElement conj() const { return {a, -b, D}; }
  std::string to_string() const;
};
QuadElement operator+(const QuadElement& x, const QuadElement& y);
QuadElement operator-(const QuadElement& x, const QuadElement& y);
QuadElement operator*(const QuadElement& x, const QuadElement& y);
bool operator==(const QuadElement& x, const QuadElement& y);

// Expressions like "-16w + 20" where w generates the ring of integers of Q(sqrt(fieldDisc)).
QuadElement parse_quad_expr(const std::string& text, long fieldDisc);

struct PrimeLabel {
  u64 p = 0;
  int conj = 0;  // 0 or 1 for the two primes above a split p
  bool operator<(const PrimeLabel& o) const { return std::make_pair(p, conj) < std::make_pair(o.p, o.conj); }
};

struct HilbertEigenform {
  std::string id;
  QuadField field;
  long levelNorm = 1;
  std::string levelLabel;
  int k1 = 2, k2 = 4;
  int w0 = 3;
  QuadCharacter centralChar;
  long coeffDisc = 1;
  std::map<PrimeLabel, QuadElement> eigenvalues;
  std::string source = "manual";
  // Twist character the eigenvalue list was published with (0: none given).
  long twistDisc = 0;
  std::vector<int> rows;  // Table 1 rows this form is attached to

  bool has(u64 p) const;
  const QuadElement& eigenvalue(u64 p, int conj = 0) const;
};

// Good Asai factor at p (weight 2 w0). sigma is the inert trace sign.
LocalEulerFactor asai_factor(const HilbertEigenform& form, u64 p, int sigma = 1);
LocalEulerFactor twist_char(const LocalEulerFactor& factor, const QuadCharacter& eps);
LocalEulerFactor tate_twist(const LocalEulerFactor& factor, int k);

// Trace of Frobenius of the untwisted Asai factor.
mpz_class asai_trace(const HilbertEigenform& form, u64 p, int sigma = 1);

HilbertEigenform load_eigenform(const std::string& path);
std::string eigenform_to_json(const HilbertEigenform& form);
HilbertEigenform eigenform_from_json(const std::string& text);

}  // namespace mforge
