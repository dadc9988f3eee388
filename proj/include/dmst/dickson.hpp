#pragma once
// The n=2 invariant theory: determinant brackets, the eleven named
// generators (L's, M's, Dickson Q's, R's), a GL2-invariance check, and
// conversion between SuperPoly and the R*Q0^a*Q1^b normal form.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dmst/gfp.hpp"
#include "dmst/superpoly.hpp"

namespace dmst {

// y1^{p^u} y2^{p^v} - y1^{p^v} y2^{p^u}; zero when u = v, antisymmetric.
SuperPoly bracket(Prime p, std::uint64_t u, std::uint64_t v);

// x1 y2^{p^u} - x2 y1^{p^u}.
SuperPoly bracket1(Prime p, std::uint64_t u);

struct GeneratorSet {
  Prime p;
  SuperPoly L2, L20, L21;    // brackets (0,1), (1,2), (0,2)
  SuperPoly M20, M21, M201;  // bracket1(1), bracket1(0), x1*x2
  SuperPoly Q0, Q1;          // L20/L2 = L2^{p-1}, L21/L2
  SuperPoly R0, R1, R01;     // M * L2^{p-2}

  const SuperPoly& by_name(std::string_view name) const;
  static const std::vector<std::string>& names();
};

// Shared per-prime cache; construction checks Q0 = L2^{p-1}.
std::shared_ptr<const GeneratorSet> generators(Prime p);

using Matrix = std::vector<std::vector<Fp>>;

Fp det2(const Matrix& m, Prime p);
Matrix mat_mul(const Matrix& a, const Matrix& b, Prime p);

// Transvection [[1,1],[0,1]], swap [[0,1],[1,0]], diag(g,1) for a
// primitive root g: together they generate GL(2, F_p).
std::vector<Matrix> gl2_generating_set(Prime p);
// Every invertible 2x2 matrix; (p^2-1)(p^2-p) of them.
std::vector<Matrix> gl2_all_elements(Prime p);

bool is_gl2_invariant(const SuperPoly& f);

// One normal-form basis monomial R_T * Q0^a * Q1^b; t is the bitmask of
// T subset {0,1} (bit 0 = R0 factor, bit 1 = R1 factor, both = R01).
struct DMKey {
  static constexpr std::uint8_t kR0 = 1;
  static constexpr std::uint8_t kR1 = 2;
  static constexpr std::uint8_t kR01 = 3;

  std::uint8_t t = 0;
  std::uint64_t a = 0, b = 0;

  std::uint32_t ext_degree() const;
  friend bool operator==(const DMKey&, const DMKey&) = default;
  friend bool operator<(const DMKey& x, const DMKey& y);
};

std::uint64_t dm_degree(const DMKey& key, Prime p);

// Invariant polynomial in normal form: sum of coeff * R_T Q0^a Q1^b.
class DMExpr {
 public:
  explicit DMExpr(Prime p) : p_(p) {}

  const Prime& prime() const { return p_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<DMKey, Fp>& terms() const { return terms_; }

  // Accumulates (duplicate keys add up; zero sums drop out).
  void add_term(const DMKey& key, std::int64_t coeff);

  friend bool operator==(const DMExpr&, const DMExpr&) = default;

 private:
  Prime p_;
  std::map<DMKey, Fp> terms_;
};

SuperPoly dm_evaluate(const DMExpr& e, const GeneratorSet& gens);

// Linear solve per bidegree over the basis monomials of matching degree;
// throws NotInSpanError when f is outside the invariant normal form and
// AmbiguousBasisError if the solve is underdetermined (never expected).
DMExpr dm_decompose(const SuperPoly& f, const GeneratorSet& gens);

std::string to_string(const DMExpr& e);

}  // namespace dmst
