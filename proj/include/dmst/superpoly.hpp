#pragma once
// The bigraded super-commutative algebra E(x_1..x_n) (x) F_p[y_1..y_n]:
// deg x_i = 1, deg y_i = 2, x's anticommute and square to zero.
// Values are immutable once built; terms are kept sorted with coefficients
// in [1, p), so equality is plain term-list comparison.

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dmst/gfp.hpp"

namespace dmst {

struct SuperMonomial {
  std::uint32_t ext = 0;           // bit j set = exterior factor x_{j+1}
  std::vector<std::uint64_t> pow;  // y exponents, one per variable

  std::uint32_t ext_degree() const {
    return static_cast<std::uint32_t>(std::popcount(ext));
  }
  std::uint64_t degree() const;

  friend auto operator<=>(const SuperMonomial&,
                          const SuperMonomial&) = default;
};

// +1/-1: parity of the inversions created by writing the exterior factors
// of a before those of b; masks must be disjoint.
int koszul_sign(std::uint32_t a, std::uint32_t b);

class SuperPoly {
 public:
  using Term = std::pair<SuperMonomial, Fp>;

  SuperPoly(Prime p, std::uint32_t nvars);

  static SuperPoly constant(Prime p, std::uint32_t nvars, Fp c);
  static SuperPoly x_gen(Prime p, std::uint32_t nvars, std::uint32_t i);
  static SuperPoly y_gen(Prime p, std::uint32_t nvars, std::uint32_t i,
                         std::uint64_t e = 1);
  static SuperPoly monomial(Prime p, std::uint32_t nvars, SuperMonomial m,
                            Fp c);
  // Coefficients reduced mod p (signed allowed), duplicates merged.
  static SuperPoly from_terms(
      Prime p, std::uint32_t nvars,
      std::vector<std::pair<SuperMonomial, std::int64_t>> raw);

  const Prime& prime() const { return p_; }
  std::uint32_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // (exterior degree, total degree); throws ZeroPolynomialError on 0 and
  // NotHomogeneousError when terms disagree in either grading.
  std::pair<std::uint32_t, std::uint64_t> bidegree() const;

  friend bool operator==(const SuperPoly&, const SuperPoly&) = default;

 private:
  Prime p_;
  std::uint32_t nvars_;
  std::vector<Term> terms_;

  void set_terms(std::vector<Term> sorted);

  friend SuperPoly add(const SuperPoly&, const SuperPoly&);
  friend SuperPoly neg(const SuperPoly&);
  friend SuperPoly scale(const SuperPoly&, Fp);
  friend SuperPoly mul(const SuperPoly&, const SuperPoly&);
};

SuperPoly add(const SuperPoly& a, const SuperPoly& b);
SuperPoly sub(const SuperPoly& a, const SuperPoly& b);
SuperPoly neg(const SuperPoly& a);
SuperPoly scale(const SuperPoly& a, Fp c);
SuperPoly mul(const SuperPoly& a, const SuperPoly& b);
SuperPoly pow(const SuperPoly& a, std::uint64_t e);

inline SuperPoly operator+(const SuperPoly& a, const SuperPoly& b) {
  return add(a, b);
}
inline SuperPoly operator-(const SuperPoly& a, const SuperPoly& b) {
  return sub(a, b);
}
inline SuperPoly operator-(const SuperPoly& a) { return neg(a); }
inline SuperPoly operator*(const SuperPoly& a, const SuperPoly& b) {
  return mul(a, b);
}

// Exact division by a nonzero divisor with no exterior part; throws
// NotDivisibleError when no exact quotient exists.
SuperPoly exact_div(const SuperPoly& f, const SuperPoly& g);

// Linear change of variables: row i of m is the image of x_{i+1} / y_{i+1}.
SuperPoly substitute(const SuperPoly& f,
                     const std::vector<std::vector<Fp>>& m);

std::string to_string(const SuperPoly& f);

// Grammar: poly = "0" | term (" + " term)*, term = coeff("*"factor)*,
// factor = x<i> | y<i>[^<e>]. Coefficients are nonnegative integers.
SuperPoly parse_poly(std::string_view text, Prime p, std::uint32_t nvars);

}  // namespace dmst
