#pragma once
// Arithmetic mod a small odd prime: field ops, Lucas binomials and
// multinomials, p-adic digits, overflow-checked 64-bit helpers.

#include <cstdint>
#include <span>
#include <vector>

#include "dmst/errors.hpp"

namespace dmst {

using Fp = std::uint32_t;  // residue in [0, p)

// All three throw OverflowError instead of wrapping.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp);

// p^lo + p^(lo+1) + ... + p^hi; zero when hi < lo.
std::uint64_t geom_sum_pow(std::uint32_t p, std::uint32_t lo, std::uint32_t hi);

class Prime {
 public:
  // Accepts odd primes in [3, 61].
  explicit Prime(std::uint32_t p);

  std::uint32_t value() const { return p_; }

  Fp reduce(std::uint64_t a) const { return static_cast<Fp>(a % p_); }
  Fp reduce_signed(std::int64_t a) const;

  Fp add(Fp a, Fp b) const { return (a + b) % p_; }
  Fp sub(Fp a, Fp b) const { return (a + p_ - b) % p_; }
  Fp neg(Fp a) const { return a == 0 ? 0 : p_ - a; }
  Fp mul(Fp a, Fp b) const {
    return static_cast<Fp>(static_cast<std::uint64_t>(a) * b % p_);
  }
  Fp pow(Fp base, std::uint64_t e) const;
  Fp inv(Fp a) const;  // a != 0

  // (-1)^e as a residue.
  Fp sign_pow(std::uint64_t e) const { return (e & 1) ? p_ - 1 : 1; }

  friend bool operator==(const Prime&, const Prime&) = default;

 private:
  std::uint32_t p_;
};

// Base-p digits, least significant first, no trailing zeros ([] for 0).
std::vector<std::uint32_t> padic_digits(std::uint64_t a, std::uint32_t p);

// Binomial coefficient mod p via Lucas; 0 for i < 0 or i > b.
Fp binom_mod_p(std::uint64_t b, std::int64_t i, const Prime& p);

// b! / ((b - sum r)! r_1! ... r_m!) mod p, or 0 when sum r > b.
Fp multinom_mod_p(std::uint64_t b, std::span<const std::uint64_t> rs,
                  const Prime& p);

// sum_i (p^i - 1) r_i for R = (r_1, ..., r_m); the y-exponent shift of R.
std::uint64_t abs_r(std::span<const std::uint64_t> rs, std::uint32_t p);

// Smallest generator of the multiplicative group mod p.
std::uint32_t primitive_root_mod(std::uint32_t p);

}  // namespace dmst
