#include "dmst/gfp.hpp"

#include <array>
#include <string>

namespace dmst {
namespace {

// Exact Pascal triangle up to n = 61; C(61,30) still fits in 64 bits.
constexpr int kPascalMax = 62;

constexpr std::array<std::array<std::uint64_t, kPascalMax>, kPascalMax>
build_pascal() {
  std::array<std::array<std::uint64_t, kPascalMax>, kPascalMax> c{};
  for (int n = 0; n < kPascalMax; ++n) {
    c[n][0] = 1;
    for (int k = 1; k <= n; ++k)
      c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
  }
  return c;
}

constexpr auto kPascal = build_pascal();

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("64-bit addition overflow");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("64-bit multiplication overflow");
  return r;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  for (std::uint32_t j = 0; j < exp; ++j) r = checked_mul(r, base);
  return r;
}

std::uint64_t geom_sum_pow(std::uint32_t p, std::uint32_t lo,
                           std::uint32_t hi) {
  if (hi < lo) return 0;
  std::uint64_t sum = 0;
  for (std::uint32_t j = lo; j <= hi; ++j)
    sum = checked_add(sum, checked_pow(p, j));
  return sum;
}

Prime::Prime(std::uint32_t p) : p_(p) {
  if (p < 3 || p > 61 || p % 2 == 0 || !is_prime_u32(p))
    throw ConfigError("prime must be an odd prime in [3, 61], got " +
                      std::to_string(p));
}

Fp Prime::reduce_signed(std::int64_t a) const {
  std::int64_t m = a % static_cast<std::int64_t>(p_);
  if (m < 0) m += p_;
  return static_cast<Fp>(m);
}

Fp Prime::pow(Fp base, std::uint64_t e) const {
  Fp r = 1;
  Fp b = base % p_;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

Fp Prime::inv(Fp a) const {
  if (a % p_ == 0) throw Error("division by zero in F_p");
  return pow(a, p_ - 2);
}

std::vector<std::uint32_t> padic_digits(std::uint64_t a, std::uint32_t p) {
  std::vector<std::uint32_t> digits;
  while (a > 0) {
    digits.push_back(static_cast<std::uint32_t>(a % p));
    a /= p;
  }
  return digits;
}

Fp binom_mod_p(std::uint64_t b, std::int64_t i, const Prime& p) {
  if (i < 0) return 0;
  std::uint64_t k = static_cast<std::uint64_t>(i);
  if (k > b) return 0;
  std::uint32_t pv = p.value();
  Fp result = 1;
  // Lucas: product of digit binomials.
  while (b > 0 || k > 0) {
    std::uint32_t bd = static_cast<std::uint32_t>(b % pv);
    std::uint32_t kd = static_cast<std::uint32_t>(k % pv);
    if (kd > bd) return 0;
    result = p.mul(result, static_cast<Fp>(kPascal[bd][kd] % pv));
    b /= pv;
    k /= pv;
  }
  return result;
}

Fp multinom_mod_p(std::uint64_t b, std::span<const std::uint64_t> rs,
                  const Prime& p) {
  std::uint64_t total = 0;
  for (std::uint64_t r : rs) total = checked_add(total, r);
  if (total > b) return 0;
  Fp result = 1;
  std::uint64_t rem = b;
  for (std::uint64_t r : rs) {
    result = p.mul(result, binom_mod_p(rem, static_cast<std::int64_t>(r), p));
    if (result == 0) return 0;
    rem -= r;
  }
  return result;
}

std::uint64_t abs_r(std::span<const std::uint64_t> rs, std::uint32_t p) {
  std::uint64_t sum = 0;
  for (std::size_t j = 0; j < rs.size(); ++j) {
    std::uint64_t w = checked_pow(p, static_cast<std::uint32_t>(j + 1)) - 1;
    sum = checked_add(sum, checked_mul(w, rs[j]));
  }
  return sum;
}

std::uint32_t primitive_root_mod(std::uint32_t p) {
  // Factor p-1, then test candidates against each prime factor.
  std::vector<std::uint32_t> factors;
  std::uint32_t m = p - 1;
  for (std::uint32_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) factors.push_back(m);
  Prime pr(p);
  for (std::uint32_t g = 2; g < p; ++g) {
    bool ok = true;
    for (std::uint32_t q : factors) {
      if (pr.pow(g, (p - 1) / q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error("no primitive root found");  // unreachable for prime p
}

}  // namespace dmst
