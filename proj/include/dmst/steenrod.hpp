#pragma once
// Milnor-indexed Steenrod operations St^{S,R} acting on the super-polynomial
// algebra: S a strictly increasing exterior index sequence, R a power-part
// exponent sequence. St^{(),()} = 1, St^{(0),()} = Bockstein,
// St^{(),(r)} = P^r.

#include <cstdint>
#include <vector>

#include "dmst/gfp.hpp"
#include "dmst/superpoly.hpp"

namespace dmst {

struct MilnorIndex {
  std::vector<std::uint32_t> s;  // strictly increasing
  std::vector<std::uint64_t> r;  // no trailing zeros

  // Validates monotonicity of s and trims trailing zeros of r.
  static MilnorIndex make(std::vector<std::uint32_t> s,
                          std::vector<std::uint64_t> r);

  std::size_t s_len() const { return s.size(); }
  // Sum of 2p^{s_j} - 1 over s plus 2(p^i - 1)r_i over r (1-indexed i).
  std::uint64_t operation_degree(Prime p) const;

  friend auto operator<=>(const MilnorIndex&, const MilnorIndex&) = default;
};

// One term of the Cartan expansion St^{S,R}(uv) = sum sign' * St^{S1,R1}(u)
// * St^{S2,R2}(v). `sign` is only the shuffle sign of reordering S1 ++ S2
// into S; the caller still multiplies by (-1)^{(deg u + |S1|)*|S2|}.
// R parts keep the full length of the input R (no trimming).
struct CartanSplit {
  std::vector<std::uint32_t> s1, s2;
  std::vector<std::uint64_t> r1, r2;
  int sign;
};

std::vector<CartanSplit> cartan_splittings(const MilnorIndex& idx);

// St^{S,R} on the atom x_k^eps * y_l^b: multinomial coefficient C(b, R)
// times x_k^eps y_l^{b+|R|} when S is empty, eps * C(b, R) y_k^{p^s}
// y_l^{b+|R|} when S = (s), zero when |S| >= 2.
SuperPoly atom_action(const MilnorIndex& idx, bool eps, std::uint32_t k,
                      std::uint64_t b, std::uint32_t l, Prime p,
                      std::uint32_t nvars);

SuperPoly st_apply(const MilnorIndex& idx, const SuperPoly& f);

SuperPoly bockstein(const SuperPoly& f);
SuperPoly power_op(std::uint64_t r, const SuperPoly& f);

}  // namespace dmst
