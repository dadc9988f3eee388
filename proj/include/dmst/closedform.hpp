#pragma once
// Closed-form right-hand sides for the catalogued operation formulas,
// each as a function of (p, s, i, u, v, ...). Formulas whose printed text
// fails the oracle carry two variants: "printed" evaluates the text
// verbatim, "corrected" replaces the failing guard/exponent by the
// consistent one. Everything else evaluates identically under both.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dmst/dickson.hpp"
#include "dmst/gfp.hpp"
#include "dmst/superpoly.hpp"

namespace dmst {

enum class FormulaId {
  Prop22,
  Cor24,
  Lem25,
  Cor26,
  Lem27,
  Cor28,
  Thm31,
  Lem32,
  Thm33,
  Thm34R21,
  Thm34R201,
  Lem41,
  Thm42,
  Thm43,
  Thm44,
  StQ,
};

enum class Variant { Printed, Corrected };

const std::vector<FormulaId>& all_formulas();
std::string_view formula_name(FormulaId id);
FormulaId formula_from_name(std::string_view name);  // throws ConfigError
std::string_view variant_name(Variant v);

// The integers whose base-p digits are 0/1, supported on positions
// u..v-3, with no two adjacent 1-digits; {0} when the range is empty.
std::vector<std::uint64_t> enum_I(std::uint64_t u, std::uint64_t v, Prime p);

// bracket(u,v) expanded in powers of L2 and Q1 over the I(u,v) index set.
SuperPoly prop22(const GeneratorSet& gens, std::uint64_t u, std::uint64_t v);

// Case tables: value for the listed i, zero otherwise.
SuperPoly cor24(Prime p, std::uint64_t e, std::uint64_t i);  // P^i y1^{p^e}
SuperPoly lem25(Prime p, std::uint64_t u, std::uint64_t v,
                std::uint64_t i);  // P^i bracket(u,v)
SuperPoly cor26(const GeneratorSet& gens, std::string_view which,
                std::uint64_t i);  // P^i on L2 / L20 / L21
SuperPoly lem27(Prime p, std::uint64_t s, std::uint64_t u,
                std::uint64_t i);  // St^{(s),(i)} bracket1(u)
SuperPoly cor28(const GeneratorSet& gens, std::string_view which,
                std::uint64_t i);  // P^i on M20 / M21
SuperPoly lem41(Prime p, std::string_view which, std::uint64_t s,
                std::uint64_t i);  // St^{(s),(i)} on M20 / M21

// P^i L2^{p-2}: stays outside the invariant ring, returned as SuperPoly.
SuperPoly lem32(const GeneratorSet& gens, std::uint64_t i, Variant variant);

// P^i on Q_{2,s} (s names the Dickson generator here, 0 or 1).
DMExpr thm31(Prime p, std::uint32_t s, std::uint64_t i, Variant variant);
// P^i on R0 / R1 / R01.
DMExpr thm33(Prime p, std::uint64_t i, Variant variant);
DMExpr thm34_r21(Prime p, std::uint64_t i, Variant variant);
DMExpr thm34_r201(Prime p, std::uint64_t i, Variant variant);
// St^{(s),(i)} on R0 / R1 / R01.
DMExpr thm42(Prime p, std::uint64_t s, std::uint64_t i, Variant variant);
DMExpr thm43(Prime p, std::uint64_t s, std::uint64_t i, Variant variant);
DMExpr thm44(Prime p, std::uint64_t s, std::uint64_t i, Variant variant);
// St^{(s),(i)} on Q_{2,0} or Q_{2,1}: identically zero.
DMExpr st_on_q(Prime p, std::uint64_t s, std::uint64_t i,
               std::uint32_t which_q);

}  // namespace dmst
