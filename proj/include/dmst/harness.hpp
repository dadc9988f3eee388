#pragma once
// Verification campaign: sweeps every catalogued formula over a parameter
// grid, evaluates the operator action from first principles as the oracle,
// and classifies each (formula, variant, params) case.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmst/closedform.hpp"
#include "dmst/gfp.hpp"

namespace dmst {

enum class Status { Match, Mismatch, ErratumConfirmed, Skipped };
std::string_view status_name(Status s);

// Grid coordinates of one case; -1 / empty marks "not used by this formula".
struct CaseSpec {
  std::string which;
  std::int64_t s = -1;
  std::int64_t i = -1;
  std::int64_t u = -1;
  std::int64_t v = -1;
  std::int64_t e = -1;

  friend bool operator==(const CaseSpec&, const CaseSpec&) = default;
};

std::string params_to_string(const CaseSpec& spec);

struct CaseResult {
  std::uint32_t prime = 0;
  FormulaId id = FormulaId::Prop22;
  Variant variant = Variant::Printed;
  CaseSpec spec;
  Status status = Status::Match;
  std::string lhs;  // closed-form value
  std::string rhs;  // oracle value
};

enum class VariantMode { Printed, Corrected, Both };
VariantMode variant_mode_from_name(std::string_view name);  // ConfigError

struct CampaignConfig {
  std::vector<std::uint32_t> primes{3};
  std::vector<FormulaId> formulas;  // empty = whole catalogue
  std::optional<std::int64_t> max_i;
  std::int64_t max_s = 5;
  std::int64_t uv_max = 6;
  VariantMode variants = VariantMode::Both;
  std::optional<std::vector<std::int64_t>> i_values;  // overrides max_i
  std::optional<std::vector<std::int64_t>> s_values;  // overrides max_s
  int workers = 1;
};

struct PrimeReport {
  std::uint32_t prime = 0;
  std::vector<CaseResult> cases;
  std::size_t n_match = 0;
  std::size_t n_mismatch = 0;
  std::size_t n_erratum = 0;
  std::size_t n_skipped = 0;
};

struct Report {
  std::vector<PrimeReport> per_prime;
};

// Evaluates one grid point: the oracle is computed once, then compared
// against each requested variant of the closed form.
std::vector<CaseResult> verify_case(FormulaId id, Prime p,
                                    const CaseSpec& spec,
                                    VariantMode variants);

Report run_campaign(const CampaignConfig& cfg);

std::string report_to_text(const Report& rep);
// One object for a single prime, an array of objects otherwise; no
// timestamps or environment data, so reruns are byte-identical.
std::string report_to_json(const Report& rep);
// 1 when any corrected-variant case mismatches, 0 otherwise.
int report_exit_code(const Report& rep);

}  // namespace dmst
