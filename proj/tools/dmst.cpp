// Command-line front end: `verify` sweeps the formula catalogue against
// the operator oracle, `apply` evaluates one St^{S,R} on a generator or
// parsed polynomial, `gens` prints the invariant-theory generators.
//
// Exit codes: 0 success, 1 a corrected-variant case failed verification,
// 2 configuration or usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmst/closedform.hpp"
#include "dmst/dickson.hpp"
#include "dmst/errors.hpp"
#include "dmst/harness.hpp"
#include "dmst/steenrod.hpp"
#include "dmst/superpoly.hpp"

namespace {

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string piece = text.substr(pos, comma - pos);
    // tolerate surrounding blanks: "1, 2"
    const auto a = piece.find_first_not_of(" \t");
    const auto b = piece.find_last_not_of(" \t");
    if (a == std::string::npos) throw dmst::ConfigError("empty list entry");
    piece = piece.substr(a, b - a + 1);
    std::size_t used = 0;
    std::uint64_t value = std::stoull(piece, &used);
    if (used != piece.size())
      throw dmst::ConfigError("bad list entry: " + piece);
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

int run_verify(const dmst::CampaignConfig& cfg, const std::string& json_path) {
  const dmst::Report report = dmst::run_campaign(cfg);
  std::cout << dmst::report_to_text(report);
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw dmst::ConfigError("cannot open " + json_path);
    out << dmst::report_to_json(report);
  }
  return dmst::report_exit_code(report);
}

int run_apply(std::uint32_t prime, const std::string& s_str,
              const std::string& r_str, const std::string& target) {
  dmst::Prime p(prime);
  auto gens = dmst::generators(p);

  dmst::SuperPoly arg(p, 2);
  bool named = false;
  for (const auto& name : dmst::GeneratorSet::names()) {
    if (name == target) {
      arg = gens->by_name(name);
      named = true;
      break;
    }
  }
  if (!named) arg = dmst::parse_poly(target, p, 2);

  std::vector<std::uint32_t> s;
  for (std::uint64_t x : parse_u64_list(s_str))
    s.push_back(static_cast<std::uint32_t>(x));
  const auto idx = dmst::MilnorIndex::make(std::move(s), parse_u64_list(r_str));

  const dmst::SuperPoly result = dmst::st_apply(idx, arg);
  std::cout << dmst::to_string(result) << "\n";
  try {
    const dmst::DMExpr nf = dmst::dm_decompose(result, *gens);
    std::cout << "dm: " << dmst::to_string(nf) << "\n";
  } catch (const dmst::Error&) {
    // not an invariant (or not homogeneous): plain polynomial output only
  }
  return 0;
}

int run_gens(std::uint32_t prime) {
  dmst::Prime p(prime);
  auto gens = dmst::generators(p);
  for (const auto& name : dmst::GeneratorSet::names()) {
    std::cout << name << " = " << dmst::to_string(gens->by_name(name))
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Steenrod operations on mod-p invariants of rank two: exact "
      "calculator and formula verifier"};
  app.require_subcommand(1);

  auto* vcmd = app.add_subcommand(
      "verify", "check every catalogued closed form against the operator");
  std::vector<std::uint32_t> primes{3};
  vcmd->add_option("--prime", primes, "prime(s), e.g. 3 or 3,5")
      ->delimiter(',');
  std::vector<std::string> theorems;
  vcmd->add_option("--theorem", theorems,
                   "formula name(s) from the catalogue, or 'all'")
      ->delimiter(',');
  std::int64_t max_i = 0;
  auto* max_i_opt =
      vcmd->add_option("--max-i", max_i, "sweep i over [0, N] only");
  std::int64_t max_s = 5;
  vcmd->add_option("--max-s", max_s, "largest operator exterior index s");
  std::string variant = "both";
  vcmd->add_option("--variant", variant, "printed | corrected | both")
      ->check(CLI::IsMember({"printed", "corrected", "both"}));
  std::string json_path;
  vcmd->add_option("--json", json_path, "write the JSON report to this file");
  int workers = 1;
  vcmd->add_option("--workers", workers,
                   "parallel workers (1 = serial reference loop)");

  auto* acmd = app.add_subcommand(
      "apply", "apply St^{S,R} to a generator or polynomial");
  std::uint32_t apply_prime = 0;
  acmd->add_option("--prime", apply_prime, "odd prime")->required();
  std::string s_str, r_str, target;
  acmd->add_option("--S", s_str, "exterior indices, e.g. '0,2' (default none)");
  acmd->add_option("--R", r_str, "power indices, e.g. '4' (default none)");
  acmd->add_option("--target", target,
                   "generator name (L2, Q0, R01, ...) or polynomial, e.g. "
                   "'x1*y2^3 + 2*y1'")
      ->required();

  auto* gcmd =
      app.add_subcommand("gens", "print the invariant-theory generators");
  std::uint32_t gens_prime = 0;
  gcmd->add_option("--prime", gens_prime, "odd prime")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (vcmd->parsed()) {
      dmst::CampaignConfig cfg;
      cfg.primes = primes;
      for (const auto& name : theorems) {
        if (name == "all") {
          cfg.formulas.clear();
          break;
        }
        cfg.formulas.push_back(dmst::formula_from_name(name));
      }
      if (max_i_opt->count() > 0) {
        if (max_i < 0) throw dmst::ConfigError("--max-i must be >= 0");
        cfg.max_i = max_i;
      }
      cfg.max_s = max_s;
      cfg.variants = dmst::variant_mode_from_name(variant);
      cfg.workers = workers;
      return run_verify(cfg, json_path);
    }
    if (acmd->parsed()) return run_apply(apply_prime, s_str, r_str, target);
    if (gcmd->parsed()) return run_gens(gens_prime);
  } catch (const dmst::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
