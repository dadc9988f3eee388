#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmst/errors.hpp"
#include "dmst/harness.hpp"

using namespace dmst;
using nlohmann::json;

namespace {

CaseSpec i_only(std::int64_t i) {
  CaseSpec sp;
  sp.i = i;
  return sp;
}

}  // namespace

TEST_CASE("verify_case classifies an erratum") {
  Prime p(3);
  // P^1 R1 = R0 but the printed range ends at r = k
  const auto rs = verify_case(FormulaId::Thm34R21, p, i_only(1),
                              VariantMode::Both);
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].variant == Variant::Printed);
  CHECK(rs[0].status == Status::ErratumConfirmed);
  CHECK(rs[0].lhs == "0");
  CHECK(rs[0].rhs == "1*R0");
  CHECK(rs[1].variant == Variant::Corrected);
  CHECK(rs[1].status == Status::Match);
  CHECK(rs[1].lhs == rs[1].rhs);
}

TEST_CASE("verify_case on matching cases") {
  Prime p(3);
  CaseSpec sp;
  sp.e = 1;
  sp.i = 3;
  for (const auto& r :
       verify_case(FormulaId::Cor24, p, sp, VariantMode::Both)) {
    CHECK(r.status == Status::Match);
    CHECK(r.lhs == "1*y1^9");
  }
  CaseSpec stq;
  stq.which = "Q0";
  stq.s = 2;
  stq.i = 4;
  const auto rs = verify_case(FormulaId::StQ, p, stq, VariantMode::Corrected);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].status == Status::Match);
  CHECK(rs[0].lhs == "0");
}

TEST_CASE("single formula campaign counts") {
  CampaignConfig cfg;
  cfg.primes = {3};
  cfg.formulas = {FormulaId::Thm31};
  const auto rep = run_campaign(cfg);
  REQUIRE(rep.per_prime.size() == 1);
  const auto& pr = rep.per_prime.front();
  CHECK(pr.prime == 3);
  // 2 generators x i in [0, p^2+p] x 2 variants
  CHECK(pr.cases.size() == 2 * 13 * 2);
  CHECK(pr.n_mismatch == 0);
  CHECK(pr.n_skipped == 0);
  // the printed guard drops the whole s=1, r=0 family: i = 0, p, 2p
  CHECK(pr.n_erratum == 3);
  CHECK(pr.n_match == pr.cases.size() - 3);
  for (const auto& c : pr.cases) {
    if (c.status == Status::ErratumConfirmed) {
      CHECK(c.variant == Variant::Printed);
      CHECK(c.spec.s == 1);
      CHECK(c.spec.i % 3 == 0);
    }
  }
  CHECK(report_exit_code(rep) == 0);
}

TEST_CASE("grid controls") {
  CampaignConfig cfg;
  cfg.primes = {3};
  cfg.formulas = {FormulaId::Thm33};
  cfg.max_i = 0;
  auto rep = run_campaign(cfg);
  CHECK(rep.per_prime.front().cases.size() == 2);
  for (const auto& c : rep.per_prime.front().cases) {
    CHECK(c.spec.i == 0);
    CHECK(c.status == Status::Match);
  }

  cfg = CampaignConfig{};
  cfg.primes = {3};
  cfg.formulas = {FormulaId::Thm42};
  cfg.i_values = std::vector<std::int64_t>{1};
  cfg.s_values = std::vector<std::int64_t>{0};
  cfg.variants = VariantMode::Corrected;
  rep = run_campaign(cfg);
  CHECK(rep.per_prime.front().cases.size() == 1);
  CHECK(rep.per_prime.front().cases.front().spec.s == 0);
  CHECK(rep.per_prime.front().cases.front().spec.i == 1);
}

TEST_CASE("json report shape") {
  CampaignConfig cfg;
  cfg.primes = {3};
  cfg.formulas = {FormulaId::Cor28};
  const auto rep = run_campaign(cfg);
  const auto doc = json::parse(report_to_json(rep));
  CHECK(doc.is_object());
  CHECK(doc["prime"] == 3);
  CHECK(doc["summary"]["mismatch"] == 0);
  CHECK(doc["summary"]["match"].get<std::size_t>() ==
        rep.per_prime.front().n_match);
  REQUIRE(!doc["cases"].empty());
  const auto& c0 = doc["cases"].front();
  CHECK(c0["formula"] == "Cor2.8");
  CHECK(c0["variant"] == "printed");
  CHECK(c0["params"].contains("which"));
  CHECK(c0["params"].contains("i"));
  CHECK(!c0["params"].contains("s"));
  CHECK(c0["status"] == "match");

  CampaignConfig two = cfg;
  two.primes = {3, 5};
  const auto doc2 = json::parse(report_to_json(run_campaign(two)));
  REQUIRE(doc2.is_array());
  REQUIRE(doc2.size() == 2);
  CHECK(doc2[0]["prime"] == 3);
  CHECK(doc2[1]["prime"] == 5);
}

TEST_CASE("reports are deterministic and worker-count independent") {
  CampaignConfig cfg;
  cfg.primes = {3};
  cfg.formulas = {FormulaId::Thm42, FormulaId::Lem41};
  const auto a = report_to_json(run_campaign(cfg));
  const auto b = report_to_json(run_campaign(cfg));
  CHECK(a == b);
  cfg.workers = 4;
  const auto c = report_to_json(run_campaign(cfg));
  CHECK(a == c);
}

TEST_CASE("exit code contract") {
  Report rep;
  PrimeReport pr;
  pr.prime = 3;
  CaseResult bad;
  bad.variant = Variant::Printed;
  bad.status = Status::Mismatch;
  pr.cases.push_back(bad);
  rep.per_prime.push_back(pr);
  // a printed-only mismatch does not fail the run...
  CHECK(report_exit_code(rep) == 0);
  // ...a corrected one does
  rep.per_prime.front().cases.front().variant = Variant::Corrected;
  CHECK(report_exit_code(rep) == 1);
}

TEST_CASE("configuration validation") {
  CampaignConfig cfg;
  cfg.workers = 0;
  CHECK_THROWS_AS(run_campaign(cfg), ConfigError);
  cfg = CampaignConfig{};
  cfg.primes = {};
  CHECK_THROWS_AS(run_campaign(cfg), ConfigError);
  cfg = CampaignConfig{};
  cfg.primes = {4};
  CHECK_THROWS_AS(run_campaign(cfg), ConfigError);
  CHECK_THROWS_AS(variant_mode_from_name("sometimes"), ConfigError);
  CHECK(variant_mode_from_name("both") == VariantMode::Both);
}

TEST_CASE("status and parameter rendering") {
  CHECK(status_name(Status::Match) == "match");
  CHECK(status_name(Status::Mismatch) == "mismatch");
  CHECK(status_name(Status::ErratumConfirmed) == "erratum-confirmed");
  CHECK(status_name(Status::Skipped) == "skipped");
  CaseSpec sp;
  sp.which = "M20";
  sp.s = 2;
  sp.i = 0;
  CHECK(params_to_string(sp) == "[which=M20 s=2 i=0]");
  CHECK(params_to_string(CaseSpec{}) == "[]");
}

TEST_CASE("text report lists counterexamples") {
  CampaignConfig cfg;
  cfg.primes = {3};
  cfg.formulas = {FormulaId::Thm43};
  const auto rep = run_campaign(cfg);
  const auto text = report_to_text(rep);
  CHECK(text.find("prime 3") != std::string::npos);
  CHECK(text.find("errata") != std::string::npos);
  CHECK(text.find("Thm4.3") != std::string::npos);
  CHECK(text.find("[s=0 i=1]") != std::string::npos);
  CHECK(text.find("mismatches") == std::string::npos);
}
