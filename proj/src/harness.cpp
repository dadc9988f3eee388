#include "dmst/harness.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "dmst/dickson.hpp"
#include "dmst/errors.hpp"
#include "dmst/steenrod.hpp"
#include "dmst/superpoly.hpp"

namespace dmst {

namespace {

using nlohmann::json;

bool is_poly_formula(FormulaId id) {
  switch (id) {
    case FormulaId::Prop22:
    case FormulaId::Cor24:
    case FormulaId::Lem25:
    case FormulaId::Cor26:
    case FormulaId::Lem27:
    case FormulaId::Cor28:
    case FormulaId::Lem41:
    case FormulaId::Lem32:
      return true;
    default:
      return false;
  }
}

std::uint64_t as_u64(std::int64_t x, const char* what) {
  if (x < 0) throw ConfigError(std::string("missing parameter: ") + what);
  return static_cast<std::uint64_t>(x);
}

SuperPoly st_one(std::int64_t s, std::int64_t i, const SuperPoly& f) {
  auto idx = MilnorIndex::make({static_cast<std::uint32_t>(as_u64(s, "s"))},
                               {as_u64(i, "i")});
  return st_apply(idx, f);
}

SuperPoly oracle_poly(FormulaId id, const GeneratorSet& g,
                      const CaseSpec& sp) {
  Prime p = g.p;
  switch (id) {
    case FormulaId::Prop22:
      return bracket(p, as_u64(sp.u, "u"), as_u64(sp.v, "v"));
    case FormulaId::Cor24:
      return power_op(as_u64(sp.i, "i"),
                      SuperPoly::y_gen(p, 2, 1,
                                       checked_pow(p.value(),
                                                   as_u64(sp.e, "e"))));
    case FormulaId::Lem25:
      return power_op(as_u64(sp.i, "i"),
                      bracket(p, as_u64(sp.u, "u"), as_u64(sp.v, "v")));
    case FormulaId::Cor26:
    case FormulaId::Cor28:
      return power_op(as_u64(sp.i, "i"), g.by_name(sp.which));
    case FormulaId::Lem27:
      return st_one(sp.s, sp.i, bracket1(p, as_u64(sp.u, "u")));
    case FormulaId::Lem41:
      return st_one(sp.s, sp.i, g.by_name(sp.which));
    case FormulaId::Thm31:
      return power_op(as_u64(sp.i, "i"), sp.s == 0 ? g.Q0 : g.Q1);
    case FormulaId::Lem32:
      return power_op(as_u64(sp.i, "i"),
                      pow(g.L2, std::uint64_t{p.value()} - 2));
    case FormulaId::Thm33:
      return power_op(as_u64(sp.i, "i"), g.R0);
    case FormulaId::Thm34R21:
      return power_op(as_u64(sp.i, "i"), g.R1);
    case FormulaId::Thm34R201:
      return power_op(as_u64(sp.i, "i"), g.R01);
    case FormulaId::Thm42:
      return st_one(sp.s, sp.i, g.R0);
    case FormulaId::Thm43:
      return st_one(sp.s, sp.i, g.R1);
    case FormulaId::Thm44:
      return st_one(sp.s, sp.i, g.R01);
    case FormulaId::StQ:
      return st_one(sp.s, sp.i, g.by_name(sp.which));
  }
  throw ConfigError("unknown formula id");
}

SuperPoly closed_poly(FormulaId id, const GeneratorSet& g, const CaseSpec& sp,
                      Variant var) {
  Prime p = g.p;
  switch (id) {
    case FormulaId::Prop22:
      return prop22(g, as_u64(sp.u, "u"), as_u64(sp.v, "v"));
    case FormulaId::Cor24:
      return cor24(p, as_u64(sp.e, "e"), as_u64(sp.i, "i"));
    case FormulaId::Lem25:
      return lem25(p, as_u64(sp.u, "u"), as_u64(sp.v, "v"),
                   as_u64(sp.i, "i"));
    case FormulaId::Cor26:
      return cor26(g, sp.which, as_u64(sp.i, "i"));
    case FormulaId::Lem27:
      return lem27(p, as_u64(sp.s, "s"), as_u64(sp.u, "u"),
                   as_u64(sp.i, "i"));
    case FormulaId::Cor28:
      return cor28(g, sp.which, as_u64(sp.i, "i"));
    case FormulaId::Lem41:
      return lem41(p, sp.which, as_u64(sp.s, "s"), as_u64(sp.i, "i"));
    case FormulaId::Lem32:
      return lem32(g, as_u64(sp.i, "i"), var);
    default:
      throw ConfigError("formula does not produce a raw polynomial");
  }
}

DMExpr closed_dm(FormulaId id, Prime p, const CaseSpec& sp, Variant var) {
  switch (id) {
    case FormulaId::Thm31:
      return thm31(p, static_cast<std::uint32_t>(as_u64(sp.s, "s")),
                   as_u64(sp.i, "i"), var);
    case FormulaId::Thm33:
      return thm33(p, as_u64(sp.i, "i"), var);
    case FormulaId::Thm34R21:
      return thm34_r21(p, as_u64(sp.i, "i"), var);
    case FormulaId::Thm34R201:
      return thm34_r201(p, as_u64(sp.i, "i"), var);
    case FormulaId::Thm42:
      return thm42(p, as_u64(sp.s, "s"), as_u64(sp.i, "i"), var);
    case FormulaId::Thm43:
      return thm43(p, as_u64(sp.s, "s"), as_u64(sp.i, "i"), var);
    case FormulaId::Thm44:
      return thm44(p, as_u64(sp.s, "s"), as_u64(sp.i, "i"), var);
    case FormulaId::StQ: {
      std::uint32_t q;
      if (sp.which == "Q0") {
        q = 0;
      } else if (sp.which == "Q1") {
        q = 1;
      } else {
        throw ConfigError("StQ target must be Q0 or Q1");
      }
      return st_on_q(p, as_u64(sp.s, "s"), as_u64(sp.i, "i"), q);
    }
    default:
      throw ConfigError("formula does not produce a normal-form value");
  }
}

std::vector<Variant> variants_of(VariantMode vm) {
  switch (vm) {
    case VariantMode::Printed:
      return {Variant::Printed};
    case VariantMode::Corrected:
      return {Variant::Corrected};
    case VariantMode::Both:
      return {Variant::Printed, Variant::Corrected};
  }
  throw ConfigError("unknown variant mode");
}

struct WorkItem {
  FormulaId id;
  CaseSpec spec;
};

std::vector<std::int64_t> i_grid(const CampaignConfig& cfg, Prime p,
                                 std::vector<std::uint64_t> extras) {
  if (cfg.i_values) return *cfg.i_values;
  std::vector<std::int64_t> out;
  if (cfg.max_i) {
    for (std::int64_t i = 0; i <= *cfg.max_i; ++i) out.push_back(i);
    return out;
  }
  const std::uint64_t top =
      static_cast<std::uint64_t>(p.value()) * p.value() + p.value();
  for (std::uint64_t i = 0; i <= top; ++i)
    out.push_back(static_cast<std::int64_t>(i));
  std::sort(extras.begin(), extras.end());
  for (std::uint64_t x : extras) {
    if (x > top) out.push_back(static_cast<std::int64_t>(x));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::int64_t> s_grid(const CampaignConfig& cfg) {
  if (cfg.s_values) return *cfg.s_values;
  std::vector<std::int64_t> out;
  for (std::int64_t s = 0; s <= cfg.max_s; ++s) out.push_back(s);
  return out;
}

std::vector<WorkItem> enumerate_items(const CampaignConfig& cfg, Prime p,
                                      const std::vector<FormulaId>& ids) {
  std::vector<WorkItem> items;
  const std::uint64_t pv = p.value();
  auto spec = [] { return CaseSpec{}; };

  for (FormulaId id : ids) {
    switch (id) {
      case FormulaId::Prop22:
        for (std::int64_t u = 0; u < cfg.uv_max; ++u) {
          for (std::int64_t v = u + 1; v <= cfg.uv_max; ++v) {
            auto sp = spec();
            sp.u = u;
            sp.v = v;
            items.push_back({id, sp});
          }
        }
        break;
      case FormulaId::Cor24:
        for (std::int64_t e = 0; e <= cfg.uv_max; ++e) {
          auto pe = checked_pow(pv, static_cast<std::uint64_t>(e));
          for (std::int64_t i : i_grid(cfg, p, {pe})) {
            auto sp = spec();
            sp.e = e;
            sp.i = i;
            items.push_back({id, sp});
          }
        }
        break;
      case FormulaId::Lem25:
        for (std::int64_t u = 0; u < cfg.uv_max; ++u) {
          for (std::int64_t v = u + 1; v <= cfg.uv_max; ++v) {
            auto pu = checked_pow(pv, static_cast<std::uint64_t>(u));
            auto pw = checked_pow(pv, static_cast<std::uint64_t>(v));
            for (std::int64_t i :
                 i_grid(cfg, p, {pu, pw, checked_add(pu, pw)})) {
              auto sp = spec();
              sp.u = u;
              sp.v = v;
              sp.i = i;
              items.push_back({id, sp});
            }
          }
        }
        break;
      case FormulaId::Cor26: {
        const std::uint64_t pp = pv * pv;
        const std::pair<const char*, std::vector<std::uint64_t>> targets[] = {
            {"L2", {pv, pv + 1}},
            {"L20", {pp, pp + pv}},
            {"L21", {1, pp, pp + 1}},
        };
        for (const auto& [name, extras] : targets) {
          for (std::int64_t i : i_grid(cfg, p, extras)) {
            auto sp = spec();
            sp.which = name;
            sp.i = i;
            items.push_back({id, sp});
          }
        }
        break;
      }
      case FormulaId::Lem27:
        for (std::int64_t u = 0; u <= cfg.uv_max; ++u) {
          auto pu = checked_pow(pv, static_cast<std::uint64_t>(u));
          for (std::int64_t s : s_grid(cfg)) {
            for (std::int64_t i : i_grid(cfg, p, {pu})) {
              auto sp = spec();
              sp.u = u;
              sp.s = s;
              sp.i = i;
              items.push_back({id, sp});
            }
          }
        }
        break;
      case FormulaId::Cor28: {
        const std::pair<const char*, std::vector<std::uint64_t>> targets[] = {
            {"M20", {pv}},
            {"M21", {1}},
        };
        for (const auto& [name, extras] : targets) {
          for (std::int64_t i : i_grid(cfg, p, extras)) {
            auto sp = spec();
            sp.which = name;
            sp.i = i;
            items.push_back({id, sp});
          }
        }
        break;
      }
      case FormulaId::Thm31:
        for (std::int64_t q = 0; q <= 1; ++q) {
          for (std::int64_t i : i_grid(cfg, p, {})) {
            auto sp = spec();
            sp.s = q;  // which Dickson generator, not an operator index
            sp.i = i;
            items.push_back({id, sp});
          }
        }
        break;
      case FormulaId::Lem32:
      case FormulaId::Thm33:
      case FormulaId::Thm34R21:
      case FormulaId::Thm34R201:
        for (std::int64_t i : i_grid(cfg, p, {})) {
          auto sp = spec();
          sp.i = i;
          items.push_back({id, sp});
        }
        break;
      case FormulaId::Lem41: {
        const std::pair<const char*, std::vector<std::uint64_t>> targets[] = {
            {"M20", {pv}},
            {"M21", {1}},
        };
        for (const auto& [name, extras] : targets) {
          for (std::int64_t s : s_grid(cfg)) {
            for (std::int64_t i : i_grid(cfg, p, extras)) {
              auto sp = spec();
              sp.which = name;
              sp.s = s;
              sp.i = i;
              items.push_back({id, sp});
            }
          }
        }
        break;
      }
      case FormulaId::Thm42:
      case FormulaId::Thm43:
      case FormulaId::Thm44:
        for (std::int64_t s : s_grid(cfg)) {
          for (std::int64_t i : i_grid(cfg, p, {})) {
            auto sp = spec();
            sp.s = s;
            sp.i = i;
            items.push_back({id, sp});
          }
        }
        break;
      case FormulaId::StQ:
        for (const char* name : {"Q0", "Q1"}) {
          for (std::int64_t s : s_grid(cfg)) {
            for (std::int64_t i : i_grid(cfg, p, {})) {
              auto sp = spec();
              sp.which = name;
              sp.s = s;
              sp.i = i;
              items.push_back({id, sp});
            }
          }
        }
        break;
    }
  }
  return items;
}

json case_to_json(const CaseResult& c) {
  json params = json::object();
  if (!c.spec.which.empty()) params["which"] = c.spec.which;
  if (c.spec.s >= 0) params["s"] = c.spec.s;
  if (c.spec.i >= 0) params["i"] = c.spec.i;
  if (c.spec.u >= 0) params["u"] = c.spec.u;
  if (c.spec.v >= 0) params["v"] = c.spec.v;
  if (c.spec.e >= 0) params["e"] = c.spec.e;
  return json{{"formula", std::string(formula_name(c.id))},
              {"variant", std::string(variant_name(c.variant))},
              {"params", std::move(params)},
              {"status", std::string(status_name(c.status))},
              {"lhs", c.lhs},
              {"rhs", c.rhs}};
}

json prime_to_json(const PrimeReport& pr) {
  json cases = json::array();
  for (const auto& c : pr.cases) cases.push_back(case_to_json(c));
  return json{{"prime", pr.prime},
              {"cases", std::move(cases)},
              {"summary",
               {{"match", pr.n_match},
                {"mismatch", pr.n_mismatch},
                {"erratum", pr.n_erratum},
                {"skipped", pr.n_skipped}}}};
}

}  // namespace

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Match:
      return "match";
    case Status::Mismatch:
      return "mismatch";
    case Status::ErratumConfirmed:
      return "erratum-confirmed";
    case Status::Skipped:
      return "skipped";
  }
  return "?";
}

std::string params_to_string(const CaseSpec& spec) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  auto put = [&](const char* k, std::int64_t v) {
    if (v < 0) return;
    if (!first) os << " ";
    first = false;
    os << k << "=" << v;
  };
  if (!spec.which.empty()) {
    os << "which=" << spec.which;
    first = false;
  }
  put("s", spec.s);
  put("i", spec.i);
  put("u", spec.u);
  put("v", spec.v);
  put("e", spec.e);
  os << "]";
  return os.str();
}

VariantMode variant_mode_from_name(std::string_view name) {
  if (name == "printed") return VariantMode::Printed;
  if (name == "corrected") return VariantMode::Corrected;
  if (name == "both") return VariantMode::Both;
  throw ConfigError("variant must be printed, corrected, or both");
}

std::vector<CaseResult> verify_case(FormulaId id, Prime p,
                                    const CaseSpec& spec, VariantMode vm) {
  auto gens = generators(p);
  const std::vector<Variant> vars = variants_of(vm);
  std::vector<CaseResult> out;
  out.reserve(vars.size());
  try {
    if (is_poly_formula(id)) {
      const SuperPoly oracle = oracle_poly(id, *gens, spec);
      const std::string rhs = to_string(oracle);
      for (Variant v : vars) {
        const SuperPoly mine = closed_poly(id, *gens, spec, v);
        Status st;
        if (mine == oracle) {
          st = Status::Match;
        } else if (v == Variant::Printed &&
                   closed_poly(id, *gens, spec, Variant::Corrected) ==
                       oracle) {
          st = Status::ErratumConfirmed;
        } else {
          st = Status::Mismatch;
        }
        out.push_back({p.value(), id, v, spec, st, to_string(mine), rhs});
      }
    } else {
      const SuperPoly oracle = oracle_poly(id, *gens, spec);
      bool in_span = true;
      DMExpr oracle_dm(p);
      std::string rhs;
      try {
        oracle_dm = dm_decompose(oracle, *gens);
        rhs = to_string(oracle_dm);
      } catch (const NotInSpanError& ex) {
        in_span = false;
        rhs = std::string("not in invariant span: ") + ex.what();
      }
      for (Variant v : vars) {
        const DMExpr mine = closed_dm(id, p, spec, v);
        Status st;
        if (in_span && mine == oracle_dm) {
          st = Status::Match;
        } else if (in_span && v == Variant::Printed &&
                   closed_dm(id, p, spec, Variant::Corrected) == oracle_dm) {
          st = Status::ErratumConfirmed;
        } else {
          st = Status::Mismatch;
        }
        out.push_back({p.value(), id, v, spec, st, to_string(mine), rhs});
      }
    }
  } catch (const OverflowError& ex) {
    out.clear();
    for (Variant v : vars) {
      out.push_back({p.value(), id, v, spec, Status::Skipped, "",
                     std::string("overflow: ") + ex.what()});
    }
  }
  return out;
}

Report run_campaign(const CampaignConfig& cfg) {
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.primes.empty()) throw ConfigError("at least one prime is required");
  if (cfg.uv_max < 1) throw ConfigError("uv_max must be >= 1");
  if (cfg.max_s < 0) throw ConfigError("max_s must be >= 0");
  const std::vector<FormulaId> ids =
      cfg.formulas.empty() ? all_formulas() : cfg.formulas;

  Report rep;
  for (std::uint32_t pv : cfg.primes) {
    Prime p(pv);
    (void)generators(p);  // build the shared cache before any parallelism
    const std::vector<WorkItem> items = enumerate_items(cfg, p, ids);
    std::vector<std::vector<CaseResult>> slots(items.size());

    if (cfg.workers == 1) {
      for (std::size_t n = 0; n < items.size(); ++n) {
        slots[n] = verify_case(items[n].id, p, items[n].spec, cfg.variants);
      }
    } else {
      std::vector<std::exception_ptr> errors(items.size());
      const auto count = static_cast<std::int64_t>(items.size());
#pragma omp parallel for schedule(dynamic) num_threads(cfg.workers)
      for (std::int64_t n = 0; n < count; ++n) {
        const auto idx = static_cast<std::size_t>(n);
        try {
          slots[idx] =
              verify_case(items[idx].id, p, items[idx].spec, cfg.variants);
        } catch (...) {
          errors[idx] = std::current_exception();
        }
      }
      for (const auto& ep : errors) {
        if (ep) std::rethrow_exception(ep);
      }
    }

    PrimeReport pr;
    pr.prime = pv;
    for (auto& slot : slots) {
      for (auto& c : slot) {
        switch (c.status) {
          case Status::Match:
            ++pr.n_match;
            break;
          case Status::Mismatch:
            ++pr.n_mismatch;
            break;
          case Status::ErratumConfirmed:
            ++pr.n_erratum;
            break;
          case Status::Skipped:
            ++pr.n_skipped;
            break;
        }
        pr.cases.push_back(std::move(c));
      }
    }
    rep.per_prime.push_back(std::move(pr));
  }
  return rep;
}

std::string report_to_text(const Report& rep) {
  std::ostringstream os;
  for (const auto& pr : rep.per_prime) {
    os << "prime " << pr.prime << ": " << pr.cases.size()
       << " cases | match " << pr.n_match << " | mismatch " << pr.n_mismatch
       << " | erratum-confirmed " << pr.n_erratum << " | skipped "
       << pr.n_skipped << "\n";

    std::map<FormulaId, std::vector<const CaseResult*>> errata;
    std::map<FormulaId, std::vector<const CaseResult*>> bad;
    for (const auto& c : pr.cases) {
      if (c.status == Status::ErratumConfirmed) errata[c.id].push_back(&c);
      if (c.status == Status::Mismatch) bad[c.id].push_back(&c);
    }
    if (!errata.empty()) {
      os << "  errata (printed statement fails; corrected form matches the "
            "operator action):\n";
      for (const auto& [id, cases] : errata) {
        os << "    " << formula_name(id) << ": " << cases.size()
           << " case(s), e.g.\n";
        const std::size_t shown = std::min<std::size_t>(cases.size(), 3);
        for (std::size_t n = 0; n < shown; ++n) {
          const CaseResult& c = *cases[n];
          os << "      " << params_to_string(c.spec)
             << " printed = " << (c.lhs.empty() ? "0" : c.lhs)
             << " ; actual = " << c.rhs << "\n";
        }
      }
    }
    if (!bad.empty()) {
      os << "  mismatches:\n";
      for (const auto& [id, cases] : bad) {
        os << "    " << formula_name(id) << ": " << cases.size()
           << " case(s), e.g.\n";
        const std::size_t shown = std::min<std::size_t>(cases.size(), 3);
        for (std::size_t n = 0; n < shown; ++n) {
          const CaseResult& c = *cases[n];
          os << "      " << params_to_string(c.spec) << " ["
             << variant_name(c.variant) << "] closed = "
             << (c.lhs.empty() ? "0" : c.lhs) << " ; actual = " << c.rhs
             << "\n";
        }
      }
    }
  }
  return os.str();
}

std::string report_to_json(const Report& rep) {
  json doc;
  if (rep.per_prime.size() == 1) {
    doc = prime_to_json(rep.per_prime.front());
  } else {
    doc = json::array();
    for (const auto& pr : rep.per_prime) doc.push_back(prime_to_json(pr));
  }
  return doc.dump(2) + "\n";
}

int report_exit_code(const Report& rep) {
  for (const auto& pr : rep.per_prime) {
    for (const auto& c : pr.cases) {
      if (c.variant == Variant::Corrected && c.status == Status::Mismatch) {
        return 1;
      }
    }
  }
  return 0;
}

}  // namespace dmst
