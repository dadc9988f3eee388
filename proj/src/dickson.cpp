#include "dmst/dickson.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "dmst/errors.hpp"

namespace dmst {

SuperPoly bracket(Prime p, std::uint64_t u, std::uint64_t v) {
  const std::uint32_t n = 2;
  if (u == v) return SuperPoly(p, n);
  const std::uint64_t pu = checked_pow(p.value(), u);
  const std::uint64_t pv = checked_pow(p.value(), v);
  return SuperPoly::from_terms(
      p, n,
      {{SuperMonomial{0, {pu, pv}}, 1}, {SuperMonomial{0, {pv, pu}}, -1}});
}

SuperPoly bracket1(Prime p, std::uint64_t u) {
  const std::uint32_t n = 2;
  const std::uint64_t pu = checked_pow(p.value(), u);
  return SuperPoly::from_terms(
      p, n, {{SuperMonomial{0b01, {0, pu}}, 1}, {SuperMonomial{0b10, {pu, 0}}, -1}});
}

const SuperPoly& GeneratorSet::by_name(std::string_view name) const {
  if (name == "L2") return L2;
  if (name == "L20") return L20;
  if (name == "L21") return L21;
  if (name == "M20") return M20;
  if (name == "M21") return M21;
  if (name == "M201") return M201;
  if (name == "Q0") return Q0;
  if (name == "Q1") return Q1;
  if (name == "R0") return R0;
  if (name == "R1") return R1;
  if (name == "R01") return R01;
  throw ConfigError("unknown generator name: " + std::string(name));
}

const std::vector<std::string>& GeneratorSet::names() {
  static const std::vector<std::string> kNames = {
      "L2", "L20", "L21", "M20", "M21", "M201", "Q0", "Q1", "R0", "R1", "R01"};
  return kNames;
}

namespace {

std::shared_ptr<const GeneratorSet> build_generators(Prime p) {
  const std::uint32_t n = 2;
  SuperPoly L2 = bracket(p, 0, 1);
  SuperPoly L20 = bracket(p, 1, 2);
  SuperPoly L21 = bracket(p, 0, 2);
  SuperPoly M20 = bracket1(p, 1);
  SuperPoly M21 = bracket1(p, 0);
  SuperPoly M201 = mul(SuperPoly::x_gen(p, n, 1), SuperPoly::x_gen(p, n, 2));
  SuperPoly Q0 = exact_div(L20, L2);
  SuperPoly Q1 = exact_div(L21, L2);
  if (!(Q0 == pow(L2, p.value() - 1))) {
    throw Error("generator consistency failure: Q0 != L2^(p-1)");
  }
  SuperPoly l2_low = pow(L2, p.value() - 2);
  SuperPoly R0 = mul(M20, l2_low);
  SuperPoly R1 = mul(M21, l2_low);
  SuperPoly R01 = mul(M201, l2_low);
  return std::make_shared<const GeneratorSet>(GeneratorSet{
      p, std::move(L2), std::move(L20), std::move(L21), std::move(M20),
      std::move(M21), std::move(M201), std::move(Q0), std::move(Q1),
      std::move(R0), std::move(R1), std::move(R01)});
}

}  // namespace

std::shared_ptr<const GeneratorSet> generators(Prime p) {
  static std::mutex mu;
  static std::map<std::uint32_t, std::shared_ptr<const GeneratorSet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p.value());
  if (it == cache.end()) {
    it = cache.emplace(p.value(), build_generators(p)).first;
  }
  return it->second;
}

Fp det2(const Matrix& m, Prime p) {
  return p.sub(p.mul(m[0][0], m[1][1]), p.mul(m[0][1], m[1][0]));
}

Matrix mat_mul(const Matrix& a, const Matrix& b, Prime p) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<Fp>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        c[i][j] = p.add(c[i][j], p.mul(a[i][k], b[k][j]));
      }
    }
  }
  return c;
}

std::vector<Matrix> gl2_generating_set(Prime p) {
  const Fp g = primitive_root_mod(p.value());
  return {
      Matrix{{1, 1}, {0, 1}},
      Matrix{{0, 1}, {1, 0}},
      Matrix{{g, 0}, {0, 1}},
  };
}

std::vector<Matrix> gl2_all_elements(Prime p) {
  std::vector<Matrix> out;
  const Fp q = p.value();
  for (Fp a = 0; a < q; ++a)
    for (Fp b = 0; b < q; ++b)
      for (Fp c = 0; c < q; ++c)
        for (Fp d = 0; d < q; ++d) {
          Matrix m{{a, b}, {c, d}};
          if (det2(m, p) != 0) out.push_back(std::move(m));
        }
  return out;
}

bool is_gl2_invariant(const SuperPoly& f) {
  for (const Matrix& m : gl2_generating_set(f.prime())) {
    if (!(substitute(f, m) == f)) return false;
  }
  return true;
}

std::uint32_t DMKey::ext_degree() const {
  return static_cast<std::uint32_t>(std::popcount(static_cast<unsigned>(t)));
}

bool operator<(const DMKey& x, const DMKey& y) {
  const auto xt = std::popcount(static_cast<unsigned>(x.t));
  const auto yt = std::popcount(static_cast<unsigned>(y.t));
  if (xt != yt) return xt < yt;
  if (x.t != y.t) return x.t < y.t;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

std::uint64_t dm_degree(const DMKey& key, Prime p) {
  const std::uint64_t pp = checked_mul(p.value(), p.value());
  std::uint64_t base = 0;
  switch (key.t) {
    case 0: base = 0; break;
    case 1: base = 2 * pp - 3; break;                // R0
    case 2: base = 2 * pp - 2 * p.value() - 1; break;  // R1
    case 3: base = 2 * pp - 2 * p.value() - 2; break;  // R01
    default: throw ConfigError("invalid R-factor mask");
  }
  base = checked_add(base, checked_mul(key.a, 2 * (pp - 1)));
  return checked_add(base, checked_mul(key.b, 2 * (pp - p.value())));
}

void DMExpr::add_term(const DMKey& key, std::int64_t coeff) {
  Fp c = p_.reduce_signed(coeff);
  if (c == 0) return;
  auto [it, fresh] = terms_.try_emplace(key, 0);
  it->second = p_.add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

SuperPoly dm_evaluate(const DMExpr& e, const GeneratorSet& gens) {
  const Prime p = e.prime();
  SuperPoly out(p, 2);
  for (const auto& [key, c] : e.terms()) {
    SuperPoly t = pow(gens.L2, checked_mul(p.value() - 1, key.a));
    if (key.b > 0) t = mul(t, pow(gens.Q1, key.b));
    switch (key.t) {
      case 0: break;
      case 1: t = mul(gens.R0, t); break;
      case 2: t = mul(gens.R1, t); break;
      case 3: t = mul(gens.R01, t); break;
      default: throw ConfigError("invalid R-factor mask");
    }
    out = add(out, scale(t, c));
  }
  return out;
}

namespace {

struct MonoHash {
  std::size_t operator()(const SuperMonomial& m) const {
    std::size_t h = m.ext * 0x9e3779b97f4a7c15ull;
    for (std::uint64_t e : m.pow) {
      h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

DMExpr dm_decompose(const SuperPoly& f, const GeneratorSet& gens) {
  const Prime p = f.prime();
  if (f.nvars() != 2) {
    throw ConfigError("normal form is defined for two variables");
  }
  DMExpr out(p);
  if (f.is_zero()) return out;

  const auto [ed, total] = f.bidegree();

  std::vector<DMKey> keys;
  const std::uint64_t qa_deg = 2 * (p.value() * p.value() - 1);
  const std::uint64_t qb_deg = 2 * (p.value() * p.value() - p.value());
  auto collect = [&](std::uint8_t t) {
    const std::uint64_t base = dm_degree(DMKey{t, 0, 0}, p);
    if (base > total) return;
    const std::uint64_t rem = total - base;
    for (std::uint64_t b = 0; b * qb_deg <= rem; ++b) {
      const std::uint64_t left = rem - b * qb_deg;
      if (left % qa_deg == 0) keys.push_back(DMKey{t, left / qa_deg, b});
    }
  };
  switch (ed) {
    case 0: collect(0); break;
    case 1: collect(1); collect(2); break;
    case 2: collect(3); break;
    default: throw NotInSpanError("exterior degree exceeds the normal form");
  }
  if (keys.empty()) {
    throw NotInSpanError("no normal-form monomial in this bidegree");
  }

  // Evaluate candidates with an ascending Q1 power so each step is one
  // small multiplication.
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return keys[x].b < keys[y].b; });
  std::vector<SuperPoly> cand(keys.size(), SuperPoly(p, 2));
  SuperPoly q1_pow = SuperPoly::constant(p, 2, 1);
  std::uint64_t cur_b = 0;
  for (std::size_t idx : order) {
    const DMKey& key = keys[idx];
    while (cur_b < key.b) {
      q1_pow = mul(q1_pow, gens.Q1);
      ++cur_b;
    }
    SuperPoly c = mul(pow(gens.L2, checked_mul(p.value() - 1, key.a)), q1_pow);
    switch (key.t) {
      case 0: break;
      case 1: c = mul(gens.R0, c); break;
      case 2: c = mul(gens.R1, c); break;
      case 3: c = mul(gens.R01, c); break;
    }
    cand[idx] = std::move(c);
  }

  // Row space: every monomial seen in f or a candidate.
  std::unordered_map<SuperMonomial, std::size_t, MonoHash> row_of;
  auto intern = [&](const SuperMonomial& m) {
    return row_of.try_emplace(m, row_of.size()).first->second;
  };
  for (const auto& [m, c] : f.terms()) intern(m);
  for (const SuperPoly& g : cand)
    for (const auto& [m, c] : g.terms()) intern(m);

  const std::size_t nrows = row_of.size();
  const std::size_t ncols = keys.size();
  std::vector<std::vector<Fp>> mat(nrows, std::vector<Fp>(ncols + 1, 0));
  for (std::size_t j = 0; j < ncols; ++j) {
    for (const auto& [m, c] : cand[j].terms()) mat[row_of[m]][j] = c;
  }
  for (const auto& [m, c] : f.terms()) mat[row_of[m]][ncols] = c;

  // Gauss-Jordan over F_p.
  std::vector<std::ptrdiff_t> pivot_row(ncols, -1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < ncols && rank < nrows; ++col) {
    std::size_t sel = rank;
    while (sel < nrows && mat[sel][col] == 0) ++sel;
    if (sel == nrows) continue;
    std::swap(mat[sel], mat[rank]);
    const Fp inv = p.inv(mat[rank][col]);
    for (std::size_t j = col; j <= ncols; ++j) {
      mat[rank][j] = p.mul(mat[rank][j], inv);
    }
    for (std::size_t r = 0; r < nrows; ++r) {
      if (r == rank || mat[r][col] == 0) continue;
      const Fp factor = mat[r][col];
      for (std::size_t j = col; j <= ncols; ++j) {
        mat[r][j] = p.sub(mat[r][j], p.mul(factor, mat[rank][j]));
      }
    }
    pivot_row[col] = static_cast<std::ptrdiff_t>(rank);
    ++rank;
  }
  for (std::size_t r = rank; r < nrows; ++r) {
    if (mat[r][ncols] != 0) {
      throw NotInSpanError("polynomial is outside the invariant normal form");
    }
  }
  if (rank < ncols) {
    throw AmbiguousBasisError(
        "normal-form monomials became linearly dependent");
  }

  for (std::size_t j = 0; j < ncols; ++j) {
    const Fp c = mat[static_cast<std::size_t>(pivot_row[j])][ncols];
    if (c != 0) out.add_term(keys[j], c);
  }

  // Residual check: the solution must reproduce f exactly.
  SuperPoly residual = f;
  for (std::size_t j = 0; j < ncols; ++j) {
    const Fp c = mat[static_cast<std::size_t>(pivot_row[j])][ncols];
    if (c != 0) residual = sub(residual, scale(cand[j], c));
  }
  if (!residual.is_zero()) {
    throw Error("internal: normal-form residual is nonzero");
  }
  return out;
}

std::string to_string(const DMExpr& e) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : e.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c;
    switch (key.t) {
      case 1: os << "*R0"; break;
      case 2: os << "*R1"; break;
      case 3: os << "*R01"; break;
      default: break;
    }
    if (key.a > 0) {
      os << "*Q0";
      if (key.a != 1) os << "^" << key.a;
    }
    if (key.b > 0) {
      os << "*Q1";
      if (key.b != 1) os << "^" << key.b;
    }
  }
  return os.str();
}

}  // namespace dmst
