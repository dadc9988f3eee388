#include "dmst/steenrod.hpp"

#include <map>
#include <tuple>

#include "dmst/errors.hpp"

namespace dmst {

MilnorIndex MilnorIndex::make(std::vector<std::uint32_t> s,
                              std::vector<std::uint64_t> r) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i - 1] >= s[i]) {
      throw ConfigError("exterior indices must be strictly increasing");
    }
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return MilnorIndex{std::move(s), std::move(r)};
}

std::uint64_t MilnorIndex::operation_degree(Prime p) const {
  std::uint64_t d = 0;
  for (std::uint32_t sj : s) {
    d = checked_add(d, checked_mul(2, checked_pow(p.value(), sj)) - 1);
  }
  return checked_add(d, checked_mul(2, abs_r(r, p.value())));
}

std::vector<CartanSplit> cartan_splittings(const MilnorIndex& idx) {
  const std::size_t ns = idx.s.size();
  const std::size_t nr = idx.r.size();
  std::vector<CartanSplit> out;

  std::vector<std::uint64_t> r1(nr, 0);
  for (std::uint32_t mask = 0; mask < (1u << ns); ++mask) {
    CartanSplit base;
    int inversions = 0;
    for (std::size_t j = 0; j < ns; ++j) {
      if (mask & (1u << j)) {
        base.s1.push_back(idx.s[j]);
      } else {
        // everything already in s1 is smaller than idx.s[j] except entries
        // taken from positions after j -- there are none yet, so the pairs
        // (i in s1, j in s2, i > j) come from s1 entries chosen later.
        base.s2.push_back(idx.s[j]);
        inversions += std::popcount(mask >> (j + 1));
      }
    }
    base.sign = (inversions & 1) ? -1 : 1;

    // Odometer over componentwise splittings r = r1 + r2.
    std::fill(r1.begin(), r1.end(), 0);
    while (true) {
      CartanSplit split = base;
      split.r1 = r1;
      split.r2.resize(nr);
      for (std::size_t i = 0; i < nr; ++i) split.r2[i] = idx.r[i] - r1[i];
      out.push_back(std::move(split));

      std::size_t i = nr;
      while (i > 0) {
        --i;
        if (r1[i] < idx.r[i]) {
          ++r1[i];
          std::fill(r1.begin() + static_cast<std::ptrdiff_t>(i) + 1, r1.end(),
                    0);
          break;
        }
        if (i == 0) {
          i = nr + 1;  // odometer exhausted
          break;
        }
      }
      if (nr == 0 || i == nr + 1) break;
    }
  }
  return out;
}

SuperPoly atom_action(const MilnorIndex& idx, bool eps, std::uint32_t k,
                      std::uint64_t b, std::uint32_t l, Prime p,
                      std::uint32_t nvars) {
  if (idx.s.size() >= 2) return SuperPoly(p, nvars);
  const Fp coeff = multinom_mod_p(b, idx.r, p);
  if (coeff == 0) return SuperPoly(p, nvars);
  const std::uint64_t shift = abs_r(idx.r, p.value());

  SuperMonomial m;
  m.ext = 0;
  m.pow.assign(nvars, 0);
  if (idx.s.empty()) {
    if (eps) m.ext = 1u << (k - 1);
    if (b + shift > 0) m.pow[l - 1] = checked_add(b, shift);
    return SuperPoly::monomial(p, nvars, std::move(m), coeff);
  }
  if (!eps) return SuperPoly(p, nvars);
  m.pow[k - 1] = checked_pow(p.value(), idx.s[0]);
  if (b + shift > 0) {
    m.pow[l - 1] = checked_add(m.pow[l - 1], checked_add(b, shift));
  }
  return SuperPoly::monomial(p, nvars, std::move(m), coeff);
}

namespace {

struct Atom {
  bool eps;           // true: exterior generator x_var
  std::uint32_t var;  // 1-indexed
  std::uint64_t b;    // y exponent (0 for exterior atoms)

  std::uint64_t degree() const { return eps ? 1 : 2 * b; }
};

// Recursive Cartan expansion over the atom list of one monomial, memoized
// on (suffix start, remaining S, remaining R).
struct MonomialAction {
  const std::vector<Atom>& atoms;
  Prime p;
  std::uint32_t nvars;
  std::map<std::tuple<std::size_t, std::vector<std::uint32_t>,
                      std::vector<std::uint64_t>>,
           SuperPoly>
      memo;

  SuperPoly run(std::size_t i, std::vector<std::uint32_t> s,
                std::vector<std::uint64_t> r) {
    while (!r.empty() && r.back() == 0) r.pop_back();
    const MilnorIndex idx{s, r};
    if (i == atoms.size()) {
      if (s.empty() && r.empty()) return SuperPoly::constant(p, nvars, 1);
      return SuperPoly(p, nvars);
    }
    if (i + 1 == atoms.size()) {
      const Atom& a = atoms[i];
      return atom_action(idx, a.eps, a.var, a.b, a.var, p, nvars);
    }
    auto key = std::make_tuple(i, s, r);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    const Atom& a = atoms[i];
    SuperPoly acc(p, nvars);
    for (const CartanSplit& split : cartan_splittings(idx)) {
      SuperPoly left = atom_action(MilnorIndex{split.s1, split.r1}, a.eps,
                                   a.var, a.b, a.var, p, nvars);
      if (left.is_zero()) continue;
      SuperPoly right = run(i + 1, split.s2, split.r2);
      if (right.is_zero()) continue;
      int sign = split.sign;
      if (((a.degree() + split.s1.size()) * split.s2.size()) & 1) {
        sign = -sign;
      }
      SuperPoly prod = mul(left, right);
      acc = add(acc, sign > 0 ? prod : neg(prod));
    }
    memo.emplace(std::move(key), acc);
    return acc;
  }
};

}  // namespace

SuperPoly st_apply(const MilnorIndex& idx, const SuperPoly& f) {
  const Prime p = f.prime();
  const std::uint32_t n = f.nvars();

  std::uint64_t r_sum = 0;
  for (std::uint64_t ri : idx.r) r_sum = checked_add(r_sum, ri);
  const std::uint64_t min_degree =
      checked_add(idx.s.size(), checked_mul(2, r_sum));

  SuperPoly out(p, n);
  for (const auto& [m, c] : f.terms()) {
    if (m.degree() < min_degree) continue;  // operation exceeds the degree

    std::vector<Atom> atoms;
    std::uint32_t rest = m.ext;
    while (rest) {
      std::uint32_t i = std::countr_zero(rest);
      rest &= rest - 1;
      atoms.push_back({true, i + 1, 0});
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      if (m.pow[i] > 0) atoms.push_back({false, i + 1, m.pow[i]});
    }

    MonomialAction action{atoms, p, n, {}};
    out = add(out, scale(action.run(0, idx.s, idx.r), c));
  }
  return out;
}

SuperPoly bockstein(const SuperPoly& f) {
  return st_apply(MilnorIndex::make({0}, {}), f);
}

SuperPoly power_op(std::uint64_t r, const SuperPoly& f) {
  return st_apply(MilnorIndex::make({}, {r}), f);
}

}  // namespace dmst
