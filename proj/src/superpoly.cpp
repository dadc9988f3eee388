#include "dmst/superpoly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_map>

#include "dmst/errors.hpp"

namespace dmst {

namespace {

// Hash for monomials so products can accumulate into a flat map.
struct MonoHash {
  std::size_t operator()(const SuperMonomial& m) const {
    std::size_t h = m.ext * 0x9e3779b97f4a7c15ull;
    for (std::uint64_t e : m.pow) {
      h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

void check_var(std::uint32_t nvars, std::uint32_t i) {
  if (i == 0 || i > nvars) {
    throw ConfigError("variable index " + std::to_string(i) +
                      " out of range 1.." + std::to_string(nvars));
  }
}

}  // namespace

std::uint64_t SuperMonomial::degree() const {
  std::uint64_t d = ext_degree();
  for (std::uint64_t e : pow) {
    d = checked_add(d, checked_mul(2, e));
  }
  return d;
}

int koszul_sign(std::uint32_t a, std::uint32_t b) {
  // Count pairs (i in a, j in b) with i > j: for each bit of a, the bits of
  // b strictly below it.
  int inversions = 0;
  std::uint32_t rest = a;
  while (rest) {
    std::uint32_t bit = rest & (~rest + 1);
    inversions += std::popcount(b & (bit - 1));
    rest &= rest - 1;
  }
  return (inversions & 1) ? -1 : 1;
}

SuperPoly::SuperPoly(Prime p, std::uint32_t nvars) : p_(p), nvars_(nvars) {
  if (nvars == 0 || nvars > 31) {
    throw ConfigError("nvars must be in 1..31, got " + std::to_string(nvars));
  }
}

void SuperPoly::set_terms(std::vector<Term> sorted) {
  terms_ = std::move(sorted);
}

SuperPoly SuperPoly::constant(Prime p, std::uint32_t nvars, Fp c) {
  SuperPoly f(p, nvars);
  c = p.reduce(c);
  if (c != 0) {
    f.terms_.push_back(
        {SuperMonomial{0, std::vector<std::uint64_t>(nvars, 0)}, c});
  }
  return f;
}

SuperPoly SuperPoly::x_gen(Prime p, std::uint32_t nvars, std::uint32_t i) {
  check_var(nvars, i);
  SuperPoly f(p, nvars);
  f.terms_.push_back({SuperMonomial{1u << (i - 1),
                                    std::vector<std::uint64_t>(nvars, 0)},
                      1});
  return f;
}

SuperPoly SuperPoly::y_gen(Prime p, std::uint32_t nvars, std::uint32_t i,
                           std::uint64_t e) {
  check_var(nvars, i);
  SuperPoly f(p, nvars);
  if (e == 0) return constant(p, nvars, 1);
  SuperMonomial m{0, std::vector<std::uint64_t>(nvars, 0)};
  m.pow[i - 1] = e;
  f.terms_.push_back({std::move(m), 1});
  return f;
}

SuperPoly SuperPoly::monomial(Prime p, std::uint32_t nvars, SuperMonomial m,
                              Fp c) {
  SuperPoly f(p, nvars);
  if (m.pow.size() != nvars || (m.ext >> nvars) != 0) {
    throw ConfigError("monomial shape does not match nvars");
  }
  c = p.reduce(c);
  if (c != 0) f.terms_.push_back({std::move(m), c});
  return f;
}

SuperPoly SuperPoly::from_terms(
    Prime p, std::uint32_t nvars,
    std::vector<std::pair<SuperMonomial, std::int64_t>> raw) {
  std::unordered_map<SuperMonomial, Fp, MonoHash> acc;
  for (auto& [m, c] : raw) {
    if (m.pow.size() != nvars || (m.ext >> nvars) != 0) {
      throw ConfigError("monomial shape does not match nvars");
    }
    Fp r = p.reduce_signed(c);
    if (r == 0) continue;
    auto [it, fresh] = acc.try_emplace(std::move(m), 0);
    it->second = p.add(it->second, r);
  }
  std::vector<SuperPoly::Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) out.push_back({m, c});
  }
  std::sort(out.begin(), out.end());
  SuperPoly f(p, nvars);
  f.set_terms(std::move(out));
  return f;
}

std::pair<std::uint32_t, std::uint64_t> SuperPoly::bidegree() const {
  if (terms_.empty()) {
    throw ZeroPolynomialError("bidegree of the zero polynomial");
  }
  std::uint32_t ed = terms_.front().first.ext_degree();
  std::uint64_t d = terms_.front().first.degree();
  for (const auto& [m, c] : terms_) {
    if (m.ext_degree() != ed || m.degree() != d) {
      throw NotHomogeneousError("terms span several bidegrees");
    }
  }
  return {ed, d};
}

namespace {

void require_compatible(const SuperPoly& a, const SuperPoly& b) {
  if (!(a.prime() == b.prime()) || a.nvars() != b.nvars()) {
    throw ConfigError("operands live in different algebras");
  }
}

}  // namespace

SuperPoly add(const SuperPoly& a, const SuperPoly& b) {
  require_compatible(a, b);
  const Prime& p = a.prime();
  std::vector<SuperPoly::Term> out;
  out.reserve(a.terms().size() + b.terms().size());
  auto ia = a.terms().begin(), ea = a.terms().end();
  auto ib = b.terms().begin(), eb = b.terms().end();
  while (ia != ea && ib != eb) {
    if (ia->first < ib->first) {
      out.push_back(*ia++);
    } else if (ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      Fp c = p.add(ia->second, ib->second);
      if (c != 0) out.push_back({ia->first, c});
      ++ia;
      ++ib;
    }
  }
  out.insert(out.end(), ia, ea);
  out.insert(out.end(), ib, eb);
  SuperPoly f(p, a.nvars());
  f.set_terms(std::move(out));
  return f;
}

SuperPoly neg(const SuperPoly& a) {
  std::vector<SuperPoly::Term> out = a.terms();
  for (auto& [m, c] : out) c = a.prime().neg(c);
  SuperPoly f(a.prime(), a.nvars());
  f.set_terms(std::move(out));
  return f;
}

SuperPoly sub(const SuperPoly& a, const SuperPoly& b) {
  return add(a, neg(b));
}

SuperPoly scale(const SuperPoly& a, Fp c) {
  c = a.prime().reduce(c);
  if (c == 0) return SuperPoly(a.prime(), a.nvars());
  if (c == 1) return a;
  std::vector<SuperPoly::Term> out = a.terms();
  for (auto& [m, k] : out) k = a.prime().mul(k, c);
  SuperPoly f(a.prime(), a.nvars());
  f.set_terms(std::move(out));
  return f;
}

SuperPoly mul(const SuperPoly& a, const SuperPoly& b) {
  require_compatible(a, b);
  const Prime& p = a.prime();
  const std::uint32_t n = a.nvars();
  std::unordered_map<SuperMonomial, Fp, MonoHash> acc;
  acc.reserve(a.terms().size() * b.terms().size());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (ma.ext & mb.ext) continue;  // repeated exterior factor
      Fp c = p.mul(ca, cb);
      if (koszul_sign(ma.ext, mb.ext) < 0) c = p.neg(c);
      SuperMonomial m;
      m.ext = ma.ext | mb.ext;
      m.pow.resize(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        m.pow[i] = checked_add(ma.pow[i], mb.pow[i]);
      }
      auto [it, fresh] = acc.try_emplace(std::move(m), 0);
      it->second = p.add(it->second, c);
    }
  }
  std::vector<SuperPoly::Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) out.push_back({m, c});
  }
  std::sort(out.begin(), out.end());
  SuperPoly f(p, n);
  f.set_terms(std::move(out));
  return f;
}

namespace {

// (c*m)^e for a single term; exterior parts square to zero.
SuperPoly pow_single(const SuperPoly& a, std::uint64_t e) {
  const auto& [m, c] = a.terms().front();
  const Prime& p = a.prime();
  if (m.ext != 0 && e >= 2) return SuperPoly(p, a.nvars());
  SuperMonomial r;
  r.ext = m.ext;  // e == 1 when ext != 0
  r.pow.resize(a.nvars());
  for (std::uint32_t i = 0; i < a.nvars(); ++i) {
    r.pow[i] = checked_mul(m.pow[i], e);
  }
  return SuperPoly::monomial(p, a.nvars(), std::move(r), p.pow(c, e));
}

// (c1*m1 + c2*m2)^e with both terms purely even: the binomial expansion,
// with coefficients reduced by Lucas so huge e stays cheap.
SuperPoly pow_binomial(const SuperPoly& a, std::uint64_t e) {
  const Prime& p = a.prime();
  const std::uint32_t n = a.nvars();
  const auto& [m1, c1] = a.terms()[0];
  const auto& [m2, c2] = a.terms()[1];
  std::vector<std::pair<SuperMonomial, std::int64_t>> raw;
  for (std::uint64_t k = 0; k <= e; ++k) {
    Fp binom = binom_mod_p(e, static_cast<std::int64_t>(k), p);
    if (binom == 0) continue;
    Fp c = p.mul(binom, p.mul(p.pow(c1, e - k), p.pow(c2, k)));
    if (c == 0) continue;
    SuperMonomial m;
    m.ext = 0;
    m.pow.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      m.pow[i] =
          checked_add(checked_mul(m1.pow[i], e - k), checked_mul(m2.pow[i], k));
    }
    raw.push_back({std::move(m), c});
  }
  return SuperPoly::from_terms(p, n, std::move(raw));
}

}  // namespace

SuperPoly pow(const SuperPoly& a, std::uint64_t e) {
  const Prime& p = a.prime();
  if (e == 0) return SuperPoly::constant(p, a.nvars(), 1);
  if (a.is_zero()) return a;
  if (a.terms().size() == 1) return pow_single(a, e);
  bool pure_even = true;
  for (const auto& [m, c] : a.terms()) {
    if (m.ext != 0) {
      pure_even = false;
      break;
    }
  }
  if (pure_even && a.terms().size() == 2) return pow_binomial(a, e);
  SuperPoly acc = SuperPoly::constant(p, a.nvars(), 1);
  SuperPoly base = a;
  while (e) {
    if (e & 1) acc = mul(acc, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return acc;
}

SuperPoly exact_div(const SuperPoly& f, const SuperPoly& g) {
  require_compatible(f, g);
  const Prime& p = f.prime();
  if (g.is_zero()) throw NotDivisibleError("division by zero polynomial");
  for (const auto& [m, c] : g.terms()) {
    if (m.ext != 0) {
      throw DivisorHasExteriorPartError(
          "exact division requires a purely even divisor");
    }
  }
  if (f.is_zero()) return f;

  // Divide by the monomial order's top term of g; since that order is a
  // term order on the pure-even part, remainders strictly drop.
  const SuperPoly::Term& lead = g.terms().back();
  const SuperMonomial& lm = lead.first;
  const Fp lc_inv = p.inv(lead.second);

  std::vector<std::pair<SuperMonomial, std::int64_t>> quot_terms;
  SuperPoly rem = f;
  while (!rem.is_zero()) {
    const SuperPoly::Term& top = rem.terms().back();
    SuperMonomial qm;
    qm.ext = top.first.ext;
    qm.pow.resize(f.nvars());
    for (std::uint32_t i = 0; i < f.nvars(); ++i) {
      if (top.first.pow[i] < lm.pow[i]) {
        throw NotDivisibleError("no exact quotient exists");
      }
      qm.pow[i] = top.first.pow[i] - lm.pow[i];
    }
    Fp qc = p.mul(top.second, lc_inv);
    SuperPoly qt = SuperPoly::monomial(p, f.nvars(), qm, qc);
    quot_terms.push_back({std::move(qm), qc});
    rem = sub(rem, mul(qt, g));
  }
  return SuperPoly::from_terms(p, f.nvars(), std::move(quot_terms));
}

SuperPoly substitute(const SuperPoly& f,
                     const std::vector<std::vector<Fp>>& m) {
  const Prime& p = f.prime();
  const std::uint32_t n = f.nvars();
  if (m.size() != n) {
    throw ConfigError("substitution matrix must have one row per variable");
  }
  for (const auto& row : m) {
    if (row.size() != n) {
      throw ConfigError("substitution matrix must be square");
    }
  }

  // Image of each generator: x_i -> sum_j m[i][j] x_j, y_i -> sum m[i][j] y_j.
  std::vector<SuperPoly> x_img, y_img;
  x_img.reserve(n);
  y_img.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    SuperPoly xi(p, n), yi(p, n);
    for (std::uint32_t j = 0; j < n; ++j) {
      Fp c = p.reduce(m[i][j]);
      if (c == 0) continue;
      xi = add(xi, scale(SuperPoly::x_gen(p, n, j + 1), c));
      yi = add(yi, scale(SuperPoly::y_gen(p, n, j + 1), c));
    }
    x_img.push_back(std::move(xi));
    y_img.push_back(std::move(yi));
  }

  // Cache y_i^e images: powers of a linear form expand multinomially, but
  // repeated squaring on the (at most n)-term image is already cheap.
  SuperPoly out(p, n);
  for (const auto& [mono, c] : f.terms()) {
    SuperPoly t = SuperPoly::constant(p, n, c);
    std::uint32_t rest = mono.ext;
    while (rest) {
      std::uint32_t i = std::countr_zero(rest);
      rest &= rest - 1;
      t = mul(t, x_img[i]);
      if (t.is_zero()) break;
    }
    for (std::uint32_t i = 0; i < n && !t.is_zero(); ++i) {
      if (mono.pow[i] == 0) continue;
      t = mul(t, pow(y_img[i], mono.pow[i]));
    }
    out = add(out, t);
  }
  return out;
}

std::string to_string(const SuperPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c;
    std::uint32_t rest = m.ext;
    while (rest) {
      std::uint32_t i = std::countr_zero(rest);
      rest &= rest - 1;
      os << "*x" << (i + 1);
    }
    for (std::uint32_t i = 0; i < f.nvars(); ++i) {
      if (m.pow[i] == 0) continue;
      os << "*y" << (i + 1);
      if (m.pow[i] != 1) os << "^" << m.pow[i];
    }
  }
  return os.str();
}

namespace {

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() const { return pos < s.size() ? s[pos] : '\0'; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos));
  }
  std::uint64_t number() {
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos == start) fail("expected a number");
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data() + start, s.data() + pos, v);
    if (res.ec != std::errc{}) fail("number out of range");
    return v;
  }
};

}  // namespace

SuperPoly parse_poly(std::string_view text, Prime p, std::uint32_t nvars) {
  Cursor cur{text};
  cur.skip_ws();
  if (cur.pos >= text.size()) cur.fail("empty input");

  SuperPoly out(p, nvars);
  while (true) {
    cur.skip_ws();
    // leading coefficient is optional: "x1*x2" means "1*x1*x2"
    std::uint64_t coeff = 1;
    bool bare_factor = cur.peek() == 'x' || cur.peek() == 'y';
    if (!bare_factor) coeff = cur.number();
    SuperPoly term = SuperPoly::constant(p, nvars, p.reduce(coeff));
    while (true) {
      cur.skip_ws();
      if (bare_factor) {
        bare_factor = false;
      } else if (!cur.eat('*')) {
        break;
      }
      cur.skip_ws();
      char kind = cur.peek();
      if (kind != 'x' && kind != 'y') cur.fail("expected x or y factor");
      ++cur.pos;
      std::uint64_t idx = cur.number();
      if (idx == 0 || idx > nvars) cur.fail("variable index out of range");
      if (kind == 'x') {
        term = mul(term, SuperPoly::x_gen(p, nvars,
                                          static_cast<std::uint32_t>(idx)));
      } else {
        std::uint64_t e = 1;
        if (cur.eat('^')) e = cur.number();
        term = mul(term, SuperPoly::y_gen(p, nvars,
                                          static_cast<std::uint32_t>(idx), e));
      }
    }
    out = add(out, term);
    cur.skip_ws();
    if (cur.pos >= text.size()) break;
    if (!cur.eat('+')) cur.fail("expected '+' between terms");
  }
  return out;
}

}  // namespace dmst
