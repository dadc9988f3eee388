#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "dmst/dickson.hpp"
#include "dmst/errors.hpp"
#include "dmst/superpoly.hpp"

using namespace dmst;

TEST_CASE("brackets") {
  Prime p(3);
  const auto y1 = SuperPoly::y_gen(p, 2, 1);
  const auto y2 = SuperPoly::y_gen(p, 2, 2);
  CHECK(bracket(p, 0, 1) == sub(mul(y1, pow(y2, 3)), mul(pow(y1, 3), y2)));
  CHECK(bracket(p, 2, 2).is_zero());
  CHECK(bracket(p, 1, 2) == neg(bracket(p, 2, 1)));
  CHECK(bracket1(p, 0) == sub(mul(SuperPoly::x_gen(p, 2, 1), y2),
                              mul(SuperPoly::x_gen(p, 2, 2), y1)));
}

TEST_CASE("generator relations") {
  for (std::uint32_t pv : {3u, 5u, 7u}) {
    Prime p(pv);
    const auto g = generators(p);
    const std::uint64_t q = pv;
    CHECK(g->L2 == bracket(p, 0, 1));
    CHECK(g->L20 == bracket(p, 1, 2));
    CHECK(g->L21 == bracket(p, 0, 2));
    CHECK(g->M20 == bracket1(p, 1));
    CHECK(g->M21 == bracket1(p, 0));
    CHECK(g->Q0 == pow(g->L2, q - 1));
    CHECK(mul(g->L2, g->Q0) == g->L20);
    CHECK(mul(g->L2, g->Q1) == g->L21);
    CHECK(g->R0 == mul(g->M20, pow(g->L2, q - 2)));
    CHECK(g->R1 == mul(g->M21, pow(g->L2, q - 2)));
    CHECK(g->R01 == mul(g->M201, pow(g->L2, q - 2)));
  }
}

TEST_CASE("mui relations") {
  for (std::uint32_t pv : {3u, 5u}) {
    Prime p(pv);
    const auto g = generators(p);
    CHECK(pow(g->R0, 2).is_zero());
    CHECK(pow(g->R1, 2).is_zero());
    CHECK(pow(g->R01, 2).is_zero());
    // R0 R1 = -R01 Q0
    CHECK(mul(g->R0, g->R1) == neg(mul(g->R01, g->Q0)));
  }
}

TEST_CASE("generator lookup") {
  Prime p(3);
  const auto g = generators(p);
  CHECK(GeneratorSet::names().size() == 11);
  CHECK(g->by_name("Q1") == g->Q1);
  CHECK(g->by_name("M201") == g->M201);
  CHECK_THROWS_AS(g->by_name("Q3"), ConfigError);
}

TEST_CASE("matrix helpers") {
  Prime p(3);
  const Matrix a{{1, 2}, {0, 1}};
  const Matrix b{{0, 1}, {1, 0}};
  CHECK(det2(a, p) == 1);
  CHECK(det2(b, p) == p.neg(1));
  const auto ab = mat_mul(a, b, p);
  CHECK(ab == Matrix{{2, 1}, {1, 0}});
  CHECK(gl2_all_elements(p).size() == (9 - 1) * (9 - 3));
  for (const auto& m : gl2_generating_set(p)) CHECK(det2(m, p) != 0);
}

TEST_CASE("the determinant twist of L2") {
  for (std::uint32_t pv : {3u, 5u}) {
    Prime p(pv);
    const auto g = generators(p);
    std::mt19937 rng(pv * 31);
    std::uniform_int_distribution<Fp> entry(0, pv - 1);
    int tested = 0;
    while (tested < 15) {
      Matrix m{{entry(rng), entry(rng)}, {entry(rng), entry(rng)}};
      if (det2(m, p) == 0) continue;
      ++tested;
      CHECK(substitute(g->L2, m) == scale(g->L2, det2(m, p)));
    }
  }
}

TEST_CASE("invariance of the five stable generators") {
  Prime p(3);
  const auto g = generators(p);
  for (const auto* f : {&g->Q0, &g->Q1, &g->R0, &g->R1, &g->R01}) {
    CHECK(is_gl2_invariant(*f));
  }
  CHECK(!is_gl2_invariant(g->L2));
  CHECK(!is_gl2_invariant(g->M20));
  CHECK(!is_gl2_invariant(SuperPoly::y_gen(p, 2, 1)));
}

TEST_CASE("normal-form keys and degrees") {
  Prime p(3);
  CHECK(DMKey{DMKey::kR0, 0, 0}.ext_degree() == 1);
  CHECK(DMKey{DMKey::kR01, 0, 0}.ext_degree() == 2);
  CHECK(DMKey{0, 2, 1}.ext_degree() == 0);
  // Q0 has degree 2(p^2-1), Q1 degree 2(p^2-p)
  CHECK(dm_degree(DMKey{0, 1, 0}, p) == 16);
  CHECK(dm_degree(DMKey{0, 0, 1}, p) == 12);
  CHECK(dm_degree(DMKey{DMKey::kR0, 0, 0}, p) == 2 * 9 - 3);
  CHECK(dm_degree(DMKey{DMKey::kR1, 0, 0}, p) == 2 * 9 - 2 * 3 - 1);
  CHECK(dm_degree(DMKey{DMKey::kR01, 0, 0}, p) == 2 * 9 - 2 * 3 - 2);
  // ordering: by exterior weight, then mask, then exponents
  CHECK(DMKey{0, 5, 5} < DMKey{DMKey::kR0, 0, 0});
  CHECK(DMKey{DMKey::kR0, 1, 0} < DMKey{DMKey::kR1, 0, 0});
  CHECK(DMKey{DMKey::kR0, 0, 1} < DMKey{DMKey::kR0, 0, 2});
}

TEST_CASE("expression accumulation") {
  Prime p(3);
  DMExpr e(p);
  CHECK(e.is_zero());
  e.add_term(DMKey{0, 1, 0}, 2);
  e.add_term(DMKey{0, 1, 0}, 1);  // 2 + 1 = 0 mod 3: term drops out
  CHECK(e.is_zero());
  e.add_term(DMKey{DMKey::kR1, 0, 2}, -1);
  CHECK(e.terms().size() == 1);
  CHECK(e.terms().begin()->second == 2);
  CHECK(to_string(e) == "2*R1*Q1^2");
}

TEST_CASE("evaluate and decompose round trip") {
  for (std::uint32_t pv : {3u, 5u}) {
    Prime p(pv);
    const auto g = generators(p);
    std::mt19937 rng(pv * 7);
    std::uniform_int_distribution<int> mask(0, 3);
    std::uniform_int_distribution<std::uint64_t> small(0, 3);
    std::uniform_int_distribution<std::int64_t> coeff(1, pv - 1);
    for (int trial = 0; trial < 12; ++trial) {
      DMExpr e(p);
      const auto t = static_cast<std::uint8_t>(mask(rng));
      e.add_term(DMKey{t, small(rng), small(rng)}, coeff(rng));
      const auto f = dm_evaluate(e, *g);
      CHECK(dm_decompose(f, *g) == e);
    }
    // two keys of equal degree: p * deg Q0 = (p+1) * deg Q1 = 2p(p^2-1)
    DMExpr two(p);
    two.add_term(DMKey{0, pv, 0}, 1);
    two.add_term(DMKey{0, 0, pv + 1}, pv - 1);
    CHECK(dm_degree(DMKey{0, pv, 0}, p) == dm_degree(DMKey{0, 0, pv + 1}, p));
    CHECK(dm_decompose(dm_evaluate(two, *g), *g) == two);
  }
}

TEST_CASE("decompose rejects polynomials outside the invariant span") {
  Prime p(3);
  const auto g = generators(p);
  CHECK(dm_decompose(SuperPoly(p, 2), *g).is_zero());
  CHECK_THROWS_AS(dm_decompose(SuperPoly::y_gen(p, 2, 1), *g),
                  NotInSpanError);
  CHECK_THROWS_AS(dm_decompose(SuperPoly::x_gen(p, 2, 1), *g),
                  NotInSpanError);
  CHECK_THROWS_AS(dm_decompose(g->L2, *g), NotInSpanError);
  CHECK_THROWS_AS(dm_decompose(g->M201, *g), NotInSpanError);
  // right degree shape, wrong polynomial
  const auto junk = add(pow(SuperPoly::y_gen(p, 2, 1), 6),
                        pow(SuperPoly::y_gen(p, 2, 2), 6));
  CHECK_THROWS_AS(dm_decompose(junk, *g), NotInSpanError);
  // inhomogeneous input cannot be in the span of graded monomials
  CHECK_THROWS_AS(dm_decompose(add(g->Q0, g->Q1), *g), NotHomogeneousError);
}

TEST_CASE("decompose recovers products of the generators") {
  Prime p(3);
  const auto g = generators(p);
  DMExpr q0(p);
  q0.add_term(DMKey{0, 1, 0}, 1);
  CHECK(dm_decompose(g->Q0, *g) == q0);
  DMExpr mixed(p);
  mixed.add_term(DMKey{DMKey::kR01, 2, 1}, 2);
  CHECK(dm_decompose(scale(mul(g->R01, mul(pow(g->Q0, 2), g->Q1)), 2), *g) ==
        mixed);
  // R0 R1 is -R01 Q0 in normal form, not a product of R's
  DMExpr r0r1(p);
  r0r1.add_term(DMKey{DMKey::kR01, 1, 0}, -1);
  CHECK(dm_decompose(mul(g->R0, g->R1), *g) == r0r1);
}
