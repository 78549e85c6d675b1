#include <catch2/catch_amalgamated.hpp>

#include <ftor/novikov.hpp>

#include <random>

using namespace ftor;

namespace {

// Z with one generator t of weight 1.
struct ZLine {
  FgAbelianGroup g{1};
  Weight n{{Rational(1)}};

  GroupElement t(int64_t k) const { return GroupElement{{k}, {}}; }
  NovikovSeries mono(int64_t k, const Rational& c, const Rational& cutoff) const {
    return NovikovSeries::monomial(g, n, cutoff, t(k), c);
  }
  NovikovSeries poly(std::vector<std::pair<int64_t, Rational>> terms,
                     const Rational& cutoff) const {
    NovikovSeries s(g, n, cutoff);
    for (auto& [k, c] : terms) s.add_term(t(k), c);
    return s;
  }
};

NovikovSeries random_series(std::mt19937_64& rng, const FgAbelianGroup& g,
                            const Weight& n, const Rational& cutoff,
                            bool positive_degree) {
  std::uniform_int_distribution<int> coord(-3, 6);
  std::uniform_int_distribution<int> nterms(1, 5);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  NovikovSeries s(g, n, cutoff);
  int k = nterms(rng);
  for (int i = 0; i < k; ++i) {
    GroupElement e = group_identity(g);
    for (auto& x : e.free) x = coord(rng);
    Rational w = n.eval(e);
    if (w >= cutoff) continue;
    if (positive_degree && w <= 0) {
      if (g.rank == 0) continue;
      e.free[0] += static_cast<int64_t>(
          (Rational(1) - w / n.free_weights[0]).convert_to<double>() + 1);
      if (n.eval(e) <= 0 || n.eval(e) >= cutoff) continue;
    }
    Rational c(num(rng), den(rng));
    if (c != 0) s.add_term(e, c);
  }
  return s;
}

}  // namespace

TEST_CASE("degree and leading term on the spec instances") {
  ZLine z;
  auto a = z.poly({{0, 1}, {1, 1}}, 10);  // 1 + t
  REQUIRE(degree(a) == 0);
  auto b = z.poly({{2, 3}, {5, 1}}, 10);  // 3t^2 + t^5
  REQUIRE(degree(b) == 2);

  // t*s^-1 with N(t)=2, N(s)=3
  FgAbelianGroup g2(2);
  Weight n2({Rational(2), Rational(3)});
  auto c = NovikovSeries::monomial(g2, n2, 10, GroupElement{{1, -1}, {}}, 1);
  REQUIRE(degree(c) == -1);

  auto lt = leading_term(z.poly({{0, 2}, {1, 1}}, 10));
  REQUIRE(lt.term_count() == 1);
  REQUIRE(lt.coeff(z.t(0)) == 2);

  // k - (2k+1)t + k t^2 with k = 3: lt = 3
  auto tw = z.poly({{0, 3}, {1, -7}, {2, 3}}, 10);
  REQUIRE(leading_term(tw).coeff(z.t(0)) == 3);

  // s + s^-1 t^2 with N(s)=0, N(t)=1: degree-0 slice is s
  FgAbelianGroup g3(2);
  Weight n3({Rational(0), Rational(1)});
  NovikovSeries mix(g3, n3, 10);
  mix.add_term(GroupElement{{1, 0}, {}}, 1);
  mix.add_term(GroupElement{{-1, 2}, {}}, 1);
  auto slice = leading_term(mix);
  REQUIRE(slice.term_count() == 1);
  REQUIRE(slice.coeff(GroupElement{{1, 0}, {}}) == 1);
}

TEST_CASE("degree errors on zero") {
  ZLine z;
  NovikovSeries zero(z.g, z.n, 5);
  REQUIRE_THROWS_AS(degree(zero), DomainError);
  REQUIRE_THROWS_AS(leading_term(zero), DomainError);
}

TEST_CASE("include_i_N in and out of window") {
  ZLine z;
  auto one = GroupRingElement::one(z.g);
  auto r = include_i_N(one, z.n, 5);
  REQUIRE(r.dropped == 0);
  REQUIRE(r.series.coeff(z.t(0)) == 1);

  GroupRingElement a(z.g);
  a.add_term(z.t(0), 1);
  a.add_term(z.t(1), -1);
  auto r2 = include_i_N(a, z.n, 5);
  REQUIRE(r2.dropped == 0);
  REQUIRE(r2.series.coeff(z.t(1)) == -1);

  GroupRingElement b(z.g);
  b.add_term(z.t(7), 1);
  b.add_term(z.t(0), 1);
  auto r3 = include_i_N(b, z.n, 5);
  REQUIRE(r3.dropped == 1);
  REQUIRE(r3.series.terms().size() == 1);
}

TEST_CASE("invert on the spec instances") {
  ZLine z;
  {
    auto inv = invert(z.poly({{0, 1}, {1, -1}}, 5));  // 1 - t
    for (int64_t k = 0; k < 5; ++k) REQUIRE(inv.coeff(z.t(k)) == 1);
  }
  {
    auto sq = z.poly({{0, 1}, {1, -1}}, 4);
    auto inv = invert(sq * sq);  // (1-t)^2
    for (int64_t k = 0; k < 4; ++k) REQUIRE(inv.coeff(z.t(k)) == k + 1);
    REQUIRE(equal_up_to_cutoff(inv * (sq * sq),
                               NovikovSeries::one(z.g, z.n, 4)));
  }
  {
    auto inv = invert(z.poly({{0, 2}, {1, 1}}, 5));  // 2 + t
    REQUIRE(inv.coeff(z.t(0)) == make_rational(1, 2));
    REQUIRE(inv.coeff(z.t(1)) == make_rational(-1, 4));
    REQUIRE(inv.coeff(z.t(2)) == make_rational(1, 8));
  }
}

TEST_CASE("invert: 200 random invertible series", "[property]") {
  std::mt19937_64 rng(99);
  ZLine z;
  std::uniform_int_distribution<int> num(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    NovikovSeries a = random_series(rng, z.g, z.n, 6, true);
    Rational c(num(rng), 1);
    if (c == 0) c = 1;
    NovikovSeries u = z.mono(0, c, 6) + a;  // c + positive part
    NovikovSeries inv = invert(u);
    REQUIRE(equal_up_to_cutoff(u * inv, NovikovSeries::one(z.g, z.n, 6)));
  }
}

TEST_CASE("invert rejects non-unit leading terms") {
  // 1 - s with N(s) = 0: leading slice is 1 - s, not a unit of Q[ker N]
  FgAbelianGroup g(2);
  Weight n({Rational(0), Rational(1)});
  NovikovSeries a(g, n, 5);
  a.add_term(GroupElement{{0, 0}, {}}, 1);
  a.add_term(GroupElement{{1, 0}, {}}, -1);
  REQUIRE_THROWS_AS(invert(a), DomainError);
}

TEST_CASE("invert through a torsion-unit leading slice") {
  // 2 + s over Z/2 (weight lives on no free generator): a unit since its
  // projections 2+1 = 3 and 2-1 = 1 are nonzero
  FgAbelianGroup g(1, {2});
  Weight n({Rational(1)});
  NovikovSeries a(g, n, 5);
  a.add_term(GroupElement{{0}, {0}}, 2);
  a.add_term(GroupElement{{0}, {1}}, 1);
  a.add_term(GroupElement{{1}, {0}}, 1);  // + t
  auto inv = invert(a);
  REQUIRE(equal_up_to_cutoff(a * inv, NovikovSeries::one(g, n, inv.cutoff())));
}

TEST_CASE("exp and log on the spec instances") {
  ZLine z;
  {
    NovikovSeries zero(z.g, z.n, 5);
    auto e = exp_series(zero);
    REQUIRE(e.coeff(z.t(0)) == 1);
    REQUIRE(e.terms().size() == 1);
  }
  {
    auto a = z.poly({{1, 1}, {2, make_rational(5, 2)}}, 3);
    auto e = exp_series(a);
    REQUIRE(e.coeff(z.t(0)) == 1);
    REQUIRE(e.coeff(z.t(1)) == 1);
    REQUIRE(e.coeff(z.t(2)) == 3);
  }
  {
    // log of the expansion of (1-t+t^2)/(1-t)^2 = 1 + t + 2t^2 + 3t^3 + ...
    NovikovSeries s(z.g, z.n, 4);
    s.add_term(z.t(0), 1);
    for (int64_t k = 1; k < 4; ++k) s.add_term(z.t(k), k);
    auto l = log_series(s);
    REQUIRE(l.coeff(z.t(1)) == 1);
    REQUIRE(equal_up_to_cutoff(exp_series(l), s));
  }
  REQUIRE_THROWS_AS(exp_series(ZLine{}.poly({{0, 1}}, 5)), DomainError);
  REQUIRE_THROWS_AS(log_series(ZLine{}.poly({{0, 2}, {1, 1}}, 5)), DomainError);
}

TEST_CASE("exp/log are mutually inverse on 200 random Nov+ elements",
          "[property]") {
  std::mt19937_64 rng(12345);
  FgAbelianGroup g(2);
  Weight n({Rational(1), make_rational(1, 2)});
  for (int trial = 0; trial < 200; ++trial) {
    NovikovSeries a = random_series(rng, g, n, 5, true);
    auto e = exp_series(a);
    REQUIRE(equal_up_to_cutoff(log_series(e), a));
    NovikovSeries u = NovikovSeries::one(g, n, 5) + a;
    REQUIRE(equal_up_to_cutoff(exp_series(log_series(u)), u));
  }
}

TEST_CASE("ring axioms on random triples", "[property]") {
  std::mt19937_64 rng(31337);
  FgAbelianGroup g(2, {3});
  Weight n({Rational(1), Rational(1)});
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_series(rng, g, n, 6, false);
    auto b = random_series(rng, g, n, 6, false);
    auto c = random_series(rng, g, n, 6, false);
    // terms of negative degree shrink the window on which a truncated
    // triple product is certified
    Rational w = 6;
    for (const auto* s : {&a, &b, &c})
      if (!s->is_zero()) w += std::min(degree(*s), Rational(0));
    REQUIRE(equal_up_to_cutoff((a * b) * c, a * (b * c), w));
    REQUIRE(equal_up_to_cutoff(a * (b + c), a * b + a * c));
    REQUIRE(equal_up_to_cutoff(a * b, b * a));
  }
  // and for the plain group ring
  std::uniform_int_distribution<int> coord(-3, 3);
  std::uniform_int_distribution<int> num(-4, 4);
  auto random_ring = [&]() {
    GroupRingElement a(g);
    for (int i = 0; i < 4; ++i)
      a.add_term(reduce_element(g, GroupElement{{coord(rng), coord(rng)},
                                                {coord(rng)}}),
                 Rational(num(rng)));
    return a;
  };
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_ring(), b = random_ring(), c = random_ring();
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE(a * b == b * a);
  }
}

TEST_CASE("degree and lt are multiplicative", "[property]") {
  std::mt19937_64 rng(555);
  FgAbelianGroup g(2);
  Weight n({Rational(1), make_rational(3, 2)});
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 100; ++trial) {
    auto a = random_series(rng, g, n, 8, false);
    auto b = random_series(rng, g, n, 8, false);
    if (a.is_zero() || b.is_zero()) continue;
    auto lt_prod = leading_term(a) * leading_term(b);
    if (lt_prod.is_zero()) continue;  // coefficient cancellation in lt
    auto ab = a * b;
    if (ab.is_zero()) continue;
    REQUIRE(degree(ab) == degree(a) + degree(b));
    REQUIRE(leading_term(ab) == lt_prod);
    ++checked;
  }
  REQUIRE(checked == 100);
}

TEST_CASE("normalize_mod_units on the spec instances") {
  ZLine z;
  {
    // -t^3 (1 - t) with units +-t^Z -> 1 - t
    auto a = z.poly({{3, -1}, {4, 1}}, 10);
    auto nf = normalize_mod_units(a, UnitGroup::plus_minus_G);
    REQUIRE(nf.representative.coeff(z.t(0)) == 1);
    REQUIRE(nf.representative.coeff(z.t(1)) == -1);
    REQUIRE(nf.representative.terms().size() == 2);
  }
  {
    auto a = z.poly({{0, -1}, {1, 1}}, 10);  // t - 1
    auto b = z.poly({{0, 1}, {1, -1}}, 10);  // 1 - t
    auto na = normalize_mod_units(a, UnitGroup::plus_minus_G);
    auto nb = normalize_mod_units(b, UnitGroup::plus_minus_G);
    REQUIRE(equal_up_to_cutoff(na.representative, nb.representative));
  }
  {
    // t^2*s*(2 + t) with ker = <s>: only s is absorbable
    FgAbelianGroup g(2);
    Weight n({Rational(0), Rational(1)});  // s = gen 0, t = gen 1
    NovikovSeries a(g, n, 10);
    a.add_term(GroupElement{{1, 2}, {}}, 2);
    a.add_term(GroupElement{{1, 3}, {}}, 1);
    auto nf = normalize_mod_units(a, UnitGroup::plus_minus_ker);
    REQUIRE(nf.representative.coeff(GroupElement{{0, 2}, {}}) == 2);
    REQUIRE(nf.representative.coeff(GroupElement{{0, 3}, {}}) == 1);
    REQUIRE(nf.unit == GroupElement{{1, 0}, {}});
  }
}

TEST_CASE("normalize_mod_units is idempotent and orbit-constant",
          "[property]") {
  std::mt19937_64 rng(777);
  FgAbelianGroup g(2);
  Weight n({Rational(1), Rational(2)});
  std::uniform_int_distribution<int> shift(-3, 3);
  std::uniform_int_distribution<int> sgn(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_series(rng, g, n, 9, false);
    if (a.is_zero()) continue;
    auto nf = normalize_mod_units(a, UnitGroup::plus_minus_G);
    auto nf2 = normalize_mod_units(nf.representative, UnitGroup::plus_minus_G);
    REQUIRE(equal_up_to_cutoff(nf.representative, nf2.representative));
    REQUIRE(nf2.sign == 1);
    // multiply by a random unit +-g and renormalize; shifting by a unit of
    // nonzero weight moves the certified window accordingly
    GroupElement u{{shift(rng), shift(rng)}, {}};
    Rational c = sgn(rng) ? 1 : -1;
    auto b = NovikovSeries::monomial(g, n, a.cutoff(), u, c) * a;
    if (b.is_zero()) continue;
    auto nb = normalize_mod_units(b, UnitGroup::plus_minus_G);
    Rational w = a.cutoff() - rational_abs(n.eval(u)) - rational_abs(degree(a));
    if (w <= 0) continue;
    REQUIRE(equal_up_to_cutoff(nb.representative, nf.representative, w));
  }
}
