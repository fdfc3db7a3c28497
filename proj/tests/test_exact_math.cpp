#include "dualball/exact_math.hpp"
#include "dualball/lattice_walk.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <set>

using namespace dualball;
using oracle::lv;
using oracle::rv;

namespace {

Rational q(long n, long d) { return make_rational(Integer(n), Integer(d)); }

Rational random_q(SplitMix64& rng) {
  return q(static_cast<long>(rng.uniform(-50, 50)), static_cast<long>(rng.uniform(1, 12)));
}

RatVector random_vec(SplitMix64& rng, std::size_t d) {
  RatVector v(d);
  for (auto& x : v) x = random_q(rng);
  return v;
}

}  // namespace

TEST_CASE("dot on the documented examples") {
  CHECK(dot(rv({1, 0}), rv({0, 1})) == 0);
  CHECK(dot(rv({2, 1}), rv({1, 1})) == 3);
  CHECK(dot(RatVector{q(3, 2), q(-1, 2)}, rv({2, 2})) == 2);
  CHECK_THROWS_AS(dot(rv({1, 2}), rv({1, 2, 3})), DimensionError);
}

TEST_CASE("nearest_lattice rounds componentwise, halves toward +infinity") {
  CHECK(nearest_lattice({q(3, 10), q(-9, 10)}) == lv({0, -1}));
  CHECK(nearest_lattice({q(3, 2), q(-1, 2)}) == lv({2, 0}));
  CHECK(nearest_lattice(rv({0, 0})) == lv({0, 0}));
  CHECK(nearest_lattice({q(-3, 2), q(5, 2), q(-7, 3)}) == lv({-1, 3, -2}));
}

TEST_CASE("primitive divides out the gcd") {
  CHECK(primitive(lv({4, 6})) == lv({2, 3}));
  CHECK(primitive(lv({0, 5})) == lv({0, 1}));
  CHECK(primitive(lv({-3, 7})) == lv({-3, 7}));
  CHECK(primitive(RatVector{q(1, 2), q(-1, 3)}) == lv({3, -2}));
  CHECK_THROWS_AS(primitive(lv({0, 0})), std::invalid_argument);
}

TEST_CASE("rationals stay in lowest terms with positive denominator") {
  Rational a = make_rational(Integer(6), Integer(-4));
  CHECK(a.get_num() == -3);
  CHECK(a.get_den() == 2);
  CHECK(to_string(a) == "-3/2");
  CHECK(to_string(Rational(7)) == "7");
  CHECK(parse_rational("-6/4") == a);
  CHECK(parse_rational(" 12 ") == 12);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(make_rational(Integer(1), Integer(0)), std::domain_error);
  CHECK_THROWS_AS(to_integer(q(1, 2)), std::domain_error);
}

TEST_CASE("property: nearest lattice point is within 1/2 per coordinate") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    RatVector p = random_vec(rng, 3);
    LatticeVector x = nearest_lattice(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      Rational gap = p[i] - Rational(x[i]);
      REQUIRE(abs(gap) <= q(1, 2));
      if (abs(gap) == q(1, 2)) REQUIRE(gap == q(-1, 2));  // tie went up
    }
  }
}

TEST_CASE("property: dot is symmetric and bilinear") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    RatVector x = random_vec(rng, 4), y = random_vec(rng, 4), z = random_vec(rng, 4);
    Rational s = random_q(rng), t = random_q(rng);
    REQUIRE(dot(x, y) == dot(y, x));
    REQUIRE(dot(add(scale(s, x), scale(t, z)), y) == s * dot(x, y) + t * dot(z, y));
  }
}

TEST_CASE("property: primitive is idempotent and leaves gcd 1") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    LatticeVector v(3);
    for (auto& z : v) z = static_cast<long>(rng.uniform(-60, 60));
    if (is_zero(v)) continue;
    LatticeVector p = primitive(v);
    REQUIRE(primitive(p) == p);
    Integer g = 0;
    for (const auto& z : p) g = gcd(g, z);
    REQUIRE(g == 1);
  }
}

TEST_CASE("row reduction, rank and null space") {
  std::vector<RatVector> rows{rv({1, 2, 3}), rv({2, 4, 6}), rv({0, 1, 1})};
  CHECK(rank(rows, 3) == 2);
  auto ns = null_space(rows, 3);
  REQUIRE(ns.size() == 1);
  for (const auto& r : rows) CHECK(dot(r, to_rational(ns[0])) == 0);
  CHECK(null_space({rv({1, 0}), rv({0, 1})}, 2).empty());
  CHECK(null_space({}, 2).size() == 2);
}

TEST_CASE("IntMatrix rejects ragged rows and applies exactly") {
  CHECK_THROWS_AS(IntMatrix({lv({1, 0}), lv({1})}), DimensionError);
  IntMatrix a({lv({1, 2}), lv({0, -1})});
  CHECK(a.apply(lv({3, 4})) == lv({11, -4}));
  CHECK(a.apply(RatVector{q(1, 2), q(1, 3)}) == RatVector{q(7, 6), q(-1, 3)});
  CHECK_THROWS_AS(a.apply(lv({1, 2, 3})), DimensionError);
}

TEST_CASE("lattice walk visits every point of the cube once, nearest shells first") {
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::size_t r = 0; r <= 3; ++r) {
      std::set<LatticeVector> seen;
      Integer last_shell = 0;
      std::size_t n = for_each_lattice_point(d, r, [&](const LatticeVector& x) {
        REQUIRE(abs_max(x) >= last_shell);
        last_shell = abs_max(x);
        REQUIRE(seen.insert(x).second);
        return true;
      });
      std::size_t side = 2 * r + 1, expected = 1;
      for (std::size_t k = 0; k < d; ++k) expected *= side;
      CHECK(n == expected);
      CHECK(seen.size() == expected);
    }
  }
}

TEST_CASE("lattice walk orders a shell 0, 1, -1, ... lexicographically") {
  std::vector<LatticeVector> order;
  for_each_lattice_point(2, 1, [&](const LatticeVector& x) {
    order.push_back(x);
    return true;
  });
  std::vector<LatticeVector> expected{lv({0, 0}), lv({0, 1}), lv({0, -1}), lv({1, 0}), lv({1, 1}),
                                      lv({1, -1}), lv({-1, 0}), lv({-1, 1}), lv({-1, -1})};
  CHECK(order == expected);
}

TEST_CASE("SplitMix64 is deterministic and stays in range") {
  SplitMix64 a(5), b(5);
  for (int i = 0; i < 100; ++i) {
    auto x = a.uniform(-3, 3);
    CHECK(x == b.uniform(-3, 3));
    CHECK(x >= -3);
    CHECK(x <= 3);
  }
  CHECK(hash_mix(1, Integer(7)) == hash_mix(1, Integer(7)));
  CHECK(hash_mix(1, Integer(7)) != hash_mix(1, Integer(-7)));
}
