#include "dualball/reconstruct.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace dualball;
using oracle::lv;
using oracle::rv;

namespace {

SeminormSpec l1(std::initializer_list<long> w) { return SeminormSpec::weighted_l1(std::vector<Integer>(w.begin(), w.end())); }
SeminormSpec linf(std::initializer_list<long> w) { return SeminormSpec::weighted_linf(std::vector<Integer>(w.begin(), w.end())); }

Polytope hull_of(std::initializer_list<std::initializer_list<long>> pts) {
  std::vector<LatticeVector> v;
  for (auto p : pts) v.push_back(lv(p));
  return convex_hull(v);
}

Reconstruction run(const SeminormSpec& s, std::size_t threads = 1, std::uint64_t seed = 0) {
  ReconstructBudget b;
  b.threads = threads;
  return reconstruct(s, b, seed);
}

// Every certificate must hold up against the oracle.
void check_certificates(const SeminormSpec& s, const Reconstruction& r) {
  REQUIRE(r.certificates.size() == r.polytope.vertices().size());
  for (std::size_t i = 0; i < r.certificates.size(); ++i) {
    const auto& c = r.certificates[i];
    REQUIRE(to_rational(c.vertex) == r.polytope.vertices()[i]);
    REQUIRE(c.probes.size() == c.window);
    for (const auto& p : c.probes) {
      REQUIRE(p.diffs == c.vertex);
      REQUIRE(p.residual == 0);
      REQUIRE(p.two_sided());
    }
    const auto& last = c.probes.back();
    for (std::size_t n = c.n_star; n <= c.n_star + 10; ++n) {
      RayProbe again = probe_at(s, last.direction, last.offset, n);
      REQUIRE(again.diffs == c.vertex);
      REQUIRE(again.residual == 0);
    }
  }
}

}  // namespace

TEST_CASE("probe_vertex: l1 along (2,1) exposes (1,1) from n = 1") {
  // Brute force: (2,1) maximizes uniquely at (1,1) among the dual square's vertices.
  std::vector<LatticeVector> sq{lv({1, 1}), lv({1, -1}), lv({-1, 1}), lv({-1, -1})};
  CHECK(oracle::max_dot(sq, rv({2, 1})) == 3);
  ProbeOutcome out = probe_vertex(l1({1, 1}), lv({2, 1}), lv({0, 0}), 64, 3);
  REQUIRE(std::holds_alternative<ExposureCertificate>(out));
  const auto& c = std::get<ExposureCertificate>(out);
  CHECK(c.vertex == lv({1, 1}));
  CHECK(c.n_star == 1);
  CHECK(c.window == 3);
  for (const auto& p : c.probes) CHECK(p.residual == 0);
}

TEST_CASE("probe_vertex: linf along (1,1) is unstable with residual -n") {
  SeminormSpec s = linf({1, 1});
  ProbeOutcome out = probe_vertex(s, lv({1, 1}), lv({0, 0}), 20, 3);
  REQUIRE(std::holds_alternative<Unstable>(out));
  const auto& trace = std::get<Unstable>(out).trace;
  REQUIRE_FALSE(trace.empty());
  for (const auto& p : trace) {
    CHECK(p.diffs == lv({1, 1}));
    CHECK(p.residual == -Integer(static_cast<long>(p.n)));
  }
}

TEST_CASE("probe_vertex: the trivial seminorm yields the origin") {
  SeminormSpec s = SeminormSpec::vertices(2, {lv({0, 0})});
  for (const auto& dir : {lv({1, 0}), lv({3, -7})}) {
    ProbeOutcome out = probe_vertex(s, dir, lv({0, 0}), 50, 3);
    REQUIRE(std::holds_alternative<ExposureCertificate>(out));
    CHECK(std::get<ExposureCertificate>(out).vertex == lv({0, 0}));
  }
}

TEST_CASE("probe_vertex argument errors") {
  SeminormSpec s = l1({1, 1});
  CHECK_THROWS_AS(probe_vertex(s, lv({0, 0}), lv({0, 0}), 10, 3), std::invalid_argument);
  CHECK_THROWS_AS(probe_vertex(s, lv({1, 0}), lv({0, 0}), 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(probe_vertex(s, lv({1, 0}), lv({0, 0}), 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(probe_vertex(s, lv({1, 0, 0}), lv({0, 0}), 10, 3), DimensionError);
  SeminormSpec t = SeminormSpec::table(2, {{lv({1, 0}), Integer(1)}});
  CHECK_THROWS_AS(probe_vertex(t, lv({1, 0}), lv({0, 0}), 10, 3), std::invalid_argument);
  CHECK(default_n_max(lv({2, -5})) == 64 * 2 * 5);
}

TEST_CASE("probe_vertex_rational follows nearest_lattice(n * x0)") {
  Rational half = make_rational(Integer(1), Integer(2));
  ProbeOutcome out = probe_vertex_rational(l1({1, 1}), RatVector{1, half}, 64, 3);
  REQUIRE(std::holds_alternative<ExposureCertificate>(out));
  const auto& c = std::get<ExposureCertificate>(out);
  CHECK(c.vertex == lv({1, 1}));
  CHECK(c.direction == lv({2, 1}));
  for (const auto& p : c.probes) {
    CHECK(p.x_n == nearest_lattice(scale(Rational(static_cast<long>(p.n)), RatVector{1, half})));
  }
}

TEST_CASE("perturb_direction: attempt 0, bound and determinism") {
  CHECK(perturb_direction(lv({2, 2}), 0, 7) == lv({1, 1}));
  CHECK(perturb_direction(lv({1, 1}), 1, 7) == perturb_direction(lv({1, 1}), 1, 7));
  for (std::size_t attempt = 1; attempt <= 8; ++attempt) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      LatticeVector dir = lv({1, -3, 2});
      LatticeVector p = perturb_direction(dir, attempt, seed);
      Integer scale_l = Integer(kPerturbScaleBase) << static_cast<unsigned>(attempt);
      // p is primitive(L * dir + r); some positive multiple of p lies within attempt of L * dir.
      Integer g = 0;
      for (const auto& z : p) g = gcd(g, z);
      REQUIRE(g == 1);
      bool found = false;
      for (long k = 1; k <= 64 && !found; ++k) {
        LatticeVector diff = sub(scale(Integer(k), p), scale(scale_l, dir));
        found = abs_max(diff) <= Integer(static_cast<long>(attempt));
      }
      REQUIRE(found);
    }
  }
}

TEST_CASE("reconstruct: closed-form duals") {
  Reconstruction a = run(l1({1, 1}));
  CHECK(a.complete);
  CHECK(equal(a.polytope, hull_of({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}})));
  check_certificates(l1({1, 1}), a);

  Reconstruction b = run(linf({2, 3}));
  CHECK(equal(b.polytope, hull_of({{2, 0}, {-2, 0}, {0, 3}, {0, -3}})));

  SeminormSpec pb = SeminormSpec::pullback(IntMatrix({lv({1, 0}), lv({0, 0})}), l1({1, 1}));
  Reconstruction c = run(pb);
  CHECK(c.complete);
  CHECK(equal(c.polytope, hull_of({{1, 0}, {-1, 0}})));
  CHECK(c.polytope.affine_dim() == 1);
  CHECK(certify(pb, c.polytope, 10).pass);

  Reconstruction z = run(SeminormSpec::vertices(3, {lv({0, 0, 0})}));
  CHECK(z.complete);
  CHECK(z.polytope.vertices() == std::vector<RatVector>{rv({0, 0, 0})});
}

TEST_CASE("reconstruct: the unstable max-norm oracle still yields the cross-polytope") {
  Reconstruction r = run(linf({1, 1}));
  CHECK(r.complete);
  CHECK(equal(r.polytope, hull_of({{1, 0}, {-1, 0}, {0, 1}, {0, -1}})));
}

TEST_CASE("reconstruct rejects a partial oracle and reports axiom failures") {
  SeminormSpec t = SeminormSpec::table(2, {{lv({1, 0}), Integer(1)}});
  CHECK_THROWS(run(t));
}

TEST_CASE("certify examples") {
  Polytope sq = hull_of({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
  Polytope cr = hull_of({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  CertificationReport ok = certify(l1({1, 1}), sq, 5);
  CHECK(ok.pass);
  CHECK(ok.checked_count == 121);
  CHECK_FALSE(ok.counterexample.has_value());

  CertificationReport bad = certify(l1({1, 1}), cr, 5);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.counterexample.has_value());
  CHECK(bad.counterexample->x == lv({1, 1}));
  CHECK(bad.counterexample->value == 2);
  CHECK(bad.counterexample->support_value == 1);

  CHECK(certify(SeminormSpec::vertices(2, {lv({0, 0})}), hull_of({{0, 0}}), 7).pass);
  CHECK(default_certification_radius(sq) == 4);

  Rational half = make_rational(Integer(1), Integer(2));
  Polytope frac = convex_hull(std::vector<RatVector>{{half, 0}, {-half, 0}});
  CHECK_THROWS_AS(certify(l1({1, 1}), frac, 3), std::invalid_argument);
}

TEST_CASE("lemma_trace: offset example closes a gap of 2") {
  auto steps = lemma_trace(linf({1, 1}), lv({1, 3}), lv({2, 0}), lv({0, 1}), 10);
  REQUIRE(steps.size() == 11);
  CHECK(steps[0].probe.value == 2);
  CHECK(*steps[0].probe.lambda_n == 0);
  CHECK(steps[0].gap == 2);
  for (std::size_t n = 1; n <= 10; ++n) {
    CHECK(steps[n].probe.value == Integer(static_cast<long>(3 * n)));
    CHECK(steps[n].gap == 0);
    CHECK(steps[n].bound_checked);
  }
}

TEST_CASE("lemma_trace: l1 along (2,1) has zero gap throughout") {
  auto steps = lemma_trace(l1({1, 1}), lv({2, 1}), lv({0, 0}), lv({1, 1}), 12);
  for (const auto& s : steps) CHECK(s.gap == 0);
  CHECK(*steps[0].probe.lambda_n == 0);
}

TEST_CASE("lemma_trace preconditions") {
  CHECK_THROWS_AS(lemma_trace(l1({1, 1}), lv({2, 1}), lv({0, 0}), lv({1, -1}), 5), std::invalid_argument);
  CHECK_THROWS_AS(lemma_trace(l1({1, 1}), lv({1, 0}), lv({0, 0}), lv({-1, 1}), 5), std::invalid_argument);
}

TEST_CASE("property: traced chains hold on random vertices-kind oracles and offsets") {
  SplitMix64 rng(41);
  for (int t = 0; t < 20; ++t) {
    SeminormSpec s = SeminormSpec::vertices(2, oracle::random_full_points(rng, 2, 3, 5));
    Reconstruction r = run(s);
    LatticeVector dir = oracle::random_points(rng, 2, 1, 6).front();
    LatticeVector off = lv({static_cast<long>(rng.uniform(-4, 4)), static_cast<long>(rng.uniform(-4, 4))});
    Rational v = eval(s, dir);
    if (v == 0) continue;
    SupportResult sup = support(r.polytope, to_rational(dir));
    LatticeVector y0 = to_lattice(r.polytope.vertices()[sup.argmax_vertices.front()]);
    REQUIRE_NOTHROW(lemma_trace(s, r.polytope, dir, off, y0, 15));
  }
}

TEST_CASE("property: round trip, membership and symmetry on random oracles") {
  SplitMix64 rng(42);
  for (std::size_t d = 2; d <= 3; ++d) {
    for (int t = 0; t < 12; ++t) {
      auto pts = oracle::random_points(rng, d, 2 + static_cast<std::size_t>(t % 3), 6);
      SeminormSpec s = SeminormSpec::vertices(d, pts);
      Reconstruction r = run(s);
      REQUIRE(r.complete);
      REQUIRE(r.polytope.has_integer_vertices());
      REQUIRE(equal(r.polytope, convex_hull(oracle::symmetrize(pts))));
      check_certificates(s, r);
      std::vector<RatVector> neg;
      for (const auto& v : r.polytope.vertices()) neg.push_back(negate(v));
      REQUIRE(equal(convex_hull(neg), r.polytope));
      if (d == 2) {
        for (const auto& x : oracle::box(2, 10)) {
          for (const auto& v : r.polytope.vertices()) REQUIRE(dot(x, v) <= eval(s, x));
        }
      }
    }
  }
}

TEST_CASE("property: max and sum duality") {
  SplitMix64 rng(43);
  for (int t = 0; t < 8; ++t) {
    SeminormSpec s1 = SeminormSpec::vertices(2, oracle::random_points(rng, 2, 2, 5));
    SeminormSpec s2 = t % 2 ? l1({1 + t % 3, 2}) : SeminormSpec::vertices(2, oracle::random_points(rng, 2, 2, 5));
    Polytope p1 = run(s1).polytope, p2 = run(s2).polytope;
    std::vector<RatVector> both = p1.vertices();
    both.insert(both.end(), p2.vertices().begin(), p2.vertices().end());
    REQUIRE(equal(run(SeminormSpec::max({s1, s2})).polytope, convex_hull(both)));
    REQUIRE(equal(run(SeminormSpec::sum({s1, s2})).polytope, minkowski_sum(p1, p2)));
  }
}

TEST_CASE("property: output does not depend on the thread count") {
  SplitMix64 rng(44);
  for (int t = 0; t < 5; ++t) {
    SeminormSpec s = SeminormSpec::vertices(3, oracle::random_points(rng, 3, 4, 7));
    Reconstruction a = run(s, 1, 9), b = run(s, 4, 9);
    REQUIRE(a.polytope.vertices() == b.polytope.vertices());
    REQUIRE(a.polytope.facets() == b.polytope.facets());
    REQUIRE(a.certificates.size() == b.certificates.size());
    for (std::size_t i = 0; i < a.certificates.size(); ++i) {
      REQUIRE(a.certificates[i].direction == b.certificates[i].direction);
      REQUIRE(a.certificates[i].n_star == b.certificates[i].n_star);
    }
  }
}
