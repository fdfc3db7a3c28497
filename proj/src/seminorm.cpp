#include "dualball/seminorm.hpp"

#include "dualball/lattice_walk.hpp"

#include <algorithm>
#include <set>

namespace dualball {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(const std::vector<Integer>& weights, const char* kind) {
  if (weights.empty()) throw std::invalid_argument(std::string(kind) + ": no weights");
  for (const auto& w : weights) {
    if (w <= 0) {
      throw std::invalid_argument(std::string(kind) + ": weights must be positive integers, got " +
                                  to_string(w));
    }
  }
}

std::size_t common_dim(const std::vector<SeminormSpec>& terms, const char* kind) {
  if (terms.empty()) throw std::invalid_argument(std::string(kind) + ": no terms");
  std::size_t d = terms.front().dim();
  for (const auto& t : terms) {
    if (t.dim() != d) throw DimensionError(std::string(kind) + ": terms of unequal dimension");
  }
  return d;
}

}  // namespace

SeminormSpec SeminormSpec::vertices(std::size_t dim, std::vector<LatticeVector> points) {
  if (dim == 0) throw std::invalid_argument("vertices: dimension must be positive");
  if (points.empty()) throw std::invalid_argument("vertices: empty point set");
  std::set<LatticeVector> sym;
  for (auto& p : points) {
    if (p.size() != dim) throw DimensionError("vertices: point of wrong dimension");
    sym.insert(negate(p));
    sym.insert(std::move(p));
  }
  return SeminormSpec(dim, node::Vertices{dim, {sym.begin(), sym.end()}});
}

SeminormSpec SeminormSpec::weighted_l1(std::vector<Integer> weights) {
  require_positive(weights, "weighted_l1");
  std::size_t d = weights.size();
  return SeminormSpec(d, node::WeightedL1{std::move(weights)});
}

SeminormSpec SeminormSpec::weighted_linf(std::vector<Integer> weights) {
  require_positive(weights, "weighted_linf");
  std::size_t d = weights.size();
  return SeminormSpec(d, node::WeightedLinf{std::move(weights)});
}

SeminormSpec SeminormSpec::sum(std::vector<SeminormSpec> terms) {
  std::size_t d = common_dim(terms, "sum");
  return SeminormSpec(d, node::Sum{std::move(terms)});
}

SeminormSpec SeminormSpec::max(std::vector<SeminormSpec> terms) {
  std::size_t d = common_dim(terms, "max");
  return SeminormSpec(d, node::Max{std::move(terms)});
}

SeminormSpec SeminormSpec::pullback(IntMatrix matrix, SeminormSpec inner) {
  if (matrix.rows() != inner.dim()) {
    throw DimensionError("pullback: matrix has " + std::to_string(matrix.rows()) +
                         " rows but inner seminorm has dimension " + std::to_string(inner.dim()));
  }
  if (matrix.cols() == 0) throw std::invalid_argument("pullback: matrix has no columns");
  std::size_t d = matrix.cols();
  return SeminormSpec(
      d, node::Pullback{std::move(matrix), std::make_shared<const SeminormSpec>(std::move(inner))});
}

SeminormSpec SeminormSpec::table(std::size_t dim, std::map<LatticeVector, Integer> entries) {
  if (dim == 0) throw std::invalid_argument("table: dimension must be positive");
  for (const auto& [x, v] : entries) {
    if (x.size() != dim) throw DimensionError("table: point of wrong dimension");
    if (v < 0) throw std::invalid_argument("table: negative entry at a point");
    auto it = entries.find(negate(x));
    if (it != entries.end() && it->second != v) {
      throw std::invalid_argument("table: entry(-x) differs from entry(x)");
    }
  }
  return SeminormSpec(dim, node::Table{dim, std::move(entries)});
}

std::string SeminormSpec::kind() const {
  return std::visit(overloaded{[](const node::Vertices&) { return "vertices"; },
                               [](const node::WeightedL1&) { return "weighted_l1"; },
                               [](const node::WeightedLinf&) { return "weighted_linf"; },
                               [](const node::Sum&) { return "sum"; },
                               [](const node::Max&) { return "max"; },
                               [](const node::Pullback&) { return "pullback"; },
                               [](const node::Table&) { return "table"; }},
                    node_);
}

bool SeminormSpec::is_total() const {
  return std::visit(
      overloaded{[](const node::Table&) { return false; },
                 [](const node::Sum& s) {
                   return std::all_of(s.terms.begin(), s.terms.end(),
                                      [](const SeminormSpec& t) { return t.is_total(); });
                 },
                 [](const node::Max& s) {
                   return std::all_of(s.terms.begin(), s.terms.end(),
                                      [](const SeminormSpec& t) { return t.is_total(); });
                 },
                 [](const node::Pullback& p) { return p.inner->is_total(); },
                 [](const auto&) { return true; }},
      node_);
}

Rational eval(const SeminormSpec& spec, const RatVector& x) {
  if (x.size() != spec.dim()) {
    throw DimensionError("eval: point has dimension " + std::to_string(x.size()) +
                         ", seminorm has dimension " + std::to_string(spec.dim()));
  }
  return std::visit(
      overloaded{
          [&](const node::Vertices& v) {
            Rational best = 0;  // the point set is symmetric, so the max is >= 0
            for (const auto& y : v.points) {
              Rational s = dot(y, x);
              if (s > best) best = s;
            }
            return best;
          },
          [&](const node::WeightedL1& w) {
            Rational s = 0;
            for (std::size_t i = 0; i < x.size(); ++i) s += Rational(w.weights[i]) * abs(x[i]);
            return s;
          },
          [&](const node::WeightedLinf& w) {
            Rational m = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
              Rational t = Rational(w.weights[i]) * abs(x[i]);
              if (t > m) m = t;
            }
            return m;
          },
          [&](const node::Sum& s) {
            Rational total = 0;
            for (const auto& t : s.terms) total += eval(t, x);
            return total;
          },
          [&](const node::Max& s) {
            Rational m = 0;
            for (const auto& t : s.terms) {
              Rational v = eval(t, x);
              if (v > m) m = v;
            }
            return m;
          },
          [&](const node::Pullback& p) { return eval(*p.inner, p.matrix.apply(x)); },
          [&](const node::Table& t) {
            if (!is_lattice(x)) throw OracleUndefined("oracle undefined here: table query off the lattice");
            auto it = t.entries.find(to_lattice(x));
            if (it == t.entries.end()) throw OracleUndefined("oracle undefined here: no table entry");
            return Rational(it->second);
          }},
      spec.node());
}

Rational eval(const SeminormSpec& spec, const LatticeVector& x) {
  return eval(spec, to_rational(x));
}

Integer eval_integer(const SeminormSpec& spec, const LatticeVector& x) {
  Rational v = eval(spec, x);
  if (!is_integer(v)) {
    throw std::domain_error("integrality violated: N at a lattice point is " + to_string(v));
  }
  return v.get_num();
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

Rational random_rational(SplitMix64& rng) {
  return make_rational(Integer(static_cast<long>(rng.uniform(-24, 24))),
                       Integer(static_cast<long>(rng.uniform(1, 6))));
}

RatVector random_point(SplitMix64& rng, std::size_t d) {
  RatVector x(d);
  for (auto& q : x) q = random_rational(rng);
  return x;
}

CheckResult named(const char* name) {
  CheckResult c;
  c.name = name;
  return c;
}

void fail(CheckResult& c, Witness w) {
  if (!c.passed) return;  // keep the first witness
  c.passed = false;
  c.witness = std::move(w);
}

ValidationReport table_axioms(const node::Table& t, std::size_t budget) {
  CheckResult homog = named("homogeneity"), subadd = named("subadditivity"), sym = named("symmetry"),
              nonneg = named("nonnegativity");
  std::size_t used = 0;
  for (const auto& [x, v] : t.entries) {
    ++nonneg.samples;
    if (v < 0) fail(nonneg, {{to_rational(x)}, std::nullopt, "N(x) < 0"});
    if (is_zero(x) && v != 0) fail(homog, {{to_rational(x)}, Rational(0), "N(0) != 0"});
    if (auto it = t.entries.find(negate(x)); it != t.entries.end()) {
      ++sym.samples;
      if (it->second != v) fail(sym, {{to_rational(x)}, std::nullopt, "N(-x) != N(x)"});
    }
  }
  for (const auto& [x, v] : t.entries) {
    if (used >= budget) break;
    if (is_zero(x)) continue;
    for (const auto& [y, w] : t.entries) {
      if (used >= budget) break;
      ++used;
      // Homogeneity on entries lying on a common ray through the origin.
      if (!is_zero(y)) {
        std::optional<Rational> ratio;
        bool collinear = true;
        for (std::size_t i = 0; i < x.size() && collinear; ++i) {
          if (x[i] == 0) {
            collinear = (y[i] == 0);
          } else {
            Rational r = make_rational(y[i], x[i]);
            if (ratio && *ratio != r) collinear = false;
            ratio = r;
          }
        }
        if (collinear && ratio) {
          ++homog.samples;
          if (Rational(w) != abs(*ratio) * Rational(v)) {
            fail(homog, {{to_rational(x)}, *ratio,
                         "N(t x) = " + to_string(w) + " but |t| N(x) = " +
                             to_string(Rational(abs(*ratio) * Rational(v)))});
          }
        }
      }
      if (auto it = t.entries.find(add(x, y)); it != t.entries.end()) {
        ++subadd.samples;
        if (it->second > v + w) {
          fail(subadd, {{to_rational(x), to_rational(y)}, std::nullopt, "N(x+y) > N(x) + N(y)"});
        }
      }
    }
  }
  return ValidationReport{{homog, subadd, sym, nonneg}};
}

}  // namespace

ValidationReport validate_axioms(const SeminormSpec& spec, std::size_t sample_budget,
                                 std::uint64_t seed) {
  if (const auto* t = std::get_if<node::Table>(&spec.node())) return table_axioms(*t, sample_budget);
  if (!spec.is_total()) {
    throw std::invalid_argument("validate_axioms: seminorm contains a partial table oracle");
  }
  CheckResult homog = named("homogeneity"), subadd = named("subadditivity"), sym = named("symmetry"),
              nonneg = named("nonnegativity");
  SplitMix64 rng(hash_mix(seed, std::uint64_t{0x5e1140}));
  const std::size_t d = spec.dim();
  {
    RatVector zero(d, Rational(0));
    if (eval(spec, zero) != 0) fail(homog, {{zero}, Rational(0), "N(0) != 0"});
  }
  for (std::size_t s = 0; s < sample_budget; ++s) {
    RatVector x = random_point(rng, d);
    RatVector y = random_point(rng, d);
    Rational t = random_rational(rng);
    Rational nx = eval(spec, x);
    Rational ny = eval(spec, y);

    ++nonneg.samples;
    if (nx < 0) fail(nonneg, {{x}, std::nullopt, "N(x) < 0"});

    ++homog.samples;
    Rational ntx = eval(spec, scale(t, x));
    if (ntx != abs(t) * nx) {
      fail(homog, {{x}, t, "N(t x) = " + to_string(ntx) + " but |t| N(x) = " + to_string(Rational(abs(t) * nx))});
    }

    ++subadd.samples;
    if (eval(spec, add(x, y)) > nx + ny) {
      fail(subadd, {{x, y}, std::nullopt, "N(x+y) > N(x) + N(y)"});
    }

    ++sym.samples;
    if (eval(spec, negate(x)) != nx) fail(sym, {{x}, std::nullopt, "N(-x) != N(x)"});
  }
  return ValidationReport{{homog, subadd, sym, nonneg}};
}

ValidationReport validate_integrality(const SeminormSpec& spec, std::size_t radius) {
  CheckResult integral = named("integrality");
  if (const auto* t = std::get_if<node::Table>(&spec.node())) {
    // Table values are integers by construction; nothing else is known.
    integral.samples = t->entries.size();
    return ValidationReport{{integral}};
  }
  if (!spec.is_total()) {
    throw std::invalid_argument("validate_integrality: seminorm contains a partial table oracle");
  }
  for_each_lattice_point(spec.dim(), radius, [&](const LatticeVector& x) {
    ++integral.samples;
    Rational v = eval(spec, x);
    if (!is_integer(v)) {
      fail(integral, {{to_rational(x)}, std::nullopt, "N(x) = " + to_string(v) + " is not an integer"});
      return false;
    }
    return true;
  });
  return ValidationReport{{integral}};
}

}  // namespace dualball
