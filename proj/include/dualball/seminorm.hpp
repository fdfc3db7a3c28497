#pragma once

#include "dualball/exact_math.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dualball {

/// Raised when a partial (table) oracle is asked for a value it does not hold.
class OracleUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SeminormSpec;

namespace node {

/// N(x) = max over the symmetrized point set of <x, y>.
struct Vertices {
  std::size_t dim = 0;
  std::vector<LatticeVector> points;  // F union -F, deduplicated, lexicographic
};

struct WeightedL1 {
  std::vector<Integer> weights;
};

struct WeightedLinf {
  std::vector<Integer> weights;
};

struct Sum {
  std::vector<SeminormSpec> terms;
};

struct Max {
  std::vector<SeminormSpec> terms;
};

/// N(x) = inner(A x).
struct Pullback {
  IntMatrix matrix;
  std::shared_ptr<const SeminormSpec> inner;
};

/// Partial oracle; evaluation only.
struct Table {
  std::size_t dim = 0;
  std::map<LatticeVector, Integer> entries;
};

}  // namespace node

/// An integer-valued seminorm on R^d described as a tree of closed-form
/// pieces and combinators.  Immutable; copies share subtrees.
class SeminormSpec {
 public:
  using Node = std::variant<node::Vertices, node::WeightedL1, node::WeightedLinf, node::Sum,
                            node::Max, node::Pullback, node::Table>;

  // Factories validate the tree invariants and throw std::invalid_argument
  // (or DimensionError) on violation.
  static SeminormSpec vertices(std::size_t dim, std::vector<LatticeVector> points);
  static SeminormSpec weighted_l1(std::vector<Integer> weights);
  static SeminormSpec weighted_linf(std::vector<Integer> weights);
  static SeminormSpec sum(std::vector<SeminormSpec> terms);
  static SeminormSpec max(std::vector<SeminormSpec> terms);
  static SeminormSpec pullback(IntMatrix matrix, SeminormSpec inner);
  static SeminormSpec table(std::size_t dim, std::map<LatticeVector, Integer> entries);

  std::size_t dim() const { return dim_; }
  const Node& node() const { return node_; }
  std::string kind() const;

  /// False when any node of the tree is a table.
  bool is_total() const;

 private:
  SeminormSpec(std::size_t dim, Node n) : dim_(dim), node_(std::move(n)) {}

  std::size_t dim_ = 0;
  Node node_;
};

/// Exact N(x).  Throws DimensionError on mismatch and OracleUndefined on a
/// table miss (including non-lattice queries against a table).
Rational eval(const SeminormSpec& spec, const RatVector& x);
Rational eval(const SeminormSpec& spec, const LatticeVector& x);

/// Evaluation on lattice points, asserting the value is an integer.
/// Throws std::domain_error("integrality violated ...") otherwise.
Integer eval_integer(const SeminormSpec& spec, const LatticeVector& x);

struct Witness {
  std::vector<RatVector> points;
  std::optional<Rational> scalar;
  std::string detail;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t samples = 0;
  std::optional<Witness> witness;  // present iff !passed
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

/// Seeded exact checks of homogeneity, subadditivity, symmetry and
/// nonnegativity.  Total specs are sampled at random rational points; table
/// specs are checked on the relations their entries determine.
ValidationReport validate_axioms(const SeminormSpec& spec, std::size_t sample_budget,
                                 std::uint64_t seed);

/// Checks N(x) is an integer for every lattice x with |x|_inf <= radius
/// (every entry, for a table).
ValidationReport validate_integrality(const SeminormSpec& spec, std::size_t radius);

}  // namespace dualball
