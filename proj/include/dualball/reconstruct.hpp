#pragma once

// Recovery of the dual unit ball B* = {y : <x, y> <= N(x) for all x} of an
// integer-valued polyhedral seminorm from evaluations of N alone.
//
// A probe walks the lattice points x_n = n * direction + offset.  At each
// step the forward and backward differences N(x_n +- e_j) - N(x_n) are
// integers.  Convexity of N sandwiches every point y of the face of B*
// maximizing <x_n, .> between them coordinatewise:
//
//     N(x_n) - N(x_n - e_j)  <=  y_j  <=  N(x_n + e_j) - N(x_n)
//
// so when the two agree the face is the single integer point `diffs`, a
// vertex of B* exposed by x_n.  The residual N(x_n) - <x_n, diffs> is then 0.

#include "dualball/exact_math.hpp"
#include "dualball/geometry.hpp"
#include "dualball/seminorm.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace dualball {

struct RayProbe {
  LatticeVector direction;
  LatticeVector offset;
  std::size_t n = 0;
  LatticeVector x_n;
  /// <x_n, y0> once a candidate y0 is known.
  std::optional<Rational> lambda_n;
  /// |x_n - lambda_n x0|^2 with x0 = direction / <direction, y0>.
  std::optional<Rational> z_sq;
  Integer value;               // N(x_n)
  LatticeVector diffs;         // N(x_n + e_j) - N(x_n)
  LatticeVector back_diffs;    // N(x_n) - N(x_n - e_j)
  Integer residual;            // N(x_n) - <x_n, diffs>

  bool two_sided() const { return diffs == back_diffs; }
};

struct ExposureCertificate {
  LatticeVector vertex;
  LatticeVector direction;
  std::size_t n_star = 0;
  std::size_t window = 0;
  std::vector<RayProbe> probes;
};

struct Unstable {
  std::vector<RayProbe> trace;
};

using ProbeOutcome = std::variant<ExposureCertificate, Unstable>;

/// One probe step at x = n * direction + offset.  Throws std::domain_error
/// ("integrality violated") when a difference is not an integer.
RayProbe probe_at(const SeminormSpec& oracle, const LatticeVector& direction,
                  const LatticeVector& offset, std::size_t n);

/// Walks n = 1..n_max and certifies as soon as `window` consecutive steps
/// have identical diffs, residual 0 and agreeing one-sided differences.
/// Throws std::invalid_argument on a partial oracle, a zero direction, or
/// window < 2 / n_max < window.
ProbeOutcome probe_vertex(const SeminormSpec& oracle, const LatticeVector& direction,
                          const LatticeVector& offset, std::size_t n_max, std::size_t window);

/// The same walk along x_n = nearest_lattice(n * x0) for a rational x0.
/// The certificate's direction is primitive(x0).
ProbeOutcome probe_vertex_rational(const SeminormSpec& oracle, const RatVector& x0,
                                   std::size_t n_max, std::size_t window);

/// 64 * d * max|direction_i|.
std::size_t default_n_max(const LatticeVector& direction);

inline constexpr std::int64_t kPerturbScaleBase = 4;

/// primitive(L * direction + r) with L = 2^attempt * kPerturbScaleBase and r
/// a seeded integer vector, |r|_inf <= attempt.  Attempt 0 returns
/// primitive(direction).  Deterministic in its arguments.
LatticeVector perturb_direction(const LatticeVector& direction, std::size_t attempt,
                                std::uint64_t seed);

struct ReconstructBudget {
  std::size_t window = 3;
  std::size_t attempts = 8;
  /// 0 selects default_n_max(direction) per probe.
  std::size_t n_max = 0;
  /// Upper bound on hull refinement rounds.
  std::size_t max_rounds = 10000;
  /// Worker threads for probing distinct directions; 1 is sequential.
  std::size_t threads = 1;
  /// Seeded checks run before reconstruction.
  std::size_t axiom_samples = 200;
  std::size_t integrality_radius = 2;
};

struct Reconstruction {
  Polytope polytope;
  /// One certificate per vertex, ordered like polytope.vertices().
  std::vector<ExposureCertificate> certificates;
  bool complete = false;
  std::size_t rounds = 0;
  std::size_t probes_issued = 0;
};

/// Raised when the oracle fails its seminorm/integrality checks.
class OracleViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive reconstruction of B*: certified vertices from perturbed +-e_j
/// probes seed an inner hull; every facet normal u of the hull is then
/// checked against N(u) and probed when N(u) exceeds the facet offset, and
/// the orthogonal complement of the hull's span is probed until N vanishes
/// on it.  Ends when every facet is confirmed; a budget overrun returns the
/// partial hull with complete = false.
Reconstruction reconstruct(const SeminormSpec& oracle, const ReconstructBudget& budget,
                           std::uint64_t seed);

struct Counterexample {
  LatticeVector x;
  Integer value;          // N(x)
  Rational support_value; // max <x, vertices>
};

struct CertificationReport {
  bool pass = false;
  std::size_t radius = 0;
  std::size_t checked_count = 0;
  std::optional<Counterexample> counterexample;
};

/// 2 * d * max |vertex|_inf.
std::size_t default_certification_radius(const Polytope& p);

/// Compares the support function of P with N on every lattice point of the
/// cube of the given radius (nearest shells first).  Throws
/// std::invalid_argument if P has a non-integer vertex.
CertificationReport certify(const SeminormSpec& oracle, const Polytope& p, std::size_t radius);

struct TraceStep {
  RayProbe probe;       // lambda_n and z_sq always set
  LatticeVector y_n;    // a maximizer of <x_n, .> over B*
  Rational gap;         // N(x_n) - lambda_n
  /// The Cauchy-Schwarz bound needs lambda_n >= 0; steps before the ray
  /// turns positive only check the first two relations.
  bool bound_checked = false;
};

/// Raised when the inequality chain fails; never expected.
class ChainViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Traces n = 0..n_max along x_n = n * direction + offset with
/// x0 = direction / <direction, y0> and checks exactly, at every step,
///   lambda_n <= N(x_n),
///   N(x_n) = lambda_n <x0, y_n> + <z_n, y_n>,
///   (N(x_n) - lambda_n)^2 <= |z_n|^2 |y_n - y0|^2   (when lambda_n >= 0).
/// y0 must attain N(direction) and <direction, y0> > 0.
std::vector<TraceStep> lemma_trace(const SeminormSpec& oracle, const Polytope& dual_ball,
                                   const LatticeVector& direction, const LatticeVector& offset,
                                   const LatticeVector& y0, std::size_t n_max);

/// As above, reconstructing the dual ball first.
std::vector<TraceStep> lemma_trace(const SeminormSpec& oracle, const LatticeVector& direction,
                                   const LatticeVector& offset, const LatticeVector& y0,
                                   std::size_t n_max);

}  // namespace dualball
