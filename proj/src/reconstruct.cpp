#include "dualball/reconstruct.hpp"

#include "dualball/lattice_walk.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <thread>

namespace dualball {

namespace {

void require_total(const SeminormSpec& oracle, const char* what) {
  if (!oracle.is_total()) {
    throw std::invalid_argument(std::string(what) + ": oracle is partial (table kind cannot drive probes)");
  }
}

// Upper bound on |y|_inf over B*: y_j = <e_j, y> <= N(e_j).
Integer dual_coordinate_bound(const SeminormSpec& oracle) {
  Integer m = 0;
  for (std::size_t j = 0; j < oracle.dim(); ++j) {
    Integer v = eval_integer(oracle, unit_vector(oracle.dim(), j));
    if (v > m) m = v;
  }
  return m;
}

Integer l1(const LatticeVector& v) {
  Integer s = 0;
  for (const auto& z : v) s += abs(z);
  return s;
}

RayProbe probe_point(const SeminormSpec& oracle, const LatticeVector& x, Integer value) {
  RayProbe p;
  const std::size_t d = x.size();
  p.x_n = x;
  p.diffs.resize(d);
  p.back_diffs.resize(d);
  LatticeVector y = x;
  for (std::size_t j = 0; j < d; ++j) {
    y[j] = x[j] + 1;
    p.diffs[j] = eval_integer(oracle, y) - value;
    y[j] = x[j] - 1;
    p.back_diffs[j] = value - eval_integer(oracle, y);
    y[j] = x[j];
  }
  p.residual = value - dot(x, p.diffs);
  p.value = std::move(value);
  return p;
}

void annotate(RayProbe& p, const LatticeVector& y0) {
  Integer c = dot(p.direction, y0);
  p.lambda_n = dot(p.x_n, to_rational(y0));
  if (c > 0) {
    RatVector x0 = scale(Rational(1) / Rational(c), to_rational(p.direction));
    p.z_sq = squared_norm(sub(to_rational(p.x_n), scale(*p.lambda_n, x0)));
  }
}

// Shared walk.  `point_at(n)` gives x_n; `bound` is the step after which the
// differences are known to equal the one-sided derivatives, so a step that
// still fails the two-sided test proves the face is not a vertex.
ProbeOutcome walk(const SeminormSpec& oracle, const LatticeVector& direction,
                  const LatticeVector& offset, const std::function<LatticeVector(std::size_t)>& point_at,
                  std::size_t n_max, std::size_t window, const Integer& bound) {
  std::vector<RayProbe> trace;
  std::size_t run = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    LatticeVector x = point_at(n);
    RayProbe p = probe_point(oracle, x, eval_integer(oracle, x));
    p.direction = direction;
    p.offset = offset;
    p.n = n;
    const bool good = p.residual == 0 && p.two_sided();
    if (!good) {
      run = 0;
    } else if (run > 0 && trace.back().diffs == p.diffs) {
      ++run;
    } else {
      run = 1;
    }
    trace.push_back(std::move(p));
    if (run == window) {
      ExposureCertificate cert;
      cert.vertex = trace.back().diffs;
      cert.direction = direction;
      cert.n_star = n + 1 - window;
      cert.window = window;
      cert.probes.assign(std::make_move_iterator(trace.end() - static_cast<std::ptrdiff_t>(window)),
                         std::make_move_iterator(trace.end()));
      for (auto& q : cert.probes) {
        annotate(q, cert.vertex);
        // Membership on every examined point: <x, y0> <= N(x).
        if (dot(q.x_n, cert.vertex) != q.value) throw std::logic_error("probe: certificate not attained");
      }
      return cert;
    }
    if (!good && Integer(static_cast<unsigned long>(n)) > bound) break;
  }
  return Unstable{std::move(trace)};
}

void check_probe_args(const LatticeVector& direction, std::size_t n_max, std::size_t window) {
  if (window < 2) throw std::invalid_argument("probe: window must be at least 2");
  if (n_max < window) throw std::invalid_argument("probe: n_max must be at least the window");
  if (is_zero(direction)) throw std::invalid_argument("probe: zero direction");
}

}  // namespace

RayProbe probe_at(const SeminormSpec& oracle, const LatticeVector& direction,
                  const LatticeVector& offset, std::size_t n) {
  require_total(oracle, "probe_at");
  if (direction.size() != oracle.dim() || offset.size() != oracle.dim()) {
    throw DimensionError("probe_at: dimension mismatch");
  }
  LatticeVector x = add(scale(Integer(static_cast<unsigned long>(n)), direction), offset);
  RayProbe p = probe_point(oracle, x, eval_integer(oracle, x));
  p.direction = direction;
  p.offset = offset;
  p.n = n;
  return p;
}

ProbeOutcome probe_vertex(const SeminormSpec& oracle, const LatticeVector& direction,
                          const LatticeVector& offset, std::size_t n_max, std::size_t window) {
  require_total(oracle, "probe_vertex");
  if (direction.size() != oracle.dim() || offset.size() != oracle.dim()) {
    throw DimensionError("probe_vertex: dimension mismatch");
  }
  check_probe_args(direction, n_max, window);
  // Vertices v, w of B* with <direction, v> > <direction, w> differ by at
  // least 1 there, so beyond 2M(|offset|_1 + 1) the steps +-e_j never leave
  // the face exposed by the direction.
  Integer bound = 2 * dual_coordinate_bound(oracle) * (l1(offset) + 1);
  auto point_at = [&](std::size_t n) {
    return add(scale(Integer(static_cast<unsigned long>(n)), direction), offset);
  };
  return walk(oracle, direction, offset, point_at, n_max, window, bound);
}

ProbeOutcome probe_vertex_rational(const SeminormSpec& oracle, const RatVector& x0,
                                   std::size_t n_max, std::size_t window) {
  require_total(oracle, "probe_vertex_rational");
  if (x0.size() != oracle.dim()) throw DimensionError("probe_vertex_rational: dimension mismatch");
  if (is_zero(x0)) throw std::invalid_argument("probe: zero direction");
  check_probe_args(primitive(x0), n_max, window);
  Integer den = 1;
  for (const auto& q : x0) den = lcm(den, q.get_den());
  // <x0, v - w> >= 1/den, and rounding moves x_n by at most 1/2 per coordinate.
  Integer bound = den * dual_coordinate_bound(oracle) * (static_cast<unsigned long>(x0.size()) + 2);
  const LatticeVector zero(x0.size(), Integer(0));
  auto point_at = [&](std::size_t n) {
    return nearest_lattice(scale(Rational(Integer(static_cast<unsigned long>(n))), x0));
  };
  return walk(oracle, primitive(x0), zero, point_at, n_max, window, bound);
}

std::size_t default_n_max(const LatticeVector& direction) {
  Integer m = abs_max(direction);
  Integer n = 64 * Integer(static_cast<unsigned long>(direction.size())) * m;
  const Integer cap = Integer(static_cast<unsigned long>(SIZE_MAX / 2));
  return n > cap ? SIZE_MAX / 2 : static_cast<std::size_t>(n.get_ui());
}

LatticeVector perturb_direction(const LatticeVector& direction, std::size_t attempt,
                                std::uint64_t seed) {
  if (is_zero(direction)) throw std::invalid_argument("perturb_direction: zero direction");
  if (attempt == 0) return primitive(direction);
  std::uint64_t h = hash_mix(seed, std::uint64_t{attempt});
  for (const auto& z : direction) h = hash_mix(h, z);
  SplitMix64 rng(h);
  Integer scale_factor = Integer(kPerturbScaleBase) << static_cast<unsigned long>(attempt);
  const auto a = static_cast<std::int64_t>(attempt);
  LatticeVector out(direction.size());
  for (std::size_t i = 0; i < direction.size(); ++i) {
    out[i] = scale_factor * direction[i] + Integer(static_cast<long>(rng.uniform(-a, a)));
  }
  return primitive(out);
}

namespace {

struct ProbeTask {
  LatticeVector direction;
  // When set, stop at the first certificate attaining this support value.
  std::optional<Integer> target;
  std::size_t first_attempt = 0;
};

struct TaskResult {
  std::vector<ExposureCertificate> certificates;
  std::size_t probes = 0;
};

class Reconstructor {
 public:
  Reconstructor(const SeminormSpec& oracle, const ReconstructBudget& budget, std::uint64_t seed)
      : oracle_(oracle), budget_(budget), seed_(seed), d_(oracle.dim()) {}

  Reconstruction run() {
    Reconstruction out;
    std::vector<ProbeTask> tasks;
    for (std::size_t j = 0; j < d_; ++j) {
      tasks.push_back({unit_vector(d_, j), std::nullopt, 1});
      tasks.push_back({negate(unit_vector(d_, j)), std::nullopt, 1});
    }
    merge(execute(tasks), out);

    std::set<Facet, FacetLess> confirmed;
    bool stuck = false;
    while (true) {
      Polytope hull = inner_hull();
      tasks.clear();
      for (const auto& f : hull.facets()) {
        if (confirmed.count(f)) continue;
        Integer value = eval_integer(oracle_, f.normal);
        if (Rational(value) == f.offset) {
          confirmed.insert(f);
        } else {
          tasks.push_back({f.normal, value, 0});
        }
      }
      // Directions normal to the hull's affine span: B* stays inside the span
      // iff N(+-w) equals the span equation's value for each of them.
      for (const auto& e : hull.equations()) {
        for (int sign : {1, -1}) {
          LatticeVector w = sign > 0 ? e.normal : negate(e.normal);
          Integer value = eval_integer(oracle_, w);
          if (Rational(value) != (sign > 0 ? e.value : Rational(-e.value))) {
            tasks.push_back({std::move(w), value, 0});
          }
        }
      }
      if (tasks.empty()) {
        out.complete = true;
        out.polytope = std::move(hull);
        break;
      }
      if (stuck || out.rounds >= budget_.max_rounds) {
        out.polytope = std::move(hull);
        break;
      }
      ++out.rounds;
      std::size_t before = certified_.size();
      merge(execute(tasks), out);
      stuck = certified_.size() == before;
    }

    for (const auto& v : out.polytope.vertices()) {
      auto it = is_lattice(v) ? certified_.find(to_lattice(v)) : certified_.end();
      if (it == certified_.end()) {
        out.complete = false;  // only the origin placeholder can be uncertified
        continue;
      }
      out.certificates.push_back(it->second);
    }
    return out;
  }

 private:
  struct FacetLess {
    bool operator()(const Facet& a, const Facet& b) const {
      if (a.normal != b.normal) return a.normal < b.normal;
      return a.offset < b.offset;
    }
  };

  std::size_t n_max_for(const LatticeVector& dir) const {
    std::size_t n = budget_.n_max ? budget_.n_max : default_n_max(dir);
    return std::max(n, budget_.window);
  }

  TaskResult run_task(const ProbeTask& task) const {
    TaskResult res;
    for (std::size_t attempt = task.first_attempt; attempt <= budget_.attempts; ++attempt) {
      LatticeVector dir = perturb_direction(task.direction, attempt, seed_);
      ++res.probes;
      auto outcome = probe_vertex(oracle_, dir, LatticeVector(d_, Integer(0)), n_max_for(dir), budget_.window);
      if (auto* cert = std::get_if<ExposureCertificate>(&outcome)) {
        bool hit = !task.target || dot(task.direction, cert->vertex) == *task.target;
        res.certificates.push_back(std::move(*cert));
        if (hit) break;
      }
    }
    return res;
  }

  std::vector<TaskResult> execute(const std::vector<ProbeTask>& tasks) const {
    std::vector<TaskResult> results(tasks.size());
    const std::size_t workers = std::min(std::max<std::size_t>(budget_.threads, 1), tasks.size());
    if (workers <= 1) {
      for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = run_task(tasks[i]);
      return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
          try {
            results[i] = run_task(tasks[i]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
  }

  // Certificates are merged in lexicographic order of the probed direction so
  // the outcome does not depend on scheduling.
  void merge(std::vector<TaskResult> results, Reconstruction& out) {
    std::vector<ExposureCertificate> all;
    for (auto& r : results) {
      out.probes_issued += r.probes;
      for (auto& c : r.certificates) all.push_back(std::move(c));
    }
    std::stable_sort(all.begin(), all.end(), [](const ExposureCertificate& a, const ExposureCertificate& b) {
      return a.direction < b.direction;
    });
    for (auto& c : all) {
      if (!is_lattice(to_rational(c.vertex))) throw std::logic_error("certified vertex off the lattice");
      certified_.emplace(c.vertex, std::move(c));
    }
  }

  Polytope inner_hull() const {
    std::vector<LatticeVector> pts{LatticeVector(d_, Integer(0))};  // 0 lies in every B*
    for (const auto& [v, c] : certified_) pts.push_back(v);
    return convex_hull(pts);
  }

  const SeminormSpec& oracle_;
  const ReconstructBudget& budget_;
  std::uint64_t seed_;
  std::size_t d_;
  std::map<LatticeVector, ExposureCertificate> certified_;
};

}  // namespace

Reconstruction reconstruct(const SeminormSpec& oracle, const ReconstructBudget& budget,
                           std::uint64_t seed) {
  require_total(oracle, "reconstruct");
  if (budget.window < 2) throw std::invalid_argument("reconstruct: window must be at least 2");
  auto axioms = validate_axioms(oracle, budget.axiom_samples, seed);
  if (!axioms.passed()) {
    for (const auto& c : axioms.checks) {
      if (!c.passed) throw OracleViolation("oracle is not a seminorm: " + c.name + " fails (" + c.witness->detail + ")");
    }
  }
  auto integral = validate_integrality(oracle, budget.integrality_radius);
  if (!integral.passed()) {
    throw OracleViolation("oracle is not integer-valued on the lattice: " + integral.checks.front().witness->detail);
  }
  return Reconstructor(oracle, budget, seed).run();
}

std::size_t default_certification_radius(const Polytope& p) {
  Integer m = 0;
  for (const auto& v : p.vertices()) {
    for (const auto& q : v) {
      Integer c = abs(q.get_num());
      mpz_cdiv_q(c.get_mpz_t(), c.get_mpz_t(), q.get_den().get_mpz_t());
      if (c > m) m = c;
    }
  }
  Integer r = 2 * Integer(static_cast<unsigned long>(p.dim())) * m;
  return static_cast<std::size_t>(r.get_ui());
}

CertificationReport certify(const SeminormSpec& oracle, const Polytope& p, std::size_t radius) {
  require_total(oracle, "certify");
  if (p.dim() != oracle.dim()) throw DimensionError("certify: polytope and seminorm dimensions differ");
  if (!p.has_integer_vertices()) {
    throw std::invalid_argument("certify: polytope has a non-integer vertex");
  }
  CertificationReport report;
  report.radius = radius;
  report.pass = true;
  report.checked_count = for_each_lattice_point(p.dim(), radius, [&](const LatticeVector& x) {
    Integer value = eval_integer(oracle, x);
    Rational top = support(p, x).value;
    if (top == Rational(value)) return true;
    report.pass = false;
    report.counterexample = Counterexample{x, value, top};
    return false;
  });
  return report;
}

std::vector<TraceStep> lemma_trace(const SeminormSpec& oracle, const Polytope& dual_ball,
                                   const LatticeVector& direction, const LatticeVector& offset,
                                   const LatticeVector& y0, std::size_t n_max) {
  require_total(oracle, "lemma_trace");
  const std::size_t d = oracle.dim();
  if (direction.size() != d || offset.size() != d || y0.size() != d || dual_ball.dim() != d) {
    throw DimensionError("lemma_trace: dimension mismatch");
  }
  Integer c = dot(direction, y0);
  if (c <= 0) throw std::invalid_argument("lemma_trace: <direction, y0> must be positive");
  if (eval_integer(oracle, direction) != c) {
    throw std::invalid_argument("lemma_trace: y0 does not attain N along the direction");
  }
  const RatVector y0q = to_rational(y0);
  const RatVector x0 = scale(Rational(1) / Rational(c), to_rational(direction));

  std::vector<TraceStep> steps;
  for (std::size_t n = 0; n <= n_max; ++n) {
    TraceStep s;
    s.probe = probe_at(oracle, direction, offset, n);
    const RatVector xq = to_rational(s.probe.x_n);
    const Rational value(s.probe.value);
    const Rational lambda = dot(xq, y0q);
    const RatVector z = sub(xq, scale(lambda, x0));
    s.probe.lambda_n = lambda;
    s.probe.z_sq = squared_norm(z);

    SupportResult top = support(dual_ball, xq);
    if (top.value != value) {
      throw ChainViolation("lemma_trace: dual ball support differs from N at step " + std::to_string(n));
    }
    const RatVector& yn = dual_ball.vertices()[top.argmax_vertices.front()];
    s.y_n = is_lattice(yn) ? to_lattice(yn) : throw ChainViolation("lemma_trace: non-integer maximizer");
    s.gap = value - lambda;

    if (lambda > value) throw ChainViolation("lemma_trace: lambda_n > N(x_n) at step " + std::to_string(n));
    if (lambda * dot(x0, yn) + dot(z, yn) != value) {
      throw ChainViolation("lemma_trace: decomposition identity fails at step " + std::to_string(n));
    }
    if (lambda >= 0) {
      s.bound_checked = true;
      if (s.gap * s.gap > *s.probe.z_sq * squared_norm(sub(yn, y0q))) {
        throw ChainViolation("lemma_trace: Cauchy-Schwarz bound fails at step " + std::to_string(n));
      }
    }
    steps.push_back(std::move(s));
  }
  return steps;
}

std::vector<TraceStep> lemma_trace(const SeminormSpec& oracle, const LatticeVector& direction,
                                   const LatticeVector& offset, const LatticeVector& y0,
                                   std::size_t n_max) {
  Reconstruction r = reconstruct(oracle, ReconstructBudget{}, 0);
  if (!r.complete) throw std::runtime_error("lemma_trace: dual ball reconstruction incomplete");
  return lemma_trace(oracle, r.polytope, direction, offset, y0, n_max);
}

}  // namespace dualball
