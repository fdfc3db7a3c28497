#include "dualball/cli.hpp"

#include "dualball/io.hpp"
#include "dualball/plot.hpp"
#include "dualball/reconstruct.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>

namespace dualball {

namespace {

struct RunConfig {
  std::string spec_path;
  std::string polytope_path;
  std::string points_path;
  std::string trace_path;
  std::string out_path;
  std::string certs_path;
  std::string point;
  std::string direction;
  std::string offset;
  std::string y0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> radius;
  std::size_t n_max = 0;
  std::size_t window = 3;
  std::size_t attempts = 8;
  std::size_t threads = 1;
  std::size_t trace_steps = 10;
  std::string format = "csv";
};

// Domain failures map to exit 1; everything that means "the input could not
// be understood" maps to 2.
class DomainFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
  } else {
    write_file(cfg.out_path, text);
  }
}

LatticeVector lattice_flag(const std::string& csv, const char* name) {
  RatVector v = parse_point(csv);
  if (!is_lattice(v)) throw ParseError(std::string("--") + name + " must have integer coordinates");
  return to_lattice(v);
}

std::string certs_path_for(const RunConfig& cfg) {
  if (!cfg.certs_path.empty()) return cfg.certs_path;
  std::filesystem::path p(cfg.out_path);
  return (p.parent_path() / (p.stem().string() + ".certs.json")).string();
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  SeminormSpec spec = load_seminorm(cfg.spec_path);
  RatVector x = parse_point(cfg.point);
  if (x.size() != spec.dim()) {
    throw DimensionError("point has " + std::to_string(x.size()) + " coordinates but the seminorm has dimension " +
                         std::to_string(spec.dim()));
  }
  try {
    out << to_string(eval(spec, x)) << "\n";
  } catch (const OracleUndefined& e) {
    throw DomainFailure(e.what());
  }
  return kExitOk;
}

int cmd_reconstruct(const RunConfig& cfg, std::ostream& out) {
  SeminormSpec spec = load_seminorm(cfg.spec_path);
  if (!spec.is_total()) throw ParseError("reconstruct needs a total seminorm; table specs are evaluation-only");
  ReconstructBudget budget;
  budget.n_max = cfg.n_max;
  budget.window = cfg.window;
  budget.attempts = cfg.attempts;
  budget.threads = cfg.threads;
  Reconstruction r = reconstruct(spec, budget, cfg.seed);
  write_file(cfg.out_path, dump(to_json(r.polytope)));
  write_file(certs_path_for(cfg), dump(to_json(r.certificates)));
  const Polytope& p = r.polytope;
  out << "vertices: " << p.vertices().size() << "\n";
  out << "all vertices integer: " << (p.has_integer_vertices() ? "yes" : "NO") << "\n";
  out << "affine dimension " << p.affine_dim() << "\n";
  out << "facets: " << p.facets().size() << "\n";
  out << "complete: " << (r.complete ? "yes" : "no (budget exhausted, partial result)") << "\n";
  return r.complete ? kExitOk : kExitDomain;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SeminormSpec spec = load_seminorm(cfg.spec_path);
  if (!spec.is_total()) throw ParseError("certify needs a total seminorm; table specs are evaluation-only");
  Polytope p = load_polytope(cfg.polytope_path);
  if (p.dim() != spec.dim()) throw DimensionError("polytope and seminorm dimensions differ");
  if (!p.has_integer_vertices()) throw DomainFailure("polytope has a non-integer vertex");
  std::size_t radius = cfg.radius.value_or(default_certification_radius(p));
  if (radius == 0) err << "warning: radius 0 checks only the origin\n";
  CertificationReport rep = certify(spec, p, radius);
  if (!cfg.out_path.empty()) write_file(cfg.out_path, dump(to_json(rep)));
  out << (rep.pass ? "pass" : "FAIL") << "\n";
  out << "radius: " << rep.radius << "\n";
  out << "points checked: " << rep.checked_count << "\n";
  if (rep.counterexample) {
    const auto& c = *rep.counterexample;
    out << "counterexample: x = (";
    for (std::size_t i = 0; i < c.x.size(); ++i) out << (i ? "," : "") << to_string(c.x[i]);
    out << "), N(x) = " << to_string(c.value) << ", max over polytope = " << to_string(c.support_value) << "\n";
  }
  return rep.pass ? kExitOk : kExitDomain;
}

int cmd_plot(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.trace_path.empty()) {
    if (cfg.format != "csv") throw ParseError("probe traces are emitted as csv only");
    TraceRecord t = parse_trace(read_file(cfg.trace_path));
    emit(cfg, trace_csv(t.steps), out);
    return kExitOk;
  }
  if (cfg.polytope_path.empty()) throw ParseError("plot needs --polytope or --trace");
  Polytope p = load_polytope(cfg.polytope_path);
  if (cfg.format == "csv") {
    if (p.dim() != 2) throw DimensionError("csv plots need dimension 2, got " + std::to_string(p.dim()));
    emit(cfg, polygon_csv(p), out);
  } else {
    if (p.dim() != 3) throw DimensionError("obj meshes need dimension 3, got " + std::to_string(p.dim()));
    if (!p.full_dimensional()) throw DomainFailure("obj meshes need a full-dimensional polytope");
    emit(cfg, mesh_obj(p), out);
  }
  return kExitOk;
}

int cmd_trace(const RunConfig& cfg, std::ostream& out) {
  SeminormSpec spec = load_seminorm(cfg.spec_path);
  if (!spec.is_total()) throw ParseError("trace needs a total seminorm");
  TraceRecord t;
  t.direction = lattice_flag(cfg.direction, "direction");
  t.offset = cfg.offset.empty() ? LatticeVector(spec.dim(), Integer(0)) : lattice_flag(cfg.offset, "offset");
  t.y0 = lattice_flag(cfg.y0, "y0");
  if (t.direction.size() != spec.dim() || t.offset.size() != spec.dim() || t.y0.size() != spec.dim()) {
    throw DimensionError("trace vectors must match the seminorm dimension");
  }
  if (!cfg.polytope_path.empty()) {
    t.steps = lemma_trace(spec, load_polytope(cfg.polytope_path), t.direction, t.offset, t.y0, cfg.trace_steps);
  } else {
    t.steps = lemma_trace(spec, t.direction, t.offset, t.y0, cfg.trace_steps);
  }
  if (cfg.out_path.empty()) {
    out << trace_csv(t.steps);
  } else {
    write_file(cfg.out_path, dump(to_json(t)));
    out << "steps: " << t.steps.size() << ", chain verified\n";
  }
  return kExitOk;
}

int cmd_polar(const RunConfig& cfg, std::ostream& out) {
  Polytope p = load_polytope(cfg.polytope_path);
  Polytope q = [&] {
    try {
      return polar(p);
    } catch (const PolarUndefined& e) {
      throw DomainFailure(e.what());
    }
  }();
  emit(cfg, dump(to_json(q)), out);
  return kExitOk;
}

int cmd_hull(const RunConfig& cfg, std::ostream& out) {
  Polytope p = convex_hull(parse_point_set(read_file(cfg.points_path)));
  emit(cfg, dump(to_json(p)), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact reconstruction of the dual unit ball of an integer-valued seminorm"};
  app.name(args.empty() ? "dualball" : std::filesystem::path(args.front()).filename().string());
  app.require_subcommand(1);
  RunConfig cfg;
  auto positive = CLI::PositiveNumber;

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate N at a point");
  eval_cmd->add_option("--spec", cfg.spec_path, "Seminorm spec file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--point", cfg.point, "Comma-separated coordinates (integers or p/q)")->required();

  auto* rec_cmd = app.add_subcommand("reconstruct", "Reconstruct and certify the dual unit ball");
  rec_cmd->add_option("--spec", cfg.spec_path, "Seminorm spec file")->required()->check(CLI::ExistingFile);
  rec_cmd->add_option("--out", cfg.out_path, "Output polytope file")->required();
  rec_cmd->add_option("--certs", cfg.certs_path, "Output certificates file (default: <out stem>.certs.json)");
  rec_cmd->add_option("--seed", cfg.seed, "Seed for direction perturbations")->capture_default_str();
  rec_cmd->add_option("--n-max", cfg.n_max, "Steps per probe (default 64 * d * max|direction|)")->check(positive);
  rec_cmd->add_option("--window", cfg.window, "Consecutive confirming steps")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  rec_cmd->add_option("--attempts", cfg.attempts, "Perturbation retries per direction")->capture_default_str();
  rec_cmd->add_option("--threads", cfg.threads, "Probe worker threads")->capture_default_str()->check(positive);

  auto* cert_cmd = app.add_subcommand("certify", "Compare a polytope's support function with N on a lattice cube");
  cert_cmd->add_option("--spec", cfg.spec_path, "Seminorm spec file")->required()->check(CLI::ExistingFile);
  cert_cmd->add_option("--polytope", cfg.polytope_path, "Polytope file")->required()->check(CLI::ExistingFile);
  cert_cmd->add_option("--radius", cfg.radius, "Cube radius (default 2 * d * max vertex coordinate)");
  cert_cmd->add_option("--out", cfg.out_path, "Optional JSON report");

  auto* plot_cmd = app.add_subcommand("plot", "Emit plot data for a polygon, a 3-polytope, or a probe trace");
  plot_cmd->add_option("--polytope", cfg.polytope_path, "Polytope file")->check(CLI::ExistingFile);
  plot_cmd->add_option("--trace", cfg.trace_path, "Trace file written by 'trace --out'")->check(CLI::ExistingFile);
  plot_cmd->add_option("--format", cfg.format, "csv (d=2 or traces) or obj (d=3)")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "obj"}));
  plot_cmd->add_option("--out", cfg.out_path, "Output file (default stdout)");

  auto* trace_cmd = app.add_subcommand("trace", "Trace the ray decomposition and its inequality chain");
  trace_cmd->add_option("--spec", cfg.spec_path, "Seminorm spec file")->required()->check(CLI::ExistingFile);
  trace_cmd->add_option("--direction", cfg.direction, "Integer ray direction")->required();
  trace_cmd->add_option("--offset", cfg.offset, "Integer offset (default 0)");
  trace_cmd->add_option("--y0", cfg.y0, "Vertex attained along the direction")->required();
  trace_cmd->add_option("--n-max", cfg.trace_steps, "Last step index")->capture_default_str();
  trace_cmd->add_option("--polytope", cfg.polytope_path, "Dual ball (default: reconstructed)")->check(CLI::ExistingFile);
  trace_cmd->add_option("--out", cfg.out_path, "Output trace JSON (default: CSV on stdout)");

  auto* polar_cmd = app.add_subcommand("polar", "Polar dual of a polytope");
  polar_cmd->add_option("--polytope", cfg.polytope_path, "Polytope file")->required()->check(CLI::ExistingFile);
  polar_cmd->add_option("--out", cfg.out_path, "Output file (default stdout)");

  auto* hull_cmd = app.add_subcommand("hull", "Convex hull of a point set");
  hull_cmd->add_option("--points", cfg.points_path, "Point set file")->required()->check(CLI::ExistingFile);
  hull_cmd->add_option("--out", cfg.out_path, "Output file (default stdout)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (eval_cmd->parsed()) return cmd_eval(cfg, out);
    if (rec_cmd->parsed()) return cmd_reconstruct(cfg, out);
    if (cert_cmd->parsed()) return cmd_certify(cfg, out, err);
    if (plot_cmd->parsed()) return cmd_plot(cfg, out);
    if (trace_cmd->parsed()) return cmd_trace(cfg, out);
    if (polar_cmd->parsed()) return cmd_polar(cfg, out);
    if (hull_cmd->parsed()) return cmd_hull(cfg, out);
  } catch (const DomainFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace dualball
