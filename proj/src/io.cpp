#include "dualball/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace dualball {

namespace {

[[noreturn]] void fail_at(const std::string& path, const std::string& msg) {
  throw ParseError((path.empty() ? std::string("/") : path) + ": " + msg);
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
    std::size_t last_nl = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    std::size_t column = (last_nl == std::string::npos || last_nl >= byte) ? byte + 1 : byte - last_nl;
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": malformed JSON (" + e.what() + ")");
  }
}

const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail_at(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail_at(path, "missing required key \"" + key + "\"");
  return *it;
}

void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
    if (!ok) fail_at(path, "unexpected key \"" + it.key() + "\"");
  }
}

Integer read_integer(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()), 10);
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()), 10);
  if (j.is_string()) {
    auto s = j.get<std::string>();
    try {
      Rational q = parse_rational(s);
      if (s.find('/') == std::string::npos && is_integer(q)) return q.get_num();
    } catch (const std::invalid_argument&) {
    }
    fail_at(path, "expected an integer, got \"" + s + "\"");
  }
  if (j.is_number_float()) fail_at(path, "expected an integer, got a non-integer number " + j.dump());
  if (j.is_object()) fail_at(path, "expected an integer, got a rational " + j.dump());
  fail_at(path, "expected an integer, got " + j.dump());
}

Rational read_rational(const Json& j, const std::string& path) {
  if (j.is_object()) {
    only_keys(j, {"num", "den"}, path);
    Integer num = read_integer(member(j, "num", path), path + "/num");
    Integer den = read_integer(member(j, "den", path), path + "/den");
    if (den == 0) fail_at(path, "zero denominator");
    return make_rational(num, den);
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail_at(path, e.what());
    }
  }
  return Rational(read_integer(j, path));
}

std::size_t read_count(const Json& j, const std::string& path) {
  Integer z = read_integer(j, path);
  if (z < 0 || !z.fits_ulong_p()) fail_at(path, "expected a nonnegative count");
  return z.get_ui();
}

LatticeVector read_lattice(const Json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) fail_at(path, "expected an array of integers");
  if (j.size() != dim) {
    fail_at(path, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(j.size()));
  }
  LatticeVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_integer(j[i], path + "/" + std::to_string(i)));
  return v;
}

RatVector read_rational_vector(const Json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) fail_at(path, "expected an array of numbers");
  if (j.size() != dim) {
    fail_at(path, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(j.size()));
  }
  RatVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_rational(j[i], path + "/" + std::to_string(i)));
  return v;
}

std::vector<Integer> read_integers(const Json& j, const std::string& path) {
  if (!j.is_array()) fail_at(path, "expected an array of integers");
  std::vector<Integer> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_integer(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::size_t read_dim(const Json& j, const std::string& path) {
  std::size_t d = read_count(j, path);
  if (d == 0) fail_at(path, "dimension must be positive");
  return d;
}

SeminormSpec parse_node(const Json& j, const std::string& path, std::optional<std::size_t> expected) {
  if (!j.is_object()) fail_at(path, "expected a seminorm object");
  const Json& kind_j = member(j, "kind", path);
  if (!kind_j.is_string()) fail_at(path + "/kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();

  std::optional<std::size_t> dim = expected;
  if (auto it = j.find("dim"); it != j.end()) {
    std::size_t d = read_dim(*it, path + "/dim");
    if (expected && *expected != d) {
      fail_at(path + "/dim", "dimension " + std::to_string(d) + " does not match the enclosing " +
                                 std::to_string(*expected));
    }
    dim = d;
  }
  if (!dim) fail_at(path, "missing required key \"dim\"");

  auto build = [&](auto&& make) -> SeminormSpec {
    try {
      SeminormSpec s = make();
      if (s.dim() != *dim) {
        fail_at(path, "node has dimension " + std::to_string(s.dim()) + ", expected " + std::to_string(*dim));
      }
      return s;
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      fail_at(path, e.what());
    }
  };

  if (kind == "vertices") {
    only_keys(j, {"kind", "dim", "points"}, path);
    const Json& pts = member(j, "points", path);
    if (!pts.is_array()) fail_at(path + "/points", "expected an array of points");
    std::vector<LatticeVector> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      points.push_back(read_lattice(pts[i], path + "/points/" + std::to_string(i), *dim));
    }
    return build([&] { return SeminormSpec::vertices(*dim, std::move(points)); });
  }
  if (kind == "weighted_l1" || kind == "weighted_linf") {
    only_keys(j, {"kind", "dim", "weights"}, path);
    auto w = read_integers(member(j, "weights", path), path + "/weights");
    if (w.size() != *dim) fail_at(path + "/weights", "expected " + std::to_string(*dim) + " weights");
    return build([&] {
      return kind == "weighted_l1" ? SeminormSpec::weighted_l1(std::move(w))
                                   : SeminormSpec::weighted_linf(std::move(w));
    });
  }
  if (kind == "sum" || kind == "max") {
    only_keys(j, {"kind", "dim", "terms"}, path);
    const Json& terms_j = member(j, "terms", path);
    if (!terms_j.is_array()) fail_at(path + "/terms", "expected an array of seminorms");
    std::vector<SeminormSpec> terms;
    for (std::size_t i = 0; i < terms_j.size(); ++i) {
      terms.push_back(parse_node(terms_j[i], path + "/terms/" + std::to_string(i), dim));
    }
    return build([&] { return kind == "sum" ? SeminormSpec::sum(std::move(terms)) : SeminormSpec::max(std::move(terms)); });
  }
  if (kind == "pullback") {
    only_keys(j, {"kind", "dim", "matrix", "inner"}, path);
    const Json& m = member(j, "matrix", path);
    if (!m.is_array() || m.empty()) fail_at(path + "/matrix", "expected a nonempty array of rows");
    std::vector<LatticeVector> rows;
    for (std::size_t i = 0; i < m.size(); ++i) {
      rows.push_back(read_lattice(m[i], path + "/matrix/" + std::to_string(i), *dim));
    }
    const std::size_t inner_dim = rows.size();
    SeminormSpec inner = parse_node(member(j, "inner", path), path + "/inner", inner_dim);
    return build([&] { return SeminormSpec::pullback(IntMatrix(std::move(rows)), std::move(inner)); });
  }
  if (kind == "table") {
    only_keys(j, {"kind", "dim", "entries"}, path);
    const Json& es = member(j, "entries", path);
    if (!es.is_array()) fail_at(path + "/entries", "expected an array of entries");
    std::map<LatticeVector, Integer> entries;
    for (std::size_t i = 0; i < es.size(); ++i) {
      const std::string ep = path + "/entries/" + std::to_string(i);
      if (!es[i].is_object()) fail_at(ep, "expected {\"point\": [...], \"value\": n}");
      only_keys(es[i], {"point", "value"}, ep);
      LatticeVector x = read_lattice(member(es[i], "point", ep), ep + "/point", *dim);
      const Json& vj = member(es[i], "value", ep);
      if (vj.is_object() || vj.is_number_float()) {
        fail_at(ep + "/value", "table values must be integers, got " + vj.dump());
      }
      Integer v = read_integer(vj, ep + "/value");
      if (!entries.emplace(x, v).second) fail_at(ep, "duplicate table point");
    }
    return build([&] { return SeminormSpec::table(*dim, std::move(entries)); });
  }
  fail_at(path + "/kind", "unknown kind \"" + kind + "\"");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json integers_to_json(const std::vector<Integer>& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

}  // namespace

Json to_json(const Integer& z) {
  if (z.fits_slong_p()) return Json(static_cast<std::int64_t>(z.get_si()));
  return Json(z.get_str());
}

Json to_json(const Rational& q) {
  if (is_integer(q)) return to_json(q.get_num());
  Json o = Json::object();
  o["num"] = to_json(q.get_num());
  o["den"] = to_json(q.get_den());
  return o;
}

Json to_json(const LatticeVector& v) { return integers_to_json(v); }

Json to_json(const RatVector& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_json(q));
  return a;
}

SeminormSpec parse_seminorm(const std::string& text) {
  Json j = parse_text(text);
  if (!j.is_object()) fail_at("", "expected a seminorm object");
  if (!j.contains("dim")) fail_at("", "missing required key \"dim\" at the root");
  return parse_node(j, "", std::nullopt);
}

SeminormSpec load_seminorm(const std::filesystem::path& path) { return parse_seminorm(read_file(path)); }

Json to_json(const SeminormSpec& spec) {
  Json o = Json::object();
  o["kind"] = spec.kind();
  o["dim"] = spec.dim();
  std::visit(overloaded{[&](const node::Vertices& v) {
                          Json pts = Json::array();
                          for (const auto& p : v.points) pts.push_back(to_json(p));
                          o["points"] = std::move(pts);
                        },
                        [&](const node::WeightedL1& w) { o["weights"] = integers_to_json(w.weights); },
                        [&](const node::WeightedLinf& w) { o["weights"] = integers_to_json(w.weights); },
                        [&](const node::Sum& s) {
                          Json t = Json::array();
                          for (const auto& x : s.terms) t.push_back(to_json(x));
                          o["terms"] = std::move(t);
                        },
                        [&](const node::Max& s) {
                          Json t = Json::array();
                          for (const auto& x : s.terms) t.push_back(to_json(x));
                          o["terms"] = std::move(t);
                        },
                        [&](const node::Pullback& p) {
                          Json m = Json::array();
                          for (const auto& r : p.matrix.data()) m.push_back(to_json(r));
                          o["matrix"] = std::move(m);
                          o["inner"] = to_json(*p.inner);
                        },
                        [&](const node::Table& t) {
                          Json es = Json::array();
                          for (const auto& [x, v] : t.entries) {
                            Json e = Json::object();
                            e["point"] = to_json(x);
                            e["value"] = to_json(v);
                            es.push_back(std::move(e));
                          }
                          o["entries"] = std::move(es);
                        }},
             spec.node());
  return o;
}

Polytope parse_polytope(const std::string& text) {
  Json j = parse_text(text);
  if (!j.is_object()) fail_at("", "expected a polytope object");
  only_keys(j, {"dim", "affine_dim", "vertices", "facets", "span", "equations"}, "");
  const std::size_t d = read_dim(member(j, "dim", ""), "/dim");
  const Json& vs = member(j, "vertices", "");
  if (!vs.is_array() || vs.empty()) fail_at("/vertices", "expected a nonempty array of points");
  std::vector<RatVector> pts;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    pts.push_back(read_rational_vector(vs[i], "/vertices/" + std::to_string(i), d));
  }
  Polytope p = convex_hull(pts);
  if (auto it = j.find("affine_dim"); it != j.end()) {
    if (read_count(*it, "/affine_dim") != p.affine_dim()) {
      fail_at("/affine_dim", "does not match the affine dimension of the vertices");
    }
  }
  if (auto it = j.find("facets"); it != j.end()) {
    if (!it->is_array()) fail_at("/facets", "expected an array of facets");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string fp = "/facets/" + std::to_string(i);
      const Json& f = (*it)[i];
      if (!f.is_object()) fail_at(fp, "expected {\"normal\": [...], \"offset\": r}");
      only_keys(f, {"normal", "offset"}, fp);
      LatticeVector normal = read_lattice(member(f, "normal", fp), fp + "/normal", d);
      Rational offset = read_rational(member(f, "offset", fp), fp + "/offset");
      for (const auto& v : pts) {
        if (dot(normal, v) > offset) fail_at(fp, "facet inequality is violated by a listed vertex");
      }
    }
  }
  return p;
}

Polytope load_polytope(const std::filesystem::path& path) { return parse_polytope(read_file(path)); }

Json to_json(const Polytope& p) {
  Json o = Json::object();
  o["dim"] = p.dim();
  o["affine_dim"] = p.affine_dim();
  Json vs = Json::array();
  for (const auto& v : p.vertices()) vs.push_back(to_json(v));
  o["vertices"] = std::move(vs);
  Json fs = Json::array();
  for (const auto& f : p.facets()) {
    Json fo = Json::object();
    fo["normal"] = to_json(f.normal);
    fo["offset"] = to_json(f.offset);
    fs.push_back(std::move(fo));
  }
  o["facets"] = std::move(fs);
  if (!p.full_dimensional()) {
    Json span = Json::array();
    for (const auto& b : p.span()) span.push_back(to_json(b));
    o["span"] = std::move(span);
    Json eqs = Json::array();
    for (const auto& e : p.equations()) {
      Json eo = Json::object();
      eo["normal"] = to_json(e.normal);
      eo["value"] = to_json(e.value);
      eqs.push_back(std::move(eo));
    }
    o["equations"] = std::move(eqs);
  }
  return o;
}

std::vector<RatVector> parse_point_set(const std::string& text) {
  Json j = parse_text(text);
  if (!j.is_object()) fail_at("", "expected an object with \"dim\" and \"points\"");
  const std::size_t d = read_dim(member(j, "dim", ""), "/dim");
  const char* key = j.contains("points") ? "points" : "vertices";
  const Json& ps = member(j, key, "");
  if (!ps.is_array() || ps.empty()) fail_at(std::string("/") + key, "expected a nonempty array of points");
  std::vector<RatVector> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out.push_back(read_rational_vector(ps[i], std::string("/") + key + "/" + std::to_string(i), d));
  }
  return out;
}

RatVector parse_point(const std::string& csv) {
  RatVector out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_rational(item));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("point: ") + e.what());
    }
  }
  if (out.empty() || (!csv.empty() && csv.back() == ',')) throw ParseError("point: empty coordinate list");
  return out;
}

Json to_json(const RayProbe& p) {
  Json o = Json::object();
  o["n"] = p.n;
  o["x_n"] = to_json(p.x_n);
  o["value"] = to_json(p.value);
  o["diffs"] = to_json(p.diffs);
  o["back_diffs"] = to_json(p.back_diffs);
  o["residual"] = to_json(p.residual);
  if (p.lambda_n) o["lambda_n"] = to_json(*p.lambda_n);
  if (p.z_sq) o["z_sq"] = to_json(*p.z_sq);
  return o;
}

Json to_json(const ExposureCertificate& c) {
  Json o = Json::object();
  o["vertex"] = to_json(c.vertex);
  o["direction"] = to_json(c.direction);
  o["n_star"] = c.n_star;
  o["window"] = c.window;
  Json probes = Json::array();
  for (const auto& p : c.probes) probes.push_back(to_json(p));
  o["probes"] = std::move(probes);
  return o;
}

Json to_json(const std::vector<ExposureCertificate>& certs) {
  Json a = Json::array();
  for (const auto& c : certs) a.push_back(to_json(c));
  return a;
}

Json to_json(const CertificationReport& r) {
  Json o = Json::object();
  o["pass"] = r.pass;
  o["radius"] = r.radius;
  o["checked_count"] = r.checked_count;
  if (r.counterexample) {
    Json c = Json::object();
    c["x"] = to_json(r.counterexample->x);
    c["value"] = to_json(r.counterexample->value);
    c["support_value"] = to_json(r.counterexample->support_value);
    o["counterexample"] = std::move(c);
  } else {
    o["counterexample"] = nullptr;
  }
  return o;
}

Json to_json(const TraceRecord& t) {
  Json o = Json::object();
  o["direction"] = to_json(t.direction);
  o["offset"] = to_json(t.offset);
  o["y0"] = to_json(t.y0);
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json so = Json::object();
    so["n"] = s.probe.n;
    so["x_n"] = to_json(s.probe.x_n);
    so["lambda_n"] = to_json(*s.probe.lambda_n);
    so["value"] = to_json(s.probe.value);
    so["gap"] = to_json(s.gap);
    so["z_sq"] = to_json(*s.probe.z_sq);
    so["y_n"] = to_json(s.y_n);
    so["bound_checked"] = s.bound_checked;
    steps.push_back(std::move(so));
  }
  o["steps"] = std::move(steps);
  return o;
}

TraceRecord parse_trace(const std::string& text) {
  Json j = parse_text(text);
  if (!j.is_object()) fail_at("", "expected a trace object");
  TraceRecord t;
  const Json& dir = member(j, "direction", "");
  const std::size_t d = dir.is_array() ? dir.size() : 0;
  if (d == 0) fail_at("/direction", "expected a nonempty array of integers");
  t.direction = read_lattice(dir, "/direction", d);
  t.offset = read_lattice(member(j, "offset", ""), "/offset", d);
  t.y0 = read_lattice(member(j, "y0", ""), "/y0", d);
  const Json& steps = member(j, "steps", "");
  if (!steps.is_array()) fail_at("/steps", "expected an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string sp = "/steps/" + std::to_string(i);
    const Json& s = steps[i];
    TraceStep st;
    st.probe.direction = t.direction;
    st.probe.offset = t.offset;
    st.probe.n = read_count(member(s, "n", sp), sp + "/n");
    st.probe.x_n = read_lattice(member(s, "x_n", sp), sp + "/x_n", d);
    st.probe.lambda_n = read_rational(member(s, "lambda_n", sp), sp + "/lambda_n");
    st.probe.value = read_integer(member(s, "value", sp), sp + "/value");
    st.gap = read_rational(member(s, "gap", sp), sp + "/gap");
    st.probe.z_sq = read_rational(member(s, "z_sq", sp), sp + "/z_sq");
    st.y_n = read_lattice(member(s, "y_n", sp), sp + "/y_n", d);
    const Json& b = member(s, "bound_checked", sp);
    if (!b.is_boolean()) fail_at(sp + "/bound_checked", "expected a boolean");
    st.bound_checked = b.get<bool>();
    t.steps.push_back(std::move(st));
  }
  return t;
}

namespace {

bool is_flat(const Json& j) {
  if (j.is_array()) {
    return std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive() || (e.is_object() && is_flat(e)); });
  }
  if (j.is_object()) {
    return j.size() <= 2 && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
  }
  return true;
}

// Indented layout, except that arrays of scalars (and small {"num", "den"}
// objects) stay on one line.
void write_json(const Json& j, std::size_t indent, std::string& out) {
  if (is_flat(j)) {
    out += j.dump();
    return;
  }
  const std::string pad(indent + 2, ' ');
  const bool object = j.is_object();
  out += object ? "{\n" : "[\n";
  std::size_t i = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++i) {
    out += pad;
    if (object) out += Json(it.key()).dump() + ": ";
    write_json(*it, indent + 2, out);
    if (i + 1 < j.size()) out += ",";
    out += "\n";
  }
  out += std::string(indent, ' ') + (object ? "}" : "]");
}

}  // namespace

std::string dump(const Json& j) {
  std::string out;
  write_json(j, 0, out);
  out += "\n";
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace dualball
