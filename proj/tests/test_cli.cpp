#include "dualball/cli.hpp"
#include "dualball/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

using namespace dualball;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    static int counter = 0;
    dir = fs::temp_directory_path() / ("dualball_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& text) const {
    write_file(dir / name, text);
    return (dir / name).string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  args.insert(args.begin(), "dualball");
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

const char* kL1 = R"({"kind": "weighted_l1", "dim": 2, "weights": [1, 1]})";
const char* kL1_23 = R"({"kind": "weighted_l1", "dim": 2, "weights": [2, 3]})";
const char* kLinf = R"({"kind": "weighted_linf", "dim": 2, "weights": [1, 1]})";
const char* kSquare = R"({"dim": 2, "vertices": [[1, 1], [1, -1], [-1, 1], [-1, -1]]})";
const char* kCross = R"({"dim": 2, "vertices": [[1, 0], [-1, 0], [0, 1], [0, -1]]})";

}  // namespace

TEST_CASE("eval") {
  Scratch s;
  std::string spec = s.file("l1.json", kL1_23);
  Result a = run({"eval", "--spec", spec, "--point", "1,-1"});
  CHECK(a.code == 0);
  CHECK(a.out == "5\n");
  CHECK(run({"eval", "--spec", spec, "--point", "0,0"}).out == "0\n");
  Result bad = run({"eval", "--spec", spec, "--point", "1,2,3"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("dimension") != std::string::npos);
  CHECK(run({"eval", "--spec", s.path("missing.json"), "--point", "1,1"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("reconstruct writes a polytope and certificates") {
  Scratch s;
  Result r = run({"reconstruct", "--spec", s.file("l1.json", kL1), "--out", s.path("ball.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("vertices: 4") != std::string::npos);
  CHECK(r.out.find("all vertices integer: yes") != std::string::npos);
  Polytope p = load_polytope(s.path("ball.json"));
  CHECK(equal(p, parse_polytope(kSquare)));
  CHECK(fs::exists(s.path("ball.certs.json")));
  Json certs = Json::parse(read_file(s.path("ball.certs.json")));
  CHECK(certs.size() == 4);

  Result z = run({"reconstruct", "--spec", s.file("zero.json", R"({"kind": "vertices", "dim": 2, "points": [[0, 0]]})"),
                  "--out", s.path("zero_ball.json")});
  CHECK(z.code == 0);
  CHECK(z.out.find("vertices: 1") != std::string::npos);

  Result d = run({"reconstruct", "--spec",
                  s.file("pb.json", R"({"kind": "pullback", "dim": 2, "matrix": [[1, 0], [0, 0]],
                      "inner": {"kind": "weighted_l1", "weights": [1, 1]}})"),
                  "--out", s.path("seg.json")});
  CHECK(d.code == 0);
  CHECK(d.out.find("affine dimension 1") != std::string::npos);
  CHECK(equal(load_polytope(s.path("seg.json")), parse_polytope(R"({"dim": 2, "vertices": [[1, 0], [-1, 0]]})")));

  Result table = run({"reconstruct", "--spec",
                      s.file("t.json", R"({"kind": "table", "dim": 2, "entries": [{"point": [1, 0], "value": 1}]})"),
                      "--out", s.path("t_out.json")});
  CHECK(table.code == 2);
}

TEST_CASE("certify") {
  Scratch s;
  std::string spec = s.file("l1.json", kL1);
  Result ok = run({"certify", "--spec", spec, "--polytope", s.file("sq.json", kSquare), "--radius", "5"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("pass") == 0);
  CHECK(ok.out.find("points checked: 121") != std::string::npos);

  Result bad = run({"certify", "--spec", spec, "--polytope", s.file("cr.json", kCross), "--radius", "5",
                    "--out", s.path("report.json")});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("x = (1,1), N(x) = 2, max over polytope = 1") != std::string::npos);
  Json rep = Json::parse(read_file(s.path("report.json")));
  CHECK(rep["pass"] == false);

  Result zero = run({"certify", "--spec", spec, "--polytope", s.path("sq.json"), "--radius", "0"});
  CHECK(zero.code == 0);
  CHECK(zero.out.find("points checked: 1") != std::string::npos);
  CHECK(zero.err.find("warning") != std::string::npos);
}

TEST_CASE("plot") {
  Scratch s;
  Result csv = run({"plot", "--polytope", s.file("sq.json", kSquare), "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(count_lines(csv.out, "") == 6);  // header + 4 vertices + closure
  CHECK(csv.out.rfind("x,y\n", 0) == 0);

  std::string oct = s.file("oct.json", R"({"dim": 3, "vertices": [[1,0,0],[-1,0,0],[0,1,0],[0,-1,0],[0,0,1],[0,0,-1]]})");
  Result obj = run({"plot", "--polytope", oct, "--format", "obj", "--out", s.path("oct.obj")});
  CHECK(obj.code == 0);
  std::string mesh = read_file(s.path("oct.obj"));
  CHECK(count_lines(mesh, "v ") == 6);
  CHECK(count_lines(mesh, "f ") == 8);

  CHECK(run({"plot", "--polytope", oct, "--format", "csv"}).code == 2);
  CHECK(run({"plot", "--polytope", oct, "--format", "svg"}).code == 2);
}

TEST_CASE("trace, and plotting a trace") {
  Scratch s;
  std::string spec = s.file("linf.json", kLinf);
  std::vector<std::string> base{"trace", "--spec", spec, "--direction", "1,3", "--offset", "2,0", "--y0", "0,1", "--n-max", "4"};
  Result csv = run(base);
  CHECK(csv.code == 0);
  CHECK(csv.out == "n,lambda,value,gap\n0,0,2,2\n1,3,3,0\n2,6,6,0\n3,9,9,0\n4,12,12,0\n");

  auto with_out = base;
  with_out.insert(with_out.end(), {"--out", s.path("trace.json")});
  CHECK(run(with_out).code == 0);
  Result plot = run({"plot", "--trace", s.path("trace.json")});
  CHECK(plot.code == 0);
  CHECK(plot.out == csv.out);

  auto bad_y0 = base;
  bad_y0[8] = "1,1";
  CHECK(run(bad_y0).code == 2);
}

TEST_CASE("polar and hull") {
  Scratch s;
  Result p = run({"polar", "--polytope", s.file("sq.json", kSquare), "--out", s.path("polar.json")});
  CHECK(p.code == 0);
  CHECK(equal(load_polytope(s.path("polar.json")), parse_polytope(kCross)));

  Result seg = run({"polar", "--polytope", s.file("seg.json", R"({"dim": 2, "vertices": [[1, 0], [-1, 0]]})")});
  CHECK(seg.code == 1);
  CHECK(seg.err.find("polar undefined") != std::string::npos);

  Result h = run({"hull", "--points",
                  s.file("pts.json", R"({"dim": 2, "points": [[1, 1], [1, -1], [-1, 1], [-1, -1], [0, 0]]})")});
  CHECK(h.code == 0);
  CHECK(parse_polytope(h.out).vertices().size() == 4);

  CHECK(run({"hull", "--points", s.file("broken.json", "{\"dim\": 2, \"points\": [[1, 1]")}).code == 2);
}

TEST_CASE("reconstruct output is byte-identical across runs and thread counts") {
  Scratch s;
  std::string spec = s.file("v.json", R"({"kind": "vertices", "dim": 3, "points": [[3, -1, 2], [0, 4, -5], [2, 2, 1], [-7, 1, 0]]})");
  std::vector<std::string> texts;
  for (const char* threads : {"1", "4", "1", "4"}) {
    std::string out = s.path(std::string("ball_") + threads + "_" + std::to_string(texts.size()) + ".json");
    REQUIRE(run({"reconstruct", "--spec", spec, "--out", out, "--certs", out + ".certs", "--seed", "17", "--threads", threads}).code == 0);
    texts.push_back(read_file(out) + read_file(out + ".certs"));
  }
  for (const auto& t : texts) CHECK(t == texts.front());
}

TEST_CASE("files written by one subcommand are read back by the others") {
  Scratch s;
  std::string spec = s.file("linf.json", R"({"kind": "weighted_linf", "dim": 2, "weights": [2, 3]})");
  REQUIRE(run({"reconstruct", "--spec", spec, "--out", s.path("b.json")}).code == 0);
  CHECK(run({"certify", "--spec", spec, "--polytope", s.path("b.json")}).code == 0);
  REQUIRE(run({"polar", "--polytope", s.path("b.json"), "--out", s.path("p.json")}).code == 0);
  REQUIRE(run({"polar", "--polytope", s.path("p.json"), "--out", s.path("pp.json")}).code == 0);
  CHECK(read_file(s.path("pp.json")) == read_file(s.path("b.json")));
  REQUIRE(run({"hull", "--points", s.path("b.json"), "--out", s.path("h.json")}).code == 0);
  CHECK(read_file(s.path("h.json")) == read_file(s.path("b.json")));
}
