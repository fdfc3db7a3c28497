#pragma once

// JSON file formats.  All numerics are exact: integers are JSON integers (or
// decimal strings when they exceed 64 bits); non-integral rationals are
// {"num": p, "den": q}.

#include "dualball/geometry.hpp"
#include "dualball/reconstruct.hpp"
#include "dualball/seminorm.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualball {

/// Malformed input text.  what() carries a line/column for syntax errors and
/// a JSON pointer (e.g. "/terms/1/weights/0") for schema errors.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

Json to_json(const Integer& z);
Json to_json(const Rational& q);
Json to_json(const LatticeVector& v);
Json to_json(const RatVector& v);

// Seminorm spec files:
//   {"kind": "vertices", "dim": 2, "points": [[1, 1], [1, -1]]}
//   {"kind": "weighted_l1" | "weighted_linf", "dim": 2, "weights": [2, 3]}
//   {"kind": "sum" | "max", "dim": 2, "terms": [ ... ]}
//   {"kind": "pullback", "dim": 2, "matrix": [[1, 0], [0, 0]], "inner": { ... }}
//   {"kind": "table", "dim": 2, "entries": [{"point": [1, 0], "value": 1}, ...]}
// "dim" is required at the root and optional (but checked) below it.
SeminormSpec parse_seminorm(const std::string& text);
SeminormSpec load_seminorm(const std::filesystem::path& path);
Json to_json(const SeminormSpec& spec);

// Polytope files:
//   {"dim": d, "affine_dim": k, "vertices": [[...], ...],
//    "facets": [{"normal": [...], "offset": r}, ...]}
// plus "span"/"equations" when k < d.  Reading rebuilds the canonical hull
// from the vertex list; listed facets must be valid for every vertex.
Polytope parse_polytope(const std::string& text);
Polytope load_polytope(const std::filesystem::path& path);
Json to_json(const Polytope& p);

/// {"dim": d, "points": [...]} (a polytope file is accepted too).
std::vector<RatVector> parse_point_set(const std::string& text);

/// Comma-separated integers or p/q rationals, e.g. "1,-1/2,3".
RatVector parse_point(const std::string& csv);

Json to_json(const RayProbe& p);
Json to_json(const ExposureCertificate& c);
Json to_json(const std::vector<ExposureCertificate>& certs);
Json to_json(const CertificationReport& r);

struct TraceRecord {
  LatticeVector direction;
  LatticeVector offset;
  LatticeVector y0;
  std::vector<TraceStep> steps;
};
Json to_json(const TraceRecord& t);
TraceRecord parse_trace(const std::string& text);

/// Serialized text as written to disk: two-space indent, trailing newline.
std::string dump(const Json& j);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dualball
