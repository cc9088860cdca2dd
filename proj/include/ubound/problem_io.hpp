#ifndef UBOUND_PROBLEM_IO_HPP
#define UBOUND_PROBLEM_IO_HPP

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ubound/bound_solver.hpp"
#include "ubound/entanglement.hpp"
#include "ubound/operators.hpp"

namespace ubound::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Problem files are JSON documents:
//
//   {"schema": 1,
//    "measurements": {
//      "A": {"kind": "spin", "s": 1, "phi": "pi/2"},
//      "B": {"kind": "matrix", "entries": [[1, 0], [0, [-1, 0]]]},
//      ...}}
//
// Measurement kinds: "matrix" (Hermitian observable; entries are reals or
// [re, im] pairs), "povm" (outcomes + effects), "spin" (cos(phi) L_z +
// sin(phi) L_x), "noisy" (a base measurement seen through a depolarizing
// channel of strength alpha) and "moments" (m1/m2 given directly).
// Roles are A, B for a single pair or A1, A2, B1, B2 for a bipartite setting.
struct ProblemFile {
  int schema = kSchemaVersion;
  std::map<std::string, MomentPair> roles;

  bool has(const std::string& role) const { return roles.count(role) != 0; }
  // Throws ParseError naming the missing role.
  const MomentPair& role(const std::string& name) const;
  // A and B, dimensions checked.
  std::pair<MomentPair, MomentPair> pair() const;
  // A1, A2, B1, B2, dimensions checked per side.
  LocalSetting setting() const;
};

ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::string& path);

// Parses one measurement descriptor; `where` prefixes diagnostics.
MomentPair parse_measurement(const Json& node, const std::string& where);
CMatrix parse_matrix(const Json& node, const std::string& where);
Json matrix_json(const CMatrix& m);

// Accepts numbers and strings such as "pi/2", "3pi/8", "0.25*pi".
double parse_angle(const Json& node, const std::string& where);

Json bound_json(const MomentPair& a, const MomentPair& b, const BoundResult& r, bool with_trace);

struct RecheckReport {
  std::size_t certificates = 0;
  std::size_t directions = 0;
  double max_deviation = 0.0;  // largest lambda_min(H(r)) - h, relative to max(1, ||H||)
  bool ok = true;
  std::string message;
};

// Recomputes lambda_min(H(r)) for every listed direction of every certificate
// found anywhere in `doc`, requiring 0 <= lambda_min - h <= tol * max(1, ||H||)
// (up to roundoff), and replays the polytope to confirm the stated c_lower.
RecheckReport recheck(const Json& doc, double tol = 1e-8);

}  // namespace ubound::io

#endif  // UBOUND_PROBLEM_IO_HPP
