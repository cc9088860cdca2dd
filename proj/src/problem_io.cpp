#include "ubound/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <regex>
#include <sstream>

#include "ubound/eigensolver.hpp"
#include "ubound/errors.hpp"

namespace ubound::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

const Json& field(const Json& node, const char* key, const std::string& where) {
  if (!node.is_object()) fail(where, "expected an object");
  auto it = node.find(key);
  if (it == node.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& node, const std::string& where) {
  if (!node.is_number()) fail(where, "expected a number");
  return node.get<double>();
}

Complex entry(const Json& node, const std::string& where) {
  if (node.is_number()) return {node.get<double>(), 0.0};
  if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number()) {
    return {node[0].get<double>(), node[1].get<double>()};
  }
  fail(where, "expected a real number or an [re, im] pair");
}

// Library errors raised while building operators get the field path attached.
template <typename Fn>
auto located(const std::string& where, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(e.code(), where + ": " + e.detail());
  }
}

}  // namespace

CMatrix parse_matrix(const Json& node, const std::string& where) {
  if (!node.is_array() || node.empty()) fail(where, "expected a nonempty list of rows");
  const auto rows = static_cast<Eigen::Index>(node.size());
  Eigen::Index cols = -1;
  CMatrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = node[static_cast<std::size_t>(i)];
    const std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(rw, "expected a row (list of entries)");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::NotSquare, rw + ": row has " + std::to_string(row.size()) + " entries, expected " +
                                            std::to_string(cols));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = entry(row[static_cast<std::size_t>(j)], rw + "[" + std::to_string(j) + "]");
    }
  }
  if (rows != cols) {
    throw Error(ErrorCode::NotSquare,
                where + ": matrix is " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  return m;
}

Json matrix_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      if (z.imag() == 0.0) {
        row.push_back(z.real());
      } else {
        row.push_back(Json::array({z.real(), z.imag()}));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_angle(const Json& node, const std::string& where) {
  if (node.is_number()) return node.get<double>();
  if (!node.is_string()) fail(where, "expected an angle (number or expression like \"3pi/8\")");
  static const std::regex pattern(R"(^\s*([-+]?)\s*((?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
  const std::string text = node.get<std::string>();
  std::smatch match;
  if (std::regex_match(text, match, pattern)) {
    const double sign = match[1].str() == "-" ? -1.0 : 1.0;
    const double coeff = sign * (match[2].matched ? std::stod(match[2].str()) : 1.0);
    const double denom = match[3].matched ? std::stod(match[3].str()) : 1.0;
    if (denom == 0.0) fail(where, "division by zero in angle");
    return coeff * std::numbers::pi / denom;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(where, "cannot read angle '" + text + "'");
}

MomentPair parse_measurement(const Json& node, const std::string& where) {
  const Json& kind_node = field(node, "kind", where);
  if (!kind_node.is_string()) fail(where + ".kind", "expected a string");
  const std::string kind = kind_node.get<std::string>();

  if (kind == "matrix" || kind == "observable") {
    const std::string w = where + ".entries";
    const CMatrix m = parse_matrix(field(node, "entries", where), w);
    return located(w, [&] { return moment_pair_from_observable(hermitian_from_matrix(m)); });
  }
  if (kind == "povm") {
    const Json& outs = field(node, "outcomes", where);
    const Json& effs = field(node, "effects", where);
    if (!outs.is_array()) fail(where + ".outcomes", "expected a list");
    if (!effs.is_array()) fail(where + ".effects", "expected a list");
    std::vector<double> outcomes;
    for (std::size_t i = 0; i < outs.size(); ++i) {
      outcomes.push_back(number(outs[i], where + ".outcomes[" + std::to_string(i) + "]"));
    }
    std::vector<HermitianOperator> effects;
    for (std::size_t i = 0; i < effs.size(); ++i) {
      const std::string w = where + ".effects[" + std::to_string(i) + "]";
      const CMatrix m = parse_matrix(effs[i], w);
      effects.push_back(located(w, [&] { return hermitian_from_matrix(m); }));
    }
    return located(where, [&] { return moment_pair_from_povm(Povm(outcomes, effects)); });
  }
  if (kind == "spin") {
    const double s = number(field(node, "s", where), where + ".s");
    const double phi = node.contains("phi") ? parse_angle(node["phi"], where + ".phi") : 0.0;
    return located(where, [&] { return moment_pair_from_observable(spin_component(s, phi)); });
  }
  if (kind == "noisy") {
    const MomentPair base = parse_measurement(field(node, "base", where), where + ".base");
    const double alpha = number(field(node, "alpha", where), where + ".alpha");
    return located(where + ".alpha", [&] { return depolarize(base, alpha); });
  }
  if (kind == "moments") {
    const CMatrix m1 = parse_matrix(field(node, "m1", where), where + ".m1");
    const CMatrix m2 = parse_matrix(field(node, "m2", where), where + ".m2");
    auto h1 = located(where + ".m1", [&] { return hermitian_from_matrix(m1); });
    auto h2 = located(where + ".m2", [&] { return hermitian_from_matrix(m2); });
    if (h1.dim() != h2.dim()) {
      throw Error(ErrorCode::DimensionMismatch, where + ": m1 and m2 differ in dimension");
    }
    return MomentPair{h1, h2};
  }
  fail(where + ".kind", "unknown measurement kind '" + kind + "'");
}

const MomentPair& ProblemFile::role(const std::string& name) const {
  auto it = roles.find(name);
  if (it == roles.end()) fail("measurements", "missing role '" + name + "'");
  return it->second;
}

std::pair<MomentPair, MomentPair> ProblemFile::pair() const {
  const MomentPair& a = role("A");
  const MomentPair& b = role("B");
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "measurements: A has dimension " + std::to_string(a.dim()) +
                                                  ", B has dimension " + std::to_string(b.dim()));
  }
  return {a, b};
}

LocalSetting ProblemFile::setting() const {
  LocalSetting s{role("A1"), role("A2"), role("B1"), role("B2")};
  if (s.a1.dim() != s.a2.dim()) throw Error(ErrorCode::DimensionMismatch, "measurements: A1 and A2 differ in dimension");
  if (s.b1.dim() != s.b2.dim()) throw Error(ErrorCode::DimensionMismatch, "measurements: B1 and B2 differ in dimension");
  return s;
}

ProblemFile parse_problem(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    const auto last_nl = text.substr(0, upto).rfind('\n');
    const std::size_t column = last_nl == std::string_view::npos ? upto + 1 : upto - last_nl;
    std::ostringstream msg;
    msg << "line " << line << ", column " << column << ": malformed JSON";
    throw Error(ErrorCode::ParseError, msg.str());
  }
  ProblemFile out;
  const Json& schema = field(doc, "schema", "document");
  if (!schema.is_number_integer() || schema.get<int>() != kSchemaVersion) {
    fail("schema", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  const Json& meas = field(doc, "measurements", "document");
  if (!meas.is_object() || meas.empty()) fail("measurements", "expected a nonempty object of roles");
  static const std::vector<std::string> known{"A", "B", "A1", "A2", "B1", "B2"};
  for (const auto& [name, node] : meas.items()) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      fail("measurements." + name, "unknown role (expected A, B, A1, A2, B1 or B2)");
    }
    out.roles.emplace(name, parse_measurement(node, "measurements." + name));
  }
  return out;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

Json bound_json(const MomentPair& a, const MomentPair& b, const BoundResult& r, bool with_trace) {
  Json out;
  out["schema"] = kSchemaVersion;
  out["c_lower"] = r.c_lower;
  out["c_upper"] = r.c_upper;
  out["gap"] = r.gap;
  out["steps"] = r.steps;
  out["status"] = std::string(to_string(r.status));
  Json dirs = Json::array();
  for (const Direction& d : r.directions) dirs.push_back(Json::array({d.r.x(), d.r.y(), d.r.z(), d.h}));
  out["certificate"] = {
      {"moments",
       {{"A", {{"m1", matrix_json(a.m1.matrix())}, {"m2", matrix_json(a.m2.matrix())}}},
        {"B", {{"m1", matrix_json(b.m1.matrix())}, {"m2", matrix_json(b.m2.matrix())}}}}},
      {"directions", std::move(dirs)},
      {"c_lower", r.c_lower},
  };
  if (with_trace) {
    Json trace = Json::array();
    for (const StepRecord& s : r.trace) {
      trace.push_back({{"step", s.step},
                       {"vertices", s.vertices},
                       {"c_lower", s.c_lower},
                       {"c_upper", s.c_upper},
                       {"r", Json::array({s.r.x(), s.r.y(), s.r.z()})}});
    }
    out["trace"] = std::move(trace);
  }
  return out;
}

namespace {

void recheck_one(const Json& cert, double tol, RecheckReport& report) {
  const std::string where = "certificate #" + std::to_string(report.certificates + 1);
  const MomentPair a = parse_measurement(
      Json{{"kind", "moments"}, {"m1", cert.at("moments").at("A").at("m1")}, {"m2", cert.at("moments").at("A").at("m2")}},
      where + ".A");
  const MomentPair b = parse_measurement(
      Json{{"kind", "moments"}, {"m1", cert.at("moments").at("B").at("m1")}, {"m2", cert.at("moments").at("B").at("m2")}},
      where + ".B");
  std::vector<Direction> dirs;
  for (const Json& d : cert.at("directions")) {
    if (!d.is_array() || d.size() != 4) fail(where, "direction entries must be [r1, r2, r3, h]");
    dirs.push_back(Direction{Vec3(d[0].get<double>(), d[1].get<double>(), d[2].get<double>()), d[3].get<double>()});
  }
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const HermitianOperator h = build_H(a, b, dirs[k].r);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    const double norm = std::max(std::abs(lmin), std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
    const double scale = std::max(1.0, norm);
    const double deviation = (lmin - dirs[k].h) / scale;
    report.max_deviation = std::max(report.max_deviation, std::abs(deviation));
    ++report.directions;
    // Roundoff allowance for the fresh solve itself.
    const double roundoff = 64.0 * static_cast<double>(a.dim()) * 2.220446049250313e-16;
    if (report.ok && (deviation < -roundoff || deviation > tol)) {
      std::ostringstream msg;
      msg << std::setprecision(17) << where << ": direction " << k << " claims h = " << dirs[k].h
          << " but lambda_min = " << lmin;
      report.ok = false;
      report.message = msg.str();
    }
  }
  if (cert.contains("c_lower") && report.ok) {
    const double stated = cert["c_lower"].get<double>();
    const double replayed = replay_lower_bound(dirs);
    if (std::abs(replayed - stated) > tol * std::max(1.0, std::abs(stated))) {
      std::ostringstream msg;
      msg << std::setprecision(17) << where << ": directions prove c_lower = " << replayed << ", file states "
          << stated;
      report.ok = false;
      report.message = msg.str();
    }
  }
  ++report.certificates;
}

void walk(const Json& node, double tol, RecheckReport& report) {
  if (node.is_object()) {
    for (const auto& [key, child] : node.items()) {
      if (key == "certificate") {
        recheck_one(child, tol, report);
      } else {
        walk(child, tol, report);
      }
    }
  } else if (node.is_array()) {
    for (const auto& child : node) walk(child, tol, report);
  }
}

}  // namespace

RecheckReport recheck(const Json& doc, double tol) {
  RecheckReport report;
  try {
    walk(doc, tol, report);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed certificate: ") + e.what());
  }
  if (report.certificates == 0 && report.ok) {
    report.ok = false;
    report.message = "no certificate found";
  }
  return report;
}

}  // namespace ubound::io
