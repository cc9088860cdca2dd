#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ubound/bound_solver.hpp"
#include "ubound/entanglement.hpp"
#include "ubound/errors.hpp"
#include "ubound/problem_io.hpp"
#include "ubound/random_ops.hpp"

namespace {

using namespace ubound;
using io::Json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnconverged = 2;

// Writes to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, path + ": cannot write file");
  out << text;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

SolverOptions solver_options(double eps, int max_steps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "--eps must be positive");
  if (max_steps < 0) throw Error(ErrorCode::InvalidArgument, "--max-steps must be nonnegative");
  SolverOptions opt;
  opt.eps_target = eps;
  opt.max_steps = max_steps;
  return opt;
}

std::vector<double> angles(const std::vector<std::string>& texts) {
  std::vector<double> out;
  for (const auto& t : texts) out.push_back(io::parse_angle(Json(t), "--theta " + t));
  return out;
}

// ---------------------------------------------------------------------------

struct BoundArgs {
  std::string input, out, mesh;
  double eps = 1e-6;
  int max_steps = 5000;
  double noise = 0.0;
  bool trace = false;
};

int run_bound(const BoundArgs& args) {
  const io::ProblemFile problem = io::load_problem(args.input);
  auto [a, b] = problem.pair();
  if (args.noise != 0.0) {
    a = depolarize(a, args.noise);
    b = depolarize(b, args.noise);
  }
  SolverOptions opt = solver_options(args.eps, args.max_steps);
  opt.keep_polytope = !args.mesh.empty();
  const BoundResult r = optimal_bound(a, b, opt);
  emit(args.out, io::bound_json(a, b, r, args.trace).dump(2) + "\n");
  if (!args.mesh.empty()) {
    std::ofstream mesh(args.mesh);
    if (!mesh) throw Error(ErrorCode::InvalidArgument, args.mesh + ": cannot write file");
    r.polytope->write_off(mesh);
  }
  if (!args.out.empty() && args.out != "-") {
    std::cout << "c_lower " << num(r.c_lower) << "  c_upper " << num(r.c_upper) << "  steps " << r.steps << "  "
              << to_string(r.status) << "\n";
  }
  return r.status == SolveStatus::MaxStepsReached ? kExitUnconverged : kExitOk;
}

// ---------------------------------------------------------------------------

struct RegionArgs {
  std::string input, out;
  int theta_count = 64;
  std::vector<std::string> thetas;
  double noise = 0.0;
  double eps = 1e-6;
  int max_steps = 5000;
};

void region_rows(std::ostream& csv, const std::string& name, const UncertaintyRegion& region) {
  for (const auto& s : region.samples) csv << name << ",sample," << num(s.theta) << "," << num(s.c) << "," << num(s.gap) << "\n";
  for (const auto& [u, v] : region.hull) csv << name << ",hull," << num(u) << "," << num(v) << ",\n";
}

int run_region(const RegionArgs& args) {
  const io::ProblemFile problem = io::load_problem(args.input);
  const std::vector<double> thetas = args.thetas.empty() ? uniform_thetas(args.theta_count) : angles(args.thetas);
  const SolverOptions opt = solver_options(args.eps, args.max_steps);

  std::ostringstream csv;
  csv << "# ubound region\n"
      << "# columns: region,kind,x,y,gap\n"
      << "# kind=sample: x = theta, y = c(theta) with cos(theta) var1 + sin(theta) var2 >= c(theta), gap = c_upper - c_lower\n"
      << "# kind=hull: (x, y) = (var1, var2) along the lower boundary, ordered by increasing var1\n"
      << "# noise alpha = " << num(args.noise) << "\n"
      << "region,kind,x,y,gap\n";
  if (problem.has("A") || problem.has("B")) {
    auto [a, b] = problem.pair();
    if (args.noise != 0.0) {
      a = depolarize(a, args.noise);
      b = depolarize(b, args.noise);
    }
    region_rows(csv, "pair", region_trace(a, b, thetas, opt));
  } else {
    const LocalSetting s = depolarize(problem.setting(), args.noise, args.noise);
    const auto [m1, m2] = sum_pair(s);
    region_rows(csv, "global", region_trace(m1, m2, thetas, opt));
    const UncertaintyRegion alice = region_trace(s.a1, s.a2, thetas, opt);
    const UncertaintyRegion bob = region_trace(s.b1, s.b2, thetas, opt);
    std::vector<RegionSample> sep;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      sep.push_back(RegionSample{thetas[i], alice.samples[i].c + bob.samples[i].c,
                                 alice.samples[i].gap + bob.samples[i].gap});
    }
    region_rows(csv, "separable", region_from_samples(std::move(sep)));
  }
  emit(args.out, csv.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct WitnessArgs {
  std::string input, out;
  std::vector<double> noise{0.0};
  std::vector<double> noise_bob;
  std::vector<double> weights{1.0, 1.0};
  double eps = 1e-6;
  int max_steps = 5000;
};

Json certificate_of(const MomentPair& a, const MomentPair& b, double alpha, double beta, const BoundResult& r) {
  return io::bound_json(scale(a, std::sqrt(alpha)), scale(b, std::sqrt(beta)), r, false);
}

int run_witness(const WitnessArgs& args) {
  if (args.weights.size() != 2) throw Error(ErrorCode::InvalidArgument, "--weights takes two values");
  if (!args.noise_bob.empty() && args.noise_bob.size() != args.noise.size()) {
    throw Error(ErrorCode::InvalidArgument, "--noise-bob needs as many values as --noise");
  }
  const LocalSetting base = io::load_problem(args.input).setting();
  const SolverOptions opt = solver_options(args.eps, args.max_steps);
  const double wa = args.weights[0], wb = args.weights[1];

  Json points = Json::array();
  bool unconverged = false;
  for (std::size_t i = 0; i < args.noise.size(); ++i) {
    const double na = args.noise[i];
    const double nb = args.noise_bob.empty() ? na : args.noise_bob[i];
    const WitnessResult w = witness(base, na, nb, {wa, wb}, opt);
    const LocalSetting s = depolarize(base, na, nb);
    const auto [m1, m2] = sum_pair(s);
    for (const BoundResult* r : {&w.separable.alice, &w.separable.bob, &w.global}) {
      unconverged = unconverged || r->status == SolveStatus::MaxStepsReached;
    }
    points.push_back({{"alpha_noise", Json::array({na, nb})},
                      {"c_sep", w.report.c_sep},
                      {"c_global", w.report.c_global},
                      {"gap_a", w.report.gap_a},
                      {"gap_b", w.report.gap_b},
                      {"gap_m", w.report.gap_m},
                      {"window_open", w.report.window_open()},
                      {"alice", certificate_of(s.a1, s.a2, wa, wb, w.separable.alice)},
                      {"bob", certificate_of(s.b1, s.b2, wa, wb, w.separable.bob)},
                      {"global", certificate_of(m1, m2, wa, wb, w.global)}});
  }
  const Json doc{{"schema", io::kSchemaVersion}, {"weights", Json::array({wa, wb})}, {"points", std::move(points)}};
  emit(args.out, doc.dump(2) + "\n");
  return unconverged ? kExitUnconverged : kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string out;
  int dim = 10;
  int samples = 1;
  std::uint64_t seed = 1;
  double eps = 1e-6;
  int max_steps = 5000;
  std::string spectrum = "gaussian";
  bool worst_case = false;
  std::vector<double> spins{1.0, 5.0, 10.0};
};

// Spin component with its spectrum mapped affinely onto [0, 1].
MomentPair unit_interval_spin(double s, double phi) {
  const HermitianOperator l = spin_component(s, phi);
  const auto d = l.dim();
  const CMatrix shifted = (l.matrix() + s * CMatrix::Identity(d, d)) / (2.0 * s);
  return moment_pair_from_observable(hermitian_from_matrix(shifted));
}

int run_bench(const BenchArgs& args) {
  const SolverOptions opt = solver_options(args.eps, args.max_steps);
  std::ostringstream csv;
  csv << "# ubound bench\n"
      << "# columns: sample,dim,spin,step,vertices,c_lower,c_upper,gap,decimal_precision\n"
      << "# decimal_precision = -log10(gap); spin is 0 for random instances\n";
  if (args.worst_case) {
    csv << "# worst case: (L_z, L_x) rescaled to unit-interval spectra\n";
  } else {
    csv << "# random: Haar eigenvectors, " << args.spectrum << " spectrum, seed " << args.seed << "\n";
  }
  csv << "sample,dim,spin,step,vertices,c_lower,c_upper,gap,decimal_precision\n";

  bool unconverged = false;
  auto rows = [&](int sample, Eigen::Index dim, double spin, const BoundResult& r) {
    unconverged = unconverged || r.status == SolveStatus::MaxStepsReached;
    for (const StepRecord& t : r.trace) {
      const double gap = t.gap();
      csv << sample << "," << dim << "," << num(spin) << "," << t.step << "," << t.vertices << "," << num(t.c_lower)
          << "," << num(t.c_upper) << "," << num(gap) << "," << num(gap > 0 ? -std::log10(gap) : INFINITY) << "\n";
    }
  };

  if (args.worst_case) {
    int sample = 0;
    for (double s : args.spins) {
      const MomentPair a = unit_interval_spin(s, 0.0);
      const MomentPair b = unit_interval_spin(s, std::numbers::pi / 2);
      rows(sample++, a.dim(), s, optimal_bound(a, b, opt));
    }
  } else {
    if (args.dim < 2) throw Error(ErrorCode::InvalidArgument, "--dim must be at least 2");
    if (args.samples < 1) throw Error(ErrorCode::InvalidArgument, "--samples must be positive");
    SpectrumKind kind;
    if (args.spectrum == "gaussian") {
      kind = SpectrumKind::Gaussian;
    } else if (args.spectrum == "uniform") {
      kind = SpectrumKind::Uniform;
    } else {
      throw Error(ErrorCode::InvalidArgument, "--spectrum must be gaussian or uniform");
    }
    std::mt19937_64 rng(args.seed);
    for (int k = 0; k < args.samples; ++k) {
      const MomentPair a = moment_pair_from_observable(random_observable(args.dim, kind, rng));
      const MomentPair b = moment_pair_from_observable(random_observable(args.dim, kind, rng));
      rows(k, args.dim, 0.0, optimal_bound(a, b, opt));
    }
  }
  emit(args.out, csv.str());
  return unconverged ? kExitUnconverged : kExitOk;
}

// ---------------------------------------------------------------------------

int run_recheck(const std::string& input, double tol) {
  std::ifstream in(input);
  if (!in) throw Error(ErrorCode::ParseError, input + ": cannot open file");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, input + ": malformed JSON");
  }
  const io::RecheckReport report = io::recheck(doc, tol);
  std::cout << (report.ok ? "ok" : "FAILED") << ": " << report.certificates << " certificate(s), "
            << report.directions << " direction(s), max deviation " << num(report.max_deviation) << "\n";
  if (!report.ok) std::cout << report.message << "\n";
  return report.ok ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified state-independent variance-sum uncertainty bounds"};
  app.require_subcommand(1);

  BoundArgs bound;
  auto* cmd_bound = app.add_subcommand("bound", "Sandwich the optimal bound for the pair (A, B)");
  cmd_bound->add_option("input", bound.input, "Problem file with roles A and B")->required();
  cmd_bound->add_option("--eps", bound.eps, "Target gap c_upper - c_lower")->capture_default_str();
  cmd_bound->add_option("--max-steps", bound.max_steps, "Cutting-plane step limit")->capture_default_str();
  cmd_bound->add_option("--noise", bound.noise, "Depolarizing noise on both measurements")->capture_default_str();
  cmd_bound->add_option("--out", bound.out, "Result file (stdout if omitted)");
  cmd_bound->add_flag("--trace", bound.trace, "Include the per-step trace");
  cmd_bound->add_option("--export-mesh", bound.mesh, "Write the final outer polytope as an OFF mesh");

  RegionArgs region;
  auto* cmd_region = app.add_subcommand("region", "Trace the uncertainty region by weighted bounds");
  cmd_region->add_option("input", region.input, "Problem file (roles A, B or A1, A2, B1, B2)")->required();
  cmd_region->add_option("--theta-count", region.theta_count, "Uniform angles in (0, pi/2)")->capture_default_str();
  cmd_region->add_option("--theta", region.thetas, "Explicit angles, e.g. pi/4 or 0.3")->delimiter(',');
  cmd_region->add_option("--noise", region.noise, "Depolarizing noise on every measurement")->capture_default_str();
  cmd_region->add_option("--eps", region.eps, "Target gap per angle")->capture_default_str();
  cmd_region->add_option("--max-steps", region.max_steps, "Step limit per angle")->capture_default_str();
  cmd_region->add_option("--out", region.out, "CSV output (stdout if omitted)");

  WitnessArgs wit;
  auto* cmd_witness = app.add_subcommand("witness", "Separable versus global bounds for sum observables");
  cmd_witness->add_option("input", wit.input, "Problem file with roles A1, A2, B1, B2")->required();
  cmd_witness->add_option("--noise", wit.noise, "Noise levels (Alice, and Bob unless --noise-bob)")
      ->delimiter(',')
      ->capture_default_str();
  cmd_witness->add_option("--noise-bob", wit.noise_bob, "Separate noise levels for Bob")->delimiter(',');
  cmd_witness->add_option("--weights", wit.weights, "Weights alpha,beta of var M1 and var M2")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  cmd_witness->add_option("--eps", wit.eps, "Target gap per solve")->capture_default_str();
  cmd_witness->add_option("--max-steps", wit.max_steps, "Step limit per solve")->capture_default_str();
  cmd_witness->add_option("--out", wit.out, "Result file (stdout if omitted)");

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "Convergence traces on random or worst-case instances");
  cmd_bench->add_option("--dim", bench.dim, "Hilbert space dimension")->capture_default_str();
  cmd_bench->add_option("--samples", bench.samples, "Number of random pairs")->capture_default_str();
  cmd_bench->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  cmd_bench->add_option("--eps", bench.eps, "Target gap")->capture_default_str();
  cmd_bench->add_option("--max-steps", bench.max_steps, "Step limit")->capture_default_str();
  cmd_bench->add_option("--spectrum", bench.spectrum, "gaussian or uniform")->capture_default_str();
  cmd_bench->add_flag("--worst-case", bench.worst_case, "Use unit-interval (L_z, L_x) instead of random pairs");
  cmd_bench->add_option("--spins", bench.spins, "Spins for --worst-case")->delimiter(',')->capture_default_str();
  cmd_bench->add_option("--out", bench.out, "CSV output (stdout if omitted)");

  std::string recheck_input;
  double recheck_tol = 1e-8;
  auto* cmd_recheck = app.add_subcommand("recheck", "Revalidate every certificate in a result file");
  cmd_recheck->add_option("input", recheck_input, "Result file")->required();
  cmd_recheck->add_option("--tol", recheck_tol, "Allowed lambda_min - h")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_bound) return run_bound(bound);
    if (*cmd_region) return run_region(region);
    if (*cmd_witness) return run_witness(wit);
    if (*cmd_bench) return run_bench(bench);
    if (*cmd_recheck) return run_recheck(recheck_input, recheck_tol);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
