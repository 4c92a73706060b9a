// SPDX-License-Identifier: Apache-2.0
//
// tsgrqi: refine subspaces from files, reproduce the experiments, generate instances.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "tsgrqi/harness.hpp"
#include "tsgrqi/matrix_io.hpp"

namespace fs = std::filesystem;
using namespace tsgrqi;

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMaxIters = 2;
constexpr int kExitFailure = 3;

int exit_code(Status s)
{
  switch (s) {
    case Status::Converged: return kExitConverged;
    case Status::MaxIters: return kExitMaxIters;
    case Status::Failure: return kExitFailure;
  }
  return kExitFailure;
}

const std::map<std::string, StructureTag> kStructures = {
    {"none", StructureTag::Plain},
    {"e-hermitian", StructureTag::EHermitian},
    {"e-skew-hermitian", StructureTag::ESkewHermitian},
    {"hamiltonian", StructureTag::HamiltonianJ},
    {"skew-hamiltonian", StructureTag::SkewHamiltonianJ},
    {"generalized-hermitian", StructureTag::GeneralizedHermitian},
    {"pencil", StructureTag::Pencil},
};

struct RefineArgs {
  std::string matrix, right, left, b, e, oracle_right, oracle_left, out;
  std::string method;
  std::string structure = "none";
  bool strict = false;
  bool fixed_iters = false;
  int max_iters = 50;
  double tol = 1e-12;
  std::uint64_t seed = 0;
};

Method default_method(StructureTag tag)
{
  switch (tag) {
    case StructureTag::EHermitian:
    case StructureTag::ESkewHermitian:
    case StructureTag::HamiltonianJ:
    case StructureTag::SkewHamiltonianJ: return Method::OneSided;
    case StructureTag::GeneralizedHermitian: return Method::GeneralizedHermitian;
    case StructureTag::Pencil: return Method::Pencil;
    case StructureTag::Plain: return Method::Tsgrqi;
  }
  return Method::Tsgrqi;
}

/// Keeps an orthonormal file basis bit-for-bit so reruns match in-memory traces.
Subspace<double> load_subspace(const std::string& path)
{
  Matrix m = read_matrix_market(path);
  try {
    return Subspace<double>::adopt(m);
  } catch (const Error&) {
    return orthonormalize<double>(m);
  }
}

int run_refine(const RefineArgs& a)
{
  const StructureTag tag = kStructures.at(a.structure);
  Problem pr;
  pr.c = read_matrix_market(a.matrix);
  TSGRQI_REQUIRE(pr.c.rows() == pr.c.cols(), ErrorCode::DimensionMismatch,
                 a.matrix + ": matrix is " + std::to_string(pr.c.rows()) + "x" +
                     std::to_string(pr.c.cols()) + ", expected square");
  const Index n = pr.c.rows();
  if (!a.b.empty()) pr.b = read_matrix_market(a.b);

  StructureKind kind;
  kind.tag = tag;
  switch (tag) {
    case StructureTag::EHermitian:
    case StructureTag::ESkewHermitian:
      TSGRQI_REQUIRE(!a.e.empty(), ErrorCode::InvalidConfig, "--structure " + a.structure + " needs --e");
      kind.e = StructureOperator::dense(read_matrix_market(a.e));
      pr.e = kind.e;
      break;
    case StructureTag::HamiltonianJ:
    case StructureTag::SkewHamiltonianJ:
      pr.e = StructureOperator::symplectic(n);
      break;
    case StructureTag::GeneralizedHermitian:
    case StructureTag::Pencil:
      TSGRQI_REQUIRE(!a.b.empty(), ErrorCode::InvalidConfig, "--structure " + a.structure + " needs --b");
      kind.b = pr.b;
      break;
    case StructureTag::Plain:
      break;
  }
  if (a.strict && tag != StructureTag::Plain) {
    const StructureCheck check = check_structure(pr.c, kind);
    if (!check.holds) {
      std::cerr << "refusing: matrix is not " << a.structure << " (relative defect " << check.defect
                << ", tolerance " << kStructureTolerance << ")\n";
      return kExitFailure;
    }
  }
  if (tag == StructureTag::Pencil) pr.coeffs = choose_pencil_coefficients(pr.c, pr.b, a.seed);

  const Method method = a.method.empty() ? default_method(tag) : parse_method(a.method);
  SubspacePair<double> start;
  start.right = load_subspace(a.right);
  start.left = a.left.empty() ? start.right : load_subspace(a.left);
  if (a.left.empty() && (method == Method::Tsgrqi || method == Method::TwoSidedRqi)) {
    std::cerr << "note: no --left given, starting from Y_L = Y_R\n";
  }

  std::optional<Oracle> oracle;
  if (!a.oracle_right.empty()) {
    oracle.emplace();
    oracle->right = load_subspace(a.oracle_right);
    if (!a.oracle_left.empty()) oracle->left = load_subspace(a.oracle_left);
  }

  StepConfig cfg;
  cfg.max_iters = a.max_iters;
  cfg.angle_tol = a.tol;
  cfg.strict_defective = a.strict;
  cfg.strict_structure = a.strict;
  cfg.stop_on_convergence = !a.fixed_iters;
  cfg.seed = a.seed;

  const IterationTrace trace = iterate(method, pr, start, cfg, oracle);
  const auto rows = trace_rows({TrialOutcome{0, int(start.right.dim()), trace}});
  if (a.out.empty())
    write_trace_csv(std::cout, rows);
  else
    write_trace_csv(a.out, rows);
  std::cerr << to_string(method) << ": " << to_string(trace.status) << " after "
            << trace.records.size() - 1 << " steps";
  if (!trace.reason.empty()) std::cerr << " (" << trace.reason << ")";
  std::cerr << '\n';
  return exit_code(trace.status);
}

struct ExperimentArgs {
  ExperimentConfig cfg;
  bool full = false;
  bool serial = false;
  std::string out, trace;
};

int run_experiment(ExperimentArgs a, bool hamiltonian)
{
  if (a.full) a.cfg.trials = 1000000;
  a.cfg.policy = a.serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel;
  const ExperimentResult r = hamiltonian ? run_hamiltonian(a.cfg) : run_table1(a.cfg);
  std::cout << format_table(r.summary);
  std::cout << "success rate " << r.summary.success_rate << " (" << r.summary.successes << "/"
            << r.summary.trials << "), failures " << r.summary.failures;
  for (const auto& [p, count] : r.summary.p_histogram) std::cout << ", p=" << p << ": " << count;
  std::cout << '\n';
  const std::string json = summary_json(r.summary);
  if (a.out.empty()) {
    std::cout << json << '\n';
  } else {
    std::ofstream f(a.out);
    TSGRQI_REQUIRE(f.good(), ErrorCode::IoError, "cannot write '" + a.out + "'");
    f << json << '\n';
  }
  if (!a.trace.empty()) write_trace_csv(a.trace, trace_rows(r.outcomes));
  return 0;
}

struct GenArgs {
  ExperimentConfig cfg;
  std::string structure = "none";
  long trial = 0;
  std::string out = ".";
};

int run_gen(GenArgs a)
{
  const bool hamiltonian = a.structure == "hamiltonian";
  a.cfg.experiment = hamiltonian ? "hamiltonian" : "table1";
  a.cfg.trials = std::max(a.cfg.trials, a.trial + 1);
  a.cfg.validate();
  const TrialInstance inst =
      hamiltonian ? make_hamiltonian_instance(a.cfg, a.trial) : make_table1_instance(a.cfg, a.trial);
  fs::create_directories(a.out);
  const fs::path dir(a.out);
  write_matrix_market((dir / "C.mtx").string(), inst.problem.c, true);
  write_matrix_market((dir / "YR0.mtx").string(), inst.start.right.basis());
  write_matrix_market((dir / "YL0.mtx").string(), inst.start.left.basis());
  write_matrix_market((dir / "oracle_right.mtx").string(), inst.oracle.right.basis());
  if (inst.oracle.left)
    write_matrix_market((dir / "oracle_left.mtx").string(), inst.oracle.left->basis());
  std::cout << "wrote " << (hamiltonian ? "Hamiltonian" : "table1") << " instance (n=" << a.cfg.n
            << ", p=" << inst.start.right.dim() << ", seed=" << a.cfg.seed << ", trial=" << a.trial
            << ") to " << dir.string() << '\n';
  return 0;
}

void add_experiment_flags(CLI::App* cmd, ExperimentArgs& a)
{
  cmd->add_option("--n", a.cfg.n, "matrix dimension")->capture_default_str();
  cmd->add_option("--p", a.cfg.p, "subspace dimension (table1)")->capture_default_str();
  cmd->add_option("--trials", a.cfg.trials, "number of trials")->capture_default_str();
  cmd->add_option("--seed", a.cfg.seed, "base seed")->capture_default_str();
  cmd->add_option("--start-distance", a.cfg.start_distance, "max initial angle (radians)")
      ->capture_default_str();
  cmd->add_option("--max-iters", a.cfg.max_iters, "iterations per trial")->capture_default_str();
  cmd->add_flag("--full", a.full, "full-scale run (10^6 trials)");
  cmd->add_flag("--serial", a.serial, "run trials on one thread");
  cmd->add_option("--out", a.out, "write the JSON summary here instead of stdout");
  cmd->add_option("--trace", a.trace, "write the per-iterate CSV trace here");
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Two-sided Grassmann-Rayleigh quotient iteration toolkit"};
  app.require_subcommand(1);

  RefineArgs refine;
  auto* cmd_refine = app.add_subcommand("refine", "run an iteration from Matrix Market files");
  cmd_refine->add_option("--matrix", refine.matrix, "C (or A for pencils)")->required();
  cmd_refine->add_option("--right", refine.right, "initial right basis Y_R")->required();
  cmd_refine->add_option("--left", refine.left, "initial left basis Y_L");
  cmd_refine->add_option("--b", refine.b, "B for generalized problems and pencils");
  cmd_refine->add_option("--e", refine.e, "E for E-(skew-)Hermitian problems");
  cmd_refine->add_option("--oracle-right", refine.oracle_right, "reference right eigenspace");
  cmd_refine->add_option("--oracle-left", refine.oracle_left, "reference left eigenspace");
  cmd_refine->add_option("--method", refine.method,
                         "rqi, grqi, two-sided-rqi, tsgrqi, newton, one-sided, generalized, pencil");
  std::vector<std::string> names;
  for (const auto& [name, tag] : kStructures) names.push_back(name);
  cmd_refine->add_option("--structure", refine.structure, "structure of the matrix")
      ->check(CLI::IsMember(names))
      ->capture_default_str();
  cmd_refine->add_flag("--strict", refine.strict, "verify structure and refuse near-defective shifts");
  cmd_refine->add_option("--max-iters", refine.max_iters, "maximum steps")->capture_default_str();
  cmd_refine->add_option("--tol", refine.tol, "angle tolerance (radians)")->capture_default_str();
  cmd_refine->add_flag("--fixed-iters", refine.fixed_iters, "always run --max-iters steps");
  cmd_refine->add_option("--seed", refine.seed, "seed for pencil coefficient sampling");
  cmd_refine->add_option("--out", refine.out, "CSV trace path (stdout if omitted)");

  auto* cmd_exp = app.add_subcommand("experiment", "reproduce an experiment");
  cmd_exp->require_subcommand(1);
  ExperimentArgs table1{table1_defaults()};
  ExperimentArgs ham{hamiltonian_defaults()};
  auto* cmd_t1 = cmd_exp->add_subcommand("table1", "2sGRQI on random diagonalizable matrices");
  auto* cmd_ham = cmd_exp->add_subcommand("hamiltonian", "one-sided iteration on Hamiltonian matrices");
  add_experiment_flags(cmd_t1, table1);
  add_experiment_flags(cmd_ham, ham);

  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "write one experiment instance as Matrix Market files");
  cmd_gen->add_option("--n", gen.cfg.n)->capture_default_str();
  cmd_gen->add_option("--p", gen.cfg.p)->capture_default_str();
  cmd_gen->add_option("--seed", gen.cfg.seed)->capture_default_str();
  cmd_gen->add_option("--trial", gen.trial, "trial index within the seed's stream")->capture_default_str();
  cmd_gen->add_option("--start-distance", gen.cfg.start_distance)->capture_default_str();
  cmd_gen->add_option("--structure", gen.structure, "none (table1) or hamiltonian")
      ->check(CLI::IsMember({"none", "hamiltonian"}))
      ->capture_default_str();
  cmd_gen->add_option("--out", gen.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int rc = app.exit(ex);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*cmd_refine) return run_refine(refine);
    if (*cmd_t1) return run_experiment(table1, false);
    if (*cmd_ham) return run_experiment(ham, true);
    if (*cmd_gen) return run_gen(gen);
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
