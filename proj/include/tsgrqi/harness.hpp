// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo experiments, trace tables and summary statistics.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsgrqi/driver.hpp"

namespace tsgrqi {

enum class ExecutionPolicy { Serial, Parallel };

struct ExperimentConfig {
  std::string experiment = "table1";
  Index n = 20;
  Index p = 5;  ///< ignored by the Hamiltonian study (p comes from the target)
  long trials = 1000;
  std::uint64_t seed = 1;
  double start_distance = 0.1;
  int max_iters = 5;
  double success_threshold = 1e-12;
  ExecutionPolicy policy = ExecutionPolicy::Parallel;

  void validate() const;
};

/// Table 1 defaults: n = 20, p = 5, 5 iterations, 1000 trials.
ExperimentConfig table1_defaults();
/// Hamiltonian study defaults: n = 20, 10 iterations, 10^4 trials.
ExperimentConfig hamiltonian_defaults();

/// One generated trial: matrix, oracle pair and starting pair.
struct TrialInstance {
  Problem problem;
  Oracle oracle;
  SubspacePair<double> start;
  Method method = Method::Tsgrqi;
};

/// Deterministic in (cfg.seed, trial): draws from CounterRng(cfg.seed).stream(trial).
TrialInstance make_table1_instance(const ExperimentConfig& cfg, long trial);
TrialInstance make_hamiltonian_instance(const ExperimentConfig& cfg, long trial);

/// Step configuration used by the experiments: exactly cfg.max_iters steps.
StepConfig experiment_step_config(const ExperimentConfig& cfg);

struct TrialOutcome {
  long trial = 0;
  int p = 0;
  IterationTrace trace;
};

/// One row of a persisted trace. Absent values are NaN.
struct TraceRow {
  long trial = 0;
  int iterate = 0;
  double right_err = 0.0;
  double left_err = 0.0;
  double e = 0.0;
  double residual_angle = 0.0;
  bool perturbed = false;
  double shift_cond = 1.0;
  std::string status;  ///< "running" except on the last row of a trial
};

struct IterateStat {
  int k = 0;
  double mean_log10_e = 0.0;
  double max_log10_e = 0.0;
};

struct ExperimentSummary {
  std::string experiment;
  Index n = 0;
  std::optional<Index> p;  ///< empty when p varies per trial
  long trials = 0;
  std::uint64_t seed = 0;
  double start_distance = 0.0;
  std::vector<IterateStat> per_iterate;
  long successes = 0;
  double success_rate = 0.0;
  long failures = 0;
  std::map<int, long> p_histogram;
  double wall_seconds = 0.0;
};

struct ExperimentResult {
  ExperimentSummary summary;
  std::vector<TrialOutcome> outcomes;
};

ExperimentResult run_table1(const ExperimentConfig& cfg);
ExperimentResult run_hamiltonian(const ExperimentConfig& cfg);

/// log10 floor applied to e before averaging.
inline constexpr double kLog10Floor = -32.0;

/// Flattens outcomes into CSV rows. A trial that failed before iterate 0 gets
/// one all-NaN row with status Failure.
std::vector<TraceRow> trace_rows(const std::vector<TrialOutcome>& outcomes);

/// Per-iterate mean/max of log10(e) over the rows with finite e; success means
/// e < cfg.success_threshold at iterate cfg.max_iters. Throws MissingOracle if
/// no row carries both errors. Fills everything except p_histogram and timing.
ExperimentSummary summarize(const std::vector<TraceRow>& rows, const ExperimentConfig& cfg);

/// Per-iterate statistics of in-memory traces (left + right error).
std::vector<IterateStat> summarize(const std::vector<IterationTrace>& traces);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<TraceRow> read_trace_csv(const std::string& path);

/// JSON summary. Timing is emitted under "wall_time_s" only if requested.
std::string summary_json(const ExperimentSummary& s, bool include_timing = true);

/// "Iterate | mean(log10(e)) | max(log10(e))" table.
std::string format_table(const ExperimentSummary& s);

}  // namespace tsgrqi
