// SPDX-License-Identifier: Apache-2.0
#include "tsgrqi/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "tsgrqi/testgen.hpp"

namespace tsgrqi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class Fn>
void for_each_trial(ExecutionPolicy policy, long count, Fn&& fn)
{
  if (policy == ExecutionPolicy::Serial) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) fn(i);
}

TrialOutcome run_trial(const ExperimentConfig& cfg, long trial,
                       TrialInstance (*make)(const ExperimentConfig&, long))
{
  TrialOutcome out;
  out.trial = trial;
  try {
    const TrialInstance inst = make(cfg, trial);
    out.p = int(inst.start.right.dim());
    out.trace = iterate(inst.method, inst.problem, inst.start, experiment_step_config(cfg),
                        inst.oracle);
  } catch (const std::exception& ex) {
    out.trace.records.clear();
    out.trace.status = Status::Failure;
    out.trace.reason = ex.what();
  }
  return out;
}

ExperimentResult run_batch(const ExperimentConfig& cfg,
                           TrialInstance (*make)(const ExperimentConfig&, long))
{
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.outcomes.resize(static_cast<std::size_t>(cfg.trials));
  for_each_trial(cfg.policy, cfg.trials,
                 [&](long i) { result.outcomes[std::size_t(i)] = run_trial(cfg, i, make); });
  result.summary = summarize(trace_rows(result.outcomes), cfg);
  for (const TrialOutcome& o : result.outcomes)
    if (o.p > 0) ++result.summary.p_histogram[o.p];
  result.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::string fmt(double v)
{
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_field(const std::string& s)
{
  if (s.empty() || s == "nan") return kNaN;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  TSGRQI_REQUIRE(used == s.size(), ErrorCode::ParseError, "bad CSV number '" + s + "'");
  return v;
}

}  // namespace

void ExperimentConfig::validate() const
{
  TSGRQI_REQUIRE(trials >= 1, ErrorCode::InvalidConfig, "trials must be >= 1");
  TSGRQI_REQUIRE(start_distance > 0.0 && start_distance < 1.5707963267948966,
                 ErrorCode::InvalidConfig, "start distance must lie in (0, pi/2)");
  TSGRQI_REQUIRE(max_iters >= 1, ErrorCode::InvalidConfig, "max_iters must be >= 1");
  if (experiment == "hamiltonian") {
    TSGRQI_REQUIRE(n >= 2 && n % 2 == 0, ErrorCode::OddDimension,
                   "the Hamiltonian study needs even n");
  } else {
    TSGRQI_REQUIRE(p >= 1 && n > p, ErrorCode::InvalidConfig, "need n > p >= 1");
  }
}

ExperimentConfig table1_defaults() { return {}; }

ExperimentConfig hamiltonian_defaults()
{
  ExperimentConfig cfg;
  cfg.experiment = "hamiltonian";
  cfg.trials = 10000;
  cfg.max_iters = 10;
  return cfg;
}

StepConfig experiment_step_config(const ExperimentConfig& cfg)
{
  StepConfig step;
  step.max_iters = cfg.max_iters;
  step.stop_on_convergence = false;
  step.seed = cfg.seed;
  return step;
}

TrialInstance make_table1_instance(const ExperimentConfig& cfg, long trial)
{
  CounterRng rng = CounterRng(cfg.seed).stream(std::uint64_t(trial));
  auto gen = random_diagonalizable<double>(cfg.n, cfg.p, rng);
  TrialInstance inst;
  inst.method = Method::Tsgrqi;
  inst.problem.c = std::move(gen.c);
  inst.start.right = nearby_subspace(gen.oracle_right, cfg.start_distance, rng);
  inst.start.left = nearby_subspace(gen.oracle_left, cfg.start_distance, rng);
  inst.oracle.right = std::move(gen.oracle_right);
  inst.oracle.left = std::move(gen.oracle_left);
  return inst;
}

TrialInstance make_hamiltonian_instance(const ExperimentConfig& cfg, long trial)
{
  CounterRng rng = CounterRng(cfg.seed).stream(std::uint64_t(trial));
  TrialInstance inst;
  inst.method = Method::OneSided;
  inst.problem.c = random_hamiltonian(cfg.n, rng);
  inst.problem.e = StructureOperator::symplectic(cfg.n);
  const auto groups = full_eigenspace_targets(inst.problem.c, *inst.problem.e);
  const Subspace<double>& target = groups.front().right;
  inst.start.right = nearby_subspace(target, cfg.start_distance, rng);
  inst.start.left = orthonormalize(apply_symplectic(inst.start.right.basis()));
  inst.oracle.right = target;
  inst.oracle.left = orthonormalize(apply_symplectic(target.basis()));
  return inst;
}

ExperimentResult run_table1(const ExperimentConfig& cfg)
{
  ExperimentConfig c = cfg;
  c.experiment = "table1";
  return run_batch(c, &make_table1_instance);
}

ExperimentResult run_hamiltonian(const ExperimentConfig& cfg)
{
  ExperimentConfig c = cfg;
  c.experiment = "hamiltonian";
  return run_batch(c, &make_hamiltonian_instance);
}

std::vector<TraceRow> trace_rows(const std::vector<TrialOutcome>& outcomes)
{
  std::vector<TraceRow> rows;
  for (const TrialOutcome& o : outcomes) {
    const auto& recs = o.trace.records;
    if (recs.empty()) {
      rows.push_back({o.trial, 0, kNaN, kNaN, kNaN, kNaN, false, kNaN, to_string(Status::Failure)});
      continue;
    }
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const TraceRecord& r = recs[i];
      TraceRow row;
      row.trial = o.trial;
      row.iterate = r.index;
      row.right_err = r.right_error.value_or(kNaN);
      row.left_err = r.left_error.value_or(kNaN);
      row.e = (r.left_error && r.right_error) ? *r.left_error + *r.right_error : kNaN;
      row.residual_angle = r.residual_angle;
      row.perturbed = r.perturbed;
      row.shift_cond = r.shift_cond;
      row.status = i + 1 == recs.size() ? to_string(o.trace.status) : "running";
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

double log10_clamped(double e) { return std::max(std::log10(e), kLog10Floor); }

std::vector<IterateStat> iterate_stats(const std::vector<std::pair<int, double>>& samples)
{
  std::map<int, std::pair<double, long>> sums;
  std::map<int, double> maxima;
  for (const auto& [k, e] : samples) {
    if (!std::isfinite(e)) continue;
    const double l = log10_clamped(e);
    auto& [sum, count] = sums[k];
    sum += l;
    ++count;
    auto it = maxima.find(k);
    if (it == maxima.end())
      maxima[k] = l;
    else
      it->second = std::max(it->second, l);
  }
  std::vector<IterateStat> out;
  for (const auto& [k, sc] : sums) out.push_back({k, sc.first / double(sc.second), maxima[k]});
  return out;
}

}  // namespace

ExperimentSummary summarize(const std::vector<TraceRow>& rows, const ExperimentConfig& cfg)
{
  bool any_oracle = false;
  std::vector<std::pair<int, double>> samples;
  samples.reserve(rows.size());
  std::map<long, bool> success;
  std::map<long, bool> failed;
  for (const TraceRow& r : rows) {
    success.try_emplace(r.trial, false);
    failed.try_emplace(r.trial, false);
    if (r.status == to_string(Status::Failure)) failed[r.trial] = true;
    if (std::isnan(r.right_err) || std::isnan(r.left_err)) continue;
    any_oracle = true;
    samples.emplace_back(r.iterate, r.e);
    if (r.iterate == cfg.max_iters && r.e < cfg.success_threshold) success[r.trial] = true;
  }
  TSGRQI_REQUIRE(any_oracle || rows.empty() || std::all_of(rows.begin(), rows.end(), [](auto& r) {
                   return r.status == to_string(Status::Failure);
                 }),
                 ErrorCode::MissingOracle, "trace rows carry no oracle errors");

  ExperimentSummary s;
  s.experiment = cfg.experiment;
  s.n = cfg.n;
  if (cfg.experiment != "hamiltonian") s.p = cfg.p;
  s.trials = long(success.size());
  s.seed = cfg.seed;
  s.start_distance = cfg.start_distance;
  s.per_iterate = iterate_stats(samples);
  for (const auto& [t, ok] : success) s.successes += ok ? 1 : 0;
  for (const auto& [t, bad] : failed) s.failures += bad ? 1 : 0;
  s.success_rate = s.trials > 0 ? double(s.successes) / double(s.trials) : 0.0;
  return s;
}

std::vector<IterateStat> summarize(const std::vector<IterationTrace>& traces)
{
  TSGRQI_REQUIRE(!traces.empty(), ErrorCode::MissingOracle, "no traces to summarize");
  std::vector<std::pair<int, double>> samples;
  for (const IterationTrace& t : traces) {
    const auto e = t.combined_errors();
    for (std::size_t k = 0; k < e.size(); ++k) samples.emplace_back(t.records[k].index, e[k]);
  }
  return iterate_stats(samples);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {
constexpr const char* kCsvHeader =
    "trial,iterate,right_err,left_err,e,residual_angle,perturbed,shift_cond,status";
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows)
{
  out << kCsvHeader << '\n';
  for (const TraceRow& r : rows) {
    out << r.trial << ',' << r.iterate << ',' << (std::isnan(r.right_err) ? "" : fmt(r.right_err))
        << ',' << (std::isnan(r.left_err) ? "" : fmt(r.left_err)) << ',' << fmt(r.e) << ','
        << fmt(r.residual_angle) << ',' << (r.perturbed ? 1 : 0) << ',' << fmt(r.shift_cond)
        << ',' << r.status << '\n';
  }
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows)
{
  std::ofstream out(path);
  TSGRQI_REQUIRE(out.good(), ErrorCode::IoError, "cannot write '" + path + "'");
  write_trace_csv(out, rows);
  TSGRQI_REQUIRE(out.good(), ErrorCode::IoError, "write to '" + path + "' failed");
}

std::vector<TraceRow> read_trace_csv(std::istream& in)
{
  std::string line;
  TSGRQI_REQUIRE(std::getline(in, line) && line == kCsvHeader, ErrorCode::ParseError,
                 "trace CSV:1: unexpected header");
  std::vector<TraceRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    TSGRQI_REQUIRE(f.size() == 9, ErrorCode::ParseError,
                   "trace CSV:" + std::to_string(lineno) + ": expected 9 fields");
    try {
      TraceRow r;
      r.trial = std::stol(f[0]);
      r.iterate = std::stoi(f[1]);
      r.right_err = parse_field(f[2]);
      r.left_err = parse_field(f[3]);
      r.e = parse_field(f[4]);
      r.residual_angle = parse_field(f[5]);
      r.perturbed = f[6] == "1";
      r.shift_cond = parse_field(f[7]);
      r.status = f[8];
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      detail::raise(ErrorCode::ParseError, "trace CSV:" + std::to_string(lineno) + ": bad field");
    }
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::string& path)
{
  std::ifstream in(path);
  TSGRQI_REQUIRE(in.good(), ErrorCode::IoError, "cannot open '" + path + "'");
  return read_trace_csv(in);
}

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

std::string summary_json(const ExperimentSummary& s, bool include_timing)
{
  nlohmann::ordered_json j;
  j["experiment"] = s.experiment;
  j["n"] = s.n;
  j["p"] = s.p ? nlohmann::ordered_json(*s.p) : nlohmann::ordered_json(nullptr);
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["start_distance"] = s.start_distance;
  auto& per = j["per_iterate"] = nlohmann::ordered_json::array();
  for (const IterateStat& st : s.per_iterate)
    per.push_back({{"k", st.k}, {"mean_log10_e", st.mean_log10_e}, {"max_log10_e", st.max_log10_e}});
  j["success_rate"] = s.success_rate;
  j["successes"] = s.successes;
  j["failures"] = s.failures;
  if (!s.p_histogram.empty()) {
    auto& hist = j["p_histogram"] = nlohmann::ordered_json::object();
    for (const auto& [p, count] : s.p_histogram) hist[std::to_string(p)] = count;
  }
  if (include_timing) j["wall_time_s"] = s.wall_seconds;
  return j.dump(2);
}

std::string format_table(const ExperimentSummary& s)
{
  std::string out = "Iterate | mean(log10(e)) | max(log10(e))\n";
  char buf[96];
  for (const IterateStat& st : s.per_iterate) {
    std::snprintf(buf, sizeof buf, "%7d | %14.4f | %13.4f\n", st.k, st.mean_log10_e, st.max_log10_e);
    out += buf;
  }
  return out;
}

}  // namespace tsgrqi
