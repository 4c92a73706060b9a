// SPDX-License-Identifier: Apache-2.0
//
// Driver loop shared by every iteration kind.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsgrqi/structured.hpp"

namespace tsgrqi {

enum class Method {
  Rqi,
  Grqi,
  TwoSidedRqi,
  Tsgrqi,
  Newton,
  OneSided,              ///< needs Problem::e
  GeneralizedHermitian,  ///< needs Problem::b
  Pencil,                ///< needs Problem::b; left iterate is B^-H Y_L
};

std::string to_string(Method m);
/// Parses the CLI spelling (rqi, grqi, two-sided-rqi, tsgrqi, newton, one-sided,
/// generalized, pencil). Throws InvalidConfig.
Method parse_method(const std::string& name);

struct Problem {
  Matrix c;  ///< C, or A for the generalized and pencil methods
  std::optional<StructureOperator> e;
  Matrix b;
  PencilCoefficients coeffs{};
};

struct Oracle {
  Subspace<double> right;
  std::optional<Subspace<double>> left;
};

enum class Status { Converged, MaxIters, Failure };

std::string to_string(Status s);

struct TraceRecord {
  int index = 0;
  std::optional<double> left_error;
  std::optional<double> right_error;
  double residual_angle = 0.0;  ///< NaN if it could not be evaluated
  bool perturbed = false;
  double shift_cond = 1.0;
};

struct IterationTrace {
  std::vector<TraceRecord> records;
  Status status = Status::MaxIters;
  std::string reason;  ///< set on Failure

  /// left + right error per record; MissingOracle if any error is absent.
  std::vector<double> combined_errors() const;
};

/// Runs `method` from `start` for at most cfg.max_iters steps. For one-sided
/// methods only start.right is used and the left iterate is derived (E Y for
/// OneSided, Y itself for Grqi/Newton/Rqi). Step errors end the trace with
/// Status::Failure; the records gathered so far are kept.
IterationTrace iterate(Method method, const Problem& problem, const SubspacePair<double>& start,
                       const StepConfig& cfg, const std::optional<Oracle>& oracle = std::nullopt);

}  // namespace tsgrqi
