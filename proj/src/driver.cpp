// SPDX-License-Identifier: Apache-2.0
#include "tsgrqi/driver.hpp"

#include <cmath>
#include <limits>

namespace tsgrqi {

std::string to_string(Method m)
{
  switch (m) {
    case Method::Rqi: return "rqi";
    case Method::Grqi: return "grqi";
    case Method::TwoSidedRqi: return "two-sided-rqi";
    case Method::Tsgrqi: return "tsgrqi";
    case Method::Newton: return "newton";
    case Method::OneSided: return "one-sided";
    case Method::GeneralizedHermitian: return "generalized";
    case Method::Pencil: return "pencil";
  }
  return "unknown";
}

Method parse_method(const std::string& name)
{
  for (Method m : {Method::Rqi, Method::Grqi, Method::TwoSidedRqi, Method::Tsgrqi, Method::Newton,
                   Method::OneSided, Method::GeneralizedHermitian, Method::Pencil}) {
    if (to_string(m) == name) return m;
  }
  detail::raise(ErrorCode::InvalidConfig, "unknown method '" + name + "'");
}

std::string to_string(Status s)
{
  switch (s) {
    case Status::Converged: return "Converged";
    case Status::MaxIters: return "MaxIters";
    case Status::Failure: return "Failure";
  }
  return "unknown";
}

std::vector<double> IterationTrace::combined_errors() const
{
  std::vector<double> out;
  out.reserve(records.size());
  for (const TraceRecord& r : records) {
    TSGRQI_REQUIRE(r.left_error && r.right_error, ErrorCode::MissingOracle,
                   "trace has no left/right oracle errors");
    out.push_back(*r.left_error + *r.right_error);
  }
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_two_sided(Method m)
{
  return m == Method::TwoSidedRqi || m == Method::Tsgrqi || m == Method::Pencil;
}

bool is_vector_method(Method m) { return m == Method::Rqi || m == Method::TwoSidedRqi; }

void validate_problem(Method method, const Problem& pr, const SubspacePair<double>& start)
{
  const Index n = pr.c.rows();
  TSGRQI_REQUIRE(pr.c.cols() == n && n >= 1, ErrorCode::DimensionMismatch, "matrix must be square");
  TSGRQI_REQUIRE(start.right.ambient() == n, ErrorCode::DimensionMismatch,
                 "right start does not match the matrix");
  if (is_two_sided(method)) {
    TSGRQI_REQUIRE(start.left.ambient() == n && start.left.dim() == start.right.dim(),
                   ErrorCode::DimensionMismatch, "left start does not match the right start");
  }
  if (is_vector_method(method)) {
    TSGRQI_REQUIRE(start.right.dim() == 1, ErrorCode::DimensionMismatch,
                   "vector methods need p = 1");
  }
  if (method == Method::OneSided) {
    TSGRQI_REQUIRE(pr.e && pr.e->size() == n, ErrorCode::InvalidConfig,
                   "one-sided method needs a structure operator E");
  }
  if (method == Method::GeneralizedHermitian || method == Method::Pencil) {
    TSGRQI_REQUIRE(pr.b.rows() == n && pr.b.cols() == n, ErrorCode::DimensionMismatch,
                   "B must match A");
  }
}

Subspace<double> derived_left(Method method, const Problem& pr, const Subspace<double>& right)
{
  if (method == Method::OneSided) return orthonormalize(pr.e->apply(right.basis()));
  return right;
}

double safe(auto&& fn)
{
  try {
    return fn();
  } catch (const Error&) {
    return kNaN;
  }
}

double residual(Method method, const Problem& pr, const SubspacePair<double>& y)
{
  switch (method) {
    case Method::GeneralizedHermitian:
    case Method::Pencil:
      return safe([&] {
        const auto m = pencil_matrices(pr.c, pr.b, method == Method::Pencil ? pr.coeffs
                                                                               : PencilCoefficients{});
        return largest_principal_angle(orthonormalize<double>(m.b_hat * y.right.basis()),
                                       orthonormalize<double>(m.a_hat * y.right.basis()));
      });
    case Method::TwoSidedRqi:
    case Method::Tsgrqi:
      return safe([&] {
        const Matrix c_adj = pr.c.adjoint();
        return std::max(residual_angle<double>(pr.c, y.right), residual_angle<double>(c_adj, y.left));
      });
    default:
      return safe([&] { return residual_angle<double>(pr.c, y.right); });
  }
}

TraceRecord record(int index, Method method, const Problem& pr, const SubspacePair<double>& y,
                   const std::optional<Oracle>& oracle, const StepDiagnostics& diag)
{
  TraceRecord r;
  r.index = index;
  r.perturbed = diag.perturbed;
  r.shift_cond = diag.shift_cond;
  r.residual_angle = residual(method, pr, y);
  if (oracle) {
    r.right_error = largest_principal_angle(y.right, oracle->right);
    if (oracle->left) r.left_error = largest_principal_angle(y.left, *oracle->left);
  }
  return r;
}

Subspace<double> as_subspace(const Vector& v) { return orthonormalize<double>(Matrix(v)); }

SubspacePair<double> step(Method method, const Problem& pr, const SubspacePair<double>& y,
                          const StepConfig& cfg, StepDiagnostics& diag)
{
  diag = {};
  switch (method) {
    case Method::Rqi: {
      auto r = rqi_step<double>(pr.c, y.right.basis().col(0));
      diag.terminal = r.terminal;
      auto s = as_subspace(r.next);
      return {s, s};
    }
    case Method::TwoSidedRqi: {
      auto r = two_sided_rqi_step<double>(pr.c, y.left.basis().col(0), y.right.basis().col(0));
      diag.terminal = r.terminal;
      return {as_subspace(r.left), as_subspace(r.right)};
    }
    case Method::Grqi: {
      auto s = grqi_step<double>(pr.c, y.right, cfg.perturbation, &diag);
      return {s, s};
    }
    case Method::Tsgrqi: {
      auto r = tsgrqi_step<double>(pr.c, y, cfg);
      diag = r.diag;
      return r.next;
    }
    case Method::Newton: {
      auto s = newton_chatelin_step<double>(pr.c, y.right);
      return {s, s};
    }
    case Method::OneSided: {
      auto s = one_sided_step(pr.c, *pr.e, y.right, cfg, &diag);
      return {derived_left(method, pr, s), s};
    }
    case Method::GeneralizedHermitian: {
      auto s = generalized_hermitian_step(pr.c, pr.b, y.right, cfg, &diag);
      return {s, s};
    }
    case Method::Pencil: {
      auto r = pencil_tsgrqi_step(pr.c, pr.b, pr.coeffs, {y.right, y.left}, cfg);
      diag = r.diag;
      return {r.next.hatted_left, r.next.right};
    }
  }
  detail::raise(ErrorCode::InvalidConfig, "unhandled method");
}

}  // namespace

IterationTrace iterate(Method method, const Problem& problem, const SubspacePair<double>& start,
                       const StepConfig& cfg, const std::optional<Oracle>& oracle)
{
  cfg.validate();
  validate_problem(method, problem, start);

  SubspacePair<double> y = start;
  if (!is_two_sided(method)) y.left = derived_left(method, problem, start.right);

  IterationTrace trace;
  trace.records.push_back(record(0, method, problem, y, oracle, {}));
  bool converged = false;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    StepDiagnostics diag;
    SubspacePair<double> next;
    try {
      next = step(method, problem, y, cfg, diag);
    } catch (const std::exception& ex) {
      trace.status = Status::Failure;
      trace.reason = ex.what();
      return trace;
    }
    trace.records.push_back(record(k, method, problem, next, oracle, diag));
    const double moved = std::max(largest_principal_angle(next.left, y.left),
                                  largest_principal_angle(next.right, y.right));
    const double res = trace.records.back().residual_angle;
    y = std::move(next);
    converged = diag.terminal || (moved < cfg.angle_tol && res < cfg.angle_tol);
    if (diag.terminal || (converged && cfg.stop_on_convergence)) break;
  }
  trace.status = converged ? Status::Converged : Status::MaxIters;
  return trace;
}

}  // namespace tsgrqi
