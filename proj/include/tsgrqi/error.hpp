// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsgrqi {

enum class ErrorCode {
  RankDeficient,
  DimensionMismatch,
  ZeroVector,
  NearDefective,
  SolveFailed,
  SpectraOverlap,
  NotHermitian,
  BiorthogonalityLost,
  GramSingular,
  InvalidConfig,
  OddDimension,
  NotStructured,
  UnpairedEigenvalue,
  NotSpectral,
  DegeneratePencil,
  SingularPencilShift,
  ParseError,
  UnsupportedFormat,
  MissingOracle,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

namespace detail {
[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }
}  // namespace detail

#define TSGRQI_REQUIRE(cond, code, msg)                   \
  do {                                                    \
    if (!(cond)) ::tsgrqi::detail::raise((code), (msg));  \
  } while (false)

}  // namespace tsgrqi
