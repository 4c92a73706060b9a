// SPDX-License-Identifier: Apache-2.0
#include "tsgrqi/error.hpp"

namespace tsgrqi {

std::string_view to_string(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NearDefective: return "NearDefective";
    case ErrorCode::SolveFailed: return "SolveFailed";
    case ErrorCode::SpectraOverlap: return "SpectraOverlap";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::BiorthogonalityLost: return "BiorthogonalityLost";
    case ErrorCode::GramSingular: return "GramSingular";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::NotStructured: return "NotStructured";
    case ErrorCode::UnpairedEigenvalue: return "UnpairedEigenvalue";
    case ErrorCode::NotSpectral: return "NotSpectral";
    case ErrorCode::DegeneratePencil: return "DegeneratePencil";
    case ErrorCode::SingularPencilShift: return "SingularPencilShift";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MissingOracle: return "MissingOracle";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace tsgrqi
