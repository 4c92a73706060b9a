// SPDX-License-Identifier: Apache-2.0
//
// Dense Matrix Market files ("matrix array {real,complex} general").
#pragma once

#include <iosfwd>
#include <string>

#include "tsgrqi/types.hpp"

namespace tsgrqi {

/// Reads a dense array file. Real files load with zero imaginary parts.
/// Throws ParseError (with file and line), UnsupportedFormat for coordinate
/// or non-general files, IoError if the file cannot be opened.
Matrix read_matrix_market(const std::string& path);
Matrix read_matrix_market(std::istream& in, const std::string& name = "<stream>");

/// Writes column-major at 17 significant digits so read(write(M)) == M exactly.
/// A matrix with identically zero imaginary part is written as real when
/// `prefer_real` is set.
void write_matrix_market(const std::string& path, const Matrix& m, bool prefer_real = false);
void write_matrix_market(std::ostream& out, const Matrix& m, bool prefer_real = false);

}  // namespace tsgrqi
