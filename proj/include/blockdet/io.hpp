#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "blockdet/matrix.hpp"
#include "blockdet/scalar.hpp"

namespace blockdet {

enum class MatrixFormat { dense_csv, matrix_market, json };

/// "dense-csv", "matrix-market" or "json"; nullopt otherwise.
std::optional<MatrixFormat> format_from_name(std::string_view name);
const char* format_name(MatrixFormat f);
/// By extension: .csv, .mtx/.mm, .json. Defaults to dense-csv.
MatrixFormat guess_format(std::string_view path);

/// Entries are read exactly ("3", "-1.25", "7/2"). Throws ParseError (with a
/// line number where one applies) or DimensionError for non-square input.
Matrix<Rational> parse_matrix_text(std::string_view text, MatrixFormat format);
Matrix<Rational> parse_matrix(const std::string& path, MatrixFormat format);

std::string format_matrix(const Matrix<Rational>& m, MatrixFormat format);
std::string format_matrix(const Matrix<Integer>& m, MatrixFormat format);

}  // namespace blockdet
