#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rspca/linalg.hpp"

namespace rspca {

enum class MatrixFormat { kMatrixMarket, kCsv };

/// "mm", "mtx", "matrix-market" or "csv".
MatrixFormat parse_format(std::string_view name);
/// Guess from the extension: ".csv" is CSV, anything else Matrix Market.
MatrixFormat format_from_path(const std::filesystem::path& path);

/// Dense load. Matrix Market: array and coordinate layouts, real, integer or
/// pattern fields, general or symmetric (symmetric files are mirrored).
/// CSV: headerless, comma separated, one row per line.
/// Throws InputError carrying the offending line number.
Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
Matrix read_matrix(std::istream& in, MatrixFormat format);

/// Writes "%%MatrixMarket matrix array real general", entries column-major,
/// shortest round-trip decimal formatting.
void write_matrix_market(std::ostream& out, const Matrix& m);
void write_csv(std::ostream& out, const Matrix& m);
void save_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

using Json = nlohmann::ordered_json;

/// Two-space indented JSON followed by a newline.
void write_json(const std::filesystem::path& path, const Json& doc);
Json read_json(const std::filesystem::path& path);

/// Opens for writing, creating parent directories. Throws InputError on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace rspca
