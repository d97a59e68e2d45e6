#include "rspca/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "rspca/errors.hpp"

namespace rspca {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw InputError("line " + std::to_string(line) + ": " + message);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    fail(line, "cannot parse number '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) fail(line, "non-finite value");
  return value;
}

long long parse_integer(std::string_view token, std::size_t line) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    fail(line, "cannot parse integer '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos > start) out.push_back(s.substr(start, pos - start));
  }
  return out;
}

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) fail(1, "empty file");
  ++lineno;
  const auto header_copy = lower(line);
  const auto fields = split_ws(header_copy);
  if (fields.size() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix") {
    fail(lineno, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'");
  }
  const std::string layout(fields[2]);
  const std::string field(fields[3]);
  const std::string symmetry(fields[4]);
  if (layout != "array" && layout != "coordinate") fail(lineno, "unknown layout '" + layout + "'");
  if (field != "real" && field != "integer" && field != "double" && field != "pattern") {
    fail(lineno, "unsupported field '" + field + "'");
  }
  if (field == "pattern" && layout == "array") fail(lineno, "pattern field requires coordinate layout");
  if (symmetry != "general" && symmetry != "symmetric") fail(lineno, "unsupported symmetry '" + symmetry + "'");
  const bool symmetric = symmetry == "symmetric";

  // Size line, skipping comments and blanks.
  std::vector<std::string_view> size_tokens;
  std::string size_line;
  while (std::getline(in, size_line)) {
    ++lineno;
    const auto t = trim(size_line);
    if (t.empty() || t.front() == '%') continue;
    size_tokens = split_ws(t);
    break;
  }
  const std::size_t expected_tokens = layout == "array" ? 2 : 3;
  if (size_tokens.size() != expected_tokens) fail(lineno, "malformed size line");
  const long long rows = parse_integer(size_tokens[0], lineno);
  const long long cols = parse_integer(size_tokens[1], lineno);
  if (rows < 1 || cols < 1) fail(lineno, "matrix dimensions must be positive");
  if (symmetric && rows != cols) fail(lineno, "symmetric matrix must be square");
  Matrix m = Matrix::Zero(rows, cols);

  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      const auto t = trim(out);
      if (t.empty() || t.front() == '%') continue;
      return true;
    }
    return false;
  };

  std::string data;
  if (layout == "array") {
    for (long long c = 0; c < cols; ++c) {
      for (long long r = symmetric ? c : 0; r < rows; ++r) {
        if (!next_data_line(data)) fail(lineno, "dimension mismatch: too few entries");
        const auto tokens = split_ws(trim(data));
        if (tokens.size() != 1) fail(lineno, "expected one value per line");
        const double value = parse_double(tokens[0], lineno);
        m(r, c) = value;
        if (symmetric) m(c, r) = value;
      }
    }
  } else {
    const long long entries = parse_integer(size_tokens[2], lineno);
    if (entries < 0) fail(lineno, "negative entry count");
    for (long long e = 0; e < entries; ++e) {
      if (!next_data_line(data)) fail(lineno, "dimension mismatch: too few entries");
      const auto tokens = split_ws(trim(data));
      const std::size_t want = field == "pattern" ? 2 : 3;
      if (tokens.size() != want) fail(lineno, "malformed coordinate entry");
      const long long r = parse_integer(tokens[0], lineno) - 1;
      const long long c = parse_integer(tokens[1], lineno) - 1;
      if (r < 0 || r >= rows || c < 0 || c >= cols) fail(lineno, "index out of range");
      const double value = field == "pattern" ? 1.0 : parse_double(tokens[2], lineno);
      m(r, c) = value;
      if (symmetric) m(c, r) = value;
    }
  }
  if (next_data_line(data)) fail(lineno, "dimension mismatch: extra entries");
  return m;
}

Matrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t blank_run_start = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) {
      if (blank_run_start == 0) blank_run_start = lineno;
      continue;
    }
    if (blank_run_start != 0) fail(blank_run_start, "blank line inside CSV data");
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const auto comma = t.find(',', pos);
      row.push_back(parse_double(t.substr(pos, comma == std::string_view::npos ? t.npos : comma - pos), lineno));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(lineno, "dimension mismatch: expected " + std::to_string(rows.front().size()) + " columns, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(lineno == 0 ? 1 : lineno, "empty CSV");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

}  // namespace

MatrixFormat parse_format(std::string_view name) {
  const auto n = lower(name);
  if (n == "mm" || n == "mtx" || n == "matrix-market" || n == "matrixmarket") return MatrixFormat::kMatrixMarket;
  if (n == "csv") return MatrixFormat::kCsv;
  throw InputError("unknown matrix format '" + std::string(name) + "'");
}

MatrixFormat format_from_path(const std::filesystem::path& path) {
  return lower(path.extension().string()) == ".csv" ? MatrixFormat::kCsv : MatrixFormat::kMatrixMarket;
}

Matrix read_matrix(std::istream& in, MatrixFormat format) {
  return format == MatrixFormat::kCsv ? read_csv(in) : read_matrix_market(in);
}

Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_matrix(in, format);
}

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_matrix_market(std::ostream& out, const Matrix& m) {
  out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) out << format_double(m(r, c)) << '\n';
  }
}

void write_csv(std::ostream& out, const Matrix& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format) {
  auto out = open_output(path);
  if (format == MatrixFormat::kCsv) {
    write_csv(out, m);
  } else {
    write_matrix_market(out, m);
  }
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace rspca
