#include "blockdet/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "blockdet/error.hpp"

namespace blockdet {

std::optional<MatrixFormat> format_from_name(std::string_view name) {
  if (name == "dense-csv" || name == "csv") return MatrixFormat::dense_csv;
  if (name == "matrix-market" || name == "mtx") return MatrixFormat::matrix_market;
  if (name == "json") return MatrixFormat::json;
  return std::nullopt;
}

const char* format_name(MatrixFormat f) {
  switch (f) {
    case MatrixFormat::dense_csv:
      return "dense-csv";
    case MatrixFormat::matrix_market:
      return "matrix-market";
    case MatrixFormat::json:
      return "json";
  }
  return "?";
}

MatrixFormat guess_format(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with(".mtx") || ends_with(".mm")) return MatrixFormat::matrix_market;
  if (ends_with(".json")) return MatrixFormat::json;
  return MatrixFormat::dense_csv;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

Rational number_at(std::string_view field, std::size_t line) {
  try {
    return parse_rational(field);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line);
  }
}

Matrix<Rational> square_from_rows(std::vector<std::vector<Rational>> rows) {
  const std::size_t n = rows.size();
  for (const auto& r : rows)
    if (r.size() != n)
      throw DimensionError("matrix is " + std::to_string(n) + "x" + std::to_string(r.size()) + ", expected square");
  Matrix<Rational> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = std::move(rows[i][j]);
  return m;
}

Matrix<Rational> parse_csv(std::string_view text) {
  auto lines = split_lines(text);
  while (!lines.empty() && blank(lines.back())) lines.pop_back();
  std::vector<std::vector<Rational>> rows;
  std::size_t width = 0;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    if (blank(lines[l])) throw ParseError("blank line inside matrix", l + 1);
    std::vector<Rational> row;
    std::string_view rest = lines[l];
    for (;;) {
      auto comma = rest.find(',');
      row.push_back(number_at(rest.substr(0, comma), l + 1));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows.empty())
      width = row.size();
    else if (row.size() != width)
      throw ParseError("row has " + std::to_string(row.size()) + " fields, expected " + std::to_string(width), l + 1);
    rows.push_back(std::move(row));
  }
  if (!rows.empty() && width != rows.size())
    throw DimensionError("matrix is " + std::to_string(rows.size()) + "x" + std::to_string(width) +
                         ", expected square");
  return square_from_rows(std::move(rows));
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t index_at(std::string_view field, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("bad index '" + std::string(field) + "'", line);
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Matrix<Rational> parse_matrix_market(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty Matrix Market file", 1);
  const auto header = tokens(lines[0]);
  if (header.size() != 5 || lower(header[0]) != "%%matrixmarket" || lower(header[1]) != "matrix" ||
      lower(header[2]) != "coordinate")
    throw ParseError("expected '%%MatrixMarket matrix coordinate <field> general'", 1);
  const std::string field = lower(header[3]);
  if (field != "real" && field != "integer") throw ParseError("unsupported field '" + field + "'", 1);
  if (lower(header[4]) != "general") throw ParseError("only general symmetry is supported", 1);

  std::size_t l = 1;
  while (l < lines.size() && (blank(lines[l]) || lines[l].front() == '%')) ++l;
  if (l == lines.size()) throw ParseError("missing size line", l);
  const auto size = tokens(lines[l]);
  if (size.size() != 3) throw ParseError("size line needs rows, columns and entry count", l + 1);
  const std::size_t rows = index_at(size[0], l + 1), cols = index_at(size[1], l + 1);
  const std::size_t count = index_at(size[2], l + 1);
  if (rows != cols)
    throw DimensionError("matrix is " + std::to_string(rows) + "x" + std::to_string(cols) + ", expected square");

  Matrix<Rational> m(rows);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::size_t read = 0;
  for (++l; l < lines.size(); ++l) {
    if (blank(lines[l]) || lines[l].front() == '%') continue;
    const auto t = tokens(lines[l]);
    if (t.size() != 3) throw ParseError("entry needs row, column and value", l + 1);
    const std::size_t r = index_at(t[0], l + 1), c = index_at(t[1], l + 1);
    if (r < 1 || r > rows || c < 1 || c > cols) throw ParseError("entry index out of range", l + 1);
    if (!seen.emplace(r, c).second) throw ParseError("duplicate entry", l + 1);
    m(r - 1, c - 1) = number_at(t[2], l + 1);
    ++read;
  }
  if (read != count)
    throw ParseError("expected " + std::to_string(count) + " entries, found " + std::to_string(read), 0);
  return m;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

Rational json_value(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(Integer(v.dump(), 10));
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError("non-finite entry value", 0);
    // shortest round-trip decimal, read exactly
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
  }
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), 0);
    }
  }
  throw ParseError("entry value must be a number or a numeric string", 0);
}

Matrix<Rational> parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries"))
    throw ParseError("expected {\"n\": int, \"entries\": [[row, col, value], ...]}", 0);
  if (!doc["n"].is_number_unsigned()) throw ParseError("\"n\" must be a non-negative integer", 0);
  const auto n = doc["n"].get<std::size_t>();
  if (!doc["entries"].is_array()) throw ParseError("\"entries\" must be an array", 0);
  Matrix<Rational> m(n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : doc["entries"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
      throw ParseError("each entry must be [row, col, value] with 1-based indices", 0);
    const auto r = e[0].get<std::size_t>(), c = e[1].get<std::size_t>();
    if (r < 1 || r > n || c < 1 || c > n)
      throw ParseError("entry [" + std::to_string(r) + "," + std::to_string(c) + "] out of range", 0);
    if (!seen.emplace(r, c).second) throw ParseError("duplicate entry", 0);
    m(r - 1, c - 1) = json_value(e[2]);
  }
  return m;
}

template <class T>
std::string format_any(const Matrix<T>& m, MatrixFormat format, bool integral) {
  std::ostringstream out;
  const std::size_t n = m.order();
  switch (format) {
    case MatrixFormat::dense_csv:
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) out << (c ? "," : "") << to_string(m(r, c));
        out << '\n';
      }
      break;
    case MatrixFormat::matrix_market: {
      std::size_t nnz = 0;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) nnz += !is_zero(m(r, c));
      out << "%%MatrixMarket matrix coordinate " << (integral ? "integer" : "real") << " general\n";
      out << n << ' ' << n << ' ' << nnz << '\n';
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r)
          if (!is_zero(m(r, c))) out << r + 1 << ' ' << c + 1 << ' ' << to_string(m(r, c)) << '\n';
      break;
    }
    case MatrixFormat::json: {
      nlohmann::ordered_json doc;
      doc["n"] = n;
      auto entries = nlohmann::ordered_json::array();
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          if (is_zero(m(r, c))) continue;
          if (integral)
            entries.push_back({r + 1, c + 1, nlohmann::ordered_json::parse(to_string(m(r, c)))});
          else
            entries.push_back({r + 1, c + 1, to_string(m(r, c))});
        }
      doc["entries"] = entries;
      out << doc.dump() << '\n';
      break;
    }
  }
  return out.str();
}

}  // namespace

Matrix<Rational> parse_matrix_text(std::string_view text, MatrixFormat format) {
  switch (format) {
    case MatrixFormat::dense_csv:
      return parse_csv(text);
    case MatrixFormat::matrix_market:
      return parse_matrix_market(text);
    case MatrixFormat::json:
      return parse_json(text);
  }
  throw ParseError("unknown format", 0);
}

Matrix<Rational> parse_matrix(const std::string& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix_text(buffer.str(), format);
}

std::string format_matrix(const Matrix<Rational>& m, MatrixFormat format) {
  return format_any(m, format, is_integral(m));
}

std::string format_matrix(const Matrix<Integer>& m, MatrixFormat format) { return format_any(m, format, true); }

}  // namespace blockdet
