#include "cubenorm/ingest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

namespace cubenorm {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : CubeError(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

std::optional<Index> RelationSchema::index_of(std::size_t col, const std::string& value) const {
  if (col >= lookup_.size()) return std::nullopt;
  auto it = lookup_[col].find(value);
  if (it == lookup_[col].end()) return std::nullopt;
  return it->second;
}

struct RelationBuilder {
  static LoadedRelation build(const std::vector<std::vector<std::string>>& rows,
                              std::vector<std::string> names) {
    if (rows.empty()) throw CubeError("relation has no rows");
    const std::size_t d = rows.front().size();
    if (d == 0) throw CubeError("relation has no columns");
    if (!names.empty() && names.size() != d)
      throw CubeError("expected " + std::to_string(d) + " column names, got " +
                      std::to_string(names.size()));
    if (names.empty())
      for (std::size_t j = 0; j < d; ++j) names.push_back("c" + std::to_string(j));

    RelationSchema schema;
    schema.columns = std::move(names);
    schema.values.resize(d);
    schema.lookup_.resize(d);
    std::vector<Index> flat;
    flat.reserve(rows.size() * d);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.size() != d)
        throw CubeError("row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                        " fields, expected " + std::to_string(d));
      for (std::size_t j = 0; j < d; ++j) {
        auto [it, fresh] =
            schema.lookup_[j].try_emplace(row[j], static_cast<Index>(schema.values[j].size()));
        if (fresh) schema.values[j].push_back(row[j]);
        flat.push_back(it->second);
      }
    }
    std::vector<std::size_t> extents;
    for (const auto& v : schema.values) extents.push_back(v.size());
    return {SparseCube::from_flat(std::move(flat), CubeDims(std::move(extents))),
            std::move(schema)};
  }
};

LoadedRelation load_relation(const std::vector<std::vector<std::string>>& rows,
                             std::vector<std::string> column_names) {
  return RelationBuilder::build(rows, std::move(column_names));
}

std::vector<std::vector<std::string>> read_csv_records(std::istream& in, char delimiter) {
  if (delimiter == '"' || delimiter == '\n' || delimiter == '\r')
    throw CubeError("invalid CSV delimiter");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  std::size_t line = 1, col = 0;
  std::size_t i = 0;
  bool any = false;  // current record has content
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    // a blank line is not a record
    if (!(record.size() == 1 && record[0].empty() && !any)) records.push_back(std::move(record));
    record.clear();
    any = false;
  };
  while (i < text.size()) {
    char ch = text[i];
    ++col;
    if (ch == '"' && field.empty()) {
      const std::size_t qline = line, qcol = col;
      any = true;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        ch = text[i];
        if (ch == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            col += 2;
            continue;
          }
          ++i;
          ++col;
          closed = true;
          break;
        }
        if (ch == '\n') {
          ++line;
          col = 0;
        } else {
          ++col;
        }
        field.push_back(ch);
        ++i;
      }
      if (!closed) throw ParseError(qline, qcol, "unterminated quoted field");
      if (i < text.size() && text[i] != delimiter && text[i] != '\n' && text[i] != '\r')
        throw ParseError(line, col + 1, "unexpected character after closing quote");
      continue;
    }
    if (ch == delimiter) {
      record.push_back(std::move(field));
      field.clear();
      any = true;
      ++i;
    } else if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      ++i;
    } else if (ch == '\n') {
      end_record();
      ++line;
      col = 0;
      ++i;
    } else {
      if (ch == '"') throw ParseError(line, col, "quote inside unquoted field");
      field.push_back(ch);
      any = true;
      ++i;
    }
  }
  if (any || !field.empty()) end_record();
  return records;
}

LoadedRelation load_csv(std::istream& in, const CsvOptions& options) {
  auto records = read_csv_records(in, options.delimiter);
  std::vector<std::string> names;
  if (options.header) {
    if (records.empty()) throw CubeError("CSV has no header row");
    names = std::move(records.front());
    records.erase(records.begin());
  }
  if (options.measure_column) {
    const std::size_t m = *options.measure_column;
    auto drop = [&](std::vector<std::string>& row, std::size_t r) {
      if (m >= row.size())
        throw CubeError("row " + std::to_string(r) + " has no measure column " +
                        std::to_string(m));
      row.erase(row.begin() + static_cast<std::ptrdiff_t>(m));
    };
    if (!names.empty()) drop(names, 1);
    for (std::size_t r = 0; r < records.size(); ++r) drop(records[r], r + 1 + options.header);
  }
  return load_relation(records, std::move(names));
}

std::vector<std::vector<std::string>> relation_rows(const SparseCube& cube,
                                                    const RelationSchema& schema) {
  if (schema.values.size() != cube.rank()) throw CubeError("schema does not match cube rank");
  for (std::size_t j = 0; j < cube.rank(); ++j)
    if (schema.values[j].size() != cube.dims().extent(j))
      throw CubeError("schema column " + std::to_string(j) + " does not match extent");
  std::vector<std::vector<std::string>> rows;
  rows.reserve(cube.cell_count());
  for (std::size_t c = 0; c < cube.cell_count(); ++c) {
    auto cell = cube.cell(c);
    std::vector<std::string> row;
    for (std::size_t j = 0; j < cell.size(); ++j) row.push_back(schema.values[j][cell[j]]);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// text formats

namespace {

/// Splits text into LF-terminated lines. A final line without LF is accepted.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

/// Whitespace-separated unsigned integers with their 1-based columns.
std::vector<std::uint64_t> parse_numbers(std::string_view line, std::size_t lineno,
                                         std::size_t first_col = 1) {
  std::vector<std::uint64_t> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t') {
      ++i;
      continue;
    }
    if (line[i] == '\r' && i + 1 == line.size()) break;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), v);
    const std::size_t col = first_col + i;
    if (ec == std::errc::result_out_of_range) throw ParseError(lineno, col, "number too large");
    if (ec != std::errc() || ptr == line.data() + i)
      throw ParseError(lineno, col, "expected a non-negative integer");
    const std::size_t next = static_cast<std::size_t>(ptr - line.data());
    if (next < line.size() && line[next] != ' ' && line[next] != '\t' && line[next] != '\r')
      throw ParseError(lineno, first_col + next, "unexpected character");
    out.push_back(v);
    i = next;
  }
  return out;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

std::string export_cube(const SparseCube& cube) {
  std::ostringstream out;
  write_cube(out, cube);
  return out.str();
}

void write_cube(std::ostream& out, const SparseCube& cube) {
  out << "dims:";
  for (auto n : cube.dims().extents()) out << ' ' << n;
  out << '\n';
  std::string buf;
  for (std::size_t c = 0; c < cube.cell_count(); ++c) {
    buf.clear();
    auto cell = cube.cell(c);
    for (std::size_t j = 0; j < cell.size(); ++j) {
      if (j) buf.push_back(' ');
      buf += std::to_string(cell[j]);
    }
    buf.push_back('\n');
    out << buf;
  }
}

SparseCube import_cube(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "missing 'dims:' header");
  constexpr std::string_view tag = "dims:";
  if (lines[0].substr(0, tag.size()) != tag) throw ParseError(1, 1, "missing 'dims:' header");
  const auto extents = parse_numbers(lines[0].substr(tag.size()), 1, tag.size() + 1);
  if (extents.empty()) throw ParseError(1, tag.size() + 1, "no extents given");
  std::vector<std::size_t> ext;
  for (std::size_t j = 0; j < extents.size(); ++j) {
    if (extents[j] == 0) throw ParseError(1, tag.size() + 1, "extent must be positive");
    if (extents[j] > std::numeric_limits<Index>::max())
      throw ParseError(1, tag.size() + 1, "extent too large");
    ext.push_back(static_cast<std::size_t>(extents[j]));
  }
  const std::size_t d = ext.size();
  std::vector<Index> flat;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (blank(lines[l])) {
      // Only trailing blank lines are tolerated.
      for (std::size_t k = l + 1; k < lines.size(); ++k)
        if (!blank(lines[k])) throw ParseError(l + 1, 1, "blank line inside cell list");
      break;
    }
    const auto v = parse_numbers(lines[l], l + 1);
    if (v.size() != d)
      throw ParseError(l + 1, 1,
                       "expected " + std::to_string(d) + " coordinates, got " +
                           std::to_string(v.size()));
    for (std::size_t j = 0; j < d; ++j) {
      if (v[j] >= ext[j])
        throw ParseError(l + 1, 1,
                         "coordinate " + std::to_string(v[j]) + " out of range for dimension " +
                             std::to_string(j) + " (extent " + std::to_string(ext[j]) + ")");
      flat.push_back(static_cast<Index>(v[j]));
    }
  }
  return SparseCube::from_flat(std::move(flat), CubeDims(std::move(ext)));
}

SparseCube read_cube(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return import_cube(text);
}

std::string export_normalization(const Normalization& norm) {
  std::string out;
  for (const auto& p : norm.perms()) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out.push_back(' ');
      out += std::to_string(p[i]);
    }
    out.push_back('\n');
  }
  return out;
}

Normalization import_normalization(const std::string& text) {
  auto lines = split_lines(text);
  while (!lines.empty() && blank(lines.back())) lines.pop_back();
  if (lines.empty()) throw ParseError(1, 1, "no permutations");
  std::vector<Permutation> perms;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto v = parse_numbers(lines[l], l + 1);
    if (v.empty()) throw ParseError(l + 1, 1, "empty permutation");
    std::vector<Index> map;
    for (auto x : v) {
      if (x >= v.size())
        throw ParseError(l + 1, 1, "entry " + std::to_string(x) + " out of range");
      map.push_back(static_cast<Index>(x));
    }
    try {
      perms.emplace_back(std::move(map));
    } catch (const CubeError& e) {
      throw ParseError(l + 1, 1, e.what());
    }
  }
  return Normalization(std::move(perms));
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CubeError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CubeError("cannot write '" + path + "'");
  out << text;
  if (!out) throw CubeError("write to '" + path + "' failed");
}

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw CubeError(path + ":" + e.what());
  }
}

}  // namespace

SparseCube load_cube_file(const std::string& path) {
  return with_path(path, [&] { return import_cube(slurp(path)); });
}

void save_cube_file(const std::string& path, const SparseCube& cube) {
  spit(path, export_cube(cube));
}

Normalization load_normalization_file(const std::string& path) {
  return with_path(path, [&] { return import_normalization(slurp(path)); });
}

void save_normalization_file(const std::string& path, const Normalization& norm) {
  spit(path, export_normalization(norm));
}

}  // namespace cubenorm
