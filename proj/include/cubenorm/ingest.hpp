#pragma once

#include "cubenorm/cube.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cubenorm {

/// Error in a text payload, with a 1-based line and column.
class ParseError : public CubeError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Column names plus, per column, the raw value of each index in first-seen order.
struct RelationSchema {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> values;

  /// Index of `value` in column `col`, if it was seen.
  std::optional<Index> index_of(std::size_t col, const std::string& value) const;

 private:
  friend struct RelationBuilder;
  std::vector<std::unordered_map<std::string, Index>> lookup_;
};

struct LoadedRelation {
  SparseCube cube;
  RelationSchema schema;
};

/// Each column becomes a dimension; a value's index is the number of distinct
/// values seen in that column before its first occurrence. Throws on empty
/// input or ragged rows.
LoadedRelation load_relation(const std::vector<std::vector<std::string>>& rows,
                             std::vector<std::string> column_names = {});

struct CsvOptions {
  bool header = false;
  char delimiter = ',';
  /// Zero-based column holding a measure; it is read and discarded.
  std::optional<std::size_t> measure_column;
};

/// RFC 4180 style records: quoted fields may contain delimiters, quotes ("")
/// and newlines.
std::vector<std::vector<std::string>> read_csv_records(std::istream& in, char delimiter = ',');
LoadedRelation load_csv(std::istream& in, const CsvOptions& options = {});

/// Decodes attribute indices back to raw values, one row per allocated cell.
std::vector<std::vector<std::string>> relation_rows(const SparseCube& cube,
                                                    const RelationSchema& schema);

/// Text cube format:
///   dims: n1 n2 ... nd
///   i1 i2 ... id        (one allocated cell per line, 0-based)
/// Lines are LF-terminated; cells are written in lexicographic order.
std::string export_cube(const SparseCube& cube);
void write_cube(std::ostream& out, const SparseCube& cube);
SparseCube import_cube(const std::string& text);
SparseCube read_cube(std::istream& in);

/// Normalization format: line j lists g_j(0) ... g_j(n_j - 1).
std::string export_normalization(const Normalization& norm);
Normalization import_normalization(const std::string& text);

SparseCube load_cube_file(const std::string& path);
void save_cube_file(const std::string& path, const SparseCube& cube);
Normalization load_normalization_file(const std::string& path);
void save_normalization_file(const std::string& path, const Normalization& norm);

}  // namespace cubenorm
