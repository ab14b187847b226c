#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "multifuse/simbuild.hpp"

namespace multifuse::io {

/// Shortest decimal text that reads back to the same double (never more than
/// 17 significant digits).
std::string format_double(double v);

/// Parses a whole field as a double; `where` names the location for errors.
double parse_double(std::string_view field, const std::string& where);

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Comma-separated records. Double-quoted fields may contain commas and
/// doubled quotes; blank lines are skipped. The first record is the header.
struct CsvDocument {
  std::filesystem::path path;
  CsvRow header;
  std::vector<CsvRow> rows;
};

CsvDocument read_csv(const std::filesystem::path& path);
CsvDocument parse_csv(std::string_view text, const std::filesystem::path& origin);

std::string csv_field(std::string_view s);

/// Square matrix with a labelled header row and first column:
///   ,a,b
///   a,1,0.4
///   b,0.4,1
SimilarityLayer read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const Labels& labels, const Eigen::MatrixXd& m);

/// Writes `content` to `path`, raising IoError with the path on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace multifuse::io
