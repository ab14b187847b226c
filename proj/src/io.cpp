#include "multifuse/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace multifuse::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

}  // namespace

double parse_double(std::string_view field, const std::string& where) {
  const std::string_view t = trim(field);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (t.empty() || res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorKind::ParseError, where + ": '" + std::string(field) + "' is not a number");
  }
  return v;
}

CsvDocument parse_csv(std::string_view text, const std::filesystem::path& origin) {
  CsvDocument doc;
  doc.path = origin;
  std::vector<CsvRow> records;
  CsvRow current;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  std::size_t line = 1;
  current.line = line;

  const auto end_field = [&] {
    current.fields.push_back(field_quoted ? field : std::string(trim(field)));
    field.clear();
    field_quoted = false;
  };
  const auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = CsvRow{};
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!trim(field).empty()) {
          throw Error(ErrorKind::ParseError, location(origin, line) + ": stray quote");
        }
        field.clear();
        in_quotes = true;
        field_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) throw Error(ErrorKind::ParseError, location(origin, line) + ": unterminated quote");
  if (!field.empty() || !current.fields.empty()) end_record();

  if (records.empty()) throw Error(ErrorKind::EmptyTable, origin.string() + ": no header row");
  doc.header = std::move(records.front());
  doc.rows.assign(std::make_move_iterator(records.begin() + 1),
                  std::make_move_iterator(records.end()));
  for (const auto& row : doc.rows) {
    if (row.fields.size() != doc.header.fields.size()) {
      throw Error(ErrorKind::ParseError,
                  location(origin, row.line) + ": expected " +
                      std::to_string(doc.header.fields.size()) + " fields, found " +
                      std::to_string(row.fields.size()));
    }
  }
  return doc;
}

CsvDocument read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), path);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos && trim(s) == s) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

SimilarityLayer read_matrix_csv(const std::filesystem::path& path) {
  const CsvDocument doc = read_csv(path);
  const std::size_t n = doc.header.fields.size() - 1;
  if (n == 0 || doc.rows.empty()) throw Error(ErrorKind::EmptyTable, path.string() + ": empty matrix");
  if (doc.rows.size() != n) {
    throw Error(ErrorKind::ParseError, path.string() + ": header lists " + std::to_string(n) +
                                           " nodes but there are " +
                                           std::to_string(doc.rows.size()) + " rows");
  }
  Labels labels(doc.header.fields.begin() + 1, doc.header.fields.end());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const CsvRow& row = doc.rows[i];
    if (row.fields[0] != labels[i]) {
      throw Error(ErrorKind::ParseError, location(path, row.line) + ": row label '" +
                                             row.fields[0] + "' does not match column '" +
                                             labels[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_double(row.fields[j + 1], location(path, row.line));
    }
  }
  if (!m.allFinite()) throw Error(ErrorKind::ParseError, path.string() + ": non-finite entry");
  return SimilarityLayer(std::move(labels), SymMatrix(m), SimilarityKind::External);
}

void write_matrix_csv(std::ostream& out, const Labels& labels, const Eigen::MatrixXd& m) {
  for (const auto& label : labels) out << ',' << csv_field(label);
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << csv_field(labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
    out << '\n';
  }
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace multifuse::io
