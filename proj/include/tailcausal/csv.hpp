#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tailcausal/errors.hpp"
#include "tailcausal/matrix.hpp"

namespace tailcausal {

struct IngestOptions {
  std::string group_column;  // optional non-numeric column (e.g. catchment id)
  std::string time_column;   // optional non-numeric column, carried through
};

struct IngestResult {
  SampleMatrix data;
  std::vector<std::string> group_labels;  // per row; empty when no group column
  std::vector<std::string> time_labels;   // per row; empty when no time column
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline double parse_cell(const std::string& cell, std::size_t row1,
                         std::size_t col1) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError("non-numeric cell '" + cell + "' at row " +
                     std::to_string(row1) + ", column " + std::to_string(col1));
  return value;
}

}  // namespace detail

/// Parse a comma-separated file with a header row. All fields must be
/// numeric except the designated group/time columns. Row order is preserved;
/// parse errors name the offending data row and column (both 1-based).
inline IngestResult ingest_csv(const std::string& path,
                               const IngestOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");

  std::string line;
  if (!std::getline(in, line))
    throw ParseError("file '" + path + "' is empty (missing header)");
  const std::vector<std::string> header = detail::split_csv_line(line);

  std::size_t group_idx = header.size(), time_idx = header.size();
  std::vector<std::string> numeric_names;
  std::vector<std::size_t> numeric_idx;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (!opts.group_column.empty() && header[j] == opts.group_column) {
      group_idx = j;
    } else if (!opts.time_column.empty() && header[j] == opts.time_column) {
      time_idx = j;
    } else {
      numeric_names.push_back(header[j]);
      numeric_idx.push_back(j);
    }
  }
  if (!opts.group_column.empty() && group_idx == header.size())
    throw ParameterError("group column '" + opts.group_column + "' not in header");
  if (!opts.time_column.empty() && time_idx == header.size())
    throw ParameterError("time column '" + opts.time_column + "' not in header");
  if (numeric_names.empty()) throw ParseError("no numeric columns in '" + path + "'");

  std::vector<double> values;
  std::vector<std::string> groups, times;
  std::size_t row1 = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    ++row1;
    const std::vector<std::string> fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError("ragged row " + std::to_string(row1) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    for (std::size_t k = 0; k < numeric_idx.size(); ++k)
      values.push_back(detail::parse_cell(fields[numeric_idx[k]], row1,
                                          numeric_idx[k] + 1));
    if (group_idx < header.size()) groups.push_back(fields[group_idx]);
    if (time_idx < header.size()) times.push_back(fields[time_idx]);
  }
  if (row1 == 0) throw InsufficientDataError("file '" + path + "' has no data rows");

  IngestResult out;
  const std::size_t n_cols = numeric_names.size();
  out.data = SampleMatrix(row1, n_cols, std::move(values), std::move(numeric_names));
  out.group_labels = std::move(groups);
  out.time_labels = std::move(times);
  return out;
}

/// Split an ingested table into per-group matrices, keyed and ordered by the
/// group label.
inline std::map<std::string, SampleMatrix> split_by_group(const IngestResult& in) {
  std::map<std::string, SampleMatrix> out;
  if (in.group_labels.empty()) {
    out.emplace("", in.data);
    return out;
  }
  std::map<std::string, std::vector<std::size_t>> rows;
  for (std::size_t i = 0; i < in.group_labels.size(); ++i)
    rows[in.group_labels[i]].push_back(i);
  for (const auto& [label, idx] : rows) {
    SampleMatrix m(idx.size(), in.data.cols());
    m.set_column_names(in.data.column_names());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t j = 0; j < in.data.cols(); ++j)
        m(r, j) = in.data(idx[r], j);
    out.emplace(label, std::move(m));
  }
  return out;
}

/// Shortest-exact formatting: the printed decimal parses back to the same
/// double, so written files round-trip bit-for-bit.
inline std::string format_double(double v) {
  char buf[32];
  const std::size_t len = static_cast<std::size_t>(
      std::snprintf(buf, sizeof(buf), "%.17g", v));
  // Prefer a shorter representation when it is exact.
  for (int prec = 1; prec <= 16; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    double back = 0.0;
    std::from_chars(shorter, shorter + std::string_view(shorter).size(), back);
    if (back == v) return shorter;
  }
  return std::string(buf, len);
}

inline void write_csv(const std::string& path, const SampleMatrix& m) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write to '" + path + "'");
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (j > 0) out << ',';
    out << m.column_names()[j];
  }
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace tailcausal
