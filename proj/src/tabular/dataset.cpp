#include "cfx/tabular/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "cfx/error.hpp"

namespace cfx {

void Dataset::validate() const {
  if (rows.size() != labels.size())
    throw Error(ErrorKind::LengthMismatch, std::to_string(rows.size()) + " rows but " +
                                               std::to_string(labels.size()) + " labels");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    schema.validate(rows[r], r);
    if (labels[r] != 0 && labels[r] != 1)
      throw Error(ErrorKind::OutOfRangeValue, "label must be 0 or 1", schema.label_name(), r);
  }
}

std::vector<double> Dataset::column(std::size_t feature) const {
  std::vector<double> col;
  col.reserve(rows.size());
  for (const auto& row : rows) col.push_back(row[feature]);
  return col;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out{schema, {}, {}};
  out.rows.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (auto i : indices) {
    out.rows.push_back(rows.at(i));
    out.labels.push_back(labels.at(i));
  }
  return out;
}

std::size_t Dataset::count_label(Label label) const {
  std::size_t n = 0;
  for (auto l : labels) n += (l == label);
  return n;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
    std::size_t start = 0;
    while (start < cell.size() && cell[start] == ' ') ++start;
    cells.push_back(cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_number(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Dataset read_csv(std::istream& in, const FeatureSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::MalformedRow, "missing header row");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
  const auto header = split_line(line);

  const std::size_t n_features = schema.size();
  for (std::size_t i = 0; i < n_features; ++i) {
    const auto& name = schema.feature(i).name;
    if (i >= header.size() || header[i] != name) {
      bool present = false;
      for (const auto& h : header) present |= (h == name);
      throw Error(present ? ErrorKind::MalformedRow : ErrorKind::MissingColumn,
                  present ? "column out of schema order" : "column not found in header", name);
    }
  }
  if (header.size() <= n_features || header[n_features] != schema.label_name())
    throw Error(ErrorKind::MissingColumn, "label column not found in header", schema.label_name());
  if (header.size() != n_features + 1)
    throw Error(ErrorKind::MalformedRow, "unexpected extra columns in header");

  Dataset data{schema, {}, {}};
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (cells.size() != n_features + 1)
      throw Error(ErrorKind::MalformedRow,
                  "expected " + std::to_string(n_features + 1) + " cells, got " +
                      std::to_string(cells.size()),
                  std::nullopt, row);
    Instance inst;
    inst.values.resize(n_features);
    for (std::size_t i = 0; i < n_features; ++i) {
      if (!parse_number(cells[i], inst[i]))
        throw Error(ErrorKind::MalformedRow, "cannot parse '" + cells[i] + "' as a number",
                    schema.feature(i).name, row);
    }
    schema.validate(inst, row);
    double label = 0;
    if (!parse_number(cells[n_features], label) || (label != 0.0 && label != 1.0))
      throw Error(ErrorKind::OutOfRangeValue, "label must be 0 or 1", schema.label_name(), row);
    data.rows.push_back(std::move(inst));
    data.labels.push_back(static_cast<Label>(label));
    ++row;
  }
  return data;
}

Dataset load_csv(const std::string& path, const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return read_csv(in, schema);
}

void write_csv(std::ostream& out, const Dataset& data) {
  const auto& schema = data.schema;
  for (const auto& f : schema.features()) out << f.name << ',';
  out << schema.label_name() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t i = 0; i < schema.size(); ++i) {
      const double v = data.rows[r][i];
      if (schema.feature(i).kind == FeatureKind::Ordinal)
        out << static_cast<long long>(v);
      else
        out << v;
      out << ',';
    }
    out << data.labels[r] << '\n';
  }
}

void save_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  write_csv(out, data);
}

}  // namespace cfx
