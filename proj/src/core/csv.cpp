#include "core/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace difflab {

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  std::vector<std::string> cells = std::move(header);
  add_row(cells);
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvWriter::escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (width_ == 0) width_ = cells.size();
  if (cells.size() != width_) throw std::invalid_argument("csv: row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += escape(cells[i]);
  }
  text_ += "\r\n";
}

void CsvWriter::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format(v));
  add_row(cells);
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("csv: cannot open " + path + " for writing");
  f << text_;
  if (!f) throw std::runtime_error("csv: short write to " + path);
}

namespace {
std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace

int CsvTable::col(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("csv: cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("csv: empty file " + path);
  for (auto& cell : split_line(line)) t.header.push_back(cell);
  while (std::getline(f, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Eigen::MatrixXd read_samples_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.rows.empty()) throw std::runtime_error("csv: no samples in " + path);
  const int dim = static_cast<int>(t.header.size());
  Eigen::MatrixXd m(dim, t.rows.size());
  for (size_t j = 0; j < t.rows.size(); ++j)
    for (int i = 0; i < dim; ++i) m(i, j) = t.rows[j][i];
  return m;
}

void write_samples_csv(const std::string& path, const Eigen::MatrixXd& samples) {
  std::vector<std::string> header;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) header.push_back("x" + std::to_string(i));
  CsvWriter w(header);
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    std::vector<double> row(samples.rows());
    for (Eigen::Index i = 0; i < samples.rows(); ++i) row[i] = samples(i, j);
    w.add_row(row);
  }
  w.write(path);
}

}  // namespace difflab
