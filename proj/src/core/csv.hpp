#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace difflab {

// RFC-4180 output: CRLF rows, quoting only when needed, floats at 17
// significant digits with '.' decimal separator.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  void add_row(const std::vector<double>& values);
  const std::string& text() const { return text_; }
  void write(const std::string& path) const;

  static std::string format(double v);
  static std::string escape(const std::string& cell);

 private:
  std::string text_;
  size_t width_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int col(const std::string& name) const;  // -1 when absent
};

// numeric CSV reader for sample files and sweep outputs
CsvTable read_csv(const std::string& path);

// sample matrix (dim x n) from a CSV with header x0,x1,...
Eigen::MatrixXd read_samples_csv(const std::string& path);
void write_samples_csv(const std::string& path, const Eigen::MatrixXd& samples);

}  // namespace difflab
