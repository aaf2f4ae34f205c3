#pragma once

#include <string>
#include <vector>

#include "sgspec/potential.hpp"
#include "sgspec/spectral.hpp"
#include "sgspec/types.hpp"

namespace sgspec {

// Byte-stable serialization: fixed key order, 17 significant digits.

std::string format_g17(double x);

std::string potential_to_json(const PeriodicPotential& p);
PeriodicPotential potential_from_json(const std::string& text);

std::string divisor_to_json(const SpectralDivisor& D);
SpectralDivisor divisor_from_json(const std::string& text);

std::string branch_points_to_json(const BranchPointSet& B);
BranchPointSet branch_points_from_json(const std::string& text);

// { "lambda": [re,im], "M": [[re,im] x4 row-major], "det_err": real }
std::string monodromy_record(cplx lambda, const Matrix2C& M);

std::vector<cplx> grid_from_json(const std::string& text);  // [[re,im],...]

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Minimal CSV writer: header row then %.17g-formatted cells.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }

 private:
  size_t width_;
  std::string text_;
};

}  // namespace sgspec
