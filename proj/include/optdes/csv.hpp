#ifndef OPTDES_CSV_HPP
#define OPTDES_CSV_HPP

#include <Eigen/Dense>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "optdes/errors.hpp"

namespace optdes {

// Dense matrix CSV: no header, comma-separated, `.` decimal, blank lines
// ignored. Parse failures carry the 1-based line number.
inline Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = true;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    }
    if (blank) continue;

    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t pos = 0;
      double value;
      try {
        value = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw ParseError("cannot parse '" + cell + "' as a number", lineno);
      }
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos != cell.size()) {
        throw ParseError("trailing characters in cell '" + cell + "'", lineno);
      }
      row.push_back(value);
    }
    if (row.empty()) throw ParseError("empty row", lineno);
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw ParseError("row has " + std::to_string(row.size()) + " columns, expected " +
                           std::to_string(width),
                       lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows", lineno);

  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return M;
}

inline Eigen::MatrixXd read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_matrix_csv(in);
}

inline void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& M) {
  char buf[64];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
      out << (j > 0 ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace optdes

#endif  // OPTDES_CSV_HPP
