#include "cdiquant/matrix_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cdiquant/errors.hpp"

namespace cdiquant {

MatC read_complex_matrix(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    throw std::invalid_argument("matrix read: bad header, expected 'rows cols'");
  MatC m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im))
        throw std::invalid_argument("matrix read: truncated data at row " +
                                    std::to_string(i) + ", col " + std::to_string(j));
      m(i, j) = cdouble(re, im);
    }
  }
  return m;
}

MatC read_complex_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open matrix file '" + path + "'");
  return read_complex_matrix(in);
}

void write_complex_matrix(std::ostream& out, const MatC& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g", m(i, j).real(), m(i, j).imag());
      out << buf << (j + 1 < m.cols() ? " " : "");
    }
    out << '\n';
  }
}

void write_complex_matrix_file(const std::string& path, const MatC& m) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open '" + path + "' for writing");
  write_complex_matrix(out, m);
}

void write_codebook(std::ostream& out, const Codebook& codebook) {
  for (const MatC& entry : codebook.entries) write_complex_matrix(out, entry);
}

}  // namespace cdiquant
