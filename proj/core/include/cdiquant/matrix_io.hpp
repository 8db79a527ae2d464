#pragma once

#include <iosfwd>
#include <string>

#include "cdiquant/codebooks.hpp"
#include "cdiquant/linalg.hpp"

namespace cdiquant {

// Complex matrix text format: first line "rows cols", then one line per row
// with "re im" pairs for each column.
MatC read_complex_matrix(std::istream& in);
MatC read_complex_matrix_file(const std::string& path);
void write_complex_matrix(std::ostream& out, const MatC& m);
void write_complex_matrix_file(const std::string& path, const MatC& m);

// Codebook export for inspection: the codewords as consecutive matrix
// blocks, readable back with repeated read_complex_matrix calls.
void write_codebook(std::ostream& out, const Codebook& codebook);

}  // namespace cdiquant
