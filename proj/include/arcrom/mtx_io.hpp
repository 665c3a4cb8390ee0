#pragma once

#include <string>

#include "arcrom/types.hpp"

namespace arcrom::io {

// Matrix Market I/O. Coordinate format with 1-based indices for sparse
// matrices (symmetric storage writes the lower triangle), dense "array"
// format for basis/mode matrices. Values are printed with 17 significant
// digits so a write/read round trip reproduces the stored doubles exactly.

void write_matrix_market(const SpMat& matrix, const std::string& path, bool symmetric = false);

SpMat read_matrix_market(const std::string& path);

void write_dense_matrix_market(const Mat& matrix, const std::string& path);

Mat read_dense_matrix_market(const std::string& path);

/// Plain whitespace-delimited text, one value per line.
void write_vector(const Vec& v, const std::string& path);

Vec read_vector(const std::string& path);

}  // namespace arcrom::io
