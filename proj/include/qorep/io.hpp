#pragma once
// Versioned MatrixFile serialization (JSON, 17 significant digits).

#include <string>

#include "qorep/genmatrix.hpp"

namespace qorep {

inline constexpr int kMatrixFileVersion = 1;

// Deterministic JSON text for a matrix set (byte-identical across runs).
std::string serialize_matrix_file(const GenMatrixSet& M);
GenMatrixSet parse_matrix_file(const std::string& text);

void write_matrix_file(const GenMatrixSet& M, const std::string& path);
GenMatrixSet read_matrix_file(const std::string& path);

}  // namespace qorep
