#pragma once

#include "redamge/relmat.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace redamge::mm {

// Coordinate files use the header "%%MatrixMarket matrix coordinate real general".
// Relations are written with value 1.0; entity kinds travel in a "% kinds:" comment.

void write(std::ostream& os, const SparseMatrix& a);
void write(std::ostream& os, const Relation& r);
void write(const std::filesystem::path& path, const SparseMatrix& a);
void write(const std::filesystem::path& path, const Relation& r);

SparseMatrix read_matrix(std::istream& is);
/// Nonzero entries become relation pairs.
Relation read_relation(std::istream& is);
SparseMatrix read_matrix(const std::filesystem::path& path);
Relation read_relation(const std::filesystem::path& path);

/// Dense column vector in "%%MatrixMarket matrix array real general" format.
void write_array(std::ostream& os, std::span<const double> v);
void write_array(const std::filesystem::path& path, std::span<const double> v);
std::vector<double> read_array(std::istream& is);

}  // namespace redamge::mm
