#ifndef LEVYSPEC_ORACLE_HPP
#define LEVYSPEC_ORACLE_HPP

#include <cstddef>
#include <vector>

#include "levyspec/grid.hpp"
#include "levyspec/operators.hpp"

namespace levyspec {

inline constexpr std::size_t kMaxDenseDimension = 5000;

struct DenseOperator {
  std::size_t dimension = 0;
  std::vector<double> entries;  // row-major

  double operator()(std::size_t i, std::size_t j) const { return entries[i * dimension + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries[i * dimension + j]; }
  double max_abs() const;
};

/// Column j is H applied to the j-th unit vector.
DenseOperator assemble_dense(const HamiltonianSpec& H, const Grid& grid, unsigned workers = 0);

struct DenseEigenpairs {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // unit Euclidean norm
};

/// Lowest n eigenpairs of a symmetric matrix (Householder tridiagonalization + implicit QL).
DenseEigenpairs dense_eigensolve(const DenseOperator& A, std::size_t n);

}  // namespace levyspec

#endif  // LEVYSPEC_ORACLE_HPP
