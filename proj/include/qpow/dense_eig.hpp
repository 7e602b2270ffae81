#pragma once

#include <vector>

#include "qpow/dense_matrix.hpp"

namespace qpow {

// Full spectrum of a symmetric matrix, eigenvalues ascending.
// vectors[k] is the unit-norm eigenvector paired with values[k].
struct DenseEig {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

// Cyclic Jacobi rotations; intended for dimensions up to a few hundred.
DenseEig jacobi_eigensystem(const DenseMatrix& m, int max_sweeps = 100);

struct SmallestEig {
  double value = 0.0;
  std::vector<double> vector;
};

// Smallest eigenvalue and its eigenvector. Uses the Jacobi solver for
// modest dimensions and a shifted power iteration above that. Throws
// std::runtime_error if the residual test fails.
SmallestEig dense_eig_smallest(const DenseMatrix& m);

}  // namespace qpow
