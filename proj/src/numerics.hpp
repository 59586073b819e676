#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "matform.hpp"

// Dense symmetric kernels behind the attacks: a positive-definite solver and
// a symmetric eigendecomposition (which doubles as the SVD of Gram matrices).

namespace ilwe {

// A pivot or leading minor failed positivity: the system is singular or
// indefinite, typically because too few or degenerate samples were absorbed.
struct SingularOrIndefiniteError : std::runtime_error {
  explicit SingularOrIndefiniteError(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergenceError : std::runtime_error {
  explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct SymmetricEigen {
  std::vector<double> values;  // sorted descending
  DenseMatrix vectors;         // column j is the unit eigenvector for values[j]
};

// Cholesky solve of B x = y for symmetric positive-definite B. Symmetry is
// enforced to relative tolerance 1e-9.
std::vector<double> solve_spd(const DenseMatrix& b, std::span<const double> y);

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvalues are
// reported as computed (near-zero negatives are the caller's to interpret),
// sorted descending with ties broken by original column index. Each
// eigenvector's entry of largest magnitude is made nonnegative. Exceeding the
// sweep budget is an error, never a silent return.
SymmetricEigen sym_eig(const DenseMatrix& b);

// Least squares via the normal equations: solve (A^T A) x = A^T b.
std::vector<double> lstsq_via_gram(const DenseMatrix& a, std::span<const double> b);

}  // namespace ilwe
