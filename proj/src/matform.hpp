#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ring.hpp"

// Matrix representation of multiplication in R and R^k: per-sample design
// blocks and stacked integer-LWE instances, stored densely over doubles.
// Entries created from ring elements are exact integers well inside the
// binary64 integer range.

namespace ilwe {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double max_abs() const;
  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;  // row-major
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x);

// b = A s + e over the integers, no modular reduction. For sample-derived
// instances A has m*n*k rows and n*k columns.
struct IlweInstance {
  DenseMatrix A;
  std::vector<double> b;

  std::size_t rows() const { return A.rows(); }
  std::size_t cols() const { return A.cols(); }
};

// Matrix of multiplication by f under the monomial basis (1, X, ..., X^{n-1}):
// column j holds coeff(X^j f mod X^n+1).
DenseMatrix negacyclic_matrix(const Poly& f);

// Per-sample design D = (blockdiag_k(C) || sign * coeff(z)) of shape
// kn x (kn+1), where C is the negacyclic matrix of c. sign -1 yields the
// (C || -Z) form used by the SVD accumulation.
DenseMatrix block_design(const Poly& c, const PolyVec& z, int sign);

// Stack m samples into A (m*n*k x n*k) and b (m*n*k): for the true secret,
// b - A coeff(s) equals the stacked mask coefficients.
IlweInstance assemble_instance(std::span<const PolyVec> zs, std::span<const Poly> cs);

// 1-indexed inclusive submatrix copy M[r0:r1, c0:c1].
DenseMatrix submatrix(const DenseMatrix& m, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1);

// Plain-text instance format: "ilwe <rows> <cols>", one A row per line of
// space-separated integers, a line "b", then b entries one per line.
void save_instance(const IlweInstance& inst, std::ostream& os);
void save_instance(const IlweInstance& inst, const std::string& path);
IlweInstance load_instance(std::istream& is);
IlweInstance load_instance(const std::string& path);

}  // namespace ilwe
