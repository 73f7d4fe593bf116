#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "tqo/error.hpp"

namespace tqo {

using Complex = std::complex<double>;
using Triplet = Eigen::Triplet<Complex>;

// Sparse complex operator on a finite-dimensional space. Entries below
// 1e-15 in magnitude are dropped at assembly; the hermitian flag is set
// iff max|A - A'| <= 1e-12 entrywise.
struct SparseOperator {
  Eigen::SparseMatrix<Complex> mat;
  bool hermitian = false;

  int64_t dim() const { return mat.rows(); }
};

inline constexpr double kDropTolerance = 1e-15;
inline constexpr double kHermitianTolerance = 1e-12;

SparseOperator make_sparse(int64_t dim, const std::vector<Triplet>& entries);
SparseOperator sparse_identity(int64_t dim);
SparseOperator sparse_zero(int64_t dim);

SparseOperator adjoint(const SparseOperator& a);
SparseOperator compose(const SparseOperator& a, const SparseOperator& b);
SparseOperator add(const SparseOperator& a, const SparseOperator& b);
SparseOperator scale(Complex s, const SparseOperator& a);

Complex trace(const SparseOperator& a);
// tr(a' b), the Frobenius inner product.
Complex frobenius_inner(const SparseOperator& a, const SparseOperator& b);
double frobenius_norm(const SparseOperator& a);
double max_abs(const SparseOperator& a);
double hermiticity_defect(const SparseOperator& a);  // max|A - A'|

Eigen::VectorXcd apply_to(const SparseOperator& a, const Eigen::VectorXcd& x);
Eigen::MatrixXcd to_dense(const SparseOperator& a);

// Apply-only operator for dimensions beyond assembly caps.
struct LinearMap {
  int64_t dim = 0;
  std::function<void(const Complex* in, Complex* out)> apply_fn;
};

LinearMap as_linear_map(const SparseOperator& a);
Eigen::VectorXcd apply_to(const LinearMap& a, const Eigen::VectorXcd& x);
// Exact trace by basis application; guarded against large dims.
Complex trace(const LinearMap& a);

}  // namespace tqo
