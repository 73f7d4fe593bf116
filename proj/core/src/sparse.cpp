#include "tqo/sparse.hpp"

#include <cmath>

namespace tqo {

namespace {

void prune_and_flag(SparseOperator& op) {
  op.mat.prune([](int, int, const Complex& v) {
    return std::abs(v) >= kDropTolerance;
  });
  op.mat.makeCompressed();
  op.hermitian = hermiticity_defect(op) <= kHermitianTolerance;
}

int checked_int_dim(int64_t dim) {
  if (dim < 1) throw InvalidInput("operator dimension must be positive");
  if (dim > (int64_t(1) << 30))
    throw CapExceeded("sparse operator dimension " + std::to_string(dim) +
                      " exceeds index range");
  return static_cast<int>(dim);
}

}  // namespace

SparseOperator make_sparse(int64_t dim, const std::vector<Triplet>& entries) {
  const int n = checked_int_dim(dim);
  SparseOperator op;
  op.mat.resize(n, n);
  op.mat.setFromTriplets(entries.begin(), entries.end());
  prune_and_flag(op);
  return op;
}

SparseOperator sparse_identity(int64_t dim) {
  const int n = checked_int_dim(dim);
  SparseOperator op;
  op.mat.resize(n, n);
  op.mat.setIdentity();
  op.hermitian = true;
  return op;
}

SparseOperator sparse_zero(int64_t dim) {
  const int n = checked_int_dim(dim);
  SparseOperator op;
  op.mat.resize(n, n);
  op.hermitian = true;
  return op;
}

SparseOperator adjoint(const SparseOperator& a) {
  SparseOperator op;
  op.mat = a.mat.adjoint();
  op.mat.makeCompressed();
  op.hermitian = a.hermitian;
  return op;
}

SparseOperator compose(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim())
    throw InvalidInput("compose: dimension mismatch " +
                       std::to_string(a.dim()) + " vs " +
                       std::to_string(b.dim()));
  SparseOperator op;
  op.mat = a.mat * b.mat;
  prune_and_flag(op);
  return op;
}

SparseOperator add(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim())
    throw InvalidInput("add: dimension mismatch " + std::to_string(a.dim()) +
                       " vs " + std::to_string(b.dim()));
  SparseOperator op;
  op.mat = a.mat + b.mat;
  prune_and_flag(op);
  return op;
}

SparseOperator scale(Complex s, const SparseOperator& a) {
  SparseOperator op;
  op.mat = s * a.mat;
  prune_and_flag(op);
  return op;
}

Complex trace(const SparseOperator& a) {
  Complex t = 0.0;
  for (int k = 0; k < a.mat.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(a.mat, k); it; ++it)
      if (it.row() == it.col()) t += it.value();
  return t;
}

Complex frobenius_inner(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim())
    throw InvalidInput("frobenius_inner: dimension mismatch");
  Complex t = 0.0;
  // Both matrices are column-major with sorted inner indices.
  for (int k = 0; k < a.mat.outerSize(); ++k) {
    Eigen::SparseMatrix<Complex>::InnerIterator ia(a.mat, k);
    Eigen::SparseMatrix<Complex>::InnerIterator ib(b.mat, k);
    while (ia && ib) {
      if (ia.row() < ib.row()) {
        ++ia;
      } else if (ib.row() < ia.row()) {
        ++ib;
      } else {
        t += std::conj(ia.value()) * ib.value();
        ++ia;
        ++ib;
      }
    }
  }
  return t;
}

double frobenius_norm(const SparseOperator& a) {
  double s = 0.0;
  for (int k = 0; k < a.mat.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(a.mat, k); it; ++it)
      s += std::norm(it.value());
  return std::sqrt(s);
}

double max_abs(const SparseOperator& a) {
  double m = 0.0;
  for (int k = 0; k < a.mat.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(a.mat, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

double hermiticity_defect(const SparseOperator& a) {
  Eigen::SparseMatrix<Complex> diff =
      Eigen::SparseMatrix<Complex>(a.mat.adjoint()) - a.mat;
  double m = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(diff, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

Eigen::VectorXcd apply_to(const SparseOperator& a, const Eigen::VectorXcd& x) {
  if (x.size() != a.dim()) throw InvalidInput("apply: dimension mismatch");
  return a.mat * x;
}

Eigen::MatrixXcd to_dense(const SparseOperator& a) {
  if (a.dim() > (1 << 14))
    throw CapExceeded("dense conversion above 2^14 is not allowed");
  return Eigen::MatrixXcd(a.mat);
}

LinearMap as_linear_map(const SparseOperator& a) {
  LinearMap m;
  m.dim = a.dim();
  // The map holds its own copy so it outlives the operator.
  m.apply_fn = [mat = a.mat, n = a.dim()](const Complex* in, Complex* out) {
    Eigen::Map<const Eigen::VectorXcd> x(in, n);
    Eigen::Map<Eigen::VectorXcd> y(out, n);
    y = mat * x;
  };
  return m;
}

Eigen::VectorXcd apply_to(const LinearMap& a, const Eigen::VectorXcd& x) {
  if (x.size() != a.dim) throw InvalidInput("apply: dimension mismatch");
  Eigen::VectorXcd y(a.dim);
  a.apply_fn(x.data(), y.data());
  return y;
}

Complex trace(const LinearMap& a) {
  if (a.dim > (1 << 14))
    throw CapExceeded("basis-sum trace above 2^14 is not allowed");
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(a.dim);
  Eigen::VectorXcd y(a.dim);
  Complex t = 0.0;
  for (int64_t i = 0; i < a.dim; ++i) {
    e[i] = 1.0;
    a.apply_fn(e.data(), y.data());
    t += y[i];
    e[i] = 0.0;
  }
  return t;
}

}  // namespace tqo
