#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tqo/sparse.hpp"

namespace tqo {

// Dense eigensolves are used up to this dimension; anything larger goes
// through the restarted Lanczos path.
inline constexpr int64_t kDenseEigenCap = 1 << 10;

// Rank of an orthogonal projector. Requires ||p^2 - p||_F <= 1e-8 and
// hermiticity; counts eigenvalues > 0.5 below the dense cap and rounds
// the trace above it (projector trace = rank).
int64_t projector_rank(const SparseOperator& p);

// k smallest eigenvalues, ascending. Dense below the cap, Lanczos above.
std::vector<double> low_spectrum(const SparseOperator& h, int k);

struct LanczosOptions {
  int max_basis = 48;
  int max_restarts = 300;
  double tol = 1e-8;  // Ritz residual ||Hx - tx||
  uint64_t seed = 1;
};

// k smallest eigenvalues of the Hermitian map restricted to the orthogonal
// complement of span(deflate). deflate columns must be orthonormal. Dense
// path below the cap (by basis assembly), thick-restart Lanczos with full
// reorthogonalization above. Throws NotConverged past max_restarts.
std::vector<double> low_spectrum(const LinearMap& h, int k,
                                 const LanczosOptions& opt = {},
                                 const Eigen::MatrixXcd* deflate = nullptr);

struct GramMatrix {
  Eigen::MatrixXcd mat;  // Hermitian PSD, size = basis size
  std::string basis_tag;
};

// G[i][j] = tr(ops[i]' ops[j] p). For a projector p the null space of G is
// exactly the set of coefficient vectors c with (sum_i c_i ops_i) p = 0,
// since ||O p||_F^2 = tr(O' O p).
GramMatrix gram(const std::vector<SparseOperator>& ops,
                const SparseOperator& p, const std::string& basis_tag = "");

// Coefficient vectors spanning the null space of a Hermitian PSD matrix:
// eigenvectors with eigenvalue <= rel_tol * max eigenvalue.
std::vector<Eigen::VectorXcd> null_space(const Eigen::MatrixXcd& g,
                                         double rel_tol = 1e-8);

}  // namespace tqo
