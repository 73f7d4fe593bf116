#include "tqo/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace tqo {

namespace {

double projector_defect(const SparseOperator& p) {
  return frobenius_norm(add(compose(p, p), scale(-1.0, p)));
}

// Deterministic start vector; mt19937_64 words mapped to [-1,1) by hand so
// the stream does not depend on library distribution internals.
Eigen::VectorXcd seeded_vector(int64_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  Eigen::VectorXcd v(n);
  for (int64_t i = 0; i < n; ++i)
    v[i] = Complex(2.0 * unit() - 1.0, 2.0 * unit() - 1.0);
  return v;
}

// Two-pass Gram-Schmidt against the first `cols` columns of each basis.
void orthogonalize(Eigen::VectorXcd& w, const Eigen::MatrixXcd& deflate,
                   const Eigen::MatrixXcd& basis, int64_t cols) {
  for (int pass = 0; pass < 2; ++pass) {
    if (deflate.cols() > 0) w -= deflate * (deflate.adjoint() * w);
    if (cols > 0)
      w -= basis.leftCols(cols) * (basis.leftCols(cols).adjoint() * w);
  }
}

std::vector<double> dense_restricted_spectrum(const Eigen::MatrixXcd& h, int k,
                                              const Eigen::MatrixXcd* deflate) {
  const int64_t n = h.rows();
  Eigen::MatrixXcd hr;
  if (deflate != nullptr && deflate->cols() > 0) {
    // Orthonormal basis of the complement via full QR of the deflation block.
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(*deflate);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd comp = q.rightCols(n - deflate->cols());
    hr = comp.adjoint() * h * comp;
  } else {
    hr = h;
  }
  if (k > hr.rows())
    throw InvalidInput("low_spectrum: k exceeds restricted dimension");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hr);
  if (es.info() != Eigen::Success)
    throw NotConverged("dense eigensolver failed");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + k);
  return out;
}

// Thick-restart Lanczos with full reorthogonalization and locking of
// converged pairs. Locking (moving converged Ritz vectors into the
// deflation set and restarting fresh) is what resolves degenerate
// eigenvalues: a single Krylov sequence sees one vector per eigenspace.
std::vector<double> lanczos_smallest(const LinearMap& h, int k,
                                     const LanczosOptions& opt,
                                     const Eigen::MatrixXcd* deflate) {
  const int64_t n = h.dim;
  const int64_t fixed = deflate != nullptr ? deflate->cols() : 0;
  Eigen::MatrixXcd defl(n, fixed + k);
  if (fixed > 0) {
    // Callers pass orthonormal columns; re-orthonormalize cheaply anyway.
    // Thin Q only: materializing the full square Q would allocate n x n.
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(*deflate);
    Eigen::MatrixXcd thin = Eigen::MatrixXcd::Identity(n, fixed);
    thin.applyOnTheLeft(qr.householderQ());
    defl.leftCols(fixed) = thin;
  }
  if (k > n - fixed)
    throw InvalidInput("low_spectrum: k exceeds the deflated dimension");
  std::vector<double> locked;
  auto free_dim = [&]() { return n - fixed - static_cast<int64_t>(locked.size()); };
  const int64_t m = std::max<int64_t>(2, std::min<int64_t>(opt.max_basis, n - fixed));

  Eigen::MatrixXcd basis(n, m);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(m, m);
  Eigen::VectorXcd w(n), z(n), hz(n);
  uint64_t salt = 0;

  auto cur_defl = [&]() {
    return defl.leftCols(fixed + static_cast<int64_t>(locked.size()));
  };
  auto fresh_direction = [&](int64_t cols) -> bool {
    const Eigen::MatrixXcd d = cur_defl();
    for (int attempt = 0; attempt < 8; ++attempt) {
      w = seeded_vector(n, opt.seed + 1 + salt++);
      orthogonalize(w, d, basis, cols);
      const double nw = w.norm();
      if (nw > 1e-8) {
        w /= nw;
        return true;
      }
    }
    return false;
  };

  if (!fresh_direction(0))
    throw NotConverged("Lanczos could not build a start vector");
  basis.col(0) = w;
  int64_t cols = 1;

  auto merged_result = [&](const Eigen::VectorXd& ritz, int64_t take) {
    std::vector<double> out(locked);
    for (int64_t i = 0; i < take; ++i) out.push_back(ritz[i]);
    if (static_cast<int64_t>(out.size()) < k)
      throw NotConverged("Lanczos search space collapsed early");
    std::sort(out.begin(), out.end());
    out.resize(k);
    return out;
  };

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    // Expand to a full basis; T(i,j) = x_i' H x_j recorded column by column.
    const int64_t mcur = std::min<int64_t>(m, free_dim());
    while (cols < mcur) {
      h.apply_fn(basis.col(cols - 1).data(), w.data());
      const Eigen::VectorXcd coeffs = basis.leftCols(cols).adjoint() * w;
      t.col(cols - 1).head(cols) = coeffs;
      t.row(cols - 1).head(cols) = coeffs.adjoint();
      orthogonalize(w, cur_defl(), basis, cols);
      const double beta = w.norm();
      if (beta > 1e-12) {
        basis.col(cols) = w / beta;
        t(cols, cols - 1) = beta;
        t(cols - 1, cols) = beta;
      } else if (fresh_direction(cols)) {
        basis.col(cols) = w;
      } else {
        break;  // complement exhausted, Rayleigh-Ritz below is exact
      }
      ++cols;
    }
    h.apply_fn(basis.col(cols - 1).data(), w.data());
    const Eigen::VectorXcd coeffs = basis.leftCols(cols).adjoint() * w;
    t.col(cols - 1).head(cols) = coeffs;
    t.row(cols - 1).head(cols) = coeffs.adjoint();

    Eigen::MatrixXcd tc = t.topLeftCorner(cols, cols);
    tc = 0.5 * (tc + tc.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(tc);
    if (es.info() != Eigen::Success)
      throw NotConverged("projected eigensolver failed");

    if (cols >= free_dim())
      return merged_result(es.eigenvalues(), cols);  // exact on the complement

    // Only the single lowest Ritz pair may be accepted per search round: a
    // Krylov space from one start vector sees one vector per eigenspace, so
    // claims about the 2nd-smallest value are only honest after the first
    // is locked away and the search restarts from a fresh random vector
    // (which has generic overlap with any degenerate sibling).
    z = basis.leftCols(cols) * es.eigenvectors().col(0);
    h.apply_fn(z.data(), hz.data());
    const bool lowest_converged =
        (hz - es.eigenvalues()[0] * z).norm() <= opt.tol;
    if (lowest_converged) {
      defl.col(fixed + locked.size()) = z;
      locked.push_back(es.eigenvalues()[0]);
      if (static_cast<int64_t>(locked.size()) >= k) {
        std::sort(locked.begin(), locked.end());
        return locked;
      }
      if (!fresh_direction(0))
        throw NotConverged("Lanczos search space collapsed early");
      basis.col(0) = w;
      t.setZero();
      cols = 1;
      continue;
    }
    if (restart == opt.max_restarts) break;

    // Thick restart: keep the lowest Ritz vectors, continue expanding.
    int64_t keep = std::min<int64_t>(9, cols - 2);
    if (keep < 1) keep = 1;
    const Eigen::MatrixXcd kept =
        basis.leftCols(cols) * es.eigenvectors().leftCols(keep);
    basis.leftCols(keep) = kept;
    t.setZero();
    for (int64_t i = 0; i < keep; ++i) t(i, i) = es.eigenvalues()[i];
    cols = keep;
  }
  throw NotConverged("Lanczos did not converge within " +
                     std::to_string(opt.max_restarts) + " restarts");
}

}  // namespace

int64_t projector_rank(const SparseOperator& p) {
  const double defect = projector_defect(p);
  if (defect > 1e-8 || !p.hermitian)
    throw InvalidInput("not a projector: ||p^2 - p||_F = " +
                       std::to_string(defect));
  if (p.dim() <= kDenseEigenCap) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense(p),
                                                       Eigen::EigenvaluesOnly);
    int64_t count = 0;
    for (int64_t i = 0; i < p.dim(); ++i)
      if (es.eigenvalues()[i] > 0.5) ++count;
    return count;
  }
  const double tr = trace(p).real();
  const int64_t r = std::llround(tr);
  if (std::abs(tr - static_cast<double>(r)) > 1e-8)
    throw InvalidInput("projector trace " + std::to_string(tr) +
                       " is not near an integer");
  return r;
}

std::vector<double> low_spectrum(const SparseOperator& h, int k) {
  if (!h.hermitian) throw InvalidInput("low_spectrum: operator not hermitian");
  if (k < 1 || k > h.dim()) throw InvalidInput("low_spectrum: bad k");
  if (h.dim() <= kDenseEigenCap)
    return dense_restricted_spectrum(to_dense(h), k, nullptr);
  return lanczos_smallest(as_linear_map(h), k, LanczosOptions{}, nullptr);
}

std::vector<double> low_spectrum(const LinearMap& h, int k,
                                 const LanczosOptions& opt,
                                 const Eigen::MatrixXcd* deflate) {
  if (k < 1 || k > h.dim) throw InvalidInput("low_spectrum: bad k");
  if (h.dim <= kDenseEigenCap) {
    // Assemble by basis application; cheap below the cap.
    Eigen::MatrixXcd dense(h.dim, h.dim);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(h.dim);
    Eigen::VectorXcd y(h.dim);
    for (int64_t i = 0; i < h.dim; ++i) {
      e[i] = 1.0;
      h.apply_fn(e.data(), y.data());
      dense.col(i) = y;
      e[i] = 0.0;
    }
    return dense_restricted_spectrum(dense, k, deflate);
  }
  return lanczos_smallest(h, k, opt, deflate);
}

GramMatrix gram(const std::vector<SparseOperator>& ops,
                const SparseOperator& p, const std::string& basis_tag) {
  if (ops.empty()) throw InvalidInput("gram: empty operator basis");
  for (const auto& o : ops)
    if (o.dim() != p.dim()) throw InvalidInput("gram: dimension mismatch");
  if (projector_defect(p) > 1e-8)
    throw InvalidInput("gram: weight operator is not a projector");
  const int64_t nb = ops.size();
  Eigen::MatrixXcd g(nb, nb);
  for (int64_t j = 0; j < nb; ++j) {
    const SparseOperator col = compose(ops[j], p);
    for (int64_t i = 0; i < nb; ++i) g(i, j) = frobenius_inner(ops[i], col);
  }
  g = 0.5 * (g + g.adjoint()).eval();
  return GramMatrix{std::move(g), basis_tag};
}

std::vector<Eigen::VectorXcd> null_space(const Eigen::MatrixXcd& g,
                                         double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  if (es.info() != Eigen::Success)
    throw NotConverged("null_space eigensolver failed");
  const double top = std::max(0.0, es.eigenvalues().maxCoeff());
  std::vector<Eigen::VectorXcd> out;
  for (int64_t i = 0; i < g.rows(); ++i)
    if (es.eigenvalues()[i] <= rel_tol * top) out.push_back(es.eigenvectors().col(i));
  return out;
}

}  // namespace tqo
