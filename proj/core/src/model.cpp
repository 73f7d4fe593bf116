#include "tqo/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include <Eigen/Dense>

#include "tqo/spectra.hpp"

namespace tqo {

namespace {

constexpr int64_t kEnvCap = int64_t(1) << 22;

// Strides and index maps for an operator supported on `pos` slots out of
// `count` total slots, each slot carrying `n` labels (slot 0 least
// significant).
struct SupportLayout {
  std::vector<int64_t> loc2glob;     // local index -> packed offset
  std::vector<int64_t> env_strides;  // strides of the complement slots
  int64_t env_count = 1;
  int64_t local_dim = 1;
};

SupportLayout make_layout(int n, int count, const std::vector<int>& pos) {
  SupportLayout l;
  std::vector<char> used(count, 0);
  for (int p : pos) {
    if (p < 0 || p >= count) throw InvalidInput("support slot out of range");
    if (used[p]) throw InvalidInput("support slots must be distinct");
    used[p] = 1;
  }
  std::vector<int64_t> stride(count);
  int64_t s = 1;
  for (int i = 0; i < count; ++i) {
    stride[i] = s;
    s *= n;
  }
  for (int i = 0; i < count; ++i)
    if (!used[i]) {
      l.env_strides.push_back(stride[i]);
      l.env_count *= n;
    }
  l.local_dim = pow_checked(n, static_cast<int>(pos.size()));
  l.loc2glob.resize(l.local_dim);
  for (int64_t loc = 0; loc < l.local_dim; ++loc) {
    int64_t rem = loc, off = 0;
    for (int p : pos) {
      off += (rem % n) * stride[p];
      rem /= n;
    }
    l.loc2glob[loc] = off;
  }
  return l;
}

int64_t env_offset(const SupportLayout& l, int n, int64_t env_index) {
  int64_t off = 0;
  for (int64_t s : l.env_strides) {
    off += (env_index % n) * s;
    env_index /= n;
  }
  return off;
}

// local on the slots `pos`, identity on the rest.
SparseOperator embed_positions(const SparseOperator& local,
                               const std::vector<int>& pos, int count, int n) {
  const SupportLayout l = make_layout(n, count, pos);
  if (local.dim() != l.local_dim)
    throw InvalidInput("embed: operator dimension does not match support");
  const int64_t target_dim = pow_checked(n, count);
  const int64_t nnz = local.mat.nonZeros();
  if (l.env_count > kEnvCap || nnz * l.env_count > (int64_t(1) << 26))
    throw CapExceeded("embedding would materialize too many entries");
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(nnz * l.env_count));
  for (int64_t env = 0; env < l.env_count; ++env) {
    const int64_t base = env_offset(l, n, env);
    for (int k = 0; k < local.mat.outerSize(); ++k)
      for (Eigen::SparseMatrix<Complex>::InnerIterator it(local.mat, k); it;
           ++it)
        trips.emplace_back(static_cast<int>(base + l.loc2glob[it.row()]),
                           static_cast<int>(base + l.loc2glob[it.col()]),
                           it.value());
  }
  return make_sparse(target_dim, trips);
}

const char* family_note(const LatticeModel& m) {
  return m.family.empty() ? "(unbuilt)" : m.family.c_str();
}

void require_built(const LatticeModel& m) {
  if (m.nlabels < 1 || m.dim < 1 || m.complex.num_edges() < 1)
    throw InvalidInput(std::string("model not built: family ") +
                       family_note(m));
}

}  // namespace

int64_t pow_checked(int base, int exp) {
  if (base < 1 || exp < 0) throw InvalidInput("pow_checked: bad arguments");
  const int64_t limit = int64_t(1) << 62;
  int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > limit / base)
      throw CapExceeded("configuration space exceeds 2^62");
    r *= base;
  }
  return r;
}

int64_t encode_labels(const std::vector<int>& labels, int nlabels) {
  if (nlabels < 1) throw InvalidInput("encode: nlabels must be positive");
  int64_t idx = 0;
  for (int i = static_cast<int>(labels.size()) - 1; i >= 0; --i) {
    if (labels[i] < 0 || labels[i] >= nlabels)
      throw InvalidInput("encode: label out of range");
    idx = idx * nlabels + labels[i];
  }
  return idx;
}

std::vector<int> decode_labels(int64_t index, int nlabels, int count) {
  if (nlabels < 1 || count < 0 || index < 0)
    throw InvalidInput("decode: bad arguments");
  std::vector<int> labels(count);
  for (int i = 0; i < count; ++i) {
    labels[i] = static_cast<int>(index % nlabels);
    index /= nlabels;
  }
  if (index != 0) throw InvalidInput("decode: index out of range");
  return labels;
}

SparseOperator embed_local(const LatticeModel& m, const std::vector<int>& support,
                           const SparseOperator& local) {
  require_built(m);
  if (m.dim > m.caps.full_matrix)
    throw CapExceeded("global assembly above full-matrix cap (dim " +
                      std::to_string(m.dim) + ")");
  if (!std::is_sorted(support.begin(), support.end()))
    throw InvalidInput("embed: support edges must be sorted");
  return embed_positions(local, support, m.complex.num_edges(), m.nlabels);
}

SparseOperator assemble_term(const LatticeModel& m, const LocalTerm& t) {
  return embed_local(m, t.support_edges, t.local);
}

SparseOperator assemble_hamiltonian(const LatticeModel& m) {
  require_built(m);
  if (m.terms.empty()) throw InvalidInput("model has no terms");
  SparseOperator h = sparse_zero(m.dim);
  const SparseOperator id = sparse_identity(m.dim);
  for (const LocalTerm& t : m.terms) {
    h = add(h, id);
    h = add(h, scale(-1.0, assemble_term(m, t)));
  }
  return h;
}

SparseOperator ground_projector_from_terms(const LatticeModel& m) {
  require_built(m);
  if (m.terms.empty()) throw InvalidInput("model has no terms");
  // Face factors sit rightmost so they act first; the factors all commute,
  // but the composition order is fixed so floating-point output is
  // reproducible.
  SparseOperator p = sparse_identity(m.dim);
  for (const LocalTerm& t : m.terms)
    if (t.kind == TermKind::vertex) p = compose(p, assemble_term(m, t));
  for (const LocalTerm& t : m.terms)
    if (t.kind == TermKind::face) p = compose(p, assemble_term(m, t));
  return p;
}

void apply_term(const LatticeModel& m, const LocalTerm& t, const Complex* in,
                Complex* out) {
  require_built(m);
  const SupportLayout l =
      make_layout(m.nlabels, m.complex.num_edges(), t.support_edges);
  std::fill(out, out + m.dim, Complex(0.0));
  for (int64_t env = 0; env < l.env_count; ++env) {
    const int64_t base = env_offset(l, m.nlabels, env);
    for (int k = 0; k < t.local.mat.outerSize(); ++k)
      for (Eigen::SparseMatrix<Complex>::InnerIterator it(t.local.mat, k); it;
           ++it)
        out[base + l.loc2glob[it.row()]] +=
            it.value() * in[base + l.loc2glob[it.col()]];
  }
}

LinearMap hamiltonian_map(const LatticeModel& m) {
  require_built(m);
  if (m.dim > m.caps.apply)
    throw CapExceeded("model dimension " + std::to_string(m.dim) +
                      " above apply cap");
  if (m.terms.empty()) throw InvalidInput("model has no terms");

  struct Plan {
    SupportLayout layout;
    std::vector<int64_t> envs;  // materialized offsets when small enough
    Eigen::SparseMatrix<Complex> local;
  };
  auto plans = std::make_shared<std::vector<Plan>>();
  // Diagonal terms are folded into one global diagonal; off-diagonal terms
  // keep their local sparse action.
  auto diag = std::make_shared<std::vector<double>>(m.dim, 0.0);
  for (const LocalTerm& t : m.terms) {
    bool diagonal = true;
    for (int k = 0; k < t.local.mat.outerSize() && diagonal; ++k)
      for (Eigen::SparseMatrix<Complex>::InnerIterator it(t.local.mat, k); it;
           ++it)
        if (it.row() != it.col() || it.value().imag() != 0.0) {
          diagonal = false;
          break;
        }
    SupportLayout l =
        make_layout(m.nlabels, m.complex.num_edges(), t.support_edges);
    if (diagonal) {
      for (int64_t env = 0; env < l.env_count; ++env) {
        const int64_t base = env_offset(l, m.nlabels, env);
        for (int k = 0; k < t.local.mat.outerSize(); ++k)
          for (Eigen::SparseMatrix<Complex>::InnerIterator it(t.local.mat, k);
               it; ++it)
            (*diag)[base + l.loc2glob[it.row()]] += it.value().real();
      }
      continue;
    }
    Plan p;
    p.layout = std::move(l);
    if (p.layout.env_count <= kEnvCap) {
      p.envs.resize(p.layout.env_count);
      for (int64_t env = 0; env < p.layout.env_count; ++env)
        p.envs[env] = env_offset(p.layout, m.nlabels, env);
    }
    p.local = t.local.mat;
    plans->push_back(std::move(p));
  }

  LinearMap map;
  map.dim = m.dim;
  map.apply_fn = [plans, diag, n = m.nlabels, dim = m.dim,
                  nterms = static_cast<double>(m.terms.size())](
                     const Complex* in, Complex* out) {
    for (int64_t i = 0; i < dim; ++i)
      out[i] = (nterms - (*diag)[i]) * in[i];
    for (const Plan& p : *plans) {
      for (int64_t env = 0; env < p.layout.env_count; ++env) {
        const int64_t base =
            p.envs.empty() ? env_offset(p.layout, n, env) : p.envs[env];
        for (int k = 0; k < p.local.outerSize(); ++k)
          for (Eigen::SparseMatrix<Complex>::InnerIterator it(p.local, k); it;
               ++it)
            out[base + p.layout.loc2glob[it.row()]] -=
                it.value() * in[base + p.layout.loc2glob[it.col()]];
      }
    }
  };
  return map;
}

TermCheck check_terms(const LatticeModel& m) {
  require_built(m);
  TermCheck r;
  for (const LocalTerm& t : m.terms) {
    const SparseOperator defect =
        add(compose(t.local, t.local), scale(-1.0, t.local));
    r.projector = std::max(r.projector, frobenius_norm(defect));
    r.hermitian = std::max(r.hermitian, hermiticity_defect(t.local));
  }
  // Collect overlapping pairs and their joint windows first so an over-cap
  // pair is refused before any pair gets embedded (nnz scales with the
  // environment inside the window, so even under-cap pairs are expensive).
  std::vector<std::pair<std::pair<size_t, size_t>, std::vector<int>>> pairs;
  for (size_t i = 0; i < m.terms.size(); ++i) {
    for (size_t j = i + 1; j < m.terms.size(); ++j) {
      const auto& a = m.terms[i];
      const auto& b = m.terms[j];
      std::vector<int> common;
      std::set_intersection(a.support_edges.begin(), a.support_edges.end(),
                            b.support_edges.begin(), b.support_edges.end(),
                            std::back_inserter(common));
      if (common.empty()) continue;  // disjoint supports commute exactly
      std::vector<int> joint;
      std::set_union(a.support_edges.begin(), a.support_edges.end(),
                     b.support_edges.begin(), b.support_edges.end(),
                     std::back_inserter(joint));
      const int64_t joint_dim =
          pow_checked(m.nlabels, static_cast<int>(joint.size()));
      if (joint_dim > (int64_t(1) << 24))
        throw CapExceeded("term commutator window of dimension " +
                          std::to_string(joint_dim) + " is above cap");
      pairs.emplace_back(std::make_pair(i, j), std::move(joint));
    }
  }
  for (const auto& [ij, joint] : pairs) {
    const auto& a = m.terms[ij.first];
    const auto& b = m.terms[ij.second];
    std::vector<int> pa, pb;
    for (int e : a.support_edges)
      pa.push_back(static_cast<int>(
          std::lower_bound(joint.begin(), joint.end(), e) - joint.begin()));
    for (int e : b.support_edges)
      pb.push_back(static_cast<int>(
          std::lower_bound(joint.begin(), joint.end(), e) - joint.begin()));
    const int count = static_cast<int>(joint.size());
    const SparseOperator ea = embed_positions(a.local, pa, count, m.nlabels);
    const SparseOperator eb = embed_positions(b.local, pb, count, m.nlabels);
    const SparseOperator comm =
        add(compose(ea, eb), scale(-1.0, compose(eb, ea)));
    r.commutator = std::max(r.commutator, frobenius_norm(comm));
  }
  return r;
}

Eigen::MatrixXcd ambient_ground_basis(const GroundSpace& g) {
  if (g.ambient_dim > (int64_t(1) << 24))
    throw CapExceeded("ambient basis above apply cap");
  if (static_cast<int64_t>(g.rows.size()) != g.basis.rows())
    throw InvalidInput("ground space rows and basis disagree");
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(g.ambient_dim, g.basis.cols());
  for (int64_t i = 0; i < g.basis.rows(); ++i) {
    if (g.rows[i] < 0 || g.rows[i] >= g.ambient_dim)
      throw InvalidInput("ground space row index out of range");
    z.row(g.rows[i]) = g.basis.row(i);
  }
  return z;
}

double frustration_residual(const LatticeModel& m, const GroundSpace& g) {
  require_built(m);
  if (g.ambient_dim != m.dim)
    throw InvalidInput("ground space dimension mismatch");
  const Eigen::MatrixXcd z = ambient_ground_basis(g);
  Eigen::VectorXcd y(m.dim);
  double worst = 0.0;
  for (int64_t c = 0; c < z.cols(); ++c) {
    const Eigen::VectorXcd x = z.col(c);
    for (const LocalTerm& t : m.terms) {
      apply_term(m, t, x.data(), y.data());
      worst = std::max(worst, (y - x).norm());
    }
  }
  return worst;
}

double spectral_gap(const LatticeModel& m, const GroundSpace& g,
                    uint64_t seed) {
  require_built(m);
  if (g.ambient_dim != m.dim)
    throw InvalidInput("ground space dimension mismatch");
  const int64_t rank = g.rank();
  if (rank < 0 || rank >= m.dim)
    throw InvalidInput("ground space leaves no excited states");
  if (m.dim <= kDenseEigenCap) {
    const Eigen::MatrixXcd h = to_dense(assemble_hamiltonian(m));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues()[rank];
  }
  const LinearMap h = hamiltonian_map(m);
  const Eigen::MatrixXcd defl = ambient_ground_basis(g);
  LanczosOptions opt;
  opt.seed = seed;
  return low_spectrum(h, 1, opt, &defl)[0];
}

std::vector<SparseOperator> local_operator_basis(const LatticeModel& m,
                                                 const Region& r) {
  require_built(m);
  if (r.edge_set.empty())
    throw InvalidInput("operator basis: empty region");
  for (int e : r.edge_set)
    if (e < 0 || e >= m.complex.num_edges())
      throw InvalidInput("operator basis: edge out of range");
  const int s = static_cast<int>(r.edge_set.size());
  const int64_t local_dim = pow_checked(m.nlabels, s);
  const int64_t count = pow_checked(m.nlabels, 2 * s);
  if (count > m.caps.apply)
    throw CapExceeded("operator basis size " + std::to_string(count) +
                      " above cap");
  if (m.dim / local_dim > kEnvCap)
    throw CapExceeded("operator basis materialization above cap");
  std::vector<SparseOperator> ops;
  ops.reserve(static_cast<size_t>(count));
  const int ne = m.complex.num_edges();
  for (int64_t bra = 0; bra < local_dim; ++bra) {
    for (int64_t ket = 0; ket < local_dim; ++ket) {
      std::vector<Triplet> unit{Triplet(static_cast<int>(bra),
                                        static_cast<int>(ket), Complex(1.0))};
      ops.push_back(embed_positions(make_sparse(local_dim, unit), r.edge_set,
                                    ne, m.nlabels));
    }
  }
  return ops;
}

}  // namespace tqo
