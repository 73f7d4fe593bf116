#include "tqo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "tqo/dw_model.hpp"
#include "tqo/error.hpp"
#include "tqo/lw_model.hpp"
#include "tqo/spectra.hpp"

namespace tqo {

namespace {

// Fixed by the check definitions, not user-tunable: the null-space cut for
// Gram matrices and the two bands of the distance search.
constexpr double kNullCut = 1e-8;
constexpr double kCommuteTol = 1e-8;
constexpr double kNontrivialTol = 1e-6;
// Mirrors the ambient_ground_basis guard.
constexpr int64_t kAmbientCap = int64_t(1) << 24;
// rank - ||M||^2 carries rounding noise of order rank*eps, which sqrt(2x)
// would inflate past kCommuteTol for exact commuters.  Candidates under this
// cutoff get the exact cancellation-free residual instead.
constexpr double kCheapCutoff = 1e-10;

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void require_certified_pair(const Region& inner, const Region& outer,
                            const char* check) {
  if (!outer.disk_certified)
    throw InvalidInput(std::string(check) +
                       ": enclosing region is not a certified disk");
  if (!subset_of(inner.edge_set, outer.edge_set))
    throw InvalidInput(std::string(check) +
                       ": region is not contained in the enclosing disk");
}

bool all_within(const std::vector<ResidualEntry>& rs) {
  for (const ResidualEntry& r : rs)
    if (!(r.value <= r.tolerance)) return false;
  return true;
}

std::string padded(int64_t i, int width) {
  std::string s = std::to_string(i);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

// Mixed-radix digit of `index` at edge position e.
int digit_at(int64_t index, int64_t stride, int n) {
  return static_cast<int>((index / stride) % n);
}

std::vector<int64_t> edge_strides(int nedges, int n) {
  std::vector<int64_t> s(nedges);
  int64_t acc = 1;
  for (int e = 0; e < nedges; ++e) {
    s[e] = acc;
    acc *= n;
  }
  return s;
}

// tr(|q><q'| P) over the region's local index q, computed from the ground
// isometry row support. Exact: P = V V' and the trace marginalizes the
// non-region digits.
Eigen::MatrixXcd gram_factor_from_ground(const LatticeModel& m,
                                         const GroundSpace& gs,
                                         const std::vector<int>& region_edges) {
  const int n = m.nlabels;
  const int64_t da = pow_checked(n, static_cast<int>(region_edges.size()));
  if (da > kDenseEigenCap)
    throw CapExceeded("gram factor dimension " + std::to_string(da) +
                      " above the dense eigensolver cap");
  const std::vector<int64_t> strides = edge_strides(m.complex.num_edges(), n);
  const int64_t rank = gs.rank();
  const int64_t nrows = static_cast<int64_t>(gs.rows.size());

  // Group rows by their non-region digits, sort-based to stay lean when
  // almost every row sits in its own group.
  std::vector<int64_t> order(nrows), rest(nrows), q(nrows);
  for (int64_t i = 0; i < nrows; ++i) {
    const int64_t r = gs.rows[i];
    int64_t qq = 0, scale = 1, rr = r;
    for (int e : region_edges) {
      const int d = digit_at(r, strides[e], n);
      qq += d * scale;
      scale *= n;
      rr -= d * strides[e];
    }
    order[i] = i;
    rest[i] = rr;
    q[i] = qq;
  }
  std::sort(order.begin(), order.end(),
            [&](int64_t a, int64_t b) { return rest[a] < rest[b]; });

  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(da, da);
  Eigen::MatrixXcd block(da, rank);
  int64_t lo = 0;
  while (lo < nrows) {
    int64_t hi = lo;
    while (hi < nrows && rest[order[hi]] == rest[order[lo]]) ++hi;
    block.setZero();
    for (int64_t k = lo; k < hi; ++k)
      block.row(q[order[k]]) += gs.basis.row(order[k]);
    w += (block * block.adjoint()).conjugate();
    lo = hi;
  }
  return w;
}

// Embed a local operator whose support sits at `pos` (positions within a
// window of `count` edges) into the window space.
SparseOperator embed_in_window(const SparseOperator& local,
                               const std::vector<int>& pos, int count, int n) {
  const int64_t window_dim = pow_checked(n, count);
  std::vector<bool> on(count, false);
  for (int p : pos) on[p] = true;
  std::vector<int64_t> loc_stride(pos.size());
  {
    int64_t acc = 1;
    for (size_t k = 0; k < pos.size(); ++k) {
      loc_stride[k] = acc;
      acc *= n;
    }
  }
  std::vector<int64_t> win_stride = edge_strides(count, n);
  // Enumerate environments (digits on the window edges outside the support).
  std::vector<int> env_pos;
  for (int p = 0; p < count; ++p)
    if (!on[p]) env_pos.push_back(p);
  const int64_t env_count =
      pow_checked(n, static_cast<int>(env_pos.size()));
  const int64_t nnz = local.mat.nonZeros();
  if (nnz * env_count > (int64_t(1) << 26))
    throw CapExceeded("window embedding would materialize too many entries");

  // loc2win[local index] = window index with environment digits zero.
  const int64_t local_dim = local.mat.rows();
  std::vector<int64_t> loc2win(local_dim);
  for (int64_t l = 0; l < local_dim; ++l) {
    int64_t w = 0;
    for (size_t k = 0; k < pos.size(); ++k)
      w += digit_at(l, loc_stride[k], n) * win_stride[pos[k]];
    loc2win[l] = w;
  }

  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(nnz * env_count));
  for (int64_t env = 0; env < env_count; ++env) {
    int64_t base = 0, rem = env;
    for (int p : env_pos) {
      base += (rem % n) * win_stride[p];
      rem /= n;
    }
    for (int k = 0; k < local.mat.outerSize(); ++k)
      for (Eigen::SparseMatrix<Complex>::InnerIterator it(local.mat, k); it;
           ++it)
        trips.emplace_back(static_cast<int>(base + loc2win[it.row()]),
                           static_cast<int>(base + loc2win[it.col()]),
                           it.value());
  }
  SparseOperator out = make_sparse(window_dim, trips);
  out.hermitian = local.hermitian;
  return out;
}

// Product of the model terms supported inside the window, on the window
// space, vertex factors to the left of face factors (faces applied first).
SparseOperator window_projector(const LatticeModel& m,
                                const std::vector<int>& window) {
  const int count = static_cast<int>(window.size());
  const int64_t window_dim = pow_checked(m.nlabels, count);
  if (window_dim > m.caps.subspace)
    throw CapExceeded("window dimension " + std::to_string(window_dim) +
                      " above the subspace cap");
  std::vector<SparseOperator> vertex_ops, face_ops;
  for (const LocalTerm& t : m.terms) {
    if (!subset_of(t.support_edges, window)) continue;
    std::vector<int> pos;
    for (int e : t.support_edges)
      pos.push_back(static_cast<int>(
          std::lower_bound(window.begin(), window.end(), e) - window.begin()));
    SparseOperator emb = embed_in_window(t.local, pos, count, m.nlabels);
    (t.kind == TermKind::vertex ? vertex_ops : face_ops)
        .push_back(std::move(emb));
  }
  SparseOperator p = sparse_identity(window_dim);
  for (const SparseOperator& f : face_ops) p = compose(f, p);
  for (const SparseOperator& v : vertex_ops) p = compose(v, p);
  return p;
}

}  // namespace

std::string model_descriptor(const LatticeModel& m) {
  return m.family + "/" + m.algebra + "/" + m.complex.surface + "[v" +
         std::to_string(m.complex.num_vertices) + ",e" +
         std::to_string(m.complex.num_edges()) + ",f" +
         std::to_string(m.complex.num_faces()) + "]";
}

GroundSpace ground_space_of(const LatticeModel& m, uint64_t seed) {
  (void)seed;
  if (m.family == "dw") return dw_ground_space(m);
  if (m.family == "lw") return lw_ground_space(m);
  throw InvalidInput("ground space: unknown model family " + m.family);
}

VerificationReport check_tqo0(const LatticeModel& m, uint64_t seed,
                              const Tolerances& tol) {
  VerificationReport r;
  r.check = "tqo0";
  r.model = model_descriptor(m);
  r.seed = seed;

  const TermCheck tc = check_terms(m);
  r.residuals.push_back({"term-projector", tc.projector, tol.term});
  r.residuals.push_back({"term-hermitian", tc.hermitian, tol.term});
  r.residuals.push_back({"term-commutator", tc.commutator, tol.term});
  if (!all_within(r.residuals)) {
    // Broken term structure: the spectrum is no longer integral and the
    // combinatorial ground space is no longer an invariant subspace, so
    // the frustration and gap figures would be meaningless.
    r.parameters.emplace_back("spectral", "skipped (term structure failed)");
    r.pass = false;
    return r;
  }

  if (m.family == "lw" && m.dim > kAmbientCap) {
    // Full product space out of cap range: verify inside the admissible
    // subspace. The inadmissible sector sits at energy >= 1 (every product
    // state there breaks a vertex projector), so the full gap equals the
    // admissible gap exactly when that gap is 1; otherwise the full gap
    // lies somewhere in [1, adm_gap] and is out of reach.
    const SubspaceSummary ss = lw_subspace_summary(m, seed);
    r.parameters.emplace_back("route", "admissible-subspace");
    r.residuals.push_back({"frustration", ss.frustration, tol.term});
    if (std::abs(ss.adm_gap - 1.0) > tol.gap)
      throw CapExceeded(
          "tqo0 gap: admissible-sector gap is " + std::to_string(ss.adm_gap) +
          " and the inadmissible sector (beyond the apply cap) can reach "
          "energy 1, so the full gap is unresolved");
    r.residuals.push_back({"gap-deviation", std::abs(ss.adm_gap - 1.0),
                           tol.gap});
    r.scalars.emplace_back("gap", ss.adm_gap);
    r.scalars.emplace_back("gsd", static_cast<double>(ss.gsd));
    r.pass = all_within(r.residuals);
    return r;
  }

  const GroundSpace gs = ground_space_of(m, seed);
  r.residuals.push_back(
      {"frustration", frustration_residual(m, gs), tol.term});
  const double gap = spectral_gap(m, gs, seed);
  r.residuals.push_back({"gap-deviation", std::abs(gap - 1.0), tol.gap});
  r.scalars.emplace_back("gap", gap);
  r.scalars.emplace_back("gsd", static_cast<double>(gs.rank()));
  r.pass = all_within(r.residuals);
  return r;
}

VerificationReport check_tqo1(const LatticeModel& m, const Region& region,
                              const Region& enclosing_disk, uint64_t seed,
                              const Tolerances& tol) {
  require_certified_pair(region, enclosing_disk, "tqo1");

  VerificationReport r;
  r.check = "tqo1";
  r.model = model_descriptor(m);
  r.seed = seed;
  r.parameters.emplace_back("region", join_ints(region.edge_set));
  r.parameters.emplace_back("disk", join_ints(enclosing_disk.edge_set));

  const GroundSpace gs = ground_space_of(m, seed);
  const int64_t rank = gs.rank();
  if (rank == 0) throw InvalidInput("tqo1: model has empty ground space");
  const Eigen::MatrixXcd v = ambient_ground_basis(gs);
  r.scalars.emplace_back("rank", static_cast<double>(rank));

  const std::vector<SparseOperator> ops = local_operator_basis(m, region);
  const int width = static_cast<int>(std::to_string(ops.size()).size());
  // P O P = V (V' O V) V', so the residual is ||M - lambda I||_F with
  // M = V' O V and lambda = tr(M) / rank.
  for (size_t i = 0; i < ops.size(); ++i) {
    const Eigen::MatrixXcd ov = ops[i].mat * v;
    const Eigen::MatrixXcd mm = v.adjoint() * ov;
    const Complex lambda = mm.trace() / static_cast<double>(rank);
    const double resid =
        (mm - lambda * Eigen::MatrixXcd::Identity(rank, rank)).norm() /
        std::max(1.0, frobenius_norm(ops[i]));
    const std::string tag = padded(static_cast<int64_t>(i), width);
    r.residuals.push_back({"op." + tag, resid, tol.tqo1});
    r.scalars.emplace_back("lambda." + tag, lambda.real());
  }
  r.pass = all_within(r.residuals);
  return r;
}

VerificationReport check_tqo2(const LatticeModel& m, const Region& region_a,
                              const Region& region_b, uint64_t seed,
                              const Tolerances& tol) {
  require_certified_pair(region_a, region_b, "tqo2");

  VerificationReport r;
  r.check = "tqo2";
  r.model = model_descriptor(m);
  r.seed = seed;
  r.parameters.emplace_back("region-a", join_ints(region_a.edge_set));
  r.parameters.emplace_back("region-b", join_ints(region_b.edge_set));

  const GroundSpace gs = ground_space_of(m, seed);
  const Eigen::MatrixXcd wp =
      gram_factor_from_ground(m, gs, region_a.edge_set);

  // Gram factor against P_B. The window trace leaves a free identity factor
  // of n^(E - |B|); it scales both G_B and ||G_B|| and cancels in the
  // relative criterion, but is kept so the factor really is tr(E P_B).
  const SparseOperator pb = window_projector(m, region_b.edge_set);
  const int nb = static_cast<int>(region_b.edge_set.size());
  const int n = m.nlabels;
  const int64_t da =
      pow_checked(n, static_cast<int>(region_a.edge_set.size()));
  std::vector<int> apos;
  for (int e : region_a.edge_set)
    apos.push_back(static_cast<int>(
        std::lower_bound(region_b.edge_set.begin(), region_b.edge_set.end(),
                         e) -
        region_b.edge_set.begin()));
  const std::vector<int64_t> bstr = edge_strides(nb, n);
  Eigen::MatrixXcd wb = Eigen::MatrixXcd::Zero(da, da);
  for (int k = 0; k < pb.mat.outerSize(); ++k) {
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(pb.mat, k); it; ++it) {
      int64_t qrow = 0, qcol = 0, scale = 1;
      int64_t row_rest = it.row(), col_rest = it.col();
      for (int p : apos) {
        const int dr = digit_at(it.row(), bstr[p], n);
        const int dc = digit_at(it.col(), bstr[p], n);
        qrow += dr * scale;
        qcol += dc * scale;
        scale *= n;
        row_rest -= dr * bstr[p];
        col_rest -= dc * bstr[p];
      }
      if (row_rest == col_rest) wb(qcol, qrow) += it.value();
    }
  }
  const double env_factor = std::pow(
      static_cast<double>(n), static_cast<double>(m.complex.num_edges() - nb));
  wb *= env_factor;

  // Null vectors of G_P = I (x) W_P are spanned by e_bra (x) u with u a
  // null vector of W_P. The containment form is block diagonal, so the
  // factor-level sweep is exhaustive.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esp((wp + wp.adjoint()) /
                                                      2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esb((wb + wb.adjoint()) /
                                                      2.0);
  const double wp_norm = esp.eigenvalues().cwiseAbs().maxCoeff();
  const double wb_norm = esb.eigenvalues().cwiseAbs().maxCoeff();
  if (!(wp_norm > 0.0)) throw InvalidInput("tqo2: zero ground Gram matrix");
  if (!(wb_norm > 0.0))
    throw InvalidInput("tqo2: zero enclosing Gram matrix");

  int64_t null_dim = 0;
  double worst = 0.0;
  for (int64_t i = 0; i < esp.eigenvalues().size(); ++i) {
    if (esp.eigenvalues()[i] > kNullCut * wp_norm) continue;
    ++null_dim;
    const Eigen::VectorXcd u = esp.eigenvectors().col(i);
    const double val = std::real(u.dot(wb * u));
    worst = std::max(worst, val / wb_norm);
  }
  r.residuals.push_back({"containment", worst, tol.tqo2});
  r.scalars.emplace_back("null-dim", static_cast<double>(null_dim * da));
  r.scalars.emplace_back("gram-dim", static_cast<double>(da * da));
  r.pass = all_within(r.residuals);
  return r;
}

VerificationReport check_tqo3(const std::vector<const LatticeModel*>& models,
                              uint64_t seed) {
  if (models.size() < 2)
    throw InvalidInput("tqo3: needs at least two cellulations");
  for (const LatticeModel* m : models) {
    if (m == nullptr) throw InvalidInput("tqo3: null model");
    if (m->family != models[0]->family || m->algebra != models[0]->algebra)
      throw InvalidInput("tqo3: models must share family and algebra");
  }

  VerificationReport r;
  r.check = "tqo3";
  r.model = models[0]->family + "/" + models[0]->algebra;
  r.seed = seed;
  int64_t lo = 0, hi = 0;
  for (size_t i = 0; i < models.size(); ++i) {
    const std::optional<int64_t> oracle = gsd_oracle_route(*models[i]);
    const int64_t g = oracle ? *oracle : gsd_rank_route(*models[i], seed);
    r.parameters.emplace_back("cellulation." + std::to_string(i),
                              model_descriptor(*models[i]) +
                                  (oracle ? " (oracle)" : " (rank)"));
    r.scalars.emplace_back("gsd." + std::to_string(i),
                           static_cast<double>(g));
    lo = i ? std::min(lo, g) : g;
    hi = i ? std::max(hi, g) : g;
  }
  r.residuals.push_back(
      {"gsd-spread", static_cast<double>(hi - lo), 0.0});
  r.pass = all_within(r.residuals);
  return r;
}

VerificationReport check_fusion(const FusionData& fd, const Tolerances& tol) {
  VerificationReport r;
  r.check = "fusion";
  r.model = "fusion/" + fd.name;
  r.residuals.push_back({"pentagon", pentagon_check(fd), tol.pentagon});
  r.scalars.emplace_back("labels", static_cast<double>(fd.nlabels));
  r.pass = all_within(r.residuals);
  return r;
}

int64_t gsd_rank_route(const LatticeModel& m, uint64_t seed) {
  if (m.family == "lw") return lw_gsd(m, seed);
  if (m.family != "dw")
    throw InvalidInput("gsd: unknown model family " + m.family);
  if (m.dim <= m.caps.full_matrix)
    return projector_rank(dw_ground_projector(m));
  if (m.dim > m.caps.apply)
    throw CapExceeded("gsd rank route above the apply cap");
  const LinearMap h = hamiltonian_map(m);
  for (int k : {8, 16, 32}) {
    if (k >= m.dim) break;
    LanczosOptions opt;
    opt.seed = seed;
    const std::vector<double> vals = low_spectrum(h, k, opt);
    if (vals.back() < 0.5) continue;  // ground space may extend past k
    int64_t count = 0;
    for (double v : vals)
      if (v < 0.5) ++count;
    return count;
  }
  throw NotConverged("gsd rank route: degeneracy exceeds eigenvalue budget");
}

std::optional<int64_t> gsd_oracle_route(const LatticeModel& m) {
  if (m.family == "dw") return dw_gsd_oracle(m.complex, m.group, m.caps);
  if (m.family != "lw")
    throw InvalidInput("gsd: unknown model family " + m.family);
  for (double q : m.fusion.qdim)
    if (std::abs(q - 1.0) > 1e-9) return std::nullopt;
  return lw_gsd_oracle_pointed(m.complex, m.fusion);
}

DistanceResult distance_search(const LatticeModel& m, int max_weight) {
  if (m.family != "dw")
    throw InvalidInput("distance search: gauge models only");
  if (!is_abelian(m.group))
    throw InvalidInput("distance search: abelian groups only");
  if (max_weight < 0)
    throw InvalidInput("distance search: negative weight bound");
  const int n = m.group.order;

  // Cyclic structure: generator plus discrete log, needed to enumerate the
  // single-edge shift and character operators X^a Z^b.
  std::vector<int> dlog(n, -1);
  int gen = -1;
  for (int g = 0; g < n && gen < 0; ++g) {
    std::fill(dlog.begin(), dlog.end(), -1);
    int x = m.group.identity;
    int k = 0;
    while (dlog[x] < 0) {
      dlog[x] = k++;
      x = m.group.op(g, x);
    }
    if (k == n) gen = g;
  }
  if (gen < 0) throw InvalidInput("distance search: group is not cyclic");

  const GroundSpace gs = dw_ground_space(m);
  const int64_t rank = gs.rank();
  const int ne = m.complex.num_edges();
  const std::vector<int64_t> strides = edge_strides(ne, n);
  const int64_t nrows = static_cast<int64_t>(gs.rows.size());

  // shift[a][d]: index of gen^a * d; phase[b][d] = omega^(b * dlog(d)).
  std::vector<int> gpow(n);
  gpow[0] = m.group.identity;
  for (int a = 1; a < n; ++a) gpow[a] = m.group.op(gen, gpow[a - 1]);
  std::vector<std::vector<int>> shift(n, std::vector<int>(n));
  std::vector<std::vector<Complex>> phase(n, std::vector<Complex>(n));
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d) shift[a][d] = m.group.op(gpow[a], d);
  const double tau = 2.0 * std::acos(-1.0);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      phase[b][d] = std::polar(1.0, tau * b * dlog[d] / n);

  // Per-row digit cache.
  std::vector<int8_t> digits(static_cast<size_t>(nrows) * ne);
  for (int64_t i = 0; i < nrows; ++i)
    for (int e = 0; e < ne; ++e)
      digits[i * ne + e] =
          static_cast<int8_t>(digit_at(gs.rows[i], strides[e], n));

  DistanceResult result;
  result.max_weight = max_weight;
  const int nops = n * n;  // (a, b) pairs; (0, 0) is the identity, skipped
  Eigen::MatrixXcd mm(rank, rank);
  Eigen::MatrixXcd resid(nrows, rank);
  std::vector<int64_t> map_to(nrows);
  std::vector<Complex> map_ph(nrows);

  std::vector<int> edges(max_weight), opcode(max_weight);
  for (int weight = 1; weight <= max_weight && weight <= ne; ++weight) {
    // Lexicographic edge combinations.
    for (int i = 0; i < weight; ++i) edges[i] = i;
    while (true) {
      std::fill(opcode.begin(), opcode.begin() + weight, 1);
      while (true) {
        ++result.candidates;
        mm.setZero();
        for (int64_t i = 0; i < nrows; ++i) {
          int64_t target = gs.rows[i];
          Complex ph(1.0, 0.0);
          for (int k = 0; k < weight; ++k) {
            const int e = edges[k];
            const int a = opcode[k] / n, b = opcode[k] % n;
            const int d = digits[i * ne + e];
            ph *= phase[b][d];
            target += (shift[a][d] - d) * strides[e];
          }
          const auto it =
              std::lower_bound(gs.rows.begin(), gs.rows.end(), target);
          const bool hit = it != gs.rows.end() && *it == target;
          map_to[i] = hit ? it - gs.rows.begin() : -1;
          map_ph[i] = ph;
          if (hit)
            mm.noalias() +=
                gs.basis.row(map_to[i]).adjoint() * (ph * gs.basis.row(i));
        }
        // ||[O,P]||_F^2 = 2 ||(1-P)OP||_F^2 = 2 (rank - ||M||^2) for unitary
        // O.  The subtraction form only rejects; borderline candidates get
        // ||OV - VM||_F^2 assembled term by term, a pure sum of squares.
        const double cheap = static_cast<double>(rank) - mm.squaredNorm();
        if (cheap <= kCheapCutoff) {
          resid.noalias() = -(gs.basis * mm);
          double escaped = 0.0;
          for (int64_t i = 0; i < nrows; ++i) {
            if (map_to[i] < 0)
              escaped += gs.basis.row(i).squaredNorm();
            else
              resid.row(map_to[i]) += map_ph[i] * gs.basis.row(i);
          }
          const double esq = resid.squaredNorm() + escaped;
          if (std::sqrt(2.0 * esq) <= kCommuteTol) {
            const Complex lambda = mm.trace() / static_cast<double>(rank);
            const double nontrivial =
                (mm - lambda * Eigen::MatrixXcd::Identity(rank, rank)).norm();
            if (nontrivial > kNontrivialTol) {
              result.found = true;
              result.distance = weight;
              return result;
            }
          }
        }
        int k = weight - 1;
        while (k >= 0 && opcode[k] == nops - 1) opcode[k--] = 1;
        if (k < 0) break;
        ++opcode[k];
      }
      int k = weight - 1;
      while (k >= 0 && edges[k] == ne - weight + k) --k;
      if (k < 0) break;
      ++edges[k];
      for (int j = k + 1; j < weight; ++j) edges[j] = edges[j - 1] + 1;
    }
  }
  return result;
}

}  // namespace tqo
