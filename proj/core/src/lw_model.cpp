#include "tqo/lw_model.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "tqo/error.hpp"

namespace tqo {

namespace {

int read_out(const FusionData& fd, int label, bool out) {
  return out ? label : fd.dual[label];
}

// ---------------------------------------------------------------------------
// Face geometry: boundary occurrences plus the third edge at every corner.

struct FaceGeometry {
  int length = 0;
  std::vector<int> edge;      // occurrence j -> edge id
  std::vector<int> sign;      // occurrence j -> traversal sign
  std::vector<int> leg;       // corner j -> third edge at the corner vertex
  std::vector<bool> leg_out;  // leg oriented out of the corner vertex
};

bool face_vertex_simple(const CellComplex& c, const Face& f) {
  std::vector<int> seen;
  for (int j = 0; j < static_cast<int>(f.walk.size()); ++j)
    seen.push_back(c.face_step_target(f, j));
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

FaceGeometry face_geometry(const CellComplex& c, const Face& f) {
  FaceGeometry g;
  g.length = static_cast<int>(f.walk.size());
  for (int j = 0; j < g.length; ++j) {
    g.edge.push_back(f.walk[j].edge);
    g.sign.push_back(f.walk[j].sign);
  }
  for (int j = 0; j < g.length; ++j) {
    const int w = c.face_step_target(f, j);
    const int e_in = g.edge[j];
    const int e_out = g.edge[(j + 1) % g.length];
    int leg = -1;
    for (int e = 0; e < c.num_edges(); ++e) {
      if (c.edges[e].first != w && c.edges[e].second != w) continue;
      if (e == e_in || e == e_out) continue;
      if (leg >= 0)
        throw InvalidInput("plaquette corner is not trivalent");
      leg = e;
    }
    if (leg < 0) throw InvalidInput("plaquette corner has no third edge");
    g.leg.push_back(leg);
    g.leg_out.push_back(c.edges[leg].first == w);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Plaquette action on one labeling. Calls cb(new_face_labels, weight) for
// every transition with nonzero amplitude; `labels` must cover all face and
// leg edges. Corner factor layout is documented in the header.

template <typename Cb>
void plaquette_action(const FusionData& fd, const FaceGeometry& g,
                      const std::vector<int>& labels, Cb&& cb) {
  const int L = g.length;
  const int n = fd.nlabels;
  std::vector<int> x(L), t(L);
  for (int j = 0; j < L; ++j) {
    const int lam = labels[g.edge[j]];
    x[j] = g.sign[j] > 0 ? fd.dual[lam] : lam;
    t[j] = read_out(fd, labels[g.leg[j]], g.leg_out[j]);
  }
  for (int j = 0; j < L; ++j)
    if (!fd.N(x[j], t[j], x[(j + 1) % L])) return;  // B annihilates these

  std::vector<std::vector<int>> cand(L);
  std::vector<int> pick(L), xp(L), lamp(L);
  for (int s = 0; s < n; ++s) {
    const double weight0 = fd.qdim[s] / fd.total_dim_sq;
    bool feasible = true;
    for (int j = 0; j < L; ++j) {
      cand[j].clear();
      for (int v = 0; v < n; ++v)
        if (fd.N(s, x[j], v)) cand[j].push_back(v);
      if (cand[j].empty()) feasible = false;
    }
    if (!feasible) continue;
    // odometer over candidate new readings
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      for (int j = 0; j < L; ++j) xp[j] = cand[j][pick[j]];
      Complex amp(1.0, 0.0);
      for (int j = 0; j < L && amp != Complex(0.0, 0.0); ++j) {
        const int k = (j + 1) % L;
        amp *= fd.F(s, x[j], t[j], xp[k], xp[j], x[k]);
      }
      if (amp != Complex(0.0, 0.0)) {
        for (int j = 0; j < L; ++j)
          lamp[j] = g.sign[j] > 0 ? fd.dual[xp[j]] : xp[j];
        cb(lamp, weight0 * amp);
      }
      int j = 0;
      while (j < L && ++pick[j] == static_cast<int>(cand[j].size())) {
        pick[j] = 0;
        ++j;
      }
      if (j == L) break;
    }
  }
}

// ---------------------------------------------------------------------------
// Term builders.

std::vector<std::pair<int, bool>> incident_out(const CellComplex& c, int v) {
  std::vector<std::pair<int, bool>> inc;
  for (int e = 0; e < c.num_edges(); ++e) {
    if (c.edges[e].first == v) inc.emplace_back(e, true);
    else if (c.edges[e].second == v) inc.emplace_back(e, false);
  }
  return inc;
}

LocalTerm build_vertex_term(const CellComplex& c, const FusionData& fd,
                            const Caps& caps, int v) {
  const auto inc = incident_out(c, v);
  if (inc.size() != 3) throw InvalidInput("vertex is not trivalent");
  const int n = fd.nlabels;
  const int64_t ldim = pow_checked(n, 3);
  if (ldim > caps.subspace) throw CapExceeded("vertex term exceeds cap");
  std::vector<Triplet> trip;
  std::vector<int> lab(3);
  for (int64_t idx = 0; idx < ldim; ++idx) {
    int64_t r = idx;
    for (int i = 0; i < 3; ++i) {
      lab[i] = static_cast<int>(r % n);
      r /= n;
    }
    const int p = read_out(fd, lab[0], inc[0].second);
    const int q = read_out(fd, lab[1], inc[1].second);
    const int s = read_out(fd, lab[2], inc[2].second);
    if (fd.N(p, q, fd.dual[s]))
      trip.emplace_back(idx, idx, Complex(1.0, 0.0));
  }
  LocalTerm t;
  t.kind = TermKind::vertex;
  t.cell = v;
  std::vector<int> support;
  for (const auto& [e, out] : inc) support.push_back(e);
  std::sort(support.begin(), support.end());
  t.support_edges = support;
  t.support = make_region(c, support);
  t.local = make_sparse(ldim, trip);
  return t;
}

LocalTerm build_plaquette_term(const CellComplex& c, const FusionData& fd,
                               const Caps& caps, int fi) {
  const Face& f = c.faces[fi];
  const FaceGeometry g = face_geometry(c, f);
  std::vector<int> support = g.edge;
  support.insert(support.end(), g.leg.begin(), g.leg.end());
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (int j = 0; j < g.length; ++j)
    if (std::binary_search(g.edge.begin(), g.edge.end(), g.leg[j]) &&
        std::count(g.edge.begin(), g.edge.end(), g.leg[j]) > 0) {
      // A leg can only coincide with a boundary edge if the walk revisits a
      // vertex, which the vertex-simple precondition excludes.
      std::vector<int> sorted_edges = g.edge;
      std::sort(sorted_edges.begin(), sorted_edges.end());
      if (std::binary_search(sorted_edges.begin(), sorted_edges.end(),
                             g.leg[j]))
        throw InvalidInput("plaquette leg lies on the face boundary");
    }
  const int k = static_cast<int>(support.size());
  const int n = fd.nlabels;
  const int64_t ldim = pow_checked(n, k);
  if (ldim > caps.subspace) throw CapExceeded("plaquette term exceeds cap");

  std::vector<int> pos_of_edge(c.num_edges(), -1);
  for (int i = 0; i < k; ++i) pos_of_edge[support[i]] = i;
  std::vector<int64_t> stride(k);
  stride[0] = 1;
  for (int i = 1; i < k; ++i) stride[i] = stride[i - 1] * n;

  std::vector<Triplet> trip;
  std::vector<int> labels(c.num_edges(), 0);
  std::vector<std::pair<int64_t, Complex>> accum;
  for (int64_t col = 0; col < ldim; ++col) {
    int64_t r = col;
    for (int i = 0; i < k; ++i) {
      labels[support[i]] = static_cast<int>(r % n);
      r /= n;
    }
    accum.clear();
    plaquette_action(fd, g, labels,
                     [&](const std::vector<int>& lamp, Complex w) {
                       int64_t row = col;
                       for (int j = 0; j < g.length; ++j) {
                         const int p = pos_of_edge[g.edge[j]];
                         const int old = labels[g.edge[j]];
                         row += (lamp[j] - old) * stride[p];
                       }
                       for (auto& [rr, vv] : accum)
                         if (rr == row) {
                           vv += w;
                           return;
                         }
                       accum.emplace_back(row, w);
                     });
    for (const auto& [row, val] : accum)
      trip.emplace_back(row, col, val);
  }
  LocalTerm t;
  t.kind = TermKind::face;
  t.cell = fi;
  t.support_edges = support;
  t.support = make_region(c, support);
  t.local = make_sparse(ldim, trip);
  return t;
}

// ---------------------------------------------------------------------------
// Admissible-labeling enumeration.

struct VertexInfo {
  std::array<int, 3> edge{{-1, -1, -1}};
  std::array<bool, 3> out{{false, false, false}};
};

std::vector<VertexInfo> vertex_infos(const CellComplex& c) {
  std::vector<VertexInfo> vi(c.num_vertices);
  std::vector<int> fill(c.num_vertices, 0);
  for (int e = 0; e < c.num_edges(); ++e) {
    const auto [u, w] = c.edges[e];
    if (fill[u] >= 3 || fill[w] >= 3)
      throw InvalidInput("vertex degree exceeds three");
    vi[u].edge[fill[u]] = e;
    vi[u].out[fill[u]] = true;
    ++fill[u];
    vi[w].edge[fill[w]] = e;
    vi[w].out[fill[w]] = false;
    ++fill[w];
  }
  for (int v = 0; v < c.num_vertices; ++v)
    if (fill[v] != 3) throw InvalidInput("vertex is not trivalent");
  return vi;
}

}  // namespace

std::vector<int64_t> lw_admissible_labelings(const CellComplex& c,
                                             const FusionData& fd,
                                             Caps caps) {
  const auto vi = vertex_infos(c);
  const int n = fd.nlabels;
  const int E = c.num_edges();

  // Edge order completing vertices as early as possible.
  std::vector<int> order;
  std::vector<bool> chosen(E, false);
  for (int step = 0; step < E; ++step) {
    int best = -1, best_score = -1;
    for (int e = 0; e < E; ++e) {
      if (chosen[e]) continue;
      int score = 0;
      for (int v : {c.edges[e].first, c.edges[e].second})
        for (int i = 0; i < 3; ++i)
          if (vi[v].edge[i] != e && chosen[vi[v].edge[i]]) ++score;
      if (score > best_score) {
        best_score = score;
        best = e;
      }
    }
    chosen[best] = true;
    order.push_back(best);
  }
  std::vector<int> depth_of_edge(E);
  for (int d = 0; d < E; ++d) depth_of_edge[order[d]] = d;

  // any_pair[p][q]: some c completes (p, q); used to prune two-thirds-assigned
  // vertices (fusion of the built-ins is commutative, so slot order is moot).
  std::vector<uint8_t> any_pair(n * n, 0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        if (fd.N(p, q, r)) any_pair[p * n + q] = 1;

  std::vector<int> labels(E, -1);
  std::vector<int64_t> out;
  std::vector<int> digit(E, 0);
  const auto vertex_state = [&](int v) -> int {
    // 1 = admissible/completable, 0 = dead.
    int reads[3];
    int cnt = 0;
    int missing = -1;
    for (int i = 0; i < 3; ++i) {
      const int e = vi[v].edge[i];
      if (labels[e] < 0) {
        missing = i;
        continue;
      }
      reads[cnt++] = read_out(fd, labels[e], vi[v].out[i]);
    }
    if (cnt <= 1) return 1;
    if (cnt == 2) return any_pair[reads[0] * n + reads[1]];
    (void)missing;
    const int p = read_out(fd, labels[vi[v].edge[0]], vi[v].out[0]);
    const int q = read_out(fd, labels[vi[v].edge[1]], vi[v].out[1]);
    const int s = read_out(fd, labels[vi[v].edge[2]], vi[v].out[2]);
    return fd.N(p, q, fd.dual[s]);
  };

  int d = 0;
  digit[0] = 0;
  while (d >= 0) {
    if (digit[d] == n) {
      labels[order[d]] = -1;
      --d;
      if (d >= 0) ++digit[d];
      continue;
    }
    const int e = order[d];
    labels[e] = digit[d];
    bool ok = true;
    for (int v : {c.edges[e].first, c.edges[e].second})
      if (!vertex_state(v)) {
        ok = false;
        break;
      }
    if (!ok) {
      ++digit[d];
      continue;
    }
    if (d == E - 1) {
      out.push_back(encode_labels(labels, n));
      if (static_cast<int64_t>(out.size()) > caps.subspace)
        throw CapExceeded("admissible labeling count exceeds cap");
      ++digit[d];
      continue;
    }
    ++d;
    digit[d] = 0;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Minimal-torus contraction machinery. Darts: edge e owns darts 2e (based at
// the source) and 2e+1 (based at the destination). sigma maps each dart to
// the next dart around its base vertex; faces are recovered as orbits of
// phi(d) = sigma[d ^ 1].

namespace {

struct Mesh {
  std::vector<std::pair<int, int>> ev;  // endpoints, (-1,-1) when deleted
  std::vector<int> sigma;               // -1 when deleted
  std::vector<bool> vlive;

  int vertex_of(int d) const {
    return (d & 1) ? ev[d >> 1].second : ev[d >> 1].first;
  }
  bool edge_live(int e) const { return ev[e].first >= 0; }
};

Mesh mesh_from(const CellComplex& c) {
  Mesh m;
  m.ev = c.edges;
  m.sigma.assign(2 * c.num_edges(), -1);
  m.vlive.assign(c.num_vertices, true);
  for (const Face& f : c.faces) {
    const int L = static_cast<int>(f.walk.size());
    for (int j = 0; j < L; ++j) {
      const auto& s0 = f.walk[j];
      const auto& s1 = f.walk[(j + 1) % L];
      const int d0 = 2 * s0.edge + (s0.sign > 0 ? 0 : 1);
      const int d1 = 2 * s1.edge + (s1.sign > 0 ? 0 : 1);
      if (m.sigma[d0 ^ 1] != -1)
        throw InvalidInput("face walks do not cover each dart once");
      m.sigma[d0 ^ 1] = d1;
    }
  }
  for (int d = 0; d < static_cast<int>(m.sigma.size()); ++d)
    if (m.sigma[d] == -1)
      throw InvalidInput("face walks do not cover each dart once");
  return m;
}

// Rebuilds a CellComplex from the mesh; fills old->new edge index map.
CellComplex complex_from(const Mesh& m, const std::string& surface, int genus,
                         std::vector<int>& edge_map) {
  CellComplex c;
  c.surface = surface;
  c.genus = genus;
  const int Eold = static_cast<int>(m.ev.size());
  edge_map.assign(Eold, -1);
  std::vector<int> vmap(m.vlive.size(), -1);
  int nv = 0;
  for (size_t v = 0; v < m.vlive.size(); ++v)
    if (m.vlive[v]) vmap[v] = nv++;
  c.num_vertices = nv;
  for (int e = 0; e < Eold; ++e)
    if (m.edge_live(e)) {
      edge_map[e] = c.num_edges();
      c.edges.emplace_back(vmap[m.ev[e].first], vmap[m.ev[e].second]);
    }
  std::vector<bool> used(2 * Eold, false);
  std::vector<int> starts;
  for (int d = 0; d < 2 * Eold; ++d)
    if (m.edge_live(d >> 1) && !used[d]) {
      int x = d;
      do {
        used[x] = true;
        x = m.sigma[x ^ 1];
      } while (x != d);
      starts.push_back(d);
    }
  std::sort(starts.begin(), starts.end(), [&](int a, int b) {
    const int ka = 2 * edge_map[a >> 1] + (a & 1);
    const int kb = 2 * edge_map[b >> 1] + (b & 1);
    return ka < kb;
  });
  for (int d : starts) {
    Face f;
    f.start_vertex = vmap[m.vertex_of(d)];
    int x = d;
    do {
      f.walk.push_back(FaceStep{edge_map[x >> 1], (x & 1) ? -1 : +1});
      x = m.sigma[x ^ 1];
    } while (x != d);
    c.faces.push_back(std::move(f));
  }
  return c;
}

struct Reduction {
  CellComplex cc;
  Mesh mesh;
  std::vector<Eigen::VectorXcd> cols;  // over labelings of cc's edges
  const FusionData* fd = nullptr;
};

int64_t dim_of(const CellComplex& c, int n) {
  return pow_checked(n, c.num_edges());
}

// Edge slide across edge e (both endpoints trivalent, not a loop, the two
// adjacent faces distinct, no leg rides on e itself). Updates mesh topology
// and pushes the label-space unitary through the carried columns.
bool try_edge_slide(Reduction& R, int e) {
  Mesh& m = R.mesh;
  const FusionData& fd = *R.fd;
  const int g = 2 * e, gb = 2 * e + 1;
  const int u = m.ev[e].first, w = m.ev[e].second;
  if (u == w) return false;
  const int a1 = m.sigma[g], a2 = m.sigma[a1];
  const int b1 = m.sigma[gb], b2 = m.sigma[b1];
  if (m.sigma[a2] != g || m.sigma[b2] != gb) return false;  // not trivalent
  for (int leg : {a1, a2, b1, b2})
    if ((leg >> 1) == e) return false;
  // the two faces sharing e must differ: walk from g must not hit gb before
  // returning (same-face test via orbit scan)
  {
    int x = g;
    do {
      x = m.sigma[x ^ 1];
      if (x == gb) return false;
    } while (x != g);
  }

  if (!R.cols.empty()) {
    const int n = fd.nlabels;
    const int E = R.cc.num_edges();
    std::vector<int64_t> stride(E);
    stride[0] = 1;
    for (int i = 1; i < E; ++i) stride[i] = stride[i - 1] * n;
    const int64_t dim = stride[E - 1] * n;
    const auto outread = [&](int dart, const std::vector<int>& lab) {
      const int lbl = lab[dart >> 1];
      return (dart & 1) ? fd.dual[lbl] : lbl;
    };
    std::vector<int> lab(E, 0);
    std::vector<Eigen::VectorXcd> next;
    next.reserve(R.cols.size());
    for (size_t kcol = 0; kcol < R.cols.size(); ++kcol)
      next.emplace_back(Eigen::VectorXcd::Zero(dim));
    for (int64_t idx = 0; idx < dim; ++idx) {
      bool any = false;
      for (const auto& c : R.cols)
        if (c[idx] != Complex(0.0, 0.0)) {
          any = true;
          break;
        }
      if (!any) continue;
      int64_t r = idx;
      for (int i = 0; i < E; ++i) {
        lab[i] = static_cast<int>(r % n);
        r /= n;
      }
      const int A = outread(a2, lab);
      const int B = outread(a1, lab);
      const int C = outread(b1, lab);
      const int D = outread(b2, lab);
      const int e_old = fd.dual[lab[e]];
      for (int lp = 0; lp < n; ++lp) {
        const Complex amp = fd.F(A, B, D, fd.dual[C], e_old, lp);
        if (amp == Complex(0.0, 0.0)) continue;
        const int64_t jdx = idx + (lp - lab[e]) * stride[e];
        for (size_t kcol = 0; kcol < R.cols.size(); ++kcol)
          next[kcol][jdx] += amp * R.cols[kcol][idx];
      }
    }
    R.cols = std::move(next);
  }

  // Topology surgery: a1 migrates to w, b1 migrates to u.
  m.sigma[g] = a2;
  m.sigma[a2] = b1;
  m.sigma[b1] = g;
  m.sigma[gb] = b2;
  m.sigma[b2] = a1;
  m.sigma[a1] = gb;
  if (a1 & 1) m.ev[a1 >> 1].second = w; else m.ev[a1 >> 1].first = w;
  if (b1 & 1) m.ev[b1 >> 1].second = u; else m.ev[b1 >> 1].first = u;

  std::vector<int> edge_map;
  R.cc = complex_from(m, R.cc.surface, R.cc.genus, edge_map);
  R.mesh = mesh_from(R.cc);  // re-sync dart ids with the fresh numbering
  return true;
}

// Collapses a two-sided face: its two edges and both corner vertices vanish
// and the two hanging legs fuse into a single edge. Coisometric on labelings
// with weight sqrt(d_p d_q / (d_mu D)).
bool try_bigon_collapse(Reduction& R, int face_index) {
  Mesh& m = R.mesh;
  const FusionData& fd = *R.fd;
  const Face& f = R.cc.faces[face_index];
  if (f.walk.size() != 2) return false;
  const int d1 = 2 * f.walk[0].edge + (f.walk[0].sign > 0 ? 0 : 1);
  const int d2 = 2 * f.walk[1].edge + (f.walk[1].sign > 0 ? 0 : 1);
  const int p = d1 >> 1, q = d2 >> 1;
  if (p == q) return false;
  const int v1 = m.vertex_of(d1), v2 = m.vertex_of(d2);
  if (v1 == v2) return false;
  // legs: third darts at v1 and v2
  int l1 = -1, l2 = -1;
  {
    const int x1 = m.sigma[d1], x2 = m.sigma[x1];
    if (m.sigma[x2] != d1) return false;
    l1 = ((x1 >> 1) != p && (x1 >> 1) != q) ? x1 : x2;
    const int y1 = m.sigma[d2], y2 = m.sigma[y1];
    if (m.sigma[y2] != d2) return false;
    l2 = ((y1 >> 1) != p && (y1 >> 1) != q) ? y1 : y2;
  }
  if ((l1 >> 1) == p || (l1 >> 1) == q || (l2 >> 1) == p || (l2 >> 1) == q)
    return false;
  if ((l1 >> 1) == (l2 >> 1)) return false;
  const int far1 = m.vertex_of(l1 ^ 1), far2 = m.vertex_of(l2 ^ 1);
  if (far1 == v1 || far1 == v2 || far2 == v1 || far2 == v2) return false;
  if (far1 == far2) return false;  // refuse a loop result

  const int n = fd.nlabels;
  const int E = R.cc.num_edges();
  std::vector<int64_t> stride(E);
  stride[0] = 1;
  for (int i = 1; i < E; ++i) stride[i] = stride[i - 1] * n;
  const int64_t dim = stride[E - 1] * n;

  const int e_l1 = l1 >> 1, e_l2 = l2 >> 1;
  const auto outread = [&](int dart, const std::vector<int>& lab) {
    const int lbl = lab[dart >> 1];
    return (dart & 1) ? fd.dual[lbl] : lbl;
  };

  // Surgery first (on copies of the indices we need), then rebuild to learn
  // the new numbering, then push the labels through.
  const int enew = static_cast<int>(m.ev.size());
  m.ev.emplace_back(far1, far2);
  m.sigma.resize(2 * (enew + 1), -1);
  const int nd1 = 2 * enew, nd2 = 2 * enew + 1;
  // replace alpha(l1) in far1's rotation with nd1
  const int al1 = l1 ^ 1, al2 = l2 ^ 1;
  int pred = al1;
  while (m.sigma[pred] != al1) pred = m.sigma[pred];
  m.sigma[pred] = nd1;
  m.sigma[nd1] = m.sigma[al1];
  pred = al2;
  while (m.sigma[pred] != al2) pred = m.sigma[pred];
  m.sigma[pred] = nd2;
  m.sigma[nd2] = m.sigma[al2];
  for (int dart : {d1, d2, d1 ^ 1, d2 ^ 1, l1, l2, al1, al2}) m.sigma[dart] = -1;
  m.ev[p] = {-1, -1};
  m.ev[q] = {-1, -1};
  m.ev[e_l1] = {-1, -1};
  m.ev[e_l2] = {-1, -1};
  m.vlive[v1] = false;
  m.vlive[v2] = false;

  std::vector<int> edge_map;
  CellComplex cc2 = complex_from(m, R.cc.surface, R.cc.genus, edge_map);
  const int E2 = cc2.num_edges();
  std::vector<int64_t> stride2(E2);
  stride2[0] = 1;
  for (int i = 1; i < E2; ++i) stride2[i] = stride2[i - 1] * n;
  const int64_t dim2 = stride2[E2 - 1] * n;

  if (!R.cols.empty()) {
    std::vector<Eigen::VectorXcd> next;
    next.reserve(R.cols.size());
    for (size_t kcol = 0; kcol < R.cols.size(); ++kcol)
      next.emplace_back(Eigen::VectorXcd::Zero(dim2));
    std::vector<int> lab(E, 0);
    for (int64_t idx = 0; idx < dim; ++idx) {
      bool any = false;
      for (const auto& c : R.cols)
        if (c[idx] != Complex(0.0, 0.0)) {
          any = true;
          break;
        }
      if (!any) continue;
      int64_t r = idx;
      for (int i = 0; i < E; ++i) {
        lab[i] = static_cast<int>(r % n);
        r /= n;
      }
      // strand continuity through the collapsed face
      const int mu = fd.dual[outread(l1, lab)];
      if (outread(l2, lab) != mu) continue;
      // vertex admissibility at both corners
      const int pa = outread(d1 ^ 1, lab), pb = outread(d2, lab),
                pc = outread(l2, lab);
      if (!fd.N(pa, pb, fd.dual[pc])) continue;
      const int qa = outread(d2 ^ 1, lab), qb = outread(d1, lab),
                qc = outread(l1, lab);
      if (!fd.N(qa, qb, fd.dual[qc])) continue;
      const double amp = std::sqrt(fd.qdim[lab[p]] * fd.qdim[lab[q]] /
                                   (fd.qdim[mu] * fd.total_dim_sq));
      int64_t jdx = 0;
      for (int i = 0; i < E; ++i) {
        if (edge_map[i] < 0) continue;
        jdx += static_cast<int64_t>(lab[i]) * stride2[edge_map[i]];
      }
      jdx += static_cast<int64_t>(mu) * stride2[edge_map[enew]];
      for (size_t kcol = 0; kcol < R.cols.size(); ++kcol)
        next[kcol][jdx] += amp * R.cols[kcol][idx];
    }
    R.cols = std::move(next);
  }
  R.cc = std::move(cc2);
  R.mesh = mesh_from(R.cc);
  return true;
}

// Finds the face currently containing the tracked dart.
int face_of_dart(const CellComplex& c, int edge, int sign) {
  for (int fi = 0; fi < c.num_faces(); ++fi)
    for (const auto& st : c.faces[fi].walk)
      if (st.edge == edge && st.sign == sign) return fi;
  return -1;
}

// Face on the other side of edge e relative to face fi; -1 if e is traversed
// twice by fi itself.
int other_face(const CellComplex& c, int fi, int e) {
  int cnt = 0;
  for (const auto& st : c.faces[fi].walk)
    if (st.edge == e) ++cnt;
  if (cnt != 1) return -1;
  for (int fj = 0; fj < c.num_faces(); ++fj) {
    if (fj == fi) continue;
    for (const auto& st : c.faces[fj].walk)
      if (st.edge == e) return fj;
  }
  return -1;
}

struct Move {
  bool slide = false;  // else: bigon collapse
  int id = -1;         // edge (slide) or face (collapse), current numbering
};

std::string structure_key(const CellComplex& c) {
  std::string s = std::to_string(c.num_vertices);
  for (const auto& [a, b] : c.edges)
    s += "|" + std::to_string(a) + "," + std::to_string(b);
  for (const auto& f : c.faces) {
    s += "/";
    for (const auto& st : f.walk)
      s += std::to_string(st.sign * (st.edge + 1)) + ",";
  }
  return s;
}

// Depth-first search over move sequences on structure-only copies. Greedy
// shrinking stalls on the two-hexagon stage (every slide hands one side back
// to each face), so contraction needs lookahead.
bool plan_search(const Reduction& node, int variant, int depth, int& budget,
                 std::set<std::string>& visited, std::vector<Move>& plan) {
  if (node.cc.num_vertices == 2 && node.cc.num_edges() == 3 &&
      node.cc.num_faces() == 1)
    return true;
  if (depth == 0) return false;
  struct Cand {
    Move mv;
    int key0 = 0, key1 = 0;
  };
  std::vector<Cand> cands;
  for (int fi = 0; fi < node.cc.num_faces(); ++fi)
    if (node.cc.faces[fi].walk.size() == 2)
      cands.push_back({{false, fi}, -1, variant == 0 ? fi : -fi});
  for (int e = 0; e < node.cc.num_edges(); ++e) {
    int f1 = -1, f2 = -1;
    for (int fi = 0; fi < node.cc.num_faces(); ++fi)
      for (const auto& st : node.cc.faces[fi].walk)
        if (st.edge == e) {
          if (f1 < 0) f1 = fi;
          else f2 = fi;
        }
    if (f1 < 0 || f2 < 0 || f1 == f2) continue;
    const int s1 = static_cast<int>(node.cc.faces[f1].walk.size());
    const int s2 = static_cast<int>(node.cc.faces[f2].walk.size());
    if (std::min(s1, s2) <= 2) continue;  // a slide would leave a one-gon
    cands.push_back({{true, e}, std::min(s1, s2) - 1, variant == 0 ? e : -e});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a,
                                                  const Cand& b) {
    if (a.key0 != b.key0) return a.key0 < b.key0;
    return a.key1 < b.key1;
  });
  for (const Cand& cand : cands) {
    if (--budget <= 0) return false;
    Reduction child;
    child.cc = node.cc;
    child.mesh = node.mesh;
    child.fd = node.fd;
    const bool ok = cand.mv.slide ? try_edge_slide(child, cand.mv.id)
                                  : try_bigon_collapse(child, cand.mv.id);
    if (!ok) continue;
    if (!visited.insert(structure_key(child.cc)).second) continue;
    plan.push_back(cand.mv);
    if (plan_search(child, variant, depth - 1, budget, visited, plan))
      return true;
    plan.pop_back();
  }
  return false;
}

void reduce_to_minimal(Reduction& R, int variant) {
  Reduction probe;
  probe.cc = R.cc;
  probe.mesh = R.mesh;
  probe.fd = R.fd;
  std::vector<Move> plan;
  std::set<std::string> visited;
  int budget = 200000;
  if (!plan_search(probe, variant, 48, budget, visited, plan))
    throw NotConverged("no contraction path to the minimal torus");
  for (const Move& mv : plan) {
    const bool ok = mv.slide ? try_edge_slide(R, mv.id)
                             : try_bigon_collapse(R, mv.id);
    if (!ok) throw NotConverged("contraction replay diverged");
  }
}

// Orientation-respecting relabeling of a one-hexagon torus onto the built-in
// minimal honeycomb torus: user edge e maps to std edge perm[e], dualizing
// when flip[e] is set.
struct ThetaMatch {
  std::array<int, 3> perm{};
  std::array<bool, 3> flip{};
};

std::optional<ThetaMatch> match_theta(const CellComplex& user,
                                      const CellComplex& ref) {
  if (user.num_vertices != 2 || user.num_edges() != 3 ||
      user.num_faces() != 1 || ref.num_vertices != 2 || ref.num_edges() != 3 ||
      ref.num_faces() != 1)
    return std::nullopt;
  if (user.faces[0].walk.size() != 6 || ref.faces[0].walk.size() != 6)
    return std::nullopt;
  static const std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (int vswap = 0; vswap < 2; ++vswap) {
    const auto vm = [&](int v) { return vswap ? 1 - v : v; };
    for (const auto& perm : perms) {
      std::array<bool, 3> flip{};
      bool ok = true;
      for (int e = 0; e < 3 && ok; ++e) {
        const auto [us, ud] = user.edges[e];
        const auto [rs, rd] = ref.edges[perm[e]];
        if (vm(us) == rs && vm(ud) == rd) flip[e] = false;
        else if (vm(us) == rd && vm(ud) == rs) flip[e] = true;
        else ok = false;
      }
      if (!ok) continue;
      // walk must match a rotation of the reference walk
      const auto& uw = user.faces[0].walk;
      const auto& rw = ref.faces[0].walk;
      for (int rot = 0; rot < 6; ++rot) {
        bool match = true;
        for (int j = 0; j < 6 && match; ++j) {
          const auto& st = uw[j];
          const int me = perm[st.edge];
          const int ms = flip[st.edge] ? -st.sign : st.sign;
          const auto& rt = rw[(j + rot) % 6];
          if (rt.edge != me || rt.sign != ms) match = false;
        }
        if (match) return ThetaMatch{perm, flip};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

SparseOperator lw_minimal_torus_plaquette(const FusionData& fd, int variant) {
  static std::mutex mu;
  static std::map<std::pair<std::string, int>, SparseOperator> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({fd.name, variant});
    if (it != cache.end()) return it->second;
  }

  const CellComplex fine = build_standard("torus", "honeycomb-torus", 2);
  const LatticeModel m2 = lw_build(fine, fd);
  const GroundSpace gs = lw_ground_space(m2);

  Reduction R;
  R.cc = fine;
  R.mesh = mesh_from(fine);
  R.fd = &fd;
  const int64_t dim = dim_of(fine, fd.nlabels);
  for (int64_t k = 0; k < gs.rank(); ++k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (size_t r = 0; r < gs.rows.size(); ++r) v[gs.rows[r]] = gs.basis(r, k);
    R.cols.push_back(std::move(v));
  }
  reduce_to_minimal(R, variant);
  if (R.cc.num_vertices != 2 || R.cc.num_edges() != 3 || R.cc.num_faces() != 1)
    throw NotConverged("contraction did not reach the minimal torus");

  const CellComplex ref = build_standard("torus", "honeycomb-torus", 1);
  const auto match = match_theta(R.cc, ref);
  if (!match) throw NotConverged("contracted torus does not match the built-in");
  const int n = fd.nlabels;
  const int64_t d3 = pow_checked(n, 3);
  Eigen::MatrixXcd V(d3, static_cast<int64_t>(R.cols.size()));
  std::vector<int> lab(3), mapped(3);
  for (int64_t idx = 0; idx < d3; ++idx) {
    int64_t r = idx;
    for (int i = 0; i < 3; ++i) {
      lab[i] = static_cast<int>(r % n);
      r /= n;
    }
    for (int e = 0; e < 3; ++e)
      mapped[match->perm[e]] = match->flip[e] ? fd.dual[lab[e]] : lab[e];
    const int64_t jdx = mapped[0] + n * (mapped[1] + n * mapped[2]);
    for (size_t k = 0; k < R.cols.size(); ++k) V(jdx, k) = R.cols[k][idx];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(V);
  qr.setThreshold(1e-8);
  const int64_t rank = qr.rank();
  if (rank != static_cast<int64_t>(R.cols.size()))
    throw NotConverged("contraction collapsed ground-space directions");
  Eigen::MatrixXcd thin = Eigen::MatrixXcd::Identity(d3, rank);
  thin.applyOnTheLeft(qr.householderQ());
  const Eigen::MatrixXcd proj = thin * thin.adjoint();
  std::vector<Triplet> trip;
  for (int64_t i = 0; i < d3; ++i)
    for (int64_t j = 0; j < d3; ++j)
      if (std::abs(proj(i, j)) > kDropTolerance)
        trip.emplace_back(i, j, proj(i, j));
  SparseOperator out = make_sparse(d3, trip);
  {
    std::lock_guard<std::mutex> lock(mu);
    cache.insert({{fd.name, variant}, out});
  }
  return out;
}

// ---------------------------------------------------------------------------

LatticeModel lw_build(const CellComplex& c, const FusionData& fd, Caps caps) {
  {
    const auto viol = validate(c);
    if (!viol.empty()) throw InvalidInput("invalid complex: " + viol.front());
    const auto fviol = validate_fusion(fd);
    if (!fviol.empty())
      throw InvalidInput("invalid fusion data: " + fviol.front());
  }
  if (!c.trivalent()) throw InvalidInput("complex is not trivalent");
  for (const auto& [s, d] : c.edges)
    if (s == d) throw InvalidInput("loop edges are unsupported");

  LatticeModel m;
  m.family = "lw";
  m.algebra = fd.name;
  m.complex = c;
  m.nlabels = fd.nlabels;
  m.dim = pow_checked(fd.nlabels, c.num_edges());
  m.caps = caps;
  m.fusion = fd;

  for (int v = 0; v < c.num_vertices; ++v)
    m.terms.push_back(build_vertex_term(c, fd, caps, v));

  for (int fi = 0; fi < c.num_faces(); ++fi) {
    if (face_vertex_simple(c, c.faces[fi])) {
      m.terms.push_back(build_plaquette_term(c, fd, caps, fi));
      continue;
    }
    // Only the minimal one-hexagon torus is supported among self-touching
    // faces; its plaquette comes from the contraction construction.
    const CellComplex ref = build_standard("torus", "honeycomb-torus", 1);
    const auto match = match_theta(c, ref);
    if (!match)
      throw InvalidInput(
          "self-touching faces are supported only on the minimal honeycomb "
          "torus");
    const SparseOperator bstd = lw_minimal_torus_plaquette(fd);
    const int n = fd.nlabels;
    const int64_t d3 = pow_checked(n, 3);
    // conjugate the reference-numbered operator into the user's numbering
    std::vector<int64_t> to_std(d3);
    std::vector<int> lab(3), mapped(3);
    for (int64_t idx = 0; idx < d3; ++idx) {
      int64_t r = idx;
      for (int i = 0; i < 3; ++i) {
        lab[i] = static_cast<int>(r % n);
        r /= n;
      }
      for (int e = 0; e < 3; ++e)
        mapped[match->perm[e]] = match->flip[e] ? fd.dual[lab[e]] : lab[e];
      to_std[idx] = mapped[0] + n * (mapped[1] + n * mapped[2]);
    }
    std::vector<Triplet> trip;
    for (int64_t col = 0; col < d3; ++col)
      for (Eigen::SparseMatrix<Complex>::InnerIterator it(bstd.mat,
                                                          to_std[col]);
           it; ++it) {
        // it.row() is a reference-numbered row; find the user index.
        int64_t rr = it.row();
        std::vector<int> slab(3);
        for (int i = 0; i < 3; ++i) {
          slab[i] = static_cast<int>(rr % n);
          rr /= n;
        }
        std::vector<int> ulab(3);
        for (int e = 0; e < 3; ++e) {
          const int sv = slab[match->perm[e]];
          ulab[e] = match->flip[e] ? fd.dual[sv] : sv;
        }
        const int64_t urow = ulab[0] + n * (ulab[1] + n * ulab[2]);
        trip.emplace_back(urow, col, it.value());
      }
    LocalTerm t;
    t.kind = TermKind::face;
    t.cell = fi;
    t.support_edges = {0, 1, 2};
    t.support = make_region(c, t.support_edges);
    t.local = make_sparse(d3, trip);
    m.terms.push_back(std::move(t));
  }
  return m;
}

SparseOperator lw_ground_projector(const LatticeModel& m) {
  return ground_projector_from_terms(m);
}

namespace {

// Subspace restriction of one face term: for each admissible column, the
// rows it maps to with amplitudes. Restriction is exact because plaquettes
// preserve vertex admissibility.
struct SubOp {
  std::vector<int32_t> ptr;
  std::vector<int32_t> row;
  std::vector<Complex> val;
};

SubOp restrict_term(const LatticeModel& m, const LocalTerm& t,
                    const std::vector<int64_t>& adm) {
  const int n = m.nlabels;
  const int E = m.complex.num_edges();
  const int k = static_cast<int>(t.support_edges.size());
  std::vector<int64_t> stride(k);
  stride[0] = 1;
  for (int i = 1; i < k; ++i) stride[i] = stride[i - 1] * n;
  SubOp op;
  op.ptr.push_back(0);
  std::vector<int> lab(E);
  for (size_t a = 0; a < adm.size(); ++a) {
    const auto labels = decode_labels(adm[a], n, E);
    int64_t lcol = 0;
    for (int i = 0; i < k; ++i) lcol += labels[t.support_edges[i]] * stride[i];
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(t.local.mat, lcol); it;
         ++it) {
      int64_t lrow = it.row();
      int64_t grow = adm[a];
      for (int i = 0; i < k; ++i) {
        const int digit = static_cast<int>((lrow / stride[i]) % n);
        grow += (digit - labels[t.support_edges[i]]) *
                pow_checked(n, t.support_edges[i]);
      }
      const auto pos = std::lower_bound(adm.begin(), adm.end(), grow);
      if (pos == adm.end() || *pos != grow)
        throw NotConverged("plaquette left the admissible subspace");
      op.row.push_back(static_cast<int32_t>(pos - adm.begin()));
      op.val.push_back(it.value());
    }
    op.ptr.push_back(static_cast<int32_t>(op.row.size()));
  }
  return op;
}

}  // namespace

GroundSpace lw_ground_space(const LatticeModel& m) {
  if (m.family != "lw") throw InvalidInput("not a string-net model");
  const auto adm = lw_admissible_labelings(m.complex, m.fusion, m.caps);
  const int64_t na = static_cast<int64_t>(adm.size());
  if (na == 0) throw InvalidInput("no admissible labelings");
  if (na > kDenseEigenCap)
    throw CapExceeded("admissible subspace exceeds the dense eigensolver cap");
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(na, na);
  for (int ti = static_cast<int>(m.terms.size()) - 1; ti >= 0; --ti) {
    const LocalTerm& t = m.terms[ti];
    if (t.kind != TermKind::face) continue;
    const SubOp op = restrict_term(m, t, adm);
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(na, na);
    for (int64_t col = 0; col < na; ++col)
      for (int32_t j = op.ptr[col]; j < op.ptr[col + 1]; ++j)
        next.row(op.row[j]) += op.val[j] * P.row(col);
    P = std::move(next);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      (P + P.adjoint()) * 0.5);
  int64_t rank = 0;
  for (int64_t i = 0; i < na; ++i)
    if (es.eigenvalues()[i] > 0.5) ++rank;
  GroundSpace g;
  g.ambient_dim = m.dim;
  g.rows = adm;
  g.basis = es.eigenvectors().rightCols(rank);
  g.method = "subspace";
  return g;
}

int64_t lw_gsd(const LatticeModel& m, uint64_t seed) {
  const auto adm = lw_admissible_labelings(m.complex, m.fusion, m.caps);
  const int64_t na = static_cast<int64_t>(adm.size());
  if (na <= kDenseEigenCap) return lw_ground_space(m).rank();

  std::vector<SubOp> fops;
  int nfaces = 0;
  for (const LocalTerm& t : m.terms)
    if (t.kind == TermKind::face) {
      fops.push_back(restrict_term(m, t, adm));
      ++nfaces;
    }
  LinearMap h;
  h.dim = na;
  h.apply_fn = [na, nfaces, fops](const Complex* in, Complex* out) {
    for (int64_t i = 0; i < na; ++i)
      out[i] = static_cast<double>(nfaces) * in[i];
    for (const SubOp& op : fops)
      for (int64_t col = 0; col < na; ++col) {
        const Complex x = in[col];
        if (x == Complex(0.0, 0.0)) continue;
        for (int32_t j = op.ptr[col]; j < op.ptr[col + 1]; ++j)
          out[op.row[j]] -= op.val[j] * x;
      }
  };
  for (int k : {8, 16}) {
    LanczosOptions opt;
    opt.seed = seed;
    const auto vals = low_spectrum(h, k, opt);
    int64_t zeros = 0;
    for (double v : vals)
      if (v < 0.5) ++zeros;
    if (!vals.empty() && vals.back() >= 0.5) return zeros;
  }
  throw NotConverged("could not separate the ground block");
}

SubspaceSummary lw_subspace_summary(const LatticeModel& m, uint64_t seed) {
  if (m.family != "lw") throw InvalidInput("not a string-net model");
  const auto adm = lw_admissible_labelings(m.complex, m.fusion, m.caps);
  const int64_t na = static_cast<int64_t>(adm.size());
  if (na == 0) throw InvalidInput("no admissible labelings");

  std::vector<SubOp> fops;
  for (const LocalTerm& t : m.terms)
    if (t.kind == TermKind::face) fops.push_back(restrict_term(m, t, adm));
  const int nfaces = static_cast<int>(fops.size());
  const auto apply_sub = [na](const SubOp& op, const Eigen::VectorXcd& in,
                              Eigen::VectorXcd& out) {
    out.setZero();
    for (int64_t col = 0; col < na; ++col) {
      const Complex x = in[col];
      if (x == Complex(0.0, 0.0)) continue;
      for (int32_t j = op.ptr[col]; j < op.ptr[col + 1]; ++j)
        out[op.row[j]] += op.val[j] * x;
    }
  };

  SubspaceSummary s;
  Eigen::MatrixXcd basis;
  if (na <= kDenseEigenCap) {
    basis = lw_ground_space(m).basis;
    s.gsd = basis.cols();
  } else {
    s.gsd = lw_gsd(m, seed);
    // Exact ground basis: the plaquette product is an orthogonal projector
    // (the terms commute), so one pass through it lands in the ground
    // space; random starts make the image full-rank with probability one.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    basis.resize(na, s.gsd);
    Eigen::VectorXcd cur(na), nxt(na);
    for (int64_t k = 0; k < s.gsd; ++k) {
      for (int64_t i = 0; i < na; ++i) cur[i] = Complex(gauss(rng), gauss(rng));
      for (const SubOp& op : fops) {
        apply_sub(op, cur, nxt);
        cur.swap(nxt);
      }
      basis.col(k) = cur;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(basis);
    qr.setThreshold(1e-8);
    if (qr.rank() != s.gsd)
      throw NotConverged("projected ground basis is rank deficient");
    basis = qr.householderQ() * Eigen::MatrixXcd::Identity(na, s.gsd);
  }

  // Vertex terms are the identity on admissible labelings by construction,
  // so the frustration maximum ranges over the plaquette restrictions.
  Eigen::VectorXcd out(na);
  for (const SubOp& op : fops)
    for (int64_t k = 0; k < basis.cols(); ++k) {
      const Eigen::VectorXcd x = basis.col(k);
      apply_sub(op, x, out);
      s.frustration = std::max(s.frustration, (out - x).norm());
    }

  if (na <= kDenseEigenCap) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(na, na);
    h.diagonal().setConstant(static_cast<double>(nfaces));
    for (const SubOp& op : fops)
      for (int64_t col = 0; col < na; ++col)
        for (int32_t j = op.ptr[col]; j < op.ptr[col + 1]; ++j)
          h(op.row[j], col) -= op.val[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        (h + h.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    s.adm_gap = es.eigenvalues()[s.gsd];
  } else {
    LinearMap h;
    h.dim = na;
    h.apply_fn = [na, nfaces, &fops](const Complex* in, Complex* out) {
      for (int64_t i = 0; i < na; ++i)
        out[i] = static_cast<double>(nfaces) * in[i];
      for (const SubOp& op : fops)
        for (int64_t col = 0; col < na; ++col) {
          const Complex x = in[col];
          if (x == Complex(0.0, 0.0)) continue;
          for (int32_t j = op.ptr[col]; j < op.ptr[col + 1]; ++j)
            out[op.row[j]] -= op.val[j] * x;
        }
    };
    LanczosOptions opt;
    opt.seed = seed;
    s.adm_gap = low_spectrum(h, 1, opt, &basis)[0];
  }
  return s;
}

int64_t lw_gsd_oracle_pointed(const CellComplex& c, const FusionData& fd) {
  const int n = fd.nlabels;
  for (double d : fd.qdim)
    if (std::abs(d - 1.0) > 1e-9)
      throw InvalidInput("fusion data is not pointed");
  // group law and a generator
  std::vector<int> mult(n * n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int count = 0;
      for (int cc = 0; cc < n; ++cc)
        if (fd.N(a, b, cc)) {
          mult[a * n + b] = cc;
          ++count;
        }
      if (count != 1) throw InvalidInput("fusion data is not pointed");
    }
  std::vector<int> dlog(n, -1);
  int gen = -1;
  for (int g = 0; g < n && gen < 0; ++g) {
    std::vector<int> seen;
    int x = fd.unit, steps = 0;
    std::fill(dlog.begin(), dlog.end(), -1);
    do {
      if (dlog[x] != -1) break;
      dlog[x] = steps++;
      x = mult[x * n + g];
    } while (true);
    if (steps == n) gen = g;
  }
  if (gen < 0) throw InvalidInput("fusion data is not cyclic");
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0 && n != p)
      throw InvalidInput("oracle requires a prime label count");

  const int E = c.num_edges();
  const auto rank_mod = [&](std::vector<std::vector<int>> rows) -> int {
    int rank = 0;
    for (int col = 0; col < E && rank < static_cast<int>(rows.size()); ++col) {
      int piv = -1;
      for (int r = rank; r < static_cast<int>(rows.size()); ++r)
        if (rows[r][col] % n != 0) {
          piv = r;
          break;
        }
      if (piv < 0) continue;
      std::swap(rows[rank], rows[piv]);
      // n prime: invert the pivot
      int inv = 1;
      const int pv = ((rows[rank][col] % n) + n) % n;
      for (int t = 1; t < n; ++t)
        if (pv * t % n == 1) inv = t;
      for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
        if (r == rank) continue;
        const int factor = ((rows[r][col] % n) + n) % n * inv % n;
        if (!factor) continue;
        for (int cc = 0; cc < E; ++cc)
          rows[r][cc] = ((rows[r][cc] - factor * rows[rank][cc]) % n + n) % n;
      }
      ++rank;
    }
    return rank;
  };

  std::vector<std::vector<int>> a_rows(c.num_vertices,
                                       std::vector<int>(E, 0));
  for (int e = 0; e < E; ++e) {
    a_rows[c.edges[e].first][e] += 1;
    a_rows[c.edges[e].second][e] -= 1;
  }
  std::vector<std::vector<int>> s_rows;
  for (const Face& f : c.faces) {
    std::vector<int> row(E, 0);
    for (const auto& st : f.walk) row[st.edge] += st.sign > 0 ? -1 : 1;
    s_rows.push_back(std::move(row));
  }
  const int dim_ker = E - rank_mod(a_rows);
  const int dim_shift = rank_mod(s_rows);
  return pow_checked(n, dim_ker - dim_shift);
}

}  // namespace tqo
