#include "tqo/dw_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace tqo {

namespace {

enum class EdgeRole { out, in, loop };

struct VertexStar {
  std::vector<int> edges;       // sorted, unique
  std::vector<EdgeRole> roles;  // parallel to edges
};

VertexStar vertex_star(const CellComplex& c, int v) {
  VertexStar s;
  for (int e = 0; e < c.num_edges(); ++e) {
    const auto [a, b] = c.edges[e];
    if (a == v && b == v) {
      s.edges.push_back(e);
      s.roles.push_back(EdgeRole::loop);
    } else if (a == v) {
      s.edges.push_back(e);
      s.roles.push_back(EdgeRole::out);
    } else if (b == v) {
      s.edges.push_back(e);
      s.roles.push_back(EdgeRole::in);
    }
  }
  return s;
}

int gauge_moved_label(const FiniteGroup& g, EdgeRole role, int label, int h) {
  switch (role) {
    case EdgeRole::out:
      return g.op(g.inv[h], label);
    case EdgeRole::in:
      return g.op(label, h);
    case EdgeRole::loop:
      return g.op(g.inv[h], g.op(label, h));
  }
  throw InvalidInput("unreachable edge role");
}

int walk_product(const CellComplex& c, const FiniteGroup& g, const Face& f,
                 const std::vector<int>& labels) {
  int h = g.identity;
  for (const FaceStep& st : f.walk) {
    const int l = labels[st.edge];
    h = g.op(h, st.sign > 0 ? l : g.inv[l]);
  }
  return h;
}

void require_dw(const LatticeModel& m) {
  if (m.family != "dw")
    throw InvalidInput("expected a gauge model, got family '" + m.family +
                       "'");
}

struct OrbitData {
  std::vector<int64_t> flats;  // ascending packed configurations
  std::vector<int> orbit_of;   // orbit id per flat, ids in first-seen order
  std::vector<int64_t> orbit_size;
};

OrbitData gauge_orbits(const CellComplex& c, const FiniteGroup& g,
                       const Caps& caps) {
  OrbitData d;
  d.flats = dw_flat_colorings(c, g, caps);
  std::unordered_map<int64_t, int> index;
  index.reserve(d.flats.size() * 2);
  for (size_t i = 0; i < d.flats.size(); ++i)
    index.emplace(d.flats[i], static_cast<int>(i));
  d.orbit_of.assign(d.flats.size(), -1);

  std::vector<VertexStar> stars;
  stars.reserve(c.num_vertices);
  for (int v = 0; v < c.num_vertices; ++v) stars.push_back(vertex_star(c, v));

  const int ne = c.num_edges();
  std::vector<int> stack;
  for (size_t seed = 0; seed < d.flats.size(); ++seed) {
    if (d.orbit_of[seed] != -1) continue;
    const int orbit = static_cast<int>(d.orbit_size.size());
    d.orbit_size.push_back(0);
    d.orbit_of[seed] = orbit;
    stack.assign(1, static_cast<int>(seed));
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      ++d.orbit_size[orbit];
      const std::vector<int> labels =
          decode_labels(d.flats[cur], g.order, ne);
      for (const VertexStar& s : stars) {
        for (int h = 0; h < g.order; ++h) {
          if (h == g.identity) continue;
          std::vector<int> moved = labels;
          for (size_t k = 0; k < s.edges.size(); ++k)
            moved[s.edges[k]] =
                gauge_moved_label(g, s.roles[k], labels[s.edges[k]], h);
          const auto it = index.find(encode_labels(moved, g.order));
          if (it == index.end())
            throw InvalidInput(
                "gauge move left the flat set; complex or group is "
                "inconsistent");
          if (d.orbit_of[it->second] == -1) {
            d.orbit_of[it->second] = orbit;
            stack.push_back(it->second);
          }
        }
      }
    }
  }
  return d;
}

}  // namespace

LatticeModel dw_build(const CellComplex& c, const FiniteGroup& g,
                      const Caps& caps) {
  {
    const auto errs = validate(c);
    if (!errs.empty()) throw InvalidInput("cell complex: " + errs.front());
  }
  {
    const auto errs = validate_group(g);
    if (!errs.empty()) throw InvalidInput("group: " + errs.front());
  }
  LatticeModel m;
  m.family = "dw";
  m.algebra = g.name;
  m.complex = c;
  m.nlabels = g.order;
  m.caps = caps;
  m.dim = pow_checked(g.order, c.num_edges());
  if (m.dim > caps.apply)
    throw CapExceeded("model dimension " + std::to_string(m.dim) +
                      " above apply cap " + std::to_string(caps.apply));
  m.group = g;
  const int n = g.order;

  for (int v = 0; v < c.num_vertices; ++v) {
    const VertexStar s = vertex_star(c, v);
    const int64_t ldim = pow_checked(n, static_cast<int>(s.edges.size()));
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(ldim) * n);
    std::vector<int> moved(s.edges.size());
    for (int64_t col = 0; col < ldim; ++col) {
      const std::vector<int> lab =
          decode_labels(col, n, static_cast<int>(s.edges.size()));
      for (int h = 0; h < n; ++h) {
        for (size_t k = 0; k < s.edges.size(); ++k)
          moved[k] = gauge_moved_label(g, s.roles[k], lab[k], h);
        trips.emplace_back(static_cast<int>(encode_labels(moved, n)),
                           static_cast<int>(col), Complex(1.0 / n));
      }
    }
    LocalTerm t;
    t.kind = TermKind::vertex;
    t.cell = v;
    t.support_edges = s.edges;
    t.support = make_region(c, s.edges);
    t.local = make_sparse(ldim, trips);
    m.terms.push_back(std::move(t));
  }

  for (int f = 0; f < c.num_faces(); ++f) {
    const Face& face = c.faces[f];
    std::vector<int> sup;
    for (const FaceStep& st : face.walk) sup.push_back(st.edge);
    std::sort(sup.begin(), sup.end());
    sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
    const int64_t ldim = pow_checked(n, static_cast<int>(sup.size()));
    std::vector<int> global_label(c.num_edges(), g.identity);
    std::vector<Triplet> trips;
    for (int64_t col = 0; col < ldim; ++col) {
      const std::vector<int> lab =
          decode_labels(col, n, static_cast<int>(sup.size()));
      for (size_t k = 0; k < sup.size(); ++k) global_label[sup[k]] = lab[k];
      if (walk_product(c, g, face, global_label) == g.identity)
        trips.emplace_back(static_cast<int>(col), static_cast<int>(col),
                           Complex(1.0));
    }
    LocalTerm t;
    t.kind = TermKind::face;
    t.cell = f;
    t.support_edges = sup;
    t.support = make_region(c, sup);
    t.local = make_sparse(ldim, trips);
    m.terms.push_back(std::move(t));
  }
  return m;
}

SparseOperator dw_ground_projector(const LatticeModel& m) {
  require_dw(m);
  return ground_projector_from_terms(m);
}

std::vector<int64_t> dw_flat_colorings(const CellComplex& c,
                                       const FiniteGroup& g,
                                       const Caps& caps) {
  {
    const auto errs = validate(c);
    if (!errs.empty()) throw InvalidInput("cell complex: " + errs.front());
  }
  {
    const auto errs = validate_group(g);
    if (!errs.empty()) throw InvalidInput("group: " + errs.front());
  }
  const int ne = c.num_edges();
  const int nf = c.num_faces();
  pow_checked(g.order, ne);  // reject configuration spaces past 2^62

  // Assignment order that closes faces as early as possible: repeatedly
  // take the lowest-id face with the fewest unassigned edges and append its
  // lowest unassigned edge.
  std::vector<int> order;
  std::vector<char> assigned(ne, 0);
  std::vector<std::vector<int>> face_edges(nf);
  for (int f = 0; f < nf; ++f) {
    std::vector<int> sup;
    for (const FaceStep& st : c.faces[f].walk) sup.push_back(st.edge);
    std::sort(sup.begin(), sup.end());
    sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
    face_edges[f] = std::move(sup);
  }
  auto unassigned_count = [&](int f) {
    int k = 0;
    for (int e : face_edges[f])
      if (!assigned[e]) ++k;
    return k;
  };
  while (static_cast<int>(order.size()) < ne) {
    int best_face = -1, best_count = ne + 1;
    for (int f = 0; f < nf; ++f) {
      const int k = unassigned_count(f);
      if (k > 0 && k < best_count) {
        best_face = f;
        best_count = k;
      }
    }
    int next = -1;
    if (best_face >= 0) {
      for (int e : face_edges[best_face])
        if (!assigned[e]) {
          next = e;
          break;
        }
    } else {
      for (int e = 0; e < ne; ++e)
        if (!assigned[e]) {
          next = e;
          break;
        }
    }
    assigned[next] = 1;
    order.push_back(next);
  }
  // Face f can be checked once its last edge (in assignment order) is set.
  std::vector<int> pos(ne, -1);
  for (int d = 0; d < ne; ++d) pos[order[d]] = d;
  std::vector<std::vector<int>> faces_at_depth(ne);
  for (int f = 0; f < nf; ++f) {
    int last = -1;
    for (int e : face_edges[f]) last = std::max(last, pos[e]);
    if (last >= 0) faces_at_depth[last].push_back(f);
  }

  std::vector<int64_t> flats;
  std::vector<int> labels(ne, 0);
  // Iterative depth-first enumeration with per-depth label counters.
  std::vector<int> digit(ne, -1);
  int depth = 0;
  while (depth >= 0) {
    if (depth == ne) {
      flats.push_back(encode_labels(labels, g.order));
      if (static_cast<int64_t>(flats.size()) > caps.subspace)
        throw CapExceeded("flat configuration count above subspace cap");
      --depth;
      continue;
    }
    ++digit[depth];
    if (digit[depth] >= g.order) {
      digit[depth] = -1;
      --depth;
      continue;
    }
    labels[order[depth]] = digit[depth];
    bool ok = true;
    for (int f : faces_at_depth[depth])
      if (walk_product(c, g, c.faces[f], labels) != g.identity) {
        ok = false;
        break;
      }
    if (ok) ++depth;
  }
  std::sort(flats.begin(), flats.end());
  return flats;
}

int64_t dw_gsd_oracle(const CellComplex& c, const FiniteGroup& g,
                      const Caps& caps) {
  return static_cast<int64_t>(gauge_orbits(c, g, caps).orbit_size.size());
}

GroundSpace dw_ground_space(const LatticeModel& m) {
  require_dw(m);
  const OrbitData d = gauge_orbits(m.complex, m.group, m.caps);
  GroundSpace gs;
  gs.ambient_dim = m.dim;
  gs.rows = d.flats;
  gs.method = "orbit";
  const int64_t rank = static_cast<int64_t>(d.orbit_size.size());
  gs.basis = Eigen::MatrixXcd::Zero(static_cast<int64_t>(d.flats.size()), rank);
  for (size_t i = 0; i < d.flats.size(); ++i)
    gs.basis(static_cast<int64_t>(i), d.orbit_of[i]) =
        1.0 / std::sqrt(static_cast<double>(d.orbit_size[d.orbit_of[i]]));
  return gs;
}

}  // namespace tqo
