#include "tqo/cell_complex.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

namespace tqo {

namespace {

// Union-find over a fixed index range.
struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

int step_source(const CellComplex& c, const FaceStep& s) {
  return s.sign > 0 ? c.edges[s.edge].first : c.edges[s.edge].second;
}

int step_target(const CellComplex& c, const FaceStep& s) {
  return s.sign > 0 ? c.edges[s.edge].second : c.edges[s.edge].first;
}

// Rotate the cyclic walk so the lexicographically smallest (edge, sign)
// sequence comes first, signs ordered +1 before -1. Keeps serialization
// canonical; cyclic rotation does not change the 2-cell.
void canonicalize_face(const CellComplex& c, Face& f) {
  const int n = static_cast<int>(f.walk.size());
  if (n == 0) return;
  auto key_less = [&](int ra, int rb) {
    for (int i = 0; i < n; ++i) {
      const FaceStep& a = f.walk[(ra + i) % n];
      const FaceStep& b = f.walk[(rb + i) % n];
      if (a.edge != b.edge) return a.edge < b.edge;
      if (a.sign != b.sign) return a.sign > b.sign;  // +1 first
    }
    return false;
  };
  int best = 0;
  for (int r = 1; r < n; ++r)
    if (key_less(r, best)) best = r;
  std::rotate(f.walk.begin(), f.walk.begin() + best, f.walk.end());
  f.start_vertex = step_source(c, f.walk[0]);
}

void canonicalize_faces(CellComplex& c) {
  for (Face& f : c.faces) canonicalize_face(c, f);
}

int surface_genus(const std::string& surface, int genus) {
  if (surface == "sphere") return 0;
  if (surface == "torus") return 1;
  if (surface == "genus-g") return genus;
  return -1;
}

}  // namespace

int CellComplex::face_step_source(const Face& f, int k) const {
  return step_source(*this, f.walk[k]);
}

int CellComplex::face_step_target(const Face& f, int k) const {
  return step_target(*this, f.walk[k]);
}

int CellComplex::vertex_degree(int v) const {
  int d = 0;
  for (const auto& [s, t] : edges) {
    if (s == v) ++d;
    if (t == v) ++d;
  }
  return d;
}

bool CellComplex::trivalent() const {
  for (int v = 0; v < num_vertices; ++v)
    if (vertex_degree(v) != 3) return false;
  return true;
}

bool CellComplex::has_self_adjacent_face() const {
  for (const Face& f : faces) {
    std::vector<int> seen;
    for (const FaceStep& s : f.walk) seen.push_back(s.edge);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      return true;
  }
  return false;
}

std::vector<std::string> validate(const CellComplex& c) {
  std::vector<std::string> out;
  const int nv = c.num_vertices;
  const int ne = c.num_edges();
  const int nf = c.num_faces();

  if (nv <= 0) {
    out.push_back("complex has no vertices");
    return out;
  }
  for (int e = 0; e < ne; ++e) {
    const auto& [s, t] = c.edges[e];
    if (s < 0 || s >= nv || t < 0 || t >= nv)
      out.push_back("edge " + std::to_string(e) + " references a vertex out of range");
  }
  if (!out.empty()) return out;  // later checks assume sane indices

  for (int fi = 0; fi < nf; ++fi) {
    const Face& f = c.faces[fi];
    if (f.walk.empty()) {
      out.push_back("face " + std::to_string(fi) + " has an empty walk");
      continue;
    }
    bool ids_ok = true;
    for (const FaceStep& s : f.walk) {
      if (s.edge < 0 || s.edge >= ne || (s.sign != 1 && s.sign != -1)) {
        out.push_back("face " + std::to_string(fi) + " has an invalid step");
        ids_ok = false;
        break;
      }
    }
    if (!ids_ok) continue;
    const int n = static_cast<int>(f.walk.size());
    for (int k = 0; k < n; ++k) {
      if (c.face_step_target(f, k) != c.face_step_source(f, (k + 1) % n)) {
        out.push_back("face " + std::to_string(fi) + " walk breaks at step " +
                      std::to_string(k));
      }
    }
    if (f.start_vertex != c.face_step_source(f, 0))
      out.push_back("face " + std::to_string(fi) +
                    " start vertex does not match step 0");
  }

  // Closed oriented surface: every edge traversed once per sign.
  std::vector<int> plus(ne, 0), minus(ne, 0);
  for (const Face& f : c.faces)
    for (const FaceStep& s : f.walk) {
      if (s.edge < 0 || s.edge >= ne) continue;
      (s.sign > 0 ? plus : minus)[s.edge]++;
    }
  for (int e = 0; e < ne; ++e) {
    if (plus[e] != 1)
      out.push_back("edge " + std::to_string(e) + " traversed with sign + " +
                    std::to_string(plus[e]) + " times (want 1)");
    if (minus[e] != 1)
      out.push_back("edge " + std::to_string(e) + " traversed with sign - " +
                    std::to_string(minus[e]) + " times (want 1)");
  }

  const int want_genus = surface_genus(c.surface, c.genus);
  if (want_genus < 0) {
    out.push_back("unknown surface tag '" + c.surface + "'");
  } else {
    if ((c.surface == "sphere" && c.genus != 0) ||
        (c.surface == "torus" && c.genus != 1))
      out.push_back("surface tag '" + c.surface + "' conflicts with genus " +
                    std::to_string(c.genus));
    const int chi = c.euler_characteristic();
    if (chi != 2 - 2 * want_genus)
      out.push_back("Euler characteristic " + std::to_string(chi) +
                    " does not match genus " + std::to_string(want_genus) +
                    " (want " + std::to_string(2 - 2 * want_genus) + ")");
  }

  DisjointSets ds(nv);
  for (const auto& [s, t] : c.edges) ds.unite(s, t);
  for (int v = 1; v < nv; ++v)
    if (ds.find(v) != ds.find(0)) {
      out.push_back("complex is disconnected");
      break;
    }

  return out;
}

double euler_state_sum(const CellComplex& c, double a) {
  if (!(a > 0)) throw InvalidInput("euler_state_sum requires a > 0");
  double z = 1.0;
  for (int v = 0; v < c.num_vertices; ++v) z *= a;
  for (int e = 0; e < c.num_edges(); ++e) z /= a;
  for (int f = 0; f < c.num_faces(); ++f) z *= a;
  return z;
}

namespace {

// Disk certificate for the union of the region's closure faces: connected,
// chi = 1, and the once-traversed edges form a single cycle in which every
// touched vertex has exactly two boundary incidences. Pinched unions and
// wrapped rings fail one of these tests.
bool certify_disk(const CellComplex& c, const Region& r) {
  if (r.closure_faces.empty()) return false;

  std::vector<int> plus(c.num_edges(), 0), minus(c.num_edges(), 0);
  for (int fi : r.closure_faces)
    for (const FaceStep& s : c.faces[fi].walk)
      (s.sign > 0 ? plus : minus)[s.edge]++;

  std::set<int> k_edges;
  for (int e = 0; e < c.num_edges(); ++e) {
    const int total = plus[e] + minus[e];
    if (total == 0) continue;
    if (total > 2) return false;
    if (total == 2 && (plus[e] != 1 || minus[e] != 1)) return false;
    k_edges.insert(e);
  }
  if (k_edges.empty()) return false;

  std::set<int> k_vertices;
  for (int e : k_edges) {
    k_vertices.insert(c.edges[e].first);
    k_vertices.insert(c.edges[e].second);
  }
  const int chi = static_cast<int>(k_vertices.size()) -
                  static_cast<int>(k_edges.size()) +
                  static_cast<int>(r.closure_faces.size());
  if (chi != 1) return false;

  // Face connectivity through shared edges.
  const int nf = static_cast<int>(r.closure_faces.size());
  std::vector<int> owner(c.num_edges(), -1);
  DisjointSets fds(nf);
  for (int i = 0; i < nf; ++i)
    for (const FaceStep& s : c.faces[r.closure_faces[i]].walk) {
      if (owner[s.edge] < 0)
        owner[s.edge] = i;
      else
        fds.unite(owner[s.edge], i);
    }
  for (int i = 1; i < nf; ++i)
    if (fds.find(i) != fds.find(0)) return false;

  // Single boundary cycle.
  std::vector<int> boundary;
  for (int e : k_edges)
    if (plus[e] + minus[e] == 1) boundary.push_back(e);
  if (boundary.empty()) return false;  // closed subsurface, not a disk
  std::vector<int> bdeg(c.num_vertices, 0);
  for (int e : boundary) {
    bdeg[c.edges[e].first]++;
    bdeg[c.edges[e].second]++;
  }
  for (int v = 0; v < c.num_vertices; ++v)
    if (bdeg[v] != 0 && bdeg[v] != 2) return false;
  const int nb = static_cast<int>(boundary.size());
  DisjointSets bds(nb);
  {
    std::vector<int> at_vertex(c.num_vertices, -1);
    for (int i = 0; i < nb; ++i) {
      for (int v : {c.edges[boundary[i]].first, c.edges[boundary[i]].second}) {
        if (at_vertex[v] < 0)
          at_vertex[v] = i;
        else
          bds.unite(at_vertex[v], i);
      }
    }
  }
  for (int i = 1; i < nb; ++i)
    if (bds.find(i) != bds.find(0)) return false;

  return true;
}

// Contractibility of the subcomplex spanned by the edge set: its endpoint
// vertices, its edges, and the fully covered faces. Connected with chi = 1
// means no independent cycle survives, and a contractible subcomplex of a
// surface has a disk neighborhood. A proper subcomplex has no closed
// component, and the full surface itself has chi != 1.
bool certify_contractible(const CellComplex& c, const Region& r) {
  if (r.edge_set.empty()) return false;
  std::set<int> verts;
  for (int e : r.edge_set) {
    verts.insert(c.edges[e].first);
    verts.insert(c.edges[e].second);
  }
  DisjointSets ds(c.num_vertices);
  for (int e : r.edge_set) ds.unite(c.edges[e].first, c.edges[e].second);
  const int root = ds.find(*verts.begin());
  for (int v : verts)
    if (ds.find(v) != root) return false;
  const int chi = static_cast<int>(verts.size()) -
                  static_cast<int>(r.edge_set.size()) +
                  static_cast<int>(r.closure_faces.size());
  return chi == 1;
}

}  // namespace

Region make_region(const CellComplex& c, std::vector<int> edge_list) {
  std::sort(edge_list.begin(), edge_list.end());
  edge_list.erase(std::unique(edge_list.begin(), edge_list.end()),
                  edge_list.end());
  for (int e : edge_list)
    if (e < 0 || e >= c.num_edges())
      throw InvalidInput("region edge " + std::to_string(e) + " out of range");

  Region r;
  r.edge_set = std::move(edge_list);
  auto in_region = [&](int e) {
    return std::binary_search(r.edge_set.begin(), r.edge_set.end(), e);
  };

  for (int v = 0; v < c.num_vertices; ++v) {
    bool all = c.vertex_degree(v) > 0;
    for (int e = 0; e < c.num_edges() && all; ++e)
      if ((c.edges[e].first == v || c.edges[e].second == v) && !in_region(e))
        all = false;
    if (all) r.closure_vertices.push_back(v);
  }
  for (int fi = 0; fi < c.num_faces(); ++fi) {
    bool all = true;
    for (const FaceStep& s : c.faces[fi].walk)
      if (!in_region(s.edge)) {
        all = false;
        break;
      }
    if (all) r.closure_faces.push_back(fi);
  }
  r.disk_certified = certify_contractible(c, r);
  return r;
}

Region disk_region(const CellComplex& c, int seed_face, int radius) {
  if (seed_face < 0 || seed_face >= c.num_faces())
    throw InvalidInput("disk_region: seed face out of range");
  if (radius < 0) throw InvalidInput("disk_region: radius must be >= 0");

  // Face adjacency through shared edges.
  std::vector<std::vector<int>> faces_of_edge(c.num_edges());
  for (int fi = 0; fi < c.num_faces(); ++fi)
    for (const FaceStep& s : c.faces[fi].walk) faces_of_edge[s.edge].push_back(fi);

  std::vector<int> dist(c.num_faces(), -1);
  std::vector<int> queue{seed_face};
  dist[seed_face] = 0;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const int fi = queue[qi];
    if (dist[fi] == radius) continue;
    for (const FaceStep& s : c.faces[fi].walk)
      for (int gj : faces_of_edge[s.edge])
        if (dist[gj] < 0) {
          dist[gj] = dist[fi] + 1;
          queue.push_back(gj);
        }
  }

  std::vector<int> edge_list;
  for (int fi : queue)
    for (const FaceStep& s : c.faces[fi].walk) edge_list.push_back(s.edge);
  Region r = make_region(c, std::move(edge_list));
  // Stricter than the contractibility certificate: the grown face union
  // must itself be a disk with a single boundary circle.
  if (!r.disk_certified || !certify_disk(c, r))
    throw InvalidInput(
        "region-not-a-disk: faces within radius " + std::to_string(radius) +
        " of face " + std::to_string(seed_face) +
        " do not form a topological disk; shrink the radius or enlarge the lattice");
  return r;
}

Region star_region(const CellComplex& c, const Region& r) {
  std::set<int> vertices;
  for (int e : r.edge_set) {
    vertices.insert(c.edges[e].first);
    vertices.insert(c.edges[e].second);
  }
  std::vector<int> edge_list(r.edge_set);
  for (int e = 0; e < c.num_edges(); ++e)
    if (vertices.count(c.edges[e].first) || vertices.count(c.edges[e].second))
      edge_list.push_back(e);
  return make_region(c, std::move(edge_list));
}

CellComplex subdivide_face(const CellComplex& c, int face_index) {
  if (face_index < 0 || face_index >= c.num_faces())
    throw InvalidInput("subdivide_face: face index out of range");

  CellComplex out = c;
  const Face f = c.faces[face_index];
  const int n = static_cast<int>(f.walk.size());
  const int center = out.num_vertices++;

  // Spoke k runs center -> corner k, where corner k starts step k.
  std::vector<int> spoke(n);
  for (int k = 0; k < n; ++k) {
    spoke[k] = out.num_edges();
    out.edges.emplace_back(center, c.face_step_source(f, k));
  }

  std::vector<Face> triangles(n);
  for (int k = 0; k < n; ++k) {
    Face t;
    t.start_vertex = c.face_step_source(f, k);
    t.walk = {f.walk[k], {spoke[(k + 1) % n], -1}, {spoke[k], +1}};
    triangles[k] = t;
  }
  out.faces[face_index] = triangles[0];
  for (int k = 1; k < n; ++k) out.faces.push_back(triangles[k]);
  canonicalize_faces(out);
  return out;
}

namespace {

CellComplex build_square_torus(int k) {
  CellComplex c;
  c.surface = "torus";
  c.genus = 1;
  c.num_vertices = k * k;
  auto v = [k](int x, int y) { return ((x % k + k) % k) + k * ((y % k + k) % k); };
  auto h = [k, v](int x, int y) { return v(x, y); };           // v(x,y) -> v(x+1,y)
  auto u = [k, v](int x, int y) { return k * k + v(x, y); };   // v(x,y) -> v(x,y+1)
  c.edges.resize(2 * k * k);
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x) {
      c.edges[h(x, y)] = {v(x, y), v(x + 1, y)};
      c.edges[u(x, y)] = {v(x, y), v(x, y + 1)};
    }
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x) {
      Face f;
      f.start_vertex = v(x, y);
      f.walk = {{h(x, y), +1},
                {u(x + 1 == k ? 0 : x + 1, y), +1},
                {h(x, y + 1 == k ? 0 : y + 1), -1},
                {u(x, y), -1}};
      c.faces.push_back(f);
    }
  return c;
}

CellComplex build_triangulated_torus(int k) {
  CellComplex c;
  c.surface = "torus";
  c.genus = 1;
  c.num_vertices = k * k;
  auto v = [k](int x, int y) { return ((x % k + k) % k) + k * ((y % k + k) % k); };
  auto h = [k, v](int x, int y) { return v(x, y); };
  auto u = [k, v](int x, int y) { return k * k + v(x, y); };
  auto d = [k, v](int x, int y) { return 2 * k * k + v(x, y); };  // v(x,y) -> v(x+1,y+1)
  c.edges.resize(3 * k * k);
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x) {
      c.edges[h(x, y)] = {v(x, y), v(x + 1, y)};
      c.edges[u(x, y)] = {v(x, y), v(x, y + 1)};
      c.edges[d(x, y)] = {v(x, y), v(x + 1, y + 1)};
    }
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x) {
      Face a;  // lower triangle
      a.start_vertex = v(x, y);
      a.walk = {{h(x, y), +1}, {u((x + 1) % k, y), +1}, {d(x, y), -1}};
      c.faces.push_back(a);
    }
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x) {
      Face b;  // upper triangle
      b.start_vertex = v(x, y);
      b.walk = {{d(x, y), +1}, {h(x, (y + 1) % k), -1}, {u(x, y), -1}};
      c.faces.push_back(b);
    }
  return c;
}

CellComplex build_honeycomb_torus(int k) {
  CellComplex c;
  c.surface = "torus";
  c.genus = 1;
  c.num_vertices = 2 * k * k;
  auto cell = [k](int x, int y) { return ((x % k + k) % k) + k * ((y % k + k) % k); };
  auto va = [cell](int x, int y) { return 2 * cell(x, y); };
  auto vb = [cell](int x, int y) { return 2 * cell(x, y) + 1; };
  auto e1 = [cell](int x, int y) { return 3 * cell(x, y); };      // a(x,y) -> b(x,y)
  auto e2 = [cell](int x, int y) { return 3 * cell(x, y) + 1; };  // b(x,y) -> a(x+1,y)
  auto e3 = [cell](int x, int y) { return 3 * cell(x, y) + 2; };  // b(x,y) -> a(x,y+1)
  c.edges.resize(3 * k * k);
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x) {
      c.edges[e1(x, y)] = {va(x, y), vb(x, y)};
      c.edges[e2(x, y)] = {vb(x, y), va(x + 1, y)};
      c.edges[e3(x, y)] = {vb(x, y), va(x, y + 1)};
    }
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x) {
      Face p;  // hexagon between cells (x,y) and (x-1, y..y+1)
      p.start_vertex = va(x, y);
      p.walk = {{e1(x, y), +1},     {e3(x, y), +1},     {e2(x - 1, y + 1), -1},
                {e1(x - 1, y + 1), -1}, {e3(x - 1, y), -1}, {e2(x - 1, y), +1}};
      c.faces.push_back(p);
    }
  return c;
}

CellComplex build_tetrahedron() {
  CellComplex c;
  c.surface = "sphere";
  c.genus = 0;
  c.num_vertices = 4;
  c.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  auto face = [](int sv, std::vector<FaceStep> w) {
    Face f;
    f.start_vertex = sv;
    f.walk = std::move(w);
    return f;
  };
  c.faces = {
      face(1, {{3, +1}, {5, +1}, {4, -1}}),  // 1-2-3
      face(0, {{2, +1}, {5, -1}, {1, -1}}),  // 0-3-2
      face(0, {{0, +1}, {4, +1}, {2, -1}}),  // 0-1-3
      face(0, {{1, +1}, {3, -1}, {0, -1}}),  // 0-2-1
  };
  return c;
}

CellComplex build_octahedron() {
  CellComplex c;
  c.surface = "sphere";
  c.genus = 0;
  c.num_vertices = 6;  // equator 0,2,1,3; poles 4 (top), 5 (bottom)
  c.edges = {{0, 2}, {2, 1}, {1, 3}, {3, 0}, {0, 4}, {2, 4},
             {1, 4}, {3, 4}, {0, 5}, {2, 5}, {1, 5}, {3, 5}};
  auto face = [](int sv, std::vector<FaceStep> w) {
    Face f;
    f.start_vertex = sv;
    f.walk = std::move(w);
    return f;
  };
  c.faces = {
      face(0, {{0, +1}, {5, +1}, {4, -1}}),   // 0-2-4
      face(2, {{1, +1}, {6, +1}, {5, -1}}),   // 2-1-4
      face(1, {{2, +1}, {7, +1}, {6, -1}}),   // 1-3-4
      face(3, {{3, +1}, {4, +1}, {7, -1}}),   // 3-0-4
      face(2, {{0, -1}, {8, +1}, {9, -1}}),   // 2-0-5
      face(1, {{1, -1}, {9, +1}, {10, -1}}),  // 1-2-5
      face(3, {{2, -1}, {10, +1}, {11, -1}}), // 3-1-5
      face(0, {{3, -1}, {11, +1}, {8, -1}}),  // 0-3-5
  };
  return c;
}

CellComplex build_cube() {
  CellComplex c;
  c.surface = "sphere";
  c.genus = 0;
  c.num_vertices = 8;  // v = x + 2y + 4z
  c.edges = {{0, 1}, {2, 3}, {4, 5}, {6, 7},   // x-edges 0..3
             {0, 2}, {1, 3}, {4, 6}, {5, 7},   // y-edges 4..7
             {0, 4}, {1, 5}, {2, 6}, {3, 7}};  // z-edges 8..11
  auto face = [](int sv, std::vector<FaceStep> w) {
    Face f;
    f.start_vertex = sv;
    f.walk = std::move(w);
    return f;
  };
  c.faces = {
      face(0, {{4, +1}, {1, +1}, {5, -1}, {0, -1}}),    // z = 0
      face(4, {{2, +1}, {7, +1}, {3, -1}, {6, -1}}),    // z = 1
      face(0, {{0, +1}, {9, +1}, {2, -1}, {8, -1}}),    // y = 0
      face(2, {{10, +1}, {3, +1}, {11, -1}, {1, -1}}),  // y = 1
      face(0, {{8, +1}, {6, +1}, {10, -1}, {4, -1}}),   // x = 0
      face(1, {{5, +1}, {11, +1}, {7, -1}, {9, -1}}),   // x = 1
  };
  return c;
}

}  // namespace

CellComplex build_standard(const std::string& surface,
                           const std::string& family, int size) {
  const bool torus_family = family == "square-torus" ||
                            family == "triangulated-torus" ||
                            family == "honeycomb-torus";
  const bool sphere_family = family == "tetrahedron-sphere" ||
                             family == "octahedron-sphere" ||
                             family == "cube-sphere";
  if (!torus_family && !sphere_family)
    throw InvalidInput("unknown cellulation family '" + family + "'");
  if (torus_family && surface != "torus")
    throw InvalidInput("family '" + family + "' builds a torus, not '" +
                       surface + "'");
  if (sphere_family && surface != "sphere")
    throw InvalidInput("family '" + family + "' builds a sphere, not '" +
                       surface + "'");
  if (torus_family && size < 1)
    throw InvalidInput("family '" + family + "' needs size >= 1");
  if (sphere_family && size != 1)
    throw InvalidInput("family '" + family + "' has a single size; use 1");

  CellComplex c;
  if (family == "square-torus") c = build_square_torus(size);
  else if (family == "triangulated-torus") c = build_triangulated_torus(size);
  else if (family == "honeycomb-torus") c = build_honeycomb_torus(size);
  else if (family == "tetrahedron-sphere") c = build_tetrahedron();
  else if (family == "octahedron-sphere") c = build_octahedron();
  else c = build_cube();
  canonicalize_faces(c);
  return c;
}

std::string save_complex(const CellComplex& c) {
  std::ostringstream os;
  os << "surface " << c.surface << " genus " << c.genus << "\n";
  os << "v " << c.num_vertices << "\n";
  for (int e = 0; e < c.num_edges(); ++e)
    os << "e " << e << " " << c.edges[e].first << " " << c.edges[e].second
       << "\n";
  for (int fi = 0; fi < c.num_faces(); ++fi) {
    const Face& f = c.faces[fi];
    os << "f " << fi << " " << f.start_vertex;
    for (const FaceStep& s : f.walk)
      os << " " << s.edge << ":" << (s.sign > 0 ? '+' : '-');
    os << "\n";
  }
  return os.str();
}

CellComplex load_complex(const std::string& text) {
  CellComplex c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_header = false, have_v = false;
  auto fail = [&](const std::string& msg) -> void {
    throw InvalidInput("complex parse error at line " + std::to_string(lineno) +
                       ": " + msg);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "surface") {
      std::string genus_kw;
      if (!(ls >> c.surface >> genus_kw >> c.genus) || genus_kw != "genus")
        fail("want 'surface <tag> genus <g>'");
      have_header = true;
    } else if (tag == "v") {
      if (!(ls >> c.num_vertices) || c.num_vertices < 0) fail("bad vertex count");
      have_v = true;
    } else if (tag == "e") {
      int id, s, t;
      if (!(ls >> id >> s >> t)) fail("want 'e <id> <src> <dst>'");
      if (id != c.num_edges()) fail("edge ids must be sequential");
      if (!have_v || s < 0 || s >= c.num_vertices || t < 0 ||
          t >= c.num_vertices)
        fail("edge endpoint out of range");
      c.edges.emplace_back(s, t);
    } else if (tag == "f") {
      int id, sv;
      if (!(ls >> id >> sv)) fail("want 'f <id> <start-vertex> <edge>:<sign>...'");
      if (id != c.num_faces()) fail("face ids must be sequential");
      Face f;
      f.start_vertex = sv;
      std::string stepstr;
      while (ls >> stepstr) {
        const auto colon = stepstr.find(':');
        if (colon == std::string::npos || colon + 2 != stepstr.size() ||
            (stepstr[colon + 1] != '+' && stepstr[colon + 1] != '-'))
          fail("bad face step '" + stepstr + "'");
        FaceStep s;
        try {
          s.edge = std::stoi(stepstr.substr(0, colon));
        } catch (const std::exception&) {
          fail("bad face step '" + stepstr + "'");
        }
        s.sign = stepstr[colon + 1] == '+' ? +1 : -1;
        if (s.edge < 0 || s.edge >= c.num_edges()) fail("face step edge out of range");
        f.walk.push_back(s);
      }
      if (f.walk.empty()) fail("face has no steps");
      c.faces.push_back(f);
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!have_header || !have_v)
    throw InvalidInput("complex parse error: missing surface header or vertex count");
  canonicalize_faces(c);
  return c;
}

void save_complex_file(const CellComplex& c, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open '" + path + "' for writing");
  os << save_complex(c);
}

CellComplex load_complex_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return load_complex(buf.str());
}

}  // namespace tqo
