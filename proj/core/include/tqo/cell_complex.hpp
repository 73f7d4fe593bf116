#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tqo/error.hpp"

namespace tqo {

// One step of a face boundary walk: an edge index and a traversal sign.
// sign = +1 follows the edge orientation (src -> dst), -1 runs against it.
struct FaceStep {
  int edge = -1;
  int sign = +1;
  friend bool operator==(const FaceStep&, const FaceStep&) = default;
};

// Based cyclic boundary walk of a 2-cell. start_vertex is the source of
// step 0; holonomies and plaquette moves are evaluated from there.
struct Face {
  int start_vertex = -1;
  std::vector<FaceStep> walk;
  friend bool operator==(const Face&, const Face&) = default;
};

// Cell structure of a closed oriented surface. Edges carry a global
// orientation choice; faces are based cyclic walks. Loops and multi-edges
// are permitted. Immutable by convention after construction.
struct CellComplex {
  std::string surface;  // "sphere" | "torus" | "genus-g"
  int genus = 0;
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;  // (src, dst)
  std::vector<Face> faces;

  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int euler_characteristic() const {
    return num_vertices - num_edges() + num_faces();
  }

  // Vertex where step k of face f starts / ends, respecting the sign.
  int face_step_source(const Face& f, int k) const;
  int face_step_target(const Face& f, int k) const;

  // Edge incidences at v; a loop at v counts twice.
  int vertex_degree(int v) const;
  bool trivalent() const;

  // True if some face traverses the same edge more than once.
  bool has_self_adjacent_face() const;

  friend bool operator==(const CellComplex&, const CellComplex&) = default;
};

// Subset of edges together with its closure: the vertices all of whose
// incident edges lie in the set, and the faces all of whose walk edges do.
struct Region {
  std::vector<int> edge_set;          // sorted, unique
  std::vector<int> closure_vertices;  // sorted
  std::vector<int> closure_faces;     // sorted
  // True if the subcomplex spanned by the edge set (endpoint vertices,
  // edges, fully covered faces) is connected with Euler characteristic 1.
  // Such a set is contractible and thickens to a disk inside the surface;
  // wrapped rings and disconnected unions fail.
  bool disk_certified = false;
};

// Built-in cellulations.
//   square-torus(k):       k^2 vertices, 2k^2 edges, k^2 squares
//   triangulated-torus(k): k^2 vertices, 3k^2 edges, 2k^2 triangles
//   honeycomb-torus(k):    2k^2 vertices, 3k^2 edges, k^2 hexagons, trivalent
//   tetrahedron-sphere, octahedron-sphere, cube-sphere: size must be 1
// k = 1 tori have self-adjacent faces (use has_self_adjacent_face()).
CellComplex build_standard(const std::string& surface,
                           const std::string& family, int size);

// Returns one human-readable violation per broken invariant, empty if the
// complex is a valid connected closed oriented surface matching its tag.
std::vector<std::string> validate(const CellComplex& c);

// Cell-by-cell product of weights a (vertices, faces) and 1/a (edges).
// Equals a^chi for a valid complex; requires a > 0.
double euler_state_sum(const CellComplex& c, double a);

// Region from an explicit edge set; computes closure and disk certificate.
Region make_region(const CellComplex& c, std::vector<int> edge_list);

// All edges of the faces within `radius` face-adjacency steps of seed_face.
// Throws InvalidInput("region-not-a-disk ...") if the grown face union is
// not a topological disk (for example when it wraps a handle).
Region disk_region(const CellComplex& c, int seed_face, int radius);

// r plus every edge incident to an endpoint of an edge of r. The closure
// faces usually stay those of r, so the disk certificate can survive even
// when a face-adjacency ring would wrap the surface.
Region star_region(const CellComplex& c, const Region& r);

// Barycentric split of one face: a new center vertex, one spoke per corner,
// n triangles replacing the n-gon. Preserves validity and chi.
CellComplex subdivide_face(const CellComplex& c, int face_index);

// Line-oriented text format, canonical and bit-exact under round-trip:
//   surface <tag> genus <g>
//   v <count>
//   e <id> <src> <dst>
//   f <id> <start-vertex> <edge>:<sign>...
std::string save_complex(const CellComplex& c);
CellComplex load_complex(const std::string& text);
void save_complex_file(const CellComplex& c, const std::string& path);
CellComplex load_complex_file(const std::string& path);

}  // namespace tqo
