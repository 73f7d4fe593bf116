#pragma once

#include "tqo/model.hpp"
#include "tqo/spectra.hpp"

namespace tqo {

// String-net model on a trivalent cellulation. Edges carry fusion labels;
// each vertex gets a diagonal admissibility projector Q_v, each face a
// plaquette projector B_p averaging loop insertions weighted by quantum
// dimension. All terms commute and the Hamiltonian sum(1-Q) + sum(1-B) is
// frustration-free with integral spectrum.
//
// Conventions (fixed here, validated by the projector/commutation tests):
//  - An edge pointing into a vertex contributes the dual of its label to
//    the fusion check at that vertex; Q_v keeps labelings whose three
//    out-readings (p, q, r) satisfy N(p, q, dual(r)).
//  - B_p = sum_s (d_s / D^2) B_p^s. For a face whose boundary walk visits
//    pairwise distinct vertices, <new|B_p^s|old> is a product of one
//    F-symbol per corner, walked from the face's start vertex:
//        F(s, x_j, t_j, x'_{j+1}, x'_j, x_{j+1})
//    where x_j = dual(walk-reading of boundary edge j), primes are the new
//    labels, and t_j is the out-reading of the corner's third edge. The
//    slot layout encodes strand fusion N(s, x_j, x'_j), both vertex
//    admissibilities, and consistency with the next corner; inadmissible
//    configurations vanish through the zero F entries.
//  - Faces revisiting a vertex or an edge are handled only for the minimal
//    one-hexagon torus, via lw_minimal_torus_plaquette below.

// Builds the model. Requires a valid trivalent complex without loop edges
// and valid fusion data. Throws InvalidInput on structural violations and
// CapExceeded when a term's local space would exceed caps.subspace.
LatticeModel lw_build(const CellComplex& c, const FusionData& fd,
                      Caps caps = {});

// P = prod_v Q_v prod_f B_p assembled globally (caps.full_matrix guard).
SparseOperator lw_ground_projector(const LatticeModel& m);

// Sorted encoded labelings passing every vertex check. Enumerated by DFS
// with vertex-completion pruning; throws CapExceeded past caps.subspace.
std::vector<int64_t> lw_admissible_labelings(const CellComplex& c,
                                             const FusionData& fd,
                                             Caps caps = {});

// Ground space through the admissible-labeling subspace: the plaquette
// product is assembled on the admissible rows and eigendecomposed. Dense
// route only; throws CapExceeded when the admissible count passes the
// dense eigensolver cap.
GroundSpace lw_ground_space(const LatticeModel& m);

// Ground-state degeneracy: rank of the dense subspace projector when the
// admissible count is small, otherwise the number of near-zero eigenvalues
// of the subspace Hamiltonian found by deflated Lanczos.
int64_t lw_gsd(const LatticeModel& m, uint64_t seed = 1);

// Combinatorial degeneracy oracle for pointed fusion data (all quantum
// dimensions 1, fusion a cyclic group law): linear algebra over Z/n on the
// vertex-constraint and plaquette-shift lattices,
//   gsd = n^(dim ker A - rank S).
// Independent of the projector machinery. Throws InvalidInput when the
// fusion data is not pointed cyclic.
int64_t lw_gsd_oracle_pointed(const CellComplex& c, const FusionData& fd);

// Frustration, degeneracy, and the admissible-sector gap computed without
// ever touching the full product space. The ground basis is exact: below
// the dense eigensolver cap it comes from the dense subspace projector,
// above it random vectors are pushed through the plaquette-product
// projector (one application suffices, the terms commute). Every
// inadmissible product state breaks at least one vertex projector, so the
// complement sits at energy >= 1.
struct SubspaceSummary {
  int64_t gsd = 0;
  double frustration = 0.0;  // max_t ||h_t x - x|| over ground columns
  double adm_gap = 0.0;      // gap of sum_f (1 - B_f) inside the subspace
};
SubspaceSummary lw_subspace_summary(const LatticeModel& m, uint64_t seed = 1);

// Plaquette projector of the minimal one-hexagon torus (2 vertices, 3
// edges), whose face walks every edge twice. Built by carrying the ground
// space of the four-hexagon torus through explicit edge slides and bigon
// collapses down to the minimal cellulation and projecting onto its image;
// the span is independent of the contraction order (`variant` switches the
// order, for tests). Result is cached per fusion-data name.
SparseOperator lw_minimal_torus_plaquette(const FusionData& fd,
                                          int variant = 0);

inline std::vector<SparseOperator> lw_local_operator_basis(
    const LatticeModel& m, const Region& r) {
  return local_operator_basis(m, r);
}

}  // namespace tqo
