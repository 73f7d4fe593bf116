#pragma once

#include "tqo/model.hpp"

namespace tqo {

// Finite-group gauge model on an oriented cell complex: one gauge-averaging
// projector per vertex (out-edges g_e -> g^{-1} g_e, in-edges g_e -> g_e g,
// loops conjugated) and one diagonal flatness projector per face (ordered
// signed walk product equal to the identity).
LatticeModel dw_build(const CellComplex& c, const FiniteGroup& g,
                      const Caps& caps = {});

// prod_v H_v prod_f H_f, faces applied first; full-matrix cap applies.
SparseOperator dw_ground_projector(const LatticeModel& m);

// Packed configurations whose face walk products are all trivial,
// ascending. Enumeration is pruned face by face under the subspace cap.
std::vector<int64_t> dw_flat_colorings(const CellComplex& c,
                                       const FiniteGroup& g,
                                       const Caps& caps = {});

// Number of gauge orbits on the flat configurations. Purely combinatorial;
// equals the rank of the ground projector.
int64_t dw_gsd_oracle(const CellComplex& c, const FiniteGroup& g,
                      const Caps& caps = {});

// Orthonormal ground basis, one uniform superposition per gauge orbit.
// Exact up to floating normalization; works above the full-matrix cap.
GroundSpace dw_ground_space(const LatticeModel& m);

inline std::vector<SparseOperator> dw_local_operator_basis(
    const LatticeModel& m, const Region& r) {
  return local_operator_basis(m, r);
}

}  // namespace tqo
