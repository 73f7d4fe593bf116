#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tqo/cell_complex.hpp"
#include "tqo/fusion.hpp"
#include "tqo/group.hpp"
#include "tqo/sparse.hpp"

namespace tqo {

struct Caps {
  int64_t full_matrix = int64_t(1) << 14;  // explicit global assembly
  int64_t apply = int64_t(1) << 24;        // matrix-free application
  int64_t subspace = int64_t(1) << 22;     // combinatorial enumeration size
};

enum class TermKind { vertex, face };

struct LocalTerm {
  TermKind kind = TermKind::vertex;
  int cell = 0;
  Region support;                  // region of the support edges
  std::vector<int> support_edges;  // sorted, unique
  SparseOperator local;            // on nlabels^|support_edges|
};

// Commuting-projector lattice model. Terms hold local matrices only, so
// building is cheap at any dimension; global operators are assembled on
// demand under the caps.
struct LatticeModel {
  std::string family;   // "dw" | "lw"
  std::string algebra;  // group or fusion-data name
  CellComplex complex;
  int nlabels = 0;
  int64_t dim = 0;
  Caps caps;
  std::vector<LocalTerm> terms;
  FiniteGroup group;   // set when family == "dw"
  FusionData fusion;   // set when family == "lw"
};

// base^exp with overflow guard (throws CapExceeded past 2^62).
int64_t pow_checked(int base, int exp);

// Mixed-radix configuration packing, edge 0 least significant.
int64_t encode_labels(const std::vector<int>& labels, int nlabels);
std::vector<int> decode_labels(int64_t index, int nlabels, int count);

// Embed an operator on `support` edges (sorted) into the full edge space.
SparseOperator embed_local(const LatticeModel& m,
                           const std::vector<int>& support,
                           const SparseOperator& local);

SparseOperator assemble_term(const LatticeModel& m, const LocalTerm& t);
// H = sum_i (1 - h_i).
SparseOperator assemble_hamiltonian(const LatticeModel& m);
// P = (prod over vertex terms)(prod over face terms), faces applied first.
SparseOperator ground_projector_from_terms(const LatticeModel& m);
LinearMap hamiltonian_map(const LatticeModel& m);

void apply_term(const LatticeModel& m, const LocalTerm& t, const Complex* in,
                Complex* out);

struct TermCheck {
  double projector = 0.0;   // max over terms of ||h^2 - h||_F
  double hermitian = 0.0;   // max over terms of max|h - h'|
  double commutator = 0.0;  // max over pairs of ||[h_i, h_j]||_F
};
TermCheck check_terms(const LatticeModel& m);

// Ground space as an isometry supported on an explicit row set.
struct GroundSpace {
  int64_t ambient_dim = 0;
  std::vector<int64_t> rows;  // ascending global indices
  Eigen::MatrixXcd basis;     // rows.size() x rank, orthonormal columns
  std::string method;         // "orbit" | "subspace"
  int64_t rank() const { return basis.cols(); }
};

// Scatter of the row-restricted basis into ambient coordinates.
Eigen::MatrixXcd ambient_ground_basis(const GroundSpace& g);

// max over terms of ||h x_k - x_k|| over ground basis columns.
double frustration_residual(const LatticeModel& m, const GroundSpace& g);

// Smallest eigenvalue of H above the ground space. Dense below the
// eigensolver cap, deflated Lanczos above it.
double spectral_gap(const LatticeModel& m, const GroundSpace& g,
                    uint64_t seed = 1);

// Matrix-unit basis on the region's edges, identity elsewhere, ordered by
// (bra, ket) local index; pairwise trace-orthogonal.
std::vector<SparseOperator> local_operator_basis(const LatticeModel& m,
                                                 const Region& r);

}  // namespace tqo
