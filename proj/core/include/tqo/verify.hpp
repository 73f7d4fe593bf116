#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tqo/model.hpp"

namespace tqo {

// Tolerances the checks judge their residuals against. Every value has a
// sensible default; the config file may override them.
struct Tolerances {
  double term = 1e-10;      // projector / hermiticity / commutator / frustration
  double gap = 1e-8;        // |spectral gap - 1|
  double tqo1 = 1e-8;       // ||P O P - lambda P||_F / max(1, ||O||_F)
  double tqo2 = 1e-8;       // Gram null-space containment, relative
  double pentagon = 1e-10;  // fusion-data pentagon residual
};

struct ResidualEntry {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
};

// Outcome of one check. pass holds iff every residual is within its
// tolerance; scalars carry informational values (gap, gsd, lambda) that do
// not by themselves decide the outcome. timestamp stays 0 so that reports
// are byte-reproducible; callers wanting wall-clock stamps set it themselves.
struct VerificationReport {
  std::string check;
  std::string model;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<ResidualEntry> residuals;
  std::vector<std::pair<std::string, double>> scalars;
  bool pass = false;
  // Nonempty overrides the rendered outcome ("skipped"); pass stays false
  // for anything other than a clean pass.
  std::string outcome;
  uint64_t seed = 0;
  int64_t timestamp = 0;
};

// "family/algebra/surface[vV,eE,fF]", derived from the model only.
std::string model_descriptor(const LatticeModel& m);

// Ground space by the family's native route: gauge orbits for dw,
// admissible-subspace diagonalization for lw.
GroundSpace ground_space_of(const LatticeModel& m, uint64_t seed = 1);

// Term battery plus frustration residual plus spectral gap against 1.
// Residuals: term-projector, term-hermitian, term-commutator, frustration
// (all vs tol.term) and gap-deviation = |gap - 1| vs tol.gap.
// Scalars: gap, gsd.
VerificationReport check_tqo0(const LatticeModel& m, uint64_t seed = 1,
                              const Tolerances& tol = {});

// Knill-Laflamme sweep: for every matrix-unit basis operator O on `region`,
// P O P must equal lambda P with lambda = tr(P O P) / rank(P). One residual
// ||P O P - lambda P||_F / max(1, ||O||_F) per operator, judged vs tol.tqo1;
// lambdas are reported as scalars. Refuses (InvalidInput) unless
// enclosing_disk is a certified disk containing every region edge.
VerificationReport check_tqo1(const LatticeModel& m, const Region& region,
                              const Region& enclosing_disk, uint64_t seed = 1,
                              const Tolerances& tol = {});

// Ground-space homogeneity: every coefficient vector c with
// (sum_i c_i O_i) P = 0 over the matrix-unit basis on region_a must also
// satisfy c' G_B c <= tol.tqo2 * ||G_B||, where G_B is the Gram matrix of
// the basis against P_B, the product of the terms supported inside
// region_b. Null vectors are eigenvectors of the Gram matrix against P with
// eigenvalue <= 1e-8 * ||G_P||. Refuses unless region_b is a certified disk
// containing region_a.
//
// Both Gram matrices factor as identity (x) W over the (bra, ket) ordered
// matrix-unit basis, with W[q][q'] = tr(|q><q'| P). The checks run on the
// W factors; this is exact, not an approximation, and keeps the model
// ambient dimension out of the computation entirely.
VerificationReport check_tqo2(const LatticeModel& m, const Region& region_a,
                              const Region& region_b, uint64_t seed = 1,
                              const Tolerances& tol = {});

// Cellulation independence: every model must report the same ground-space
// dimension. All models must share family and algebra. Scalars: gsd.<i>;
// residual gsd-spread = max - min vs 0.
VerificationReport check_tqo3(const std::vector<const LatticeModel*>& models,
                              uint64_t seed = 1);

// Pentagon residual of fusion data, vs tol.pentagon.
VerificationReport check_fusion(const FusionData& fd,
                                const Tolerances& tol = {});

// Ground-space dimension by spectral means: dense projector rank under the
// full-matrix cap, otherwise counting eigenvalues of H below 1/2 (on the
// admissible subspace for lw, ambient matrix-free for dw).
int64_t gsd_rank_route(const LatticeModel& m, uint64_t seed = 1);

// Closed-form count where one applies: gauge-orbit count for dw, the
// labeling-homology count for pointed lw data. nullopt when the algebra
// admits no such formula (e.g. Fibonacci).
std::optional<int64_t> gsd_oracle_route(const LatticeModel& m);

struct DistanceResult {
  bool found = false;   // false: every weight <= max_weight operator that
                        // preserves the ground space acts as a scalar on it
  int distance = 0;     // smallest nontrivial weight when found
  int max_weight = 0;
  int64_t candidates = 0;
};

// Exhaustive minimum-distance search over products of single-edge
// generalized Paulis X^a Z^b on an abelian gauge model with cyclic group.
// An operator counts iff it commutes with the ground projector
// (||[O, P]||_F <= 1e-8) and acts nontrivially on the ground space
// (||P O P - lambda P||_F > 1e-6 for the best lambda). found == false
// certifies distance >= max_weight + 1.
DistanceResult distance_search(const LatticeModel& m, int max_weight);

}  // namespace tqo
