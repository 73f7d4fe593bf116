#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tqo/model.hpp"
#include "tqo/verify.hpp"

namespace tqo {

// Parsed run configuration. Every field has the default shown; the config
// file overrides them with line-oriented `key = value` pairs. Unknown and
// repeated keys are errors, `#` starts a full-line comment.
//
// Keys: family, algebra, surface, cellulation, size, checks, seed, workers,
// out, tqo1.region, tqo1.disk.edges, tqo1.disk.face, tqo1.disk.radius,
// tqo2.face, tqo2.radius, tqo2.region_a, tqo2.region_b, tqo3.cellulations,
// distance.weight, caps.full_matrix, caps.apply, caps.subspace, tol.term,
// tol.gap, tol.tqo1, tol.tqo2, tol.pentagon, table.rows.
struct RunConfig {
  std::string family = "dw";  // "dw" | "lw"
  std::string algebra = "Z2";  // builtin name, else a load file path
  std::string surface = "torus";
  std::string cellulation = "square-torus";
  int size = 2;

  // Subset of {fusion, tqo0, tqo1, tqo2, tqo3, distance}, comma separated.
  std::vector<std::string> checks{"tqo0"};

  std::vector<int> tqo1_region{0};
  std::vector<int> tqo1_disk_edges;  // explicit disk; empty uses face/radius
  int tqo1_disk_face = -1;  // -1: the first face covering the whole region
  int tqo1_disk_radius = 1;

  std::vector<int> tqo2_region_a;  // explicit A; empty uses tqo2.face
  std::vector<int> tqo2_region_b;  // explicit B; empty uses the grown ring
  int tqo2_face = 0;
  int tqo2_radius = 1;

  // (cellulation family, size) pairs, "name:size" comma separated. Empty
  // picks a family- and surface-appropriate default pair at run time.
  std::vector<std::pair<std::string, int>> tqo3_cellulations;

  int distance_weight = 3;

  Caps caps;
  Tolerances tol;
  uint64_t seed = 1;
  int workers = 1;
  std::string out;  // empty writes to standard output

  // gsd-table row specs "family:algebra:surface:cellulation:size",
  // semicolon separated.
  std::vector<std::string> table_rows;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

}  // namespace tqo
