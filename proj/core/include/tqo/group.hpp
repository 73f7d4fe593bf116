#pragma once

#include <string>
#include <vector>

#include "tqo/error.hpp"

namespace tqo {

// Finite group given by its multiplication table. identity and inv are
// derived from the table and validated against it.
struct FiniteGroup {
  std::string name;
  int order = 0;
  std::vector<std::vector<int>> mult;  // mult[a][b] = a * b
  int identity = 0;
  std::vector<int> inv;

  int op(int a, int b) const { return mult[a][b]; }
  friend bool operator==(const FiniteGroup&, const FiniteGroup&) = default;
};

// name in {Z2, Z3, Z4, S3}.
FiniteGroup builtin_group(const std::string& name);

// Cyclic group of order n >= 1 (n = 1 gives the trivial group).
FiniteGroup cyclic_group(int n);

// Empty iff mult is a group table (associative for order <= 128, two-sided
// unit, two-sided inverses) consistent with identity and inv.
std::vector<std::string> validate_group(const FiniteGroup& g);

bool is_abelian(const FiniteGroup& g);

// Line-oriented format: `group <name>`, `order <n>`, `mult`, n table rows.
// load derives identity and inverses and validates; it throws InvalidInput
// naming the violated invariant (e.g. associativity).
std::string save_group(const FiniteGroup& g);
FiniteGroup load_group(const std::string& text);
void save_group_file(const FiniteGroup& g, const std::string& path);
FiniteGroup load_group_file(const std::string& path);

}  // namespace tqo
