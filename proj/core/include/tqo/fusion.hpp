#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tqo/error.hpp"

namespace tqo {

// Multiplicity-free unitary fusion data: labels with duals and quantum
// dimensions, fusion multiplicities N in {0,1}, and F-symbols stored for
// admissible sextuples only. Built-ins use a gauge with real F-symbols and
// every unit-containing F equal to 1.
struct FusionData {
  std::string name;
  int nlabels = 0;
  int unit = 0;
  std::vector<int> dual;
  std::vector<double> qdim;
  double total_dim_sq = 0.0;                 // sum of qdim^2
  std::vector<uint8_t> fusion_table;         // N[a][b][c], flat a*n^2+b*n+c
  std::unordered_map<uint64_t, std::complex<double>> fsymbol;

  int N(int a, int b, int c) const {
    return fusion_table[(static_cast<size_t>(a) * nlabels + b) * nlabels + c];
  }

  // (a,b,c,d,e,f) is admissible iff e couples a,b and d,dual(c), and f
  // couples b,c and dual(a),d: N(a,b,e) N(e,c,d) N(b,c,f) N(a,f,d) = 1.
  bool admissible(int a, int b, int c, int d, int e, int f) const {
    return N(a, b, e) && N(e, c, d) && N(b, c, f) && N(a, f, d);
  }

  static uint64_t pack6(int a, int b, int c, int d, int e, int f) {
    return (static_cast<uint64_t>(a) << 40) | (static_cast<uint64_t>(b) << 32) |
           (static_cast<uint64_t>(c) << 24) | (static_cast<uint64_t>(d) << 16) |
           (static_cast<uint64_t>(e) << 8) | static_cast<uint64_t>(f);
  }

  // F^{abc}_d[e,f]; zero for inadmissible indices. Throws InvalidInput if an
  // admissible entry is missing from the stored table.
  std::complex<double> F(int a, int b, int c, int d, int e, int f) const;
};

// name in {VecZ2, VecZ3, Fibonacci}.
FusionData builtin_fusion(const std::string& name);

// Max pentagon residual over all label sextuples, zero-extended F lookups,
// deterministic iteration order.
double pentagon_check(const FusionData& fd);

// Empty iff all invariants hold: unit and dual rules, dimension equation to
// 1e-10, F-matrix unitarity to 1e-10, pentagon residual to 1e-10.
std::vector<std::string> validate_fusion(const FusionData& fd);

// Line-oriented format:
//   fusion <name> / labels <n> / unit <i> / dual <i>:<j>... /
//   qdim <i>:<float>... / N <a> <b> <c> per nonzero /
//   F <a> <b> <c> <d> <e> <f> <re> <im> per stored entry.
// load validates and throws InvalidInput naming the violation.
std::string save_fusion(const FusionData& fd);
FusionData load_fusion(const std::string& text);
void save_fusion_file(const FusionData& fd, const std::string& path);
FusionData load_fusion_file(const std::string& path);

}  // namespace tqo
