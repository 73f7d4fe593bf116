#include "tqo/group.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace tqo {

namespace {

// Derive identity and inverses from the table; returns false if either
// does not exist (validate_group then reports it).
bool derive_unit_and_inverses(FiniteGroup& g) {
  g.identity = -1;
  for (int e = 0; e < g.order; ++e) {
    bool unit = true;
    for (int a = 0; a < g.order && unit; ++a)
      if (g.mult[e][a] != a || g.mult[a][e] != a) unit = false;
    if (unit) {
      g.identity = e;
      break;
    }
  }
  if (g.identity < 0) return false;
  g.inv.assign(g.order, -1);
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      if (g.mult[a][b] == g.identity && g.mult[b][a] == g.identity) {
        g.inv[a] = b;
        break;
      }
  return std::find(g.inv.begin(), g.inv.end(), -1) == g.inv.end();
}

}  // namespace

FiniteGroup cyclic_group(int n) {
  if (n < 1) throw InvalidInput("cyclic group order must be >= 1");
  FiniteGroup g;
  g.name = "Z" + std::to_string(n);
  g.order = n;
  g.mult.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.mult[a][b] = (a + b) % n;
  derive_unit_and_inverses(g);
  return g;
}

FiniteGroup builtin_group(const std::string& name) {
  if (name == "Z2") return cyclic_group(2);
  if (name == "Z3") return cyclic_group(3);
  if (name == "Z4") return cyclic_group(4);
  if (name == "S3") {
    // Permutations of {0,1,2} in lexicographic order; composition
    // (p*q)(x) = p(q(x)).
    const std::array<std::array<int, 3>, 6> perms = {{
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    auto index_of = [&](const std::array<int, 3>& p) {
      for (int i = 0; i < 6; ++i)
        if (perms[i] == p) return i;
      return -1;
    };
    FiniteGroup g;
    g.name = "S3";
    g.order = 6;
    g.mult.assign(6, std::vector<int>(6));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        std::array<int, 3> comp;
        for (int x = 0; x < 3; ++x) comp[x] = perms[i][perms[j][x]];
        g.mult[i][j] = index_of(comp);
      }
    derive_unit_and_inverses(g);
    return g;
  }
  throw InvalidInput("unknown group '" + name + "'");
}

std::vector<std::string> validate_group(const FiniteGroup& g) {
  std::vector<std::string> out;
  const int n = g.order;
  if (n < 1) {
    out.push_back("group order must be positive");
    return out;
  }
  if (static_cast<int>(g.mult.size()) != n) {
    out.push_back("multiplication table has wrong row count");
    return out;
  }
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(g.mult[a].size()) != n) {
      out.push_back("multiplication table row " + std::to_string(a) +
                    " has wrong length");
      return out;
    }
    for (int b = 0; b < n; ++b)
      if (g.mult[a][b] < 0 || g.mult[a][b] >= n) {
        out.push_back("multiplication table entry out of range at (" +
                      std::to_string(a) + "," + std::to_string(b) + ")");
        return out;
      }
  }

  if (n <= 128) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (g.mult[g.mult[a][b]][c] != g.mult[a][g.mult[b][c]]) {
            out.push_back("associativity fails at (" + std::to_string(a) + "," +
                          std::to_string(b) + "," + std::to_string(c) + ")");
            return out;
          }
  }

  if (g.identity < 0 || g.identity >= n) {
    out.push_back("identity index out of range");
  } else {
    for (int a = 0; a < n; ++a)
      if (g.mult[g.identity][a] != a || g.mult[a][g.identity] != a) {
        out.push_back("identity is not a two-sided unit at " + std::to_string(a));
        break;
      }
  }
  if (static_cast<int>(g.inv.size()) != n) {
    out.push_back("inverse table has wrong length");
  } else {
    for (int a = 0; a < n; ++a)
      if (g.inv[a] < 0 || g.inv[a] >= n ||
          g.mult[a][g.inv[a]] != g.identity ||
          g.mult[g.inv[a]][a] != g.identity) {
        out.push_back("inverse fails at element " + std::to_string(a));
        break;
      }
  }
  return out;
}

bool is_abelian(const FiniteGroup& g) {
  for (int a = 0; a < g.order; ++a)
    for (int b = a + 1; b < g.order; ++b)
      if (g.mult[a][b] != g.mult[b][a]) return false;
  return true;
}

std::string save_group(const FiniteGroup& g) {
  std::ostringstream os;
  os << "group " << g.name << "\n";
  os << "order " << g.order << "\n";
  os << "mult\n";
  for (int a = 0; a < g.order; ++a) {
    for (int b = 0; b < g.order; ++b) os << (b ? " " : "") << g.mult[a][b];
    os << "\n";
  }
  return os.str();
}

FiniteGroup load_group(const std::string& text) {
  FiniteGroup g;
  std::istringstream is(text);
  std::string tag;
  if (!(is >> tag) || tag != "group" || !(is >> g.name))
    throw InvalidInput("group parse error: want 'group <name>'");
  if (!(is >> tag) || tag != "order" || !(is >> g.order) || g.order < 1)
    throw InvalidInput("group parse error: want 'order <n>'");
  if (!(is >> tag) || tag != "mult")
    throw InvalidInput("group parse error: want 'mult'");
  g.mult.assign(g.order, std::vector<int>(g.order));
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      if (!(is >> g.mult[a][b]))
        throw InvalidInput("group parse error: truncated multiplication table");

  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      if (g.mult[a][b] < 0 || g.mult[a][b] >= g.order)
        throw InvalidInput("group table entry out of range");
  if (!derive_unit_and_inverses(g))
    throw InvalidInput("group invariant violation: no two-sided unit or inverse");
  const auto violations = validate_group(g);
  if (!violations.empty())
    throw InvalidInput("group invariant violation: " + violations.front());
  return g;
}

void save_group_file(const FiniteGroup& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open '" + path + "' for writing");
  os << save_group(g);
}

FiniteGroup load_group_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return load_group(buf.str());
}

}  // namespace tqo
