#include "tqo/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tqo/group.hpp"

namespace tqo {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::complex<double> FusionData::F(int a, int b, int c, int d, int e,
                                   int f) const {
  if (!admissible(a, b, c, d, e, f)) return 0.0;
  const auto it = fsymbol.find(pack6(a, b, c, d, e, f));
  if (it == fsymbol.end())
    throw InvalidInput("missing F-symbol entry for admissible indices (" +
                       std::to_string(a) + "," + std::to_string(b) + "," +
                       std::to_string(c) + "," + std::to_string(d) + "," +
                       std::to_string(e) + "," + std::to_string(f) + ")");
  return it->second;
}

namespace {

FusionData make_group_fusion(const FiniteGroup& g, const std::string& name) {
  FusionData fd;
  fd.name = name;
  fd.nlabels = g.order;
  fd.unit = g.identity;
  fd.dual = g.inv;
  fd.qdim.assign(g.order, 1.0);
  fd.total_dim_sq = static_cast<double>(g.order);
  fd.fusion_table.assign(static_cast<size_t>(g.order) * g.order * g.order, 0);
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      fd.fusion_table[(static_cast<size_t>(a) * g.order + b) * g.order +
                      g.op(a, b)] = 1;
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      for (int c = 0; c < g.order; ++c) {
        const int e = g.op(a, b);
        const int f = g.op(b, c);
        const int d = g.op(e, c);
        fd.fsymbol[FusionData::pack6(a, b, c, d, e, f)] = 1.0;
      }
  return fd;
}

FusionData make_fibonacci() {
  FusionData fd;
  fd.name = "Fibonacci";
  fd.nlabels = 2;  // 0 = unit, 1 = tau
  fd.unit = 0;
  fd.dual = {0, 1};
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  fd.qdim = {1.0, phi};
  fd.total_dim_sq = 1.0 + phi * phi;
  fd.fusion_table.assign(8, 0);
  auto setN = [&](int a, int b, int c) { fd.fusion_table[(a * 2 + b) * 2 + c] = 1; };
  setN(0, 0, 0);
  setN(0, 1, 1);
  setN(1, 0, 1);
  setN(1, 1, 0);
  setN(1, 1, 1);

  // Real tetrahedral-symmetric gauge: every unit-containing F is 1; the
  // tau^4 block is the standard golden-ratio matrix.
  const double s = 1.0 / std::sqrt(phi);
  const double fmat[2][2] = {{1.0 / phi, s}, {s, -1.0 / phi}};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          for (int e = 0; e < 2; ++e)
            for (int f = 0; f < 2; ++f) {
              if (!fd.admissible(a, b, c, d, e, f)) continue;
              const bool tau4 = a == 1 && b == 1 && c == 1 && d == 1;
              fd.fsymbol[FusionData::pack6(a, b, c, d, e, f)] =
                  tau4 ? fmat[e][f] : 1.0;
            }
  return fd;
}

}  // namespace

FusionData builtin_fusion(const std::string& name) {
  if (name == "VecZ2") return make_group_fusion(cyclic_group(2), "VecZ2");
  if (name == "VecZ3") return make_group_fusion(cyclic_group(3), "VecZ3");
  if (name == "Fibonacci") return make_fibonacci();
  throw InvalidInput("unknown fusion data '" + name + "'");
}

double pentagon_check(const FusionData& fd) {
  const int n = fd.nlabels;
  double worst = 0.0;
  // Multiplicity-free pentagon with zero-extended lookups:
  // F^{fcd}_e[g,l] F^{abl}_e[f,k] = sum_h F^{abc}_g[f,h] F^{ahd}_e[g,k]
  //                                       F^{bcd}_k[h,l]
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e)
            for (int f = 0; f < n; ++f)
              for (int g = 0; g < n; ++g)
                for (int k = 0; k < n; ++k)
                  for (int l = 0; l < n; ++l) {
                    const std::complex<double> lhs =
                        fd.F(f, c, d, e, g, l) * fd.F(a, b, l, e, f, k);
                    std::complex<double> rhs = 0.0;
                    for (int h = 0; h < n; ++h)
                      rhs += fd.F(a, b, c, g, f, h) * fd.F(a, h, d, e, g, k) *
                             fd.F(b, c, d, k, h, l);
                    worst = std::max(worst, std::abs(lhs - rhs));
                  }
  return worst;
}

std::vector<std::string> validate_fusion(const FusionData& fd) {
  std::vector<std::string> out;
  const int n = fd.nlabels;
  if (n < 1) {
    out.push_back("fusion data has no labels");
    return out;
  }
  if (fd.unit < 0 || fd.unit >= n ||
      static_cast<int>(fd.dual.size()) != n ||
      static_cast<int>(fd.qdim.size()) != n ||
      fd.fusion_table.size() != static_cast<size_t>(n) * n * n) {
    out.push_back("fusion data fields have inconsistent sizes");
    return out;
  }

  for (int a = 0; a < n; ++a) {
    if (fd.dual[a] < 0 || fd.dual[a] >= n || fd.dual[fd.dual[a]] != a) {
      out.push_back("dual is not an involution at label " + std::to_string(a));
      break;
    }
  }
  if (fd.dual[fd.unit] != fd.unit)
    out.push_back("dual of the unit is not the unit");
  for (int a = 0; a < n; ++a)
    if (!(fd.qdim[a] > 0))
      out.push_back("quantum dimension of label " + std::to_string(a) +
                    " is not positive");

  for (int a = 0; a < n; ++a) {
    if (fd.N(a, fd.unit, a) != 1 || fd.N(fd.unit, a, a) != 1) {
      out.push_back("unit fusion rule fails at label " + std::to_string(a));
      break;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (fd.N(a, b, fd.unit) != (b == fd.dual[a] ? 1 : 0)) {
        out.push_back("N(a,b,unit) does not match dual(a) at (" +
                      std::to_string(a) + "," + std::to_string(b) + ")");
        a = n;
        break;
      }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double sum = 0.0;
      for (int c = 0; c < n; ++c) sum += fd.N(a, b, c) * fd.qdim[c];
      if (std::abs(fd.qdim[a] * fd.qdim[b] - sum) > 1e-10) {
        out.push_back("dimension equation fails at (" + std::to_string(a) +
                      "," + std::to_string(b) + ")");
        a = n;
        break;
      }
    }
  {
    double d2 = 0.0;
    for (int a = 0; a < n; ++a) d2 += fd.qdim[a] * fd.qdim[a];
    if (std::abs(d2 - fd.total_dim_sq) > 1e-10)
      out.push_back("total_dim_sq does not match the quantum dimensions");
  }

  // Every stored F entry must be admissible and every admissible sextuple
  // must be stored.
  bool fentries_ok = true;
  for (const auto& [key, value] : fd.fsymbol) {
    const int a = static_cast<int>((key >> 40) & 0xff);
    const int b = static_cast<int>((key >> 32) & 0xff);
    const int c = static_cast<int>((key >> 24) & 0xff);
    const int d = static_cast<int>((key >> 16) & 0xff);
    const int e = static_cast<int>((key >> 8) & 0xff);
    const int f = static_cast<int>(key & 0xff);
    if (a >= n || b >= n || c >= n || d >= n || e >= n || f >= n ||
        !fd.admissible(a, b, c, d, e, f)) {
      out.push_back("F entry stored for inadmissible indices");
      fentries_ok = false;
      break;
    }
  }
  for (int a = 0; a < n && fentries_ok; ++a)
    for (int b = 0; b < n && fentries_ok; ++b)
      for (int c = 0; c < n && fentries_ok; ++c)
        for (int d = 0; d < n && fentries_ok; ++d)
          for (int e = 0; e < n && fentries_ok; ++e)
            for (int f = 0; f < n && fentries_ok; ++f)
              if (fd.admissible(a, b, c, d, e, f) &&
                  !fd.fsymbol.count(FusionData::pack6(a, b, c, d, e, f))) {
                out.push_back("missing F-symbol entry for admissible indices");
                fentries_ok = false;
              }
  if (!fentries_ok) return out;

  // Unitarity of each F-matrix (a,b,c,d), indices e x f.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          std::vector<int> es, fs;
          for (int e = 0; e < n; ++e)
            if (fd.N(a, b, e) && fd.N(e, c, d)) es.push_back(e);
          for (int f = 0; f < n; ++f)
            if (fd.N(b, c, f) && fd.N(a, f, d)) fs.push_back(f);
          if (es.empty() && fs.empty()) continue;
          if (es.size() != fs.size()) {
            out.push_back("unitarity fails: non-square F-matrix at (" +
                          std::to_string(a) + "," + std::to_string(b) + "," +
                          std::to_string(c) + "," + std::to_string(d) + ")");
            continue;
          }
          const int m = static_cast<int>(es.size());
          double dev = 0.0;
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
              std::complex<double> dot = 0.0;
              for (int k = 0; k < m; ++k)
                dot += fd.F(a, b, c, d, es[i], fs[k]) *
                       std::conj(fd.F(a, b, c, d, es[j], fs[k]));
              dev = std::max(dev, std::abs(dot - (i == j ? 1.0 : 0.0)));
            }
          if (dev > 1e-10)
            out.push_back("unitarity fails at (" + std::to_string(a) + "," +
                          std::to_string(b) + "," + std::to_string(c) + "," +
                          std::to_string(d) + "), deviation " + fmt_double(dev));
        }

  const double pent = pentagon_check(fd);
  if (pent > 1e-10)
    out.push_back("pentagon equation fails, residual " + fmt_double(pent));

  return out;
}

std::string save_fusion(const FusionData& fd) {
  std::ostringstream os;
  os << "fusion " << fd.name << "\n";
  os << "labels " << fd.nlabels << "\n";
  os << "unit " << fd.unit << "\n";
  os << "dual";
  for (int a = 0; a < fd.nlabels; ++a) os << " " << a << ":" << fd.dual[a];
  os << "\n";
  os << "qdim";
  for (int a = 0; a < fd.nlabels; ++a)
    os << " " << a << ":" << fmt_double(fd.qdim[a]);
  os << "\n";
  for (int a = 0; a < fd.nlabels; ++a)
    for (int b = 0; b < fd.nlabels; ++b)
      for (int c = 0; c < fd.nlabels; ++c)
        if (fd.N(a, b, c)) os << "N " << a << " " << b << " " << c << "\n";
  std::vector<uint64_t> keys;
  keys.reserve(fd.fsymbol.size());
  for (const auto& [key, value] : fd.fsymbol) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (uint64_t key : keys) {
    const auto value = fd.fsymbol.at(key);
    os << "F " << ((key >> 40) & 0xff) << " " << ((key >> 32) & 0xff) << " "
       << ((key >> 24) & 0xff) << " " << ((key >> 16) & 0xff) << " "
       << ((key >> 8) & 0xff) << " " << (key & 0xff) << " "
       << fmt_double(value.real()) << " " << fmt_double(value.imag()) << "\n";
  }
  return os.str();
}

FusionData load_fusion(const std::string& text) {
  FusionData fd;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw InvalidInput("fusion parse error at line " + std::to_string(lineno) +
                       ": " + msg);
  };
  bool have_labels = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "fusion") {
      if (!(ls >> fd.name)) fail("want 'fusion <name>'");
    } else if (tag == "labels") {
      if (!(ls >> fd.nlabels) || fd.nlabels < 1 || fd.nlabels > 255)
        fail("bad label count");
      fd.dual.assign(fd.nlabels, -1);
      fd.qdim.assign(fd.nlabels, 0.0);
      fd.fusion_table.assign(
          static_cast<size_t>(fd.nlabels) * fd.nlabels * fd.nlabels, 0);
      have_labels = true;
    } else if (!have_labels) {
      fail("'labels <n>' must come before '" + tag + "'");
    } else if (tag == "unit") {
      if (!(ls >> fd.unit) || fd.unit < 0 || fd.unit >= fd.nlabels)
        fail("bad unit index");
    } else if (tag == "dual") {
      std::string pair;
      while (ls >> pair) {
        const auto colon = pair.find(':');
        if (colon == std::string::npos) fail("bad dual pair '" + pair + "'");
        const int i = std::stoi(pair.substr(0, colon));
        const int j = std::stoi(pair.substr(colon + 1));
        if (i < 0 || i >= fd.nlabels || j < 0 || j >= fd.nlabels)
          fail("dual index out of range");
        fd.dual[i] = j;
      }
    } else if (tag == "qdim") {
      std::string pair;
      while (ls >> pair) {
        const auto colon = pair.find(':');
        if (colon == std::string::npos) fail("bad qdim pair '" + pair + "'");
        const int i = std::stoi(pair.substr(0, colon));
        if (i < 0 || i >= fd.nlabels) fail("qdim index out of range");
        fd.qdim[i] = std::stod(pair.substr(colon + 1));
      }
    } else if (tag == "N") {
      int a, b, c;
      if (!(ls >> a >> b >> c) || a < 0 || a >= fd.nlabels || b < 0 ||
          b >= fd.nlabels || c < 0 || c >= fd.nlabels)
        fail("bad N line");
      fd.fusion_table[(static_cast<size_t>(a) * fd.nlabels + b) * fd.nlabels +
                      c] = 1;
    } else if (tag == "F") {
      int a, b, c, d, e, f;
      double re, im;
      if (!(ls >> a >> b >> c >> d >> e >> f >> re >> im)) fail("bad F line");
      for (int x : {a, b, c, d, e, f})
        if (x < 0 || x >= fd.nlabels) fail("F index out of range");
      fd.fsymbol[FusionData::pack6(a, b, c, d, e, f)] = {re, im};
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!have_labels)
    throw InvalidInput("fusion parse error: missing 'labels' record");
  for (int a = 0; a < fd.nlabels; ++a)
    if (fd.dual[a] < 0)
      throw InvalidInput("fusion parse error: incomplete dual record");
  fd.total_dim_sq = 0.0;
  for (double d : fd.qdim) fd.total_dim_sq += d * d;

  const auto violations = validate_fusion(fd);
  if (!violations.empty())
    throw InvalidInput("fusion invariant violation: " + violations.front());
  return fd;
}

void save_fusion_file(const FusionData& fd, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open '" + path + "' for writing");
  os << save_fusion(fd);
}

FusionData load_fusion_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return load_fusion(buf.str());
}

}  // namespace tqo
