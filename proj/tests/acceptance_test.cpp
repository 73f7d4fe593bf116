// Release gate: eight numbered statements about the built models, each
// printing one ACCEPTANCE line. A FAIL line is a measurement, not a bug in
// the harness; the tolerances below are fixed on purpose and must not be
// loosened to make a line green. See README.md for the analysis of the
// red lines.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <Eigen/Dense>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tqo/cell_complex.hpp"
#include "tqo/dw_model.hpp"
#include "tqo/fusion.hpp"
#include "tqo/group.hpp"
#include "tqo/lw_model.hpp"
#include "tqo/report.hpp"
#include "tqo/verify.hpp"

namespace tqo {
namespace {

constexpr double kTermTol = 1e-10;
constexpr double kGapTol = 1e-8;
constexpr double kScalarActionTol = 1e-8;
constexpr double kFaultFloor = 1e-3;
constexpr double kPentagonTol = 1e-12;
constexpr double kPentagonFaultFloor = 0.1;
constexpr double kEulerRelTol = 1e-12;
constexpr double kGsdBudgetSeconds = 600.0;
constexpr double kDistanceBudgetSeconds = 300.0;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void report_line(int n, bool ok, const std::string& detail) {
  std::printf("ACCEPTANCE %d: %s - %s\n", n, ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  EXPECT_TRUE(ok) << "ACCEPTANCE " << n << ": " << detail;
}

struct Instance {
  const char* family;
  const char* algebra;
  const char* surface;
  const char* cellulation;
  int size;
  int64_t expected_gsd;
};

// The degeneracy table under test. Every torus value appears on two
// distinct cellulations; sphere values on one.
constexpr std::array<Instance, 14> kInstances{{
    {"dw", "Z2", "sphere", "tetrahedron-sphere", 1, 1},
    {"dw", "Z2", "torus", "square-torus", 2, 4},
    {"dw", "Z2", "torus", "square-torus", 3, 4},
    {"dw", "Z3", "torus", "square-torus", 2, 9},
    {"dw", "Z3", "torus", "triangulated-torus", 2, 9},
    {"dw", "S3", "torus", "triangulated-torus", 1, 8},
    {"dw", "S3", "torus", "square-torus", 2, 8},
    {"lw", "VecZ2", "torus", "honeycomb-torus", 1, 4},
    {"lw", "VecZ2", "torus", "honeycomb-torus", 2, 4},
    {"lw", "VecZ3", "torus", "honeycomb-torus", 1, 9},
    {"lw", "VecZ3", "torus", "honeycomb-torus", 2, 9},
    {"lw", "Fibonacci", "torus", "honeycomb-torus", 1, 4},
    {"lw", "Fibonacci", "torus", "honeycomb-torus", 2, 4},
    {"lw", "Fibonacci", "sphere", "tetrahedron-sphere", 1, 1},
}};

const LatticeModel& instance_model(size_t i) {
  static std::array<std::unique_ptr<LatticeModel>, kInstances.size()> cache;
  if (!cache[i]) {
    const Instance& s = kInstances[i];
    const CellComplex c = build_standard(s.surface, s.cellulation, s.size);
    cache[i] = std::make_unique<LatticeModel>(
        std::string(s.family) == "dw"
            ? dw_build(c, builtin_group(s.algebra))
            : lw_build(c, builtin_fusion(s.algebra)));
  }
  return *cache[i];
}

std::string instance_tag(const Instance& s) {
  std::ostringstream ss;
  ss << s.family << ":" << s.algebra << ":" << s.cellulation << ":" << s.size;
  return ss.str();
}

double residual_value(const VerificationReport& r, const std::string& name) {
  for (const ResidualEntry& e : r.residuals)
    if (e.name == name) return e.value;
  return std::numeric_limits<double>::infinity();
}

double scalar_value(const VerificationReport& r, const std::string& name) {
  for (const auto& [k, v] : r.scalars)
    if (k == name) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

// --------------------------------------------------------------------------
// CLI plumbing for the fault control and the reproducibility line.

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TQO_CLI_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  CliResult r;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string scratch_dir() {
  static const std::string dir = [] {
    char tmpl[] = "/tmp/tqo_accept_XXXXXX";
    const char* d = mkdtemp(tmpl);
    if (d == nullptr) throw std::runtime_error("mkdtemp failed");
    return std::string(d);
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const std::string path = scratch_dir() + "/" + name;
  std::ofstream out(path, std::ios::trunc);
  out << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --------------------------------------------------------------------------
// Certified-disk harness for the small-region sweep: a region qualifies if
// some certified disk contains it. Candidates are single faces, then pairs
// of faces joined by a shortest connector path in the 1-skeleton.

std::vector<int> face_edge_list(const CellComplex& c, int f) {
  std::vector<int> edges;
  for (const FaceStep& s : c.faces[f].walk) edges.push_back(s.edge);
  return edges;
}

std::vector<int> faces_containing(const CellComplex& c, int e) {
  std::vector<int> out;
  for (int f = 0; f < c.num_faces(); ++f)
    for (const FaceStep& s : c.faces[f].walk)
      if (s.edge == e) {
        out.push_back(f);
        break;
      }
  return out;
}

std::set<int> face_vertices(const CellComplex& c, int f) {
  std::set<int> vs;
  for (const FaceStep& s : c.faces[f].walk) {
    vs.insert(c.edges[s.edge].first);
    vs.insert(c.edges[s.edge].second);
  }
  return vs;
}

// Edges of a shortest vertex path from `from` to `to`; empty when the sets
// already intersect.
std::vector<int> connector_edges(const CellComplex& c, const std::set<int>& from,
                                 const std::set<int>& to) {
  for (int v : from)
    if (to.count(v)) return {};
  std::vector<int> parent_edge(c.num_vertices, -1);
  std::vector<int> parent_vertex(c.num_vertices, -1);
  std::vector<bool> seen(c.num_vertices, false);
  std::queue<int> q;
  for (int v : from) {
    seen[v] = true;
    q.push(v);
  }
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    if (to.count(v)) {
      std::vector<int> path;
      for (int x = v; parent_edge[x] != -1; x = parent_vertex[x])
        path.push_back(parent_edge[x]);
      return path;
    }
    for (int e = 0; e < c.num_edges(); ++e) {
      const auto [a, b] = c.edges[e];
      const int w = (a == v) ? b : (b == v) ? a : -1;
      if (w < 0 || seen[w]) continue;
      seen[w] = true;
      parent_edge[w] = e;
      parent_vertex[w] = v;
      q.push(w);
    }
  }
  return {};
}

std::optional<Region> certified_disk_around(const CellComplex& c,
                                            const std::vector<int>& edges) {
  for (int f = 0; f < c.num_faces(); ++f) {
    const std::vector<int> fe = face_edge_list(c, f);
    bool covers = true;
    for (int e : edges)
      covers = covers && std::find(fe.begin(), fe.end(), e) != fe.end();
    if (!covers) continue;
    const Region r = make_region(c, fe);
    if (r.disk_certified) return r;
  }
  if (edges.size() == 2) {
    for (int f1 : faces_containing(c, edges[0]))
      for (int f2 : faces_containing(c, edges[1])) {
        std::vector<int> all = face_edge_list(c, f1);
        const std::vector<int> fe2 = face_edge_list(c, f2);
        all.insert(all.end(), fe2.begin(), fe2.end());
        const std::vector<int> bridge =
            connector_edges(c, face_vertices(c, f1), face_vertices(c, f2));
        all.insert(all.end(), bridge.begin(), bridge.end());
        all.insert(all.end(), edges.begin(), edges.end());
        const Region r = make_region(c, all);
        if (r.disk_certified) return r;
      }
  }
  return std::nullopt;
}

struct SweepResult {
  int covered = 0;
  int total = 0;
  double worst = 0.0;
};

SweepResult sweep_small_regions(const LatticeModel& m) {
  const CellComplex& c = m.complex;
  std::vector<std::vector<int>> regions;
  for (int e = 0; e < c.num_edges(); ++e) regions.push_back({e});
  for (int e1 = 0; e1 < c.num_edges(); ++e1)
    for (int e2 = e1 + 1; e2 < c.num_edges(); ++e2)
      regions.push_back({e1, e2});
  SweepResult s;
  s.total = static_cast<int>(regions.size());
  for (const std::vector<int>& edges : regions) {
    const std::optional<Region> disk = certified_disk_around(c, edges);
    if (!disk) continue;
    ++s.covered;
    const VerificationReport r = check_tqo1(m, make_region(c, edges), *disk);
    for (const ResidualEntry& e : r.residuals)
      if (e.name.rfind("op.", 0) == 0) s.worst = std::max(s.worst, e.value);
  }
  return s;
}

// --------------------------------------------------------------------------

TEST(Acceptance, C1DegeneracyTableByTwoRoutes) {
  const double t0 = now_seconds();
  int rank_hits = 0, oracle_hits = 0, oracle_rows = 0;
  std::ostringstream bad;
  for (size_t i = 0; i < kInstances.size(); ++i) {
    const Instance& s = kInstances[i];
    const LatticeModel& m = instance_model(i);
    const int64_t rank = gsd_rank_route(m);
    if (rank == s.expected_gsd) {
      ++rank_hits;
    } else {
      bad << " " << instance_tag(s) << " rank=" << rank;
    }
    const std::optional<int64_t> oracle = gsd_oracle_route(m);
    if (oracle) {
      ++oracle_rows;
      if (*oracle == s.expected_gsd) {
        ++oracle_hits;
      } else {
        bad << " " << instance_tag(s) << " oracle=" << *oracle;
      }
    }
  }
  const double dt = now_seconds() - t0;
  const bool ok = rank_hits == 14 && oracle_hits == oracle_rows &&
                  oracle_rows == 11 && dt <= kGsdBudgetSeconds;
  std::ostringstream detail;
  detail << "degeneracy table: rank route " << rank_hits << "/14, oracle route "
         << oracle_hits << "/" << oracle_rows << " (no closed form for the 3 "
         << "Fibonacci rows), " << static_cast<int>(dt) << "s of "
         << static_cast<int>(kGsdBudgetSeconds) << "s budget" << bad.str();
  report_line(1, ok, detail.str());
}

TEST(Acceptance, C2TermStructureFrustrationAndGap) {
  int structure_hits = 0, gap_hits = 0;
  std::ostringstream gaps;
  for (size_t i = 0; i < kInstances.size(); ++i) {
    const VerificationReport r = check_tqo0(instance_model(i));
    const bool structure =
        residual_value(r, "term-projector") <= kTermTol &&
        residual_value(r, "term-hermitian") <= kTermTol &&
        residual_value(r, "term-commutator") <= kTermTol &&
        residual_value(r, "frustration") <= kTermTol;
    if (structure) ++structure_hits;
    const double gap = scalar_value(r, "gap");
    if (std::abs(gap - 1.0) <= kGapTol) ++gap_hits;
    gaps << (i ? "," : "") << format_double(gap);
  }
  const bool ok = structure_hits == 14 && gap_hits == 14;
  std::ostringstream detail;
  detail << "projector/commutator/frustration within 1e-10 on "
         << structure_hits << "/14; gap = 1 within 1e-8 on " << gap_hits
         << "/14 (measured gaps " << gaps.str()
         << "; these models are gapped but the gap is an integer >= 1, not 1, "
         << "whenever no single-term excitation exists)";
  report_line(2, ok, detail.str());
}

TEST(Acceptance, C3ScalarActionOnSmallRegions) {
  const LatticeModel& dwm = instance_model(2);   // dw Z2 square-torus(3)
  const LatticeModel& lwm = instance_model(12);  // lw Fibonacci honeycomb(2)
  const SweepResult dws = sweep_small_regions(dwm);
  const SweepResult lws = sweep_small_regions(lwm);

  const std::string cfg = write_file("fault.cfg",
                                     "family = dw\n"
                                     "algebra = Z2\n"
                                     "cellulation = square-torus\n"
                                     "size = 2\n"
                                     "checks = tqo0,tqo1\n");
  const CliResult fault =
      run_cli("verify --config " + cfg + " --fault noncommuting-term");
  double fault_worst = 0.0;
  std::istringstream lines(fault.output);
  std::string line;
  while (std::getline(lines, line)) {
    const size_t at = line.find(".residual.");
    if (at == std::string::npos) continue;
    fault_worst = std::max(
        fault_worst,
        std::strtod(line.substr(line.find('=') + 1).c_str(), nullptr));
  }
  const bool control_ok = fault.code == 1 && fault_worst > kFaultFloor;

  const bool ok = dws.covered == dws.total && dws.worst <= kScalarActionTol &&
                  lws.covered == lws.total && lws.worst <= kScalarActionTol &&
                  control_ok;
  std::ostringstream detail;
  detail << "scalar action on every <=2-edge region in a certified disk: dw "
         << dws.covered << "/" << dws.total << " regions worst "
         << format_double(dws.worst) << ", lw " << lws.covered << "/"
         << lws.total << " regions worst " << format_double(lws.worst)
         << " vs 1e-8 (the 2x2 Fibonacci torus resolves the degeneracy at "
         << "permille scale); fault control exit=" << fault.code
         << " worst residual " << format_double(fault_worst);
  report_line(3, ok, detail.str());
}

TEST(Acceptance, C4GramContainmentFaceInOneRing) {
  std::ostringstream detail;
  detail << "face vs one-ring containment:";
  bool ok = true;
  const std::array<size_t, 2> picks{2, 12};
  for (size_t i : picks) {
    const LatticeModel& m = instance_model(i);
    detail << " [" << instance_tag(kInstances[i]) << "] ";
    try {
      const Region a = make_region(m.complex, face_edge_list(m.complex, 0));
      const Region b = disk_region(m.complex, 0, 1);
      const VerificationReport r = check_tqo2(m, a, b);
      ok = ok && r.pass;
      detail << "containment " << format_double(residual_value(r, "containment"));
    } catch (const InvalidInput& e) {
      // The one-ring of any face wraps these small tori, so the enclosure
      // is not a disk and the check refuses to certify anything.
      ok = false;
      detail << "refused: " << e.what();
    }
  }
  report_line(4, ok, detail.str());
}

TEST(Acceptance, C5DistanceEqualsTorusWidth) {
  const double t0 = now_seconds();
  bool ok = true;
  std::ostringstream detail;
  detail << "exhaustive weight<=3 search:";
  for (int k : {2, 3}) {
    const LatticeModel& m = instance_model(k == 2 ? 1 : 2);
    const DistanceResult d = distance_search(m, 3);
    ok = ok && d.found && d.distance == k;
    detail << " square-torus(" << k << ") distance="
           << (d.found ? d.distance : -1) << " candidates=" << d.candidates;
  }
  const double dt = now_seconds() - t0;
  ok = ok && dt <= kDistanceBudgetSeconds;
  detail << " in " << static_cast<int>(dt + 1) << "s of "
         << static_cast<int>(kDistanceBudgetSeconds) << "s budget";
  report_line(5, ok, detail.str());
}

TEST(Acceptance, C6PentagonResidualsAndFaultDetection) {
  bool ok = true;
  std::ostringstream detail;
  detail << "pentagon residuals:";
  for (const char* name : {"VecZ2", "VecZ3", "Fibonacci"}) {
    const double res = pentagon_check(builtin_fusion(name));
    ok = ok && res <= kPentagonTol;
    detail << " " << name << "=" << format_double(res);
  }
  FusionData fd = builtin_fusion("Fibonacci");
  auto lowest = fd.fsymbol.begin();
  for (auto it = fd.fsymbol.begin(); it != fd.fsymbol.end(); ++it)
    if (it->first < lowest->first) lowest = it;
  lowest->second += 0.2;
  const double corrupted = pentagon_check(fd);
  ok = ok && corrupted > kPentagonFaultFloor;
  detail << "; corrupted Fibonacci=" << format_double(corrupted) << " vs floor "
         << format_double(kPentagonFaultFloor);
  report_line(6, ok, detail.str());
}

TEST(Acceptance, C7EulerStateSumMatchesClosedForm) {
  const std::vector<std::pair<std::string, std::pair<std::string, int>>>
      complexes{{"torus", {"square-torus", 2}},
                {"torus", {"square-torus", 3}},
                {"torus", {"triangulated-torus", 1}},
                {"torus", {"triangulated-torus", 2}},
                {"torus", {"honeycomb-torus", 1}},
                {"torus", {"honeycomb-torus", 2}},
                {"torus", {"honeycomb-torus", 3}},
                {"sphere", {"tetrahedron-sphere", 1}},
                {"sphere", {"octahedron-sphere", 1}},
                {"sphere", {"cube-sphere", 1}}};
  bool ok = true;
  double worst = 0.0;
  for (const auto& [surface, cell] : complexes) {
    const CellComplex c = build_standard(surface, cell.first, cell.second);
    for (double a : {0.5, 2.0, 7.0}) {
      const double want = std::pow(a, c.euler_characteristic());
      const double got = euler_state_sum(c, a);
      const double rel = std::abs(got - want) / std::abs(want);
      worst = std::max(worst, rel);
      ok = ok && rel <= kEulerRelTol;
    }
  }
  std::ostringstream detail;
  detail << "state sum equals a^chi on " << complexes.size()
         << " complexes for a in {0.5, 2, 7}, worst relative error "
         << format_double(worst) << " vs 1e-12";
  report_line(7, ok, detail.str());
}

TEST(Acceptance, C8ByteReproducibleReports) {
  const std::string cfg = write_file(
      "repro.cfg",
      "family = dw\n"
      "algebra = Z2\n"
      "cellulation = square-torus\n"
      "size = 3\n"
      "checks = tqo0,tqo1,tqo2,tqo3,distance\n"
      "distance.weight = 3\n"
      "tqo2.region_a = 0,10,3,9\n"
      "tqo2.region_b = 0,1,3,4,6,7,9,10,11,12,13,14\n");
  const std::string r1 = scratch_dir() + "/r1.txt";
  const std::string r2 = scratch_dir() + "/r2.txt";
  const std::string r4 = scratch_dir() + "/r4.txt";
  const int c1 = run_cli("verify --config " + cfg + " --seed 11 --out " + r1).code;
  const int c2 = run_cli("verify --config " + cfg + " --seed 11 --out " + r2).code;
  const int c4 = run_cli("verify --config " + cfg + " --seed 11 --workers 4 --out " + r4).code;
  const std::string a = slurp(r1);
  const bool ok = !a.empty() && a == slurp(r2) && a == slurp(r4) && c1 == c2 &&
                  c1 == c4;
  std::ostringstream detail;
  detail << "same config and seed twice, then with 4 workers: "
         << (ok ? "byte-identical reports" : "reports differ") << " ("
         << a.size() << " bytes, exit " << c1 << ")";
  report_line(8, ok, detail.str());
}

}  // namespace
}  // namespace tqo
