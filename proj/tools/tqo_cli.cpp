// Batch front end for the verification library.
//
//   tqo build|verify|gsd-table [--config <path>] [--seed <u64>]
//       [--workers <n>] [--out <path>] [--fault <name>]
//
// Exit codes: 0 pass, 1 check fail, 2 invalid input, 3 resource cap,
// 4 solver non-convergence. Same config + seed gives a byte-identical
// report; the worker count only schedules, it never reorders output.

#include <atomic>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "tqo/cell_complex.hpp"
#include "tqo/config.hpp"
#include "tqo/dw_model.hpp"
#include "tqo/error.hpp"
#include "tqo/fusion.hpp"
#include "tqo/group.hpp"
#include "tqo/lw_model.hpp"
#include "tqo/model.hpp"
#include "tqo/report.hpp"
#include "tqo/verify.hpp"

namespace tqo {
namespace {

constexpr const char* kUsage =
    "usage: tqo build|verify|gsd-table [--config <path>] [--seed <u64>]\n"
    "           [--workers <n>] [--out <path>] [--fault <name>]\n"
    "faults: noncommuting-term, corrupt-fsymbol";

constexpr const char* kFaultNoncommuting = "noncommuting-term";
constexpr const char* kFaultCorruptF = "corrupt-fsymbol";

struct CliArgs {
  std::string command;
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::string fault;
};

uint64_t parse_u64(const std::string& flag, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0' || v.front() == '-')
    throw InvalidInput(flag + " wants a nonnegative integer, got '" + v + "'");
  return x;
}

CliArgs parse_args(int argc, char** argv) {
  if (argc < 2) throw InvalidInput(kUsage);
  CliArgs a;
  a.command = argv[1];
  if (a.command != "build" && a.command != "verify" && a.command != "gsd-table")
    throw InvalidInput("unknown command '" + a.command + "'\n" + kUsage);
  for (int i = 2; i < argc; i += 2) {
    const std::string flag = argv[i];
    if (i + 1 >= argc) throw InvalidInput(flag + " wants a value");
    const std::string val = argv[i + 1];
    if (flag == "--config") {
      a.config_path = val;
    } else if (flag == "--seed") {
      a.seed = parse_u64(flag, val);
    } else if (flag == "--workers") {
      const uint64_t w = parse_u64(flag, val);
      if (w < 1 || w > 256) throw InvalidInput("--workers wants 1..256");
      a.workers = static_cast<int>(w);
    } else if (flag == "--out") {
      a.out = val;
    } else if (flag == "--fault") {
      if (val != kFaultNoncommuting && val != kFaultCorruptF)
        throw InvalidInput("unknown fault '" + val + "' (want " +
                           kFaultNoncommuting + " or " + kFaultCorruptF + ")");
      a.fault = val;
    } else {
      throw InvalidInput("unknown flag '" + flag + "'\n" + kUsage);
    }
  }
  return a;
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open output file " + cfg.out);
  out << text;
}

bool builtin_group_name(const std::string& s) {
  return s == "Z2" || s == "Z3" || s == "Z4" || s == "S3";
}

bool builtin_fusion_name(const std::string& s) {
  return s == "VecZ2" || s == "VecZ3" || s == "Fibonacci";
}

// Shifts the lowest-keyed stored F entry by +0.2, which breaks both
// unitarity and the pentagon identity while keeping the table loadable.
void corrupt_fsymbol(FusionData& fd) {
  if (fd.fsymbol.empty()) throw InvalidInput("fault: no F entries to corrupt");
  auto worst = fd.fsymbol.begin();
  for (auto it = fd.fsymbol.begin(); it != fd.fsymbol.end(); ++it)
    if (it->first < worst->first) worst = it;
  worst->second += 0.2;
}

// Replaces the first face term's local projector with a seeded random
// Hermitian matrix: still Hermitian, no longer a projector, and it fails to
// commute with its neighbors.
void inject_noncommuting_term(LatticeModel& m, uint64_t seed) {
  for (LocalTerm& t : m.terms) {
    if (t.kind != TermKind::face) continue;
    const int64_t d = t.local.dim();
    std::mt19937_64 rng(seed ^ 0x5eedfau);
    std::vector<Triplet> trips;
    for (int64_t r = 0; r < d; ++r) {
      for (int j = 0; j < 2; ++j) {
        const int64_t c = static_cast<int64_t>(rng() % static_cast<uint64_t>(d));
        const Complex v(
            2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0,
            2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0);
        trips.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
        trips.emplace_back(static_cast<int>(c), static_cast<int>(r),
                           std::conj(v));
      }
    }
    t.local = make_sparse(d, trips);
    return;
  }
  throw InvalidInput("fault: model has no face term to replace");
}

// Inputs resolved from the config: the complex plus the algebra, loaded
// from a file when the name is not a builtin. A fault that corrupts the
// algebra applies here, before any model exists, so the fusion check can
// catch it as a check failure instead of a build refusal.
struct BuildInputs {
  CellComplex complex;
  FiniteGroup group;
  FusionData fusion;
};

BuildInputs load_inputs(const RunConfig& cfg, const std::string& fault) {
  BuildInputs in;
  in.complex = build_standard(cfg.surface, cfg.cellulation, cfg.size);
  if (cfg.family == "dw") {
    if (fault == kFaultCorruptF)
      throw InvalidInput("fault corrupt-fsymbol needs family lw");
    in.group = builtin_group_name(cfg.algebra) ? builtin_group(cfg.algebra)
                                               : load_group_file(cfg.algebra);
  } else {
    in.fusion = builtin_fusion_name(cfg.algebra)
                    ? builtin_fusion(cfg.algebra)
                    : load_fusion_file(cfg.algebra);
    if (fault == kFaultCorruptF) corrupt_fsymbol(in.fusion);
  }
  return in;
}

LatticeModel build_model(const BuildInputs& in, const RunConfig& cfg,
                         const std::string& fault) {
  LatticeModel m = cfg.family == "dw" ? dw_build(in.complex, in.group, cfg.caps)
                                      : lw_build(in.complex, in.fusion, cfg.caps);
  if (fault == kFaultNoncommuting) inject_noncommuting_term(m, cfg.seed);
  return m;
}

std::string config_spec(const RunConfig& cfg) {
  return cfg.family + ":" + cfg.algebra + ":" + cfg.surface + ":" +
         cfg.cellulation + ":" + std::to_string(cfg.size);
}

std::vector<int> face_edge_list(const CellComplex& c, int f) {
  if (f < 0 || f >= c.num_faces())
    throw InvalidInput("face index " + std::to_string(f) + " out of range");
  std::vector<int> edges;
  for (const FaceStep& s : c.faces[f].walk) edges.push_back(s.edge);
  return edges;
}

int cmd_build(const RunConfig& cfg, const std::string& fault) {
  const BuildInputs in = load_inputs(cfg, fault);
  const LatticeModel m = build_model(in, cfg, fault);
  const TermCheck tc = check_terms(m);
  std::string out =
      "dim=" + std::to_string(m.dim) + " terms=" + std::to_string(m.terms.size()) + "\n";
  out += "term.projector = " + format_double(tc.projector) + "\n";
  out += "term.hermitian = " + format_double(tc.hermitian) + "\n";
  out += "term.commutator = " + format_double(tc.commutator) + "\n";
  write_output(cfg, out);
  return 0;
}

VerificationReport skipped_report(const std::string& check,
                                  const std::string& model,
                                  const std::string& reason) {
  VerificationReport r;
  r.check = check;
  r.model = model;
  r.outcome = "skipped";
  r.parameters.emplace_back("reason", reason);
  return r;
}

// tqo1 enclosing disk: explicit edge list wins, then an explicit seed face
// grown by face adjacency, then the first face whose boundary covers the
// whole region.
Region resolve_tqo1_disk(const CellComplex& c, const RunConfig& cfg,
                         const Region& region) {
  if (!cfg.tqo1_disk_edges.empty()) return make_region(c, cfg.tqo1_disk_edges);
  if (cfg.tqo1_disk_face >= 0)
    return disk_region(c, cfg.tqo1_disk_face, cfg.tqo1_disk_radius);
  for (int f = 0; f < c.num_faces(); ++f) {
    const Region cand = make_region(c, face_edge_list(c, f));
    if (std::includes(cand.edge_set.begin(), cand.edge_set.end(),
                      region.edge_set.begin(), region.edge_set.end()))
      return cand;
  }
  throw InvalidInput(
      "tqo1: no single face covers the region; give tqo1.disk.edges or "
      "tqo1.disk.face");
}

std::vector<std::pair<std::string, int>> default_tqo3_cellulations(
    const RunConfig& cfg) {
  if (cfg.family == "dw" && cfg.surface == "torus")
    return {{"square-torus", 2}, {"square-torus", 3}};
  if (cfg.family == "dw")
    return {{"tetrahedron-sphere", 1}, {"octahedron-sphere", 1}};
  if (cfg.surface == "torus")
    return {{"honeycomb-torus", 2}, {"honeycomb-torus", 3}};
  return {{"cube-sphere", 1}, {"tetrahedron-sphere", 1}};
}

// Runs the tasks with up to `workers` threads and appends the results in
// task order. Exceptions are replayed in task order too, so failure
// behavior does not depend on scheduling.
void run_stage(std::vector<std::function<VerificationReport()>> tasks,
               int workers, std::vector<VerificationReport>* reports) {
  const int n = static_cast<int>(tasks.size());
  std::vector<std::optional<VerificationReport>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto body = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        slots[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1 || n <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(workers, n); ++t) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
  }
  for (int i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
  for (int i = 0; i < n; ++i) reports->push_back(std::move(*slots[i]));
}

bool wants(const RunConfig& cfg, const std::string& name) {
  return std::find(cfg.checks.begin(), cfg.checks.end(), name) !=
         cfg.checks.end();
}

// A wrong gap leaves the model a well-formed commuting-projector
// Hamiltonian, so the ground-space checks stay meaningful; broken term
// structure does not.
bool structural_tqo0_failure(const VerificationReport& r) {
  for (const ResidualEntry& e : r.residuals)
    if (e.name != "gap-deviation" && e.value > e.tolerance) return true;
  return false;
}

int cmd_verify(const RunConfig& cfg, const std::string& fault) {
  const BuildInputs in = load_inputs(cfg, fault);
  std::vector<VerificationReport> reports;

  const std::vector<std::string> tail_order{"tqo1", "tqo2", "tqo3", "distance"};
  auto skip_rest = [&](const std::string& model, const std::string& reason,
                       bool include_tqo0) {
    if (include_tqo0 && wants(cfg, "tqo0"))
      reports.push_back(skipped_report("tqo0", model, reason));
    for (const std::string& name : tail_order)
      if (wants(cfg, name))
        reports.push_back(skipped_report(name, model, reason));
  };

  bool fusion_failed = false;
  if (wants(cfg, "fusion")) {
    if (cfg.family != "lw")
      throw InvalidInput("fusion check needs family lw");
    VerificationReport r = check_fusion(in.fusion, cfg.tol);
    r.seed = cfg.seed;
    fusion_failed = !r.pass;
    reports.push_back(std::move(r));
  }

  if (fusion_failed) {
    // Building on corrupted data would be refused; report the failure and
    // mark everything downstream skipped instead.
    skip_rest(cfg.family + "/" + in.fusion.name, "fusion check failed", true);
  } else {
    const LatticeModel m = build_model(in, cfg, fault);
    const std::string descriptor = model_descriptor(m);

    bool structural = false;
    if (wants(cfg, "tqo0")) {
      VerificationReport r = check_tqo0(m, cfg.seed, cfg.tol);
      structural = structural_tqo0_failure(r);
      reports.push_back(std::move(r));
    }

    if (structural) {
      skip_rest(descriptor, "tqo0 term structure failed", false);
    } else {
      std::vector<std::function<VerificationReport()>> tasks;
      if (wants(cfg, "tqo1"))
        tasks.push_back([&] {
          const Region region = make_region(m.complex, cfg.tqo1_region);
          const Region disk = resolve_tqo1_disk(m.complex, cfg, region);
          return check_tqo1(m, region, disk, cfg.seed, cfg.tol);
        });
      if (wants(cfg, "tqo2"))
        tasks.push_back([&] {
          const Region a =
              cfg.tqo2_region_a.empty()
                  ? make_region(m.complex, face_edge_list(m.complex, cfg.tqo2_face))
                  : make_region(m.complex, cfg.tqo2_region_a);
          const Region b = cfg.tqo2_region_b.empty()
                               ? disk_region(m.complex, cfg.tqo2_face,
                                             cfg.tqo2_radius)
                               : make_region(m.complex, cfg.tqo2_region_b);
          return check_tqo2(m, a, b, cfg.seed, cfg.tol);
        });
      if (wants(cfg, "tqo3"))
        tasks.push_back([&] {
          const auto cells = cfg.tqo3_cellulations.empty()
                                 ? default_tqo3_cellulations(cfg)
                                 : cfg.tqo3_cellulations;
          std::vector<std::unique_ptr<LatticeModel>> models;
          std::vector<const LatticeModel*> ptrs;
          for (const auto& [name, size] : cells) {
            const CellComplex cc = build_standard(cfg.surface, name, size);
            models.push_back(std::make_unique<LatticeModel>(
                cfg.family == "dw" ? dw_build(cc, in.group, cfg.caps)
                                   : lw_build(cc, in.fusion, cfg.caps)));
            ptrs.push_back(models.back().get());
          }
          return check_tqo3(ptrs, cfg.seed);
        });
      if (wants(cfg, "distance"))
        tasks.push_back([&] {
          const DistanceResult d = distance_search(m, cfg.distance_weight);
          VerificationReport r;
          r.check = "distance";
          r.model = descriptor;
          r.seed = cfg.seed;
          r.parameters.emplace_back("max-weight",
                                    std::to_string(d.max_weight));
          r.scalars.emplace_back("found", d.found ? 1.0 : 0.0);
          if (d.found)
            r.scalars.emplace_back("distance", static_cast<double>(d.distance));
          r.scalars.emplace_back("candidates",
                                 static_cast<double>(d.candidates));
          // Either outcome is a valid measurement: found reports the
          // minimal nontrivial weight, not-found certifies distance >
          // max-weight.
          r.pass = true;
          return r;
        });
      run_stage(std::move(tasks), cfg.workers, &reports);
    }
  }

  bool all_pass = true;
  for (const VerificationReport& r : reports) all_pass = all_pass && r.pass;
  write_output(cfg,
               render_report(reports, "verify " + config_spec(cfg), cfg.seed));
  return all_pass ? 0 : 1;
}

int cmd_gsd_table(const RunConfig& cfg, const std::string& fault) {
  if (!fault.empty())
    throw InvalidInput("--fault applies to build and verify only");
  if (cfg.table_rows.empty())
    throw InvalidInput("gsd-table: config key table.rows is empty");
  std::vector<GsdTableRow> rows;
  bool disagreement = false;
  for (const std::string& spec : cfg.table_rows) {
    std::vector<std::string> parts;
    size_t pos = 0;
    while (true) {
      const size_t colon = spec.find(':', pos);
      if (colon == std::string::npos) {
        parts.push_back(spec.substr(pos));
        break;
      }
      parts.push_back(spec.substr(pos, colon - pos));
      pos = colon + 1;
    }
    if (parts.size() != 5)
      throw InvalidInput("gsd-table row wants family:algebra:surface:"
                         "cellulation:size, got '" + spec + "'");
    try {
      RunConfig row_cfg;
      row_cfg.family = parts[0];
      if (row_cfg.family != "dw" && row_cfg.family != "lw")
        throw InvalidInput("gsd-table row family must be dw or lw");
      row_cfg.algebra = parts[1];
      row_cfg.surface = parts[2];
      row_cfg.cellulation = parts[3];
      row_cfg.size = static_cast<int>(parse_u64("size", parts[4]));
      row_cfg.caps = cfg.caps;
      const BuildInputs in = load_inputs(row_cfg, "");
      const LatticeModel m = build_model(in, row_cfg, "");
      const int64_t rank = gsd_rank_route(m, cfg.seed);
      const std::optional<int64_t> oracle = gsd_oracle_route(m);
      const bool agree = !oracle || *oracle == rank;
      rows.push_back({spec, "rank", rank, agree, ""});
      if (oracle) rows.push_back({spec, "oracle", *oracle, agree, ""});
      disagreement = disagreement || !agree;
    } catch (const Error& e) {
      rows.push_back({spec, "", 0, true, e.what()});
    }
  }
  write_output(cfg, render_gsd_table(rows));
  return disagreement ? 1 : 0;
}

}  // namespace
}  // namespace tqo

int main(int argc, char** argv) {
  using namespace tqo;
  try {
    const CliArgs args = parse_args(argc, argv);
    RunConfig cfg = args.config_path.empty()
                        ? RunConfig{}
                        : load_config_file(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.workers) cfg.workers = *args.workers;
    if (args.out) cfg.out = *args.out;
    if (args.command == "build") return cmd_build(cfg, args.fault);
    if (args.command == "verify") return cmd_verify(cfg, args.fault);
    return cmd_gsd_table(cfg, args.fault);
  } catch (const InvalidInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const CapExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NotConverged& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
