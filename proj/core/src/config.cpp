#include "tqo/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "tqo/error.hpp"

namespace tqo {

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int64_t to_int(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    throw InvalidInput("config: key " + key + " wants an integer, got '" + v +
                       "'");
  return x;
}

uint64_t to_uint(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0' || v.front() == '-')
    throw InvalidInput("config: key " + key +
                       " wants a nonnegative integer, got '" + v + "'");
  return x;
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    throw InvalidInput("config: key " + key + " wants a number, got '" + v +
                       "'");
  return x;
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const std::string& item : split(v, ','))
    out.push_back(static_cast<int>(to_int(key, item)));
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config line " + std::to_string(lineno) +
                         ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw InvalidInput("config line " + std::to_string(lineno) +
                         ": empty key");
    if (!seen.insert(key).second)
      throw InvalidInput("config: repeated key " + key);

    if (key == "family") {
      if (val != "dw" && val != "lw")
        throw InvalidInput("config: family must be dw or lw");
      cfg.family = val;
    } else if (key == "algebra") {
      cfg.algebra = val;
    } else if (key == "surface") {
      cfg.surface = val;
    } else if (key == "cellulation") {
      cfg.cellulation = val;
    } else if (key == "size") {
      cfg.size = static_cast<int>(to_int(key, val));
    } else if (key == "checks") {
      cfg.checks = split(val, ',');
      for (const std::string& c : cfg.checks)
        if (c != "fusion" && c != "tqo0" && c != "tqo1" && c != "tqo2" &&
            c != "tqo3" && c != "distance")
          throw InvalidInput("config: unknown check " + c);
    } else if (key == "tqo1.region") {
      cfg.tqo1_region = to_int_list(key, val);
    } else if (key == "tqo1.disk.edges") {
      cfg.tqo1_disk_edges = to_int_list(key, val);
    } else if (key == "tqo1.disk.face") {
      cfg.tqo1_disk_face = static_cast<int>(to_int(key, val));
    } else if (key == "tqo1.disk.radius") {
      cfg.tqo1_disk_radius = static_cast<int>(to_int(key, val));
    } else if (key == "tqo2.face") {
      cfg.tqo2_face = static_cast<int>(to_int(key, val));
    } else if (key == "tqo2.radius") {
      cfg.tqo2_radius = static_cast<int>(to_int(key, val));
    } else if (key == "tqo2.region_a") {
      cfg.tqo2_region_a = to_int_list(key, val);
    } else if (key == "tqo2.region_b") {
      cfg.tqo2_region_b = to_int_list(key, val);
    } else if (key == "tqo3.cellulations") {
      for (const std::string& item : split(val, ',')) {
        const size_t c = item.find(':');
        if (c == std::string::npos)
          throw InvalidInput("config: tqo3 cellulation wants name:size, got " +
                             item);
        cfg.tqo3_cellulations.emplace_back(
            trim(item.substr(0, c)),
            static_cast<int>(to_int(key, trim(item.substr(c + 1)))));
      }
    } else if (key == "distance.weight") {
      cfg.distance_weight = static_cast<int>(to_int(key, val));
    } else if (key == "caps.full_matrix") {
      cfg.caps.full_matrix = to_int(key, val);
    } else if (key == "caps.apply") {
      cfg.caps.apply = to_int(key, val);
    } else if (key == "caps.subspace") {
      cfg.caps.subspace = to_int(key, val);
    } else if (key == "tol.term") {
      cfg.tol.term = to_double(key, val);
    } else if (key == "tol.gap") {
      cfg.tol.gap = to_double(key, val);
    } else if (key == "tol.tqo1") {
      cfg.tol.tqo1 = to_double(key, val);
    } else if (key == "tol.tqo2") {
      cfg.tol.tqo2 = to_double(key, val);
    } else if (key == "tol.pentagon") {
      cfg.tol.pentagon = to_double(key, val);
    } else if (key == "seed") {
      cfg.seed = to_uint(key, val);
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(to_int(key, val));
      if (cfg.workers < 1)
        throw InvalidInput("config: workers must be at least 1");
    } else if (key == "out") {
      cfg.out = val;
    } else if (key == "table.rows") {
      cfg.table_rows = split(val, ';');
    } else {
      throw InvalidInput("config: unknown key " + key);
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace tqo
