#pragma once

// Cluster text format: one JSON header line, then one "x y" line per occupied site in
// sorted order. PBM export for quick viewing.

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsl/lattice.hpp"

namespace hsl {

/// Malformed cluster file.
class ClusterFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::json bc_to_json(const BoundaryCondition& bc) {
  nlohmann::json j{{"kind", to_string(bc)}};
  if (bc.kind == BcKind::kKpr) j["p"] = bc.p;
  return j;
}

inline BoundaryCondition bc_from_name(const std::string& name, double p = 0.0) {
  if (name == "none") return BoundaryCondition::none();
  if (name == "negaxis") return BoundaryCondition::kill_neg_axis();
  if (name == "angle0.5") return BoundaryCondition::kill_angle_sides(0.5);
  if (name == "angle0.25") return BoundaryCondition::kill_angle_sides(0.25);
  if (name == "killreflect") return BoundaryCondition::kill_reflect();
  if (name == "kpr") return BoundaryCondition::kpr(p);
  throw std::invalid_argument("unknown boundary condition '" + name + "'");
}

inline ModelKind model_from_name(const std::string& name) {
  if (name == "idla") return ModelKind::kIdla;
  if (name == "rotor") return ModelKind::kRotorRouter;
  if (name == "sandpile") return ModelKind::kDivisibleSandpile;
  throw std::invalid_argument("unknown model '" + name + "'");
}

inline void write_cluster(std::ostream& os, const LatticeCluster& c) {
  const nlohmann::json header{{"model", to_string(c.model)},
                              {"bc", bc_to_json(c.bc)},
                              {"N", c.survivors},
                              {"emitted", c.emitted},
                              {"seed", c.seed},
                              {"steps", c.steps},
                              {"truncated", c.truncated}};
  os << header.dump() << '\n';
  std::vector<Site> sites = c.occupied;
  std::sort(sites.begin(), sites.end());
  for (const Site& s : sites) os << s.x << ' ' << s.y << '\n';
}

/// Reads a cluster written by write_cluster. Sites come back sorted.
inline LatticeCluster read_cluster(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ClusterFormatError("cluster file: missing header");
  LatticeCluster c;
  try {
    const auto h = nlohmann::json::parse(line);
    c.model = model_from_name(h.at("model").get<std::string>());
    const auto& bc = h.at("bc");
    c.bc = bc_from_name(bc.at("kind").get<std::string>(), bc.value("p", 0.0));
    c.survivors = h.at("N").get<std::uint64_t>();
    c.emitted = h.at("emitted").get<std::uint64_t>();
    c.seed = h.at("seed").get<std::uint64_t>();
    c.steps = h.value("steps", std::uint64_t{0});
    c.truncated = h.value("truncated", false);
  } catch (const ClusterFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw ClusterFormatError(std::string("cluster file: bad header: ") + e.what());
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    Site s;
    std::string rest;
    if (!(ls >> s.x >> s.y) || (ls >> rest)) {
      throw ClusterFormatError("cluster file: bad site on line " + std::to_string(lineno));
    }
    c.occupied.push_back(s);
  }
  if (c.model != ModelKind::kDivisibleSandpile && c.occupied.size() != c.survivors) {
    throw ClusterFormatError("cluster file: header N does not match the site count");
  }
  return c;
}

/// Plain PBM (P1) of the bounding box, row 0 at the top, 1 = occupied.
inline void write_pbm(std::ostream& os, const std::vector<Site>& cells) {
  if (cells.empty()) {
    os << "P1\n1 1\n0\n";
    return;
  }
  int xmin = cells[0].x, xmax = xmin, ymin = cells[0].y, ymax = ymin;
  for (const Site& s : cells) {
    xmin = std::min(xmin, s.x);
    xmax = std::max(xmax, s.x);
    ymin = std::min(ymin, s.y);
    ymax = std::max(ymax, s.y);
  }
  const int w = xmax - xmin + 1, h = ymax - ymin + 1;
  std::vector<char> bits(static_cast<std::size_t>(w) * h, '0');
  for (const Site& s : cells) bits[static_cast<std::size_t>(ymax - s.y) * w + (s.x - xmin)] = '1';
  os << "P1\n" << w << ' ' << h << '\n';
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      os << bits[static_cast<std::size_t>(r) * w + c];
      // Plain PBM lines should stay under 70 characters.
      os << ((c + 1) % 64 == 0 || c + 1 == w ? '\n' : ' ');
    }
  }
}

}  // namespace hsl
