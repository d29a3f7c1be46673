#pragma once

// Single table of CLI defaults. `hsl defaults` prints it and every --help shows the
// value used for each flag.

#include <cstdint>
#include <string>
#include <vector>

namespace hsl::cli {

struct Defaults {
  // boundary
  int boundary_samples = 1024;
  // moments
  int nmax = 3;
  int quad_radial = 256;
  int quad_angular = 256;
  double moment_rel_tol = 1e-6;
  // simulate
  std::uint64_t seed = 1;
  std::uint64_t step_cap = 1'000'000'000ULL;
  double sandpile_epsilon = 1e-6;
  // compare
  int compare_samples = 2048;
  int raster_grid = 1024;
  double raster_tol = 1e-3;
  // beurling
  std::vector<std::uint64_t> beurling_ns{250, 500, 1000, 2000};
  int beurling_seeds = 5;
  std::uint64_t beurling_seed_base = 1;
};

inline const Defaults kDefaults{};

struct DefaultRow {
  std::string command;
  std::string flag;
  std::string value;
  std::string meaning;
};

inline std::vector<DefaultRow> defaults_table() {
  const Defaults& d = kDefaults;
  std::string ns;
  for (auto n : d.beurling_ns) ns += (ns.empty() ? "" : ",") + std::to_string(n);
  return {
      {"boundary", "--n", std::to_string(d.boundary_samples), "arc samples on |zeta| = 1"},
      {"moments", "--nmax", std::to_string(d.nmax), "largest n in the exponent family"},
      {"moments", "--grid", std::to_string(d.quad_radial), "Gauss nodes per direction (refined once x2)"},
      {"moments", "--rel-tol", "1e-6", "allowed refinement change / int |z|^s (x10)"},
      {"simulate", "--seed", std::to_string(d.seed), "RNG seed, recorded in the cluster header"},
      {"simulate", "--step-cap", "1e9", "total walk steps before truncation"},
      {"simulate", "--epsilon", "1e-6", "sandpile toppling threshold"},
      {"compare", "--n", std::to_string(d.compare_samples), "arc samples of the analytic outline"},
      {"compare", "--grid", std::to_string(d.raster_grid), "initial scanlines of the rasterizer"},
      {"compare", "--tol", "1e-3", "stop refining when the area moves less"},
      {"beurling", "--Ns", ns, "cluster sizes"},
      {"beurling", "--seeds", std::to_string(d.beurling_seeds), "seeds per size"},
      {"beurling", "--seed-base", std::to_string(d.beurling_seed_base), "first seed; seeds are consecutive"},
  };
}

}  // namespace hsl::cli
