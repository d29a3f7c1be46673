// hsl: command-line front end. Exit codes: 0 success, 2 usage or validation error,
// 3 resource cap reached (step cap, toppling cap, quadrature or series budget).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "defaults.hpp"
#include "hsl/hsl.hpp"

namespace {

using hsl::cli::kDefaults;

constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

/// Invalid flag value; the message names the flag.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MapChoice {
  hsl::ConformalMapModel map;
  double b;
};

MapChoice select_map(const std::string& name, std::optional<double> b) {
  const auto fixed = [&](hsl::ConformalMapModel m, double fixed_b) {
    if (b && *b != fixed_b) {
      throw UsageError("--b: map '" + name + "' has b = " + std::to_string(fixed_b));
    }
    return MapChoice{std::move(m), fixed_b};
  };
  if (name == "negaxis") return fixed(hsl::make_negaxis_map(), 1.0);
  if (name == "halfplane") return fixed(hsl::make_halfplane_map(), 0.5);
  if (name == "doubled") return fixed(hsl::make_doubled_map(), 2.0);
  if (name == "angle") {
    if (!b) throw UsageError("--b: required for --map angle");
    if (!(*b > 0.0 && *b <= 2.0)) throw UsageError("--b: must lie in (0, 2] for --map angle");
    return {hsl::make_angle_map(*b), *b};
  }
  throw UsageError("--map: unknown map '" + name + "'");
}

/// Lets count flags take integral scientific notation such as 1e11.
std::string expand_count(std::string s) {
  if (s.find_first_of("eE") == std::string::npos) return s;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    return s;
  }
  if (used != s.size() || !(v >= 0.0) || v >= 1.8e19 || v != std::floor(v)) return s;
  return std::to_string(static_cast<std::uint64_t>(v));
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_text(const std::string& path, const std::function<void(std::ostream&)>& body) {
  try {
    hsl::atomic_write(path, body);
  } catch (const std::runtime_error& e) {
    throw UsageError(std::string("--out: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

struct BoundaryArgs {
  std::string map;
  std::optional<double> b;
  int n = kDefaults.boundary_samples;
  std::string out;
};

int run_boundary(const BoundaryArgs& a) {
  const MapChoice mc = select_map(a.map, a.b);
  if (a.n < 3) throw UsageError("--n: need at least 3 samples");
  const auto rows = hsl::boundary_sample(mc.map, a.n);
  write_text(a.out, [&](std::ostream& os) { hsl::write_boundary_csv(os, rows); });
  std::cout << "wrote " << rows.size() << " boundary rows to " << a.out << '\n';
  return 0;
}

struct MomentsArgs {
  std::string map;
  std::optional<double> b;
  int nmax = kDefaults.nmax;
  std::optional<double> p;
  int grid = kDefaults.quad_radial;
  double rel_tol = kDefaults.moment_rel_tol;
  std::string out;
};

int run_moments(const MomentsArgs& a) {
  const MapChoice mc = select_map(a.map, a.b);
  if (a.nmax < 1) throw UsageError("--nmax: must be at least 1");
  if (a.p && !(*a.p >= 0.0 && *a.p <= 1.0)) throw UsageError("--p: must lie in [0, 1]");
  if (a.grid < 8) throw UsageError("--grid: need at least 8 nodes");
  if (!(a.rel_tol > 0.0)) throw UsageError("--rel-tol: must be positive");
  hsl::MomentSuiteOptions opts;
  opts.grid = {a.grid, a.grid};
  opts.rel_tol = a.rel_tol;
  opts.p = a.p;
  const auto rows = hsl::moment_suite(mc.map, mc.b, a.nmax, opts);
  write_text(a.out, [&](std::ostream& os) {
    if (ends_with(a.out, ".json")) {
      os << hsl::moments_json(rows).dump(2) << '\n';
    } else {
      hsl::write_moments_csv(os, rows);
    }
  });
  std::cout << std::setprecision(6);
  for (const auto& r : rows) {
    std::cout << "s=" << r.exponent << (r.with_log ? " log" : "") << "  value=" << r.value
              << "  relative=" << (r.magnitude > 0 ? std::abs(r.value) / r.magnitude : 0.0)
              << (r.expected_zero ? "" : "  (source exponent, positive)") << '\n';
  }
  return 0;
}

struct SimulateArgs {
  std::string model;
  std::string bc = "none";
  std::optional<double> p;
  std::uint64_t n = 0;
  std::uint64_t seed = kDefaults.seed;
  std::uint64_t step_cap = kDefaults.step_cap;
  double epsilon = kDefaults.sandpile_epsilon;
  std::string kpr_variant = "land";
  bool no_axis_settlement = false;
  std::string rotor_init = "north";
  std::string out;
  std::string pbm;
};

int run_simulate(const SimulateArgs& a) {
  if (a.n < 1) throw UsageError("--N: must be at least 1");
  hsl::BoundaryCondition bc;
  try {
    if (a.model == "kpr") {
      if (!a.p) throw UsageError("--p: required for --model kpr");
      bc = hsl::BoundaryCondition::kpr(*a.p);
    } else {
      bc = hsl::bc_from_name(a.bc, a.p.value_or(0.0));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(a.model == "kpr" ? "--p: " : "--bc: ") + e.what());
  }
  hsl::SimOptions opts;
  opts.step_cap = a.step_cap;
  opts.partial_on_cap = true;
  opts.kpr_variant = a.kpr_variant == "skip" ? hsl::KprVariant::kSkipToAbove : hsl::KprVariant::kLandOnAxis;
  opts.axis_settlement = !a.no_axis_settlement;

  hsl::LatticeCluster c;
  if (a.model == "idla" || a.model == "kpr") {
    c = hsl::run_idla(a.n, bc, a.seed, opts);
  } else if (a.model == "rotor") {
    if (bc.kind == hsl::BcKind::kKpr && bc.p != 0.0 && bc.p != 1.0) {
      throw UsageError("--p: rotor-router supports KPR only with p = 0 or p = 1");
    }
    const auto init = a.rotor_init == "mirror" ? hsl::RotorInit::kMirrorSymmetric : hsl::RotorInit::kAllNorth;
    c = hsl::run_rotor_router(a.n, bc, init, opts);
    c.seed = a.seed;
  } else {
    if (!(a.epsilon > 0.0)) throw UsageError("--epsilon: must be positive");
    const auto st = hsl::run_divisible_sandpile(static_cast<double>(a.n), bc, a.epsilon);
    c = hsl::sandpile_cluster(st, bc);
    c.seed = a.seed;
  }
  write_text(a.out, [&](std::ostream& os) { hsl::write_cluster(os, c); });
  if (!a.pbm.empty()) {
    try {
      hsl::atomic_write(a.pbm, [&](std::ostream& os) { hsl::write_pbm(os, c.occupied); });
    } catch (const std::runtime_error& e) {
      throw UsageError(std::string("--pbm: ") + e.what());
    }
  }
  std::cout << "model=" << hsl::to_string(c.model) << " bc=" << hsl::to_string(c.bc)
            << " N=" << c.survivors << " emitted=" << c.emitted << " steps=" << c.steps
            << (c.truncated ? " truncated" : "") << '\n';
  if (c.truncated) {
    std::cerr << "step cap reached: partial cluster written with truncated=true\n";
    return kExitCap;
  }
  return 0;
}

struct CompareArgs {
  std::vector<std::string> clusters;
  std::string map;
  std::optional<double> b;
  int n = kDefaults.compare_samples;
  int grid = kDefaults.raster_grid;
  double tol = kDefaults.raster_tol;
  std::string out;
  std::string svg;
};

int run_compare(const CompareArgs& a) {
  const MapChoice mc = select_map(a.map, a.b);
  if (a.n < 256) throw UsageError("--n: need at least 256 samples");
  std::vector<std::vector<hsl::Site>> sets;
  std::vector<std::uint64_t> seeds;
  for (const auto& path : a.clusters) {
    std::ifstream is(path);
    if (!is) throw UsageError("--cluster: cannot open " + path);
    try {
      const auto c = hsl::read_cluster(is);
      sets.push_back(c.occupied);
      seeds.push_back(c.seed);
    } catch (const hsl::ClusterFormatError& e) {
      throw UsageError("--cluster: " + path + ": " + e.what());
    }
  }
  hsl::NormalizedShape cluster_shape;
  try {
    const auto cells = sets.size() == 1 ? sets.front() : hsl::majority_cluster(sets);
    cluster_shape = hsl::normalize_cluster(cells, sets.size() == 1 ? "cluster" : "majority-cluster");
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--cluster: ") + e.what());
  }
  const auto region = hsl::normalize_map_region(mc.map, mc.b, a.n, hsl::lattice_frame_rotation(mc.b));
  hsl::RasterOptions ro;
  ro.grid = a.grid;
  ro.tol = a.tol;
  const auto rep = hsl::compare_shapes(cluster_shape, region, seeds, ro);
  write_text(a.out, [&](std::ostream& os) { os << hsl::to_json(rep).dump(2) << '\n'; });
  if (!a.svg.empty()) {
    try {
      hsl::atomic_write(a.svg, [&](std::ostream& os) { hsl::write_svg_overlay(os, cluster_shape, region); });
    } catch (const std::runtime_error& e) {
      throw UsageError(std::string("--svg: ") + e.what());
    }
  }
  std::cout << std::setprecision(6) << "sym_diff=" << rep.sym_diff << " hausdorff=" << rep.hausdorff
            << " grid=" << rep.grid << '\n';
  return 0;
}

struct BeurlingArgs {
  std::string model = "idla";
  std::string bc = "negaxis";
  std::vector<std::uint64_t> ns = kDefaults.beurling_ns;
  int seeds = kDefaults.beurling_seeds;
  std::uint64_t seed_base = kDefaults.beurling_seed_base;
  std::uint64_t step_cap = kDefaults.step_cap;
  std::string out;
};

int run_beurling(const BeurlingArgs& a) {
  std::vector<std::uint64_t> distinct = a.ns;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw UsageError("--Ns: need at least three distinct sizes for a fit");
  if (distinct.front() < 1) throw UsageError("--Ns: sizes must be positive");
  if (a.seeds < 3) throw UsageError("--seeds: need at least 3 seeds per size");
  hsl::BoundaryCondition bc;
  try {
    bc = hsl::bc_from_name(a.bc);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--bc: ") + e.what());
  }
  hsl::SimOptions opts;
  opts.step_cap = a.step_cap;
  const auto model = a.model == "rotor" ? hsl::ModelKind::kRotorRouter : hsl::ModelKind::kIdla;
  const auto fit = hsl::beurling_fit(model, bc, distinct, a.seeds, a.seed_base, opts);
  write_text(a.out, [&](std::ostream& os) {
    os << "N,mean_emitted,std_error\n" << std::setprecision(17);
    for (const auto& r : fit.rows) os << r.n << ',' << r.mean_emitted << ',' << r.std_error << '\n';
    os << "# slope=" << fit.slope << " se=" << fit.slope_se << " ci=[" << fit.ci_low << ','
       << fit.ci_high << "] intercept=" << fit.intercept << '\n';
  });
  std::cout << std::fixed << std::setprecision(3) << "slope=" << fit.slope << " se=" << fit.slope_se
            << " ci=[" << fit.ci_low << ", " << fit.ci_high << "]\n";
  return 0;
}

int run_defaults() {
  for (const auto& r : hsl::cli::defaults_table()) {
    std::cout << std::left << std::setw(10) << r.command << std::setw(13) << r.flag << std::setw(18)
              << r.value << r.meaning << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hele-Shaw regions, harmonic moments and lattice aggregation"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  const std::vector<std::string> maps{"negaxis", "angle", "halfplane", "doubled"};

  BoundaryArgs ba;
  auto* boundary = app.add_subcommand("boundary", "Sample the region boundary to CSV (theta,x,y)");
  boundary->add_option("--map", ba.map, "Map family")->required()->check(CLI::IsMember(maps));
  boundary->add_option("--b", ba.b, "Angle parameter (required for angle)");
  boundary->add_option("--n", ba.n, "Arc samples");
  boundary->add_option("--out", ba.out, "Output CSV path")->required();

  MomentsArgs ma;
  auto* moments = app.add_subcommand("moments", "Harmonic moments of the analytic region");
  moments->add_option("--map", ma.map, "Map family")->required()->check(CLI::IsMember(maps));
  moments->add_option("--b", ma.b, "Angle parameter (required for angle)");
  moments->add_option("--nmax", ma.nmax, "Largest n");
  moments->add_option("--p", ma.p, "Use exponents n +- arccos(p)/(2 pi), n >= 1");
  moments->add_option("--grid", ma.grid, "Gauss nodes per direction");
  moments->add_option("--rel-tol", ma.rel_tol, "Relative refinement tolerance");
  moments->add_option("--out", ma.out, "Output path (.json for JSON, otherwise CSV)")->required();

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Grow a lattice cluster");
  simulate->add_option("--model", sa.model, "Model")->required()->check(CLI::IsMember({"idla", "rotor", "sandpile", "kpr"}));
  simulate->add_option("--bc", sa.bc, "Boundary condition")
      ->check(CLI::IsMember({"none", "negaxis", "angle0.5", "angle0.25", "killreflect", "kpr"}));
  simulate->add_option("--p", sa.p, "KPR pass probability");
  simulate->add_option("--N", sa.n, "Surviving particles (sandpile: total mass)")->required();
  simulate->add_option("--seed", sa.seed, "RNG seed");
  simulate->add_option("--step-cap", sa.step_cap, "Total walk steps allowed")->transform(expand_count);
  simulate->add_option("--epsilon", sa.epsilon, "Sandpile toppling threshold");
  simulate->add_option("--kpr-variant", sa.kpr_variant, "Where a passing particle lands")
      ->check(CLI::IsMember({"land", "skip"}));
  simulate->add_flag("--no-axis-settlement", sa.no_axis_settlement, "Forbid settling on the KPR half-axis");
  simulate->add_option("--rotor-init", sa.rotor_init, "Initial rotors")->check(CLI::IsMember({"north", "mirror"}));
  simulate->add_option("--out", sa.out, "Cluster file path")->required();
  simulate->add_option("--pbm", sa.pbm, "Optional PBM raster path");

  CompareArgs ca;
  auto* compare = app.add_subcommand("compare", "Compare cluster(s) with an analytic region");
  compare->add_option("--cluster", ca.clusters, "Cluster file(s); several are combined by majority vote")
      ->required();
  compare->add_option("--map", ca.map, "Map family")->required()->check(CLI::IsMember(maps));
  compare->add_option("--b", ca.b, "Angle parameter (required for angle)");
  compare->add_option("--n", ca.n, "Arc samples of the analytic outline");
  compare->add_option("--grid", ca.grid, "Initial rasterizer scanlines");
  compare->add_option("--tol", ca.tol, "Rasterizer refinement tolerance");
  compare->add_option("--out", ca.out, "Report JSON path")->required();
  compare->add_option("--svg", ca.svg, "Optional SVG overlay path");

  BeurlingArgs bea;
  auto* beurling = app.add_subcommand("beurling", "Fit the emitted-particle exponent");
  beurling->add_option("--model", bea.model, "Model")->check(CLI::IsMember({"idla", "rotor"}));
  beurling->add_option("--bc", bea.bc, "Boundary condition")
      ->check(CLI::IsMember({"none", "negaxis", "angle0.5", "angle0.25", "killreflect"}));
  beurling->add_option("--Ns", bea.ns, "Cluster sizes")->delimiter(',');
  beurling->add_option("--seeds", bea.seeds, "Seeds per size");
  beurling->add_option("--seed-base", bea.seed_base, "First seed");
  beurling->add_option("--step-cap", bea.step_cap, "Walk steps allowed per run")->transform(expand_count);
  beurling->add_option("--out", bea.out, "Output CSV path")->required();

  auto* defaults = app.add_subcommand("defaults", "Print the table of defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (boundary->parsed()) return run_boundary(ba);
    if (moments->parsed()) return run_moments(ma);
    if (simulate->parsed()) return run_simulate(sa);
    if (compare->parsed()) return run_compare(ca);
    if (beurling->parsed()) return run_beurling(bea);
    if (defaults->parsed()) return run_defaults();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hsl::StepCapExceeded& e) {
    std::cerr << "error: " << e.what() << " (steps=" << e.steps() << ", survivors=" << e.survivors()
              << ", emitted=" << e.emitted() << ")\n";
    return kExitCap;
  } catch (const hsl::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (work=" << e.work() << ", achieved=" << e.achieved() << ")\n";
    return kExitCap;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
