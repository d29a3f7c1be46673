#pragma once

// Aggregation models on Z^2 with killing, reflecting and killing-passing-reflecting
// boundary rules: internal DLA, rotor-router and the divisible sandpile.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsl/errors.hpp"
#include "hsl/rng.hpp"

namespace hsl {

struct Site {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Site&, const Site&) = default;
};

enum class BcKind { kNone, kKillNegAxis, kKillAngleSides, kKillReflect, kKpr };

struct BoundaryCondition {
  BcKind kind = BcKind::kNone;
  double angle_param = 0.0;  ///< b, KillAngleSides only
  double p = 0.0;            ///< pass probability, KPR only

  static BoundaryCondition none() { return {}; }
  static BoundaryCondition kill_neg_axis() { return {BcKind::kKillNegAxis, 1.0, 0.0}; }
  static BoundaryCondition kill_angle_sides(double b) {
    if (b != 0.25 && b != 0.5) {
      throw std::invalid_argument("kill_angle_sides: b must be 1/4 or 1/2");
    }
    return {BcKind::kKillAngleSides, b, 0.0};
  }
  static BoundaryCondition kill_reflect() { return {BcKind::kKillReflect, 2.0, 0.0}; }
  static BoundaryCondition kpr(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("kpr: p must lie in [0, 1]");
    return {BcKind::kKpr, 2.0, p};
  }

  /// Probability that a particle arriving at the half-axis from below passes.
  double pass_probability() const { return kind == BcKind::kKpr ? p : 0.0; }
  bool has_membrane() const { return kind == BcKind::kKillReflect || kind == BcKind::kKpr; }

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;
};

inline std::string to_string(const BoundaryCondition& bc) {
  switch (bc.kind) {
    case BcKind::kNone: return "none";
    case BcKind::kKillNegAxis: return "negaxis";
    case BcKind::kKillAngleSides: return bc.angle_param == 0.25 ? "angle0.25" : "angle0.5";
    case BcKind::kKillReflect: return "killreflect";
    case BcKind::kKpr: return "kpr";
  }
  return "none";
}

enum class ModelKind { kIdla, kRotorRouter, kDivisibleSandpile };

inline const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::kIdla: return "idla";
    case ModelKind::kRotorRouter: return "rotor";
    case ModelKind::kDivisibleSandpile: return "sandpile";
  }
  return "idla";
}

/// Where a particle passing the half-axis from below ends up.
enum class KprVariant {
  kLandOnAxis,    ///< on the axis site, which then behaves as an ordinary site
  kSkipToAbove,   ///< directly on (x, 1)
};

/// Initial rotor state. kAllNorth: every rotor points north and cycles N, E, S, W.
/// kMirrorSymmetric: sites with y < 0 use the mirror image (start south, cycle S, E, N, W),
/// so the rule set commutes with y -> -y.
enum class RotorInit { kAllNorth, kMirrorSymmetric };

struct SimOptions {
  std::uint64_t step_cap = 1'000'000'000ULL;
  /// Return the cluster built so far (flagged truncated) instead of throwing on the cap.
  bool partial_on_cap = false;
  KprVariant kpr_variant = KprVariant::kLandOnAxis;
  bool axis_settlement = true;
};

struct LatticeCluster {
  std::vector<Site> occupied;  ///< in settlement order
  std::uint64_t survivors = 0;
  std::uint64_t emitted = 0;
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  ModelKind model = ModelKind::kIdla;
  BoundaryCondition bc;
  bool truncated = false;
};

/// Killing sites of a boundary condition. The origin is the source and never kills.
inline bool is_killing(const BoundaryCondition& bc, int x, int y) {
  if (x == 0 && y == 0) return false;
  switch (bc.kind) {
    case BcKind::kNone:
    case BcKind::kKillReflect:
    case BcKind::kKpr:
      return false;
    case BcKind::kKillNegAxis:
      return y == 0 && x <= -1;
    case BcKind::kKillAngleSides:
      // b = 1/2: the half-plane x >= 0 with its side x = 0 killing.
      // b = 1/4: the quadrant x, y >= 0, killed on leaving it; killing the sides
      // themselves would enclose the source.
      if (bc.angle_param == 0.5) return x < 0 || (x == 0 && y != 0);
      return x < 0 || y < 0;
  }
  return false;
}

/// Sites of the positive half-axis carrying the reflect/pass rule.
inline bool is_membrane(const BoundaryCondition& bc, int x, int y) {
  return bc.has_membrane() && y == 0 && x >= 1;
}

namespace detail {

inline constexpr std::uint8_t kOccupied = 1;
inline constexpr std::uint8_t kKilling = 2;
inline constexpr std::uint8_t kMembrane = 4;

// Directions N, E, S, W.
inline constexpr int kDx[4] = {0, 1, 0, -1};
inline constexpr int kDy[4] = {1, 0, -1, 0};

/// Square window [-half, half]^2 of cell flags, grown on demand.
class CellGrid {
 public:
  CellGrid(const BoundaryCondition& bc, int half) : bc_(bc) { allocate(half); }

  int half() const { return half_; }
  std::uint8_t& at(int x, int y) { return cells_[index(x, y)]; }
  std::uint8_t& rotor(int x, int y) { return rotors_[index(x, y)]; }

  bool near_edge(int x, int y, int margin) const {
    return std::abs(x) > half_ - margin || std::abs(y) > half_ - margin;
  }

  void grow() {
    const int old_half = half_;
    const std::vector<std::uint8_t> old_cells = std::move(cells_);
    const std::vector<std::uint8_t> old_rotors = std::move(rotors_);
    const int old_side = 2 * old_half + 1;
    allocate(2 * old_half);
    for (int y = -old_half; y <= old_half; ++y) {
      for (int x = -old_half; x <= old_half; ++x) {
        const std::size_t o = static_cast<std::size_t>(y + old_half) * old_side + (x + old_half);
        cells_[index(x, y)] = old_cells[o];
        rotors_[index(x, y)] = old_rotors[o];
      }
    }
  }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y + half_) * side_ + static_cast<std::size_t>(x + half_);
  }

  void allocate(int half) {
    half_ = half;
    side_ = 2 * half + 1;
    cells_.assign(static_cast<std::size_t>(side_) * side_, 0);
    rotors_.assign(cells_.size(), 0);
    for (int y = -half_; y <= half_; ++y) {
      for (int x = -half_; x <= half_; ++x) {
        std::uint8_t c = 0;
        if (is_killing(bc_, x, y)) c |= kKilling;
        if (is_membrane(bc_, x, y)) c |= kMembrane;
        cells_[index(x, y)] = c;
      }
    }
  }

  BoundaryCondition bc_;
  int half_ = 0;
  int side_ = 0;
  std::vector<std::uint8_t> cells_;
  std::vector<std::uint8_t> rotors_;
};

inline int initial_half(std::uint64_t n) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))) + 8;
}

enum class StepOutcome { kMoved, kStayed, kKilled };

/// Applies the boundary rules to an attempted step from (x, y) in direction d.
/// `pass` resolves a below-the-axis arrival on the membrane.
template <typename PassDraw>
StepOutcome attempt_step(CellGrid& grid, const SimOptions& opts, int& x, int& y, unsigned d,
                         PassDraw&& pass) {
  int nx = x + kDx[d];
  int ny = y + kDy[d];
  const std::uint8_t c = grid.at(nx, ny);
  if (c & kKilling) return StepOutcome::kKilled;
  if ((c & kMembrane) && kDy[d] != 0) {
    if (y > 0) return StepOutcome::kStayed;
    if (!pass()) return StepOutcome::kKilled;
    if (opts.kpr_variant == KprVariant::kSkipToAbove) ny = 1;
  }
  x = nx;
  y = ny;
  return StepOutcome::kMoved;
}

inline bool can_settle(std::uint8_t c, const SimOptions& opts) {
  if (c & kOccupied) return false;
  return opts.axis_settlement || !(c & kMembrane);
}

inline void settle(CellGrid& grid, LatticeCluster& out, int x, int y) {
  grid.at(x, y) |= kOccupied;
  out.occupied.push_back({x, y});
  ++out.survivors;
}

/// Keeps every site the walker can reach next inside the window.
inline void ensure_room(CellGrid& grid, int x, int y) {
  while (grid.near_edge(x, y, 3)) grid.grow();
}

[[noreturn]] inline void throw_cap(const LatticeCluster& c) {
  throw StepCapExceeded("lattice walk exceeded the step cap", c.steps, c.survivors, c.emitted);
}

}  // namespace detail

/// Internal DLA from the origin: each particle walks until it lands on an unoccupied
/// site where it may settle. Particle k (0-based emission index) draws from its own
/// substream of `seed`.
inline LatticeCluster run_idla(std::uint64_t n, const BoundaryCondition& bc, std::uint64_t seed,
                               const SimOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("run_idla: N must be at least 1");
  using namespace detail;
  LatticeCluster out;
  out.model = ModelKind::kIdla;
  out.bc = bc;
  out.seed = seed;
  out.occupied.reserve(n);
  CellGrid grid(bc, initial_half(n));
  const double p = bc.pass_probability();

  while (out.survivors < n) {
    DirectionSource dirs(substream(seed, out.emitted));
    ++out.emitted;
    const auto pass = [&]() {
      if (p >= 1.0) return true;
      if (p <= 0.0) return false;
      return dirs.uniform() < p;
    };
    int x = 0, y = 0;
    if (can_settle(grid.at(0, 0), opts)) {
      settle(grid, out, 0, 0);
      continue;
    }
    for (;;) {
      if (out.steps >= opts.step_cap) {
        if (!opts.partial_on_cap) throw_cap(out);
        out.truncated = true;
        return out;
      }
      ++out.steps;
      const StepOutcome r = attempt_step(grid, opts, x, y, dirs.next(), pass);
      if (r == StepOutcome::kKilled) break;
      if (r == StepOutcome::kStayed) continue;
      const std::uint8_t c = grid.at(x, y);
      if (c & kOccupied) continue;
      ensure_room(grid, x, y);
      if (can_settle(c, opts)) {
        settle(grid, out, x, y);
        break;
      }
    }
  }
  return out;
}

/// Internal DLA with the killing-passing-reflecting rule on the positive half-axis.
inline LatticeCluster run_kpr(std::uint64_t n, double p, std::uint64_t seed,
                              const SimOptions& opts = {}) {
  return run_idla(n, BoundaryCondition::kpr(p), seed, opts);
}

/// Rotor-router aggregation. A particle at an occupied site advances that site's rotor
/// and then steps in the new direction; a reflected step leaves it in place.
inline LatticeCluster run_rotor_router(std::uint64_t n, const BoundaryCondition& bc,
                                       RotorInit init = RotorInit::kAllNorth,
                                       const SimOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("run_rotor_router: N must be at least 1");
  const double p = bc.pass_probability();
  if (bc.kind == BcKind::kKpr && p != 0.0 && p != 1.0) {
    throw std::invalid_argument("run_rotor_router: KPR needs p in {0, 1} (no randomness)");
  }
  using namespace detail;
  // Direction index per rotor state: N, E, S, W and its mirror S, E, N, W.
  static constexpr unsigned kUpper[4] = {0, 1, 2, 3};
  static constexpr unsigned kLower[4] = {2, 1, 0, 3};
  const bool mirror = init == RotorInit::kMirrorSymmetric;

  LatticeCluster out;
  out.model = ModelKind::kRotorRouter;
  out.bc = bc;
  out.occupied.reserve(n);
  CellGrid grid(bc, initial_half(n));
  const auto pass = [p]() { return p >= 1.0; };

  while (out.survivors < n) {
    ++out.emitted;
    int x = 0, y = 0;
    if (can_settle(grid.at(0, 0), opts)) {
      settle(grid, out, 0, 0);
      continue;
    }
    for (;;) {
      if (out.steps >= opts.step_cap) {
        if (!opts.partial_on_cap) throw_cap(out);
        out.truncated = true;
        return out;
      }
      ++out.steps;
      std::uint8_t& r = grid.rotor(x, y);
      r = static_cast<std::uint8_t>((r + 1) & 3u);
      const unsigned d = (mirror && y < 0) ? kLower[r] : kUpper[r];
      const StepOutcome res = attempt_step(grid, opts, x, y, d, pass);
      if (res == StepOutcome::kKilled) break;
      if (res == StepOutcome::kStayed) continue;
      const std::uint8_t c = grid.at(x, y);
      if (c & kOccupied) continue;
      ensure_room(grid, x, y);
      if (can_settle(c, opts)) {
        settle(grid, out, x, y);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Divisible sandpile

struct SandpileOptions {
  std::uint64_t topple_cap = 2'000'000'000ULL;
};

/// Final mass configuration of the divisible sandpile.
class SandpileState {
 public:
  SandpileState(int half, double total_injected)
      : half_(half), side_(2 * half + 1),
        mass_(static_cast<std::size_t>(side_) * side_, 0.0), total_injected_(total_injected) {}

  int half() const { return half_; }
  double mass(int x, int y) const {
    if (std::abs(x) > half_ || std::abs(y) > half_) return 0.0;
    return mass_[index(x, y)];
  }
  double& mass_ref(int x, int y) { return mass_[index(x, y)]; }
  double total_injected() const { return total_injected_; }
  double absorbed_total() const { return absorbed_; }
  double total_mass() const {
    double s = 0.0;
    for (double m : mass_) s += m;
    return s;
  }
  std::uint64_t topplings() const { return topplings_; }
  double epsilon() const { return epsilon_; }

  /// Sites with mass >= 1 - epsilon, in row-major order.
  std::vector<Site> occupied() const {
    std::vector<Site> out;
    for (int y = -half_; y <= half_; ++y) {
      for (int x = -half_; x <= half_; ++x) {
        if (mass_[index(x, y)] >= 1.0 - epsilon_) out.push_back({x, y});
      }
    }
    return out;
  }

  double max_excess() const {
    double e = 0.0;
    for (double m : mass_) e = std::max(e, m - 1.0);
    return e;
  }

 private:
  friend SandpileState run_divisible_sandpile(double, const BoundaryCondition&, double,
                                              const SandpileOptions&);

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y + half_) * side_ + static_cast<std::size_t>(x + half_);
  }

  int half_;
  int side_;
  std::vector<double> mass_;
  double total_injected_;
  double absorbed_ = 0.0;
  double epsilon_ = 0.0;
  std::uint64_t topplings_ = 0;
};

/// Places `total_mass` at the origin and topples in FIFO order: a site holding more
/// than 1 + epsilon keeps 1 and sends a quarter of the excess to each neighbour.
/// Mass sent onto a killing site is absorbed. On the half-axis membrane a share
/// arriving from above is reflected back to its sender, and a share arriving from
/// below passes with fraction p and is absorbed otherwise.
inline SandpileState run_divisible_sandpile(double total_mass, const BoundaryCondition& bc,
                                            double epsilon, const SandpileOptions& opts = {}) {
  if (!(total_mass > 0.0)) throw std::invalid_argument("run_divisible_sandpile: mass must be > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("run_divisible_sandpile: epsilon must be > 0");
  // Mass spreads over at most about total_mass sites; the window covers any shape of
  // that area that stays within the quadrant-elongated extremes of these rules.
  const int half = 2 * static_cast<int>(std::ceil(std::sqrt(total_mass))) + 8;
  SandpileState st(half, total_mass);
  st.epsilon_ = epsilon;
  const double pass = bc.pass_probability();

  std::vector<std::uint8_t> queued(st.mass_.size(), 0);
  std::deque<Site> queue;
  st.mass_ref(0, 0) = total_mass;
  if (total_mass > 1.0 + epsilon) {
    queue.push_back({0, 0});
    queued[st.index(0, 0)] = 1;
  }
  while (!queue.empty()) {
    const Site s = queue.front();
    queue.pop_front();
    queued[st.index(s.x, s.y)] = 0;
    double& m = st.mass_ref(s.x, s.y);
    const double excess = m - 1.0;
    if (excess <= epsilon) continue;
    if (++st.topplings_ > opts.topple_cap) {
      throw ConvergenceError("run_divisible_sandpile: toppling cap reached", st.topplings_,
                             st.max_excess());
    }
    if (std::abs(s.x) >= half - 1 || std::abs(s.y) >= half - 1) {
      throw std::length_error("run_divisible_sandpile: mass reached the window edge");
    }
    m = 1.0;
    const double share = excess / 4.0;
    for (unsigned d = 0; d < 4; ++d) {
      const int nx = s.x + detail::kDx[d];
      const int ny = s.y + detail::kDy[d];
      if (is_killing(bc, nx, ny)) {
        st.absorbed_ += share;
        continue;
      }
      double amount = share;
      if (is_membrane(bc, nx, ny) && detail::kDy[d] != 0) {
        if (s.y > 0) {
          m += share;
          continue;
        }
        st.absorbed_ += share * (1.0 - pass);
        amount = share * pass;
      }
      double& t = st.mass_ref(nx, ny);
      t += amount;
      if (t - 1.0 > epsilon && !queued[st.index(nx, ny)]) {
        queued[st.index(nx, ny)] = 1;
        queue.push_back({nx, ny});
      }
    }
    if (m - 1.0 > epsilon && !queued[st.index(s.x, s.y)]) {
      queued[st.index(s.x, s.y)] = 1;
      queue.push_back(s);
    }
  }
  return st;
}

/// Occupied region of a relaxed sandpile as a cluster record.
inline LatticeCluster sandpile_cluster(const SandpileState& st, const BoundaryCondition& bc) {
  LatticeCluster out;
  out.model = ModelKind::kDivisibleSandpile;
  out.bc = bc;
  out.occupied = st.occupied();
  out.survivors = out.occupied.size();
  out.emitted = static_cast<std::uint64_t>(std::llround(st.total_injected()));
  out.steps = st.topplings();
  return out;
}

// ---------------------------------------------------------------------------
// Emission scaling

struct BeurlingRow {
  std::uint64_t n = 0;
  double mean_emitted = 0.0;
  double std_error = 0.0;  ///< standard error of the mean
};

struct BeurlingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;   ///< slope - 2 se
  double ci_high = 0.0;  ///< slope + 2 se
  std::vector<BeurlingRow> rows;
};

/// Weighted least squares of log(mean emitted) on log N, weights from the delta-method
/// variance of log(mean). The slope standard error is inflated by the reduced chi-square
/// when that exceeds one. If every mean is exact (zero spread) the fit is unweighted.
inline BeurlingFit fit_emission_slope(std::vector<BeurlingRow> rows) {
  if (rows.size() < 2) throw std::invalid_argument("beurling fit: need at least two N values");
  const std::size_t m = rows.size();
  std::vector<double> xs(m), ys(m), ws(m);
  bool weighted = true;
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = std::log(static_cast<double>(rows[i].n));
    ys[i] = std::log(rows[i].mean_emitted);
    const double rel = rows[i].std_error / rows[i].mean_emitted;
    if (!(rel > 0.0)) weighted = false;
    ws[i] = rel > 0.0 ? 1.0 / (rel * rel) : 1.0;
  }
  if (!weighted) std::fill(ws.begin(), ws.end(), 1.0);
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sw += ws[i];
    sx += ws[i] * xs[i];
    sy += ws[i] * ys[i];
  }
  const double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
    sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("beurling fit: N values must differ");
  BeurlingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    chi2 += ws[i] * r * r;
  }
  double var = 1.0 / sxx;
  if (m > 2) {
    const double reduced = chi2 / static_cast<double>(m - 2);
    if (!weighted) var *= reduced;
    else if (reduced > 1.0) var *= reduced;
  } else if (!weighted) {
    var = 0.0;
  }
  fit.slope_se = std::sqrt(var);
  fit.ci_low = fit.slope - 2.0 * fit.slope_se;
  fit.ci_high = fit.slope + 2.0 * fit.slope_se;
  fit.rows = std::move(rows);
  return fit;
}

/// Runs `seeds_per_n` seeds (seed_base, seed_base + 1, ...) for every N and fits the
/// emission exponent.
inline BeurlingFit beurling_fit(ModelKind model, const BoundaryCondition& bc,
                                const std::vector<std::uint64_t>& ns, int seeds_per_n,
                                std::uint64_t seed_base = 1, const SimOptions& opts = {}) {
  std::vector<std::uint64_t> distinct = ns;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw std::invalid_argument("beurling_fit: need three or more distinct N");
  if (seeds_per_n < 3) throw std::invalid_argument("beurling_fit: need at least three seeds per N");
  if (model == ModelKind::kDivisibleSandpile) {
    throw std::invalid_argument("beurling_fit: sandpile has no particle count");
  }
  std::vector<BeurlingRow> rows;
  for (std::uint64_t n : distinct) {
    std::vector<double> e;
    for (int s = 0; s < seeds_per_n; ++s) {
      const LatticeCluster c = model == ModelKind::kIdla
                                   ? run_idla(n, bc, seed_base + static_cast<std::uint64_t>(s), opts)
                                   : run_rotor_router(n, bc, RotorInit::kAllNorth, opts);
      e.push_back(static_cast<double>(c.emitted));
    }
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= e.size();
    double var = 0.0;
    for (double v : e) var += (v - mean) * (v - mean);
    const double se = e.size() > 1 ? std::sqrt(var / (e.size() - 1) / e.size()) : 0.0;
    rows.push_back({n, mean, se});
  }
  return fit_emission_slope(std::move(rows));
}

}  // namespace hsl
