#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hsl {

/// A series or quadrature did not reach its requested accuracy within its budget.
/// Carries what was achieved so callers can decide whether to loosen or refine.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::size_t work, double achieved)
      : std::runtime_error(what), work_(work), achieved_(achieved) {}

  /// Terms summed (series) or nodes evaluated (quadrature).
  std::size_t work() const noexcept { return work_; }
  /// Error bound or estimate at the point of giving up.
  double achieved() const noexcept { return achieved_; }

 private:
  std::size_t work_;
  double achieved_;
};

/// A lattice simulation exhausted its step budget.
class StepCapExceeded : public std::runtime_error {
 public:
  StepCapExceeded(const std::string& what, std::uint64_t steps, std::uint64_t survivors,
                  std::uint64_t emitted)
      : std::runtime_error(what), steps_(steps), survivors_(survivors), emitted_(emitted) {}

  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t survivors() const noexcept { return survivors_; }
  std::uint64_t emitted() const noexcept { return emitted_; }

 private:
  std::uint64_t steps_;
  std::uint64_t survivors_;
  std::uint64_t emitted_;
};

}  // namespace hsl
