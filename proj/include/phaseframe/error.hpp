#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phaseframe {

/// Base class for all errors raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid parameters outside their domain (N < 1, p negative or not finite).
class invalid_grid : public error {
 public:
  using error::error;
};

/// p = 0: every sampling point collapses onto the origin.
class degenerate_grid : public error {
 public:
  using error::error;
};

/// Samples attached to a grid other than the one a reconstructor was built for.
class grid_mismatch : public error {
 public:
  using error::error;
};

/// A dense factorization could not be carried out to the requested accuracy.
class conditioning_error : public error {
 public:
  conditioning_error(const std::string& what, double condition)
      : error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Problem too large for the brute-force oracle.
class size_limit_error : public error {
 public:
  using error::error;
};

/// Non-fatal numerical warnings. Operations that can warn take an optional
/// pointer to one of these; passing nullptr discards the warnings.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  bool empty() const noexcept { return warnings.empty(); }
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

}  // namespace phaseframe
