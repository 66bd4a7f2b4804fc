#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wer {

enum class ErrorKind {
  invalid_argument,
  ep_proximity,
  truncation,
  postselection_failure,
  convergence_failure,
  degenerate_basis,
  tracking_ambiguity,
  pole_proximity,
  fit_quality,
  refine_grid,
  no_transition,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every domain failure raised by the library carries one of the kinds above
/// so callers (the CLI in particular) can map it to a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::ep_proximity: return "ep-proximity";
    case ErrorKind::truncation: return "truncation-error";
    case ErrorKind::postselection_failure: return "postselection-failure";
    case ErrorKind::convergence_failure: return "convergence-failure";
    case ErrorKind::degenerate_basis: return "degenerate-basis";
    case ErrorKind::tracking_ambiguity: return "tracking-ambiguity";
    case ErrorKind::pole_proximity: return "pole-proximity";
    case ErrorKind::fit_quality: return "fit-quality-error";
    case ErrorKind::refine_grid: return "refine-grid";
    case ErrorKind::no_transition: return "no-transition";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::invalid_argument, what);
}

}  // namespace wer
