#pragma once
#include <stdexcept>
#include <string>

namespace covermix {

// Failure kinds map onto CLI exit codes: validation -> 2, gram_missing -> 3,
// budget_exceeded -> 4, everything numeric/runtime -> 5.
enum class ErrKind {
  validation,
  not_hyperbolic,
  cusp_escape,
  budget_exceeded,
  not_mixing,
  periodic_cocycle,
  gram_missing,
  not_surjective,
  insufficient_data,
  unbounded_window,
  zero_mass,
  overflow,
  numeric,
};

struct Error : std::runtime_error {
  ErrKind kind;
  Error(ErrKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg) { throw Error(k, msg); }

inline void require(bool ok, ErrKind k, const std::string& msg) {
  if (!ok) fail(k, msg);
}

}  // namespace covermix
