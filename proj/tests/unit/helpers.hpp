#pragma once

#include <stdexcept>
#include <utility>

#include "gforge/diagnostics.hpp"

// Runs fn, which must throw gforge::Error; returns the error for
// field-level assertions. A missing throw fails the test via the
// uncaught logic_error.
template <typename Fn>
gforge::Error expect_error(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const gforge::Error& e) {
    return e;
  }
  throw std::logic_error("expected a gforge::Error, none was thrown");
}
