#pragma once

#include <stdexcept>
#include <string>

namespace tqo {

// Base class for all library errors. The CLI maps subclasses to exit codes:
// InvalidInput -> 2, CapExceeded -> 3, NotConverged -> 4.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input or an unsatisfied precondition (including refused
// region hypotheses such as a non-disk enclosing region).
struct InvalidInput : Error {
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

// A configured resource cap would be exceeded. Never truncates silently.
struct CapExceeded : Error {
  explicit CapExceeded(const std::string& what) : Error(what) {}
};

// An iterative solver failed to reach its tolerance within its budget.
struct NotConverged : Error {
  explicit NotConverged(const std::string& what) : Error(what) {}
};

}  // namespace tqo
