#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace twd {

/// Every failure the engine can signal carries a stable machine-readable
/// name (SpecMismatch, NotAUnit, NotZeroDimensional, ...) next to the
/// human-readable message; the CLI reports the name verbatim.
class Error : public std::runtime_error {
  public:
    Error(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

  private:
    std::string name_;
};

[[noreturn]] inline void fail(std::string name, const std::string& detail) {
    throw Error(std::move(name), detail);
}

}  // namespace twd
