#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace utm {

enum class ErrorKind {
  Evaluation,
  ContourRadius,
  Dissipativity,
  Stiffness,
  Truncation,
  Quadrature,
  BoundaryRank,
  Case,
  Coverage,
  Argument,
  Stability,
  Budget,
  RootIsolation,
  Oracle,
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }
  std::string_view kind_name() const { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace utm
