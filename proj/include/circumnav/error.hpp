#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace circumnav {

enum class Errc {
  EmptyPointSet,
  PointNotOutside,
  NoHalfPlane,
  ZeroRange,
  TimeOrder,
  AtCenter,
  CoincidentAgents,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(Errc code);

/// Exception carrying a machine-checkable error kind. All library failures
/// surface as this type so callers can branch on `code()`.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace circumnav
