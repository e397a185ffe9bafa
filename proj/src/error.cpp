#include "circumnav/error.hpp"

namespace circumnav {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::EmptyPointSet: return "EmptyPointSet";
    case Errc::PointNotOutside: return "PointNotOutside";
    case Errc::NoHalfPlane: return "NoHalfPlane";
    case Errc::ZeroRange: return "ZeroRange";
    case Errc::TimeOrder: return "TimeOrder";
    case Errc::AtCenter: return "AtCenter";
    case Errc::CoincidentAgents: return "CoincidentAgents";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace circumnav
