#ifndef LLGTW_ERROR_HPP
#define LLGTW_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace llgtw {

enum class ErrorKind {
  InvalidParams,
  InvalidRegime,
  DegenerateRegime,
  InvalidGrid,
  InvalidProfile,
  NonUnitVector,
  NoEquilibrium,
  WrongSign,
  InvalidField,
  PolarSingularity,
  NoConvergence,
  Instability,
  WallNearBoundary,
  NoWall,
  MultipleWalls,
  Config,
  Io,
};

inline std::string_view to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidRegime: return "InvalidRegime";
    case ErrorKind::DegenerateRegime: return "DegenerateRegime";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::NonUnitVector: return "NonUnitVector";
    case ErrorKind::NoEquilibrium: return "NoEquilibrium";
    case ErrorKind::WrongSign: return "WrongSign";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::PolarSingularity: return "PolarSingularity";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Instability: return "Instability";
    case ErrorKind::WallNearBoundary: return "WallNearBoundary";
    case ErrorKind::NoWall: return "NoWall";
    case ErrorKind::MultipleWalls: return "MultipleWalls";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library. The message names the violated invariant.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace llgtw

#endif  // LLGTW_ERROR_HPP
