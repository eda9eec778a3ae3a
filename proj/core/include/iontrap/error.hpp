#pragma once

#include <stdexcept>
#include <string>

namespace iontrap {

// Every recoverable failure in the library throws Error with one of these
// codes. The CLI maps UsageError-like codes to exit 1 and numerical/domain
// failures to exit 2.
enum class ErrorCode {
    BoundingBoxTooSmall,
    GridTooCoarse,
    GapTooSmallForGrid,
    NoConvergence,
    OutOfDomain,
    RadiusTouchesElectrode,
    MaxOnBoundary,
    FitWindowOutsideVacuumRegion,
    FitWindowSpansGap,
    OnElectrode,
    InvalidBranch,
    NotAxiallyConfining,
    UnstableAxis,
    DegenerateRotation,
    OutsideHarmonicRegion,
    InvalidInput,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

} // namespace iontrap
