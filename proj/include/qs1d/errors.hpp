#pragma once

#include <stdexcept>
#include <string>

namespace qs1d {

/// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// potential
struct OverlappingSegments : Error { using Error::Error; };
struct NonContiguousSegments : Error { using Error::Error; };
struct EmptyProfile : Error { using Error::Error; };
struct WindowOutOfDomain : Error { using Error::Error; };
struct MixedImaginarySigns : Error { using Error::Error; };

// scatter1d
struct EvanescentChannel : Error { using Error::Error; };
struct ResolutionTooCoarse : Error { using Error::Error; };
struct NumericalInstability : Error { using Error::Error; };
struct SpinChannelEvanescent : Error { using Error::Error; };

// dos
struct WindowTooWide : Error { using Error::Error; };
struct StepUnderflow : Error { using Error::Error; };
struct OracleDefectExceeded : Error { using Error::Error; };
struct NonRealResult : Error { using Error::Error; };
struct BandEdgeTooClose : Error { using Error::Error; };
struct SymmetryDefect : Error { using Error::Error; };

// clock
struct ChannelBlocked : Error { using Error::Error; };
struct NonConvergent : Error { using Error::Error; };

// transport
struct FirstOrderViolated : Error { using Error::Error; };
struct ValidityFlagViolated : Error { using Error::Error; };
struct DivisionByZeroLdos : Error { using Error::Error; };
struct ZeroLdosWindow : Error { using Error::Error; };
struct TransmissionOutOfRange : Error { using Error::Error; };

// cli
struct ParseError : Error { using Error::Error; };
struct UnknownKey : Error { using Error::Error; };
struct MissingRequired : Error { using Error::Error; };

}  // namespace qs1d
