#pragma once

#include <stdexcept>
#include <string>

namespace acns {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// -- geometry --------------------------------------------------------------
struct ObstacleTouchesBox : Error { using Error::Error; };
struct EmptyFluidRegion : Error { using Error::Error; };
struct DisconnectedFluidRegion : Error { using Error::Error; };

// -- fields / norms ---------------------------------------------------------
struct GeometryMismatch : Error { using Error::Error; };
struct BadExponent : Error { using Error::Error; };
struct EmptySeries : Error { using Error::Error; };
struct AlphaOutOfRange : Error { using Error::Error; };
struct BasisMismatch : Error { using Error::Error; };
struct InsufficientRank : Error { using Error::Error; };

// -- elliptic ----------------------------------------------------------------
struct IncompatibleRHS : Error { using Error::Error; };
struct RankTooLarge : Error { using Error::Error; };
struct NoConvergence : Error {
    NoConvergence(const std::string& what, long iterations_, double residual_)
        : Error(what), iterations(iterations_), residual(residual_) {}
    long iterations;
    double residual;
};

// -- simulation ---------------------------------------------------------------
struct BadInitialData : Error { using Error::Error; };
struct CFLViolation : Error { using Error::Error; };
struct Blowup : Error {
    Blowup(const std::string& what, long step_) : Error(what), step(step_) {}
    long step;
};

// -- acoustics / diagnostics / sweep -----------------------------------------
struct NonuniformCadence : Error { using Error::Error; };
struct InsufficientSnapshots : Error { using Error::Error; };
struct OffsetTooLarge : Error { using Error::Error; };
struct DegeneratePoints : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// -- io -----------------------------------------------------------------------
struct CorruptSnapshot : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace acns
