#pragma once

#include <stdexcept>
#include <string>

namespace hyseek {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HYSEEK_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    explicit Name(const std::string& what) \
        : Error(#Name ": " + what) {}      \
  }

// Solver.
HYSEEK_DEFINE_ERROR(ZenoGuardTripped);
HYSEEK_DEFINE_ERROR(DeadlockState);
HYSEEK_DEFINE_ERROR(NonFiniteState);
HYSEEK_DEFINE_ERROR(EmptySet);
HYSEEK_DEFINE_ERROR(MissingChannel);

// Geometry.
HYSEEK_DEFINE_ERROR(NotARotation);
HYSEEK_DEFINE_ERROR(InsideObstacleMargin);
HYSEEK_DEFINE_ERROR(TooFarFromManifold);
HYSEEK_DEFINE_ERROR(NotUnit);

// Potential families and the direction automaton.
HYSEEK_DEFINE_ERROR(BadDelta);
HYSEEK_DEFINE_ERROR(NotOrthogonal);
HYSEEK_DEFINE_ERROR(PreconditionViolated);
HYSEEK_DEFINE_ERROR(NoCriticalPointsFound);

// Scenario assembly and I/O.
HYSEEK_DEFINE_ERROR(ConfigInvalid);
HYSEEK_DEFINE_ERROR(IOError);

#undef HYSEEK_DEFINE_ERROR

}  // namespace hyseek
